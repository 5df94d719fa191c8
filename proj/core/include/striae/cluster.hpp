#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <vector>

#include "striae/align.hpp"
#include "striae/matrix.hpp"

namespace striae {

/// d[i][j] = 1 - score[i][j]: zero diagonal, symmetric, entries in [0,1].
SquareMatrix to_dissimilarity(const SimilarityMatrix& sim);

/// A k-medoids partition. Every point is assigned to its nearest medoid
/// (ties to the lowest medoid index); total_cost is the sum of
/// dissimilarities to assigned medoids.
struct Clustering {
    int k = 0;
    std::vector<std::size_t> medoid_indices;
    std::vector<int> assignment; // point -> cluster id = rank of its medoid
    double total_cost = 0.0;
    double mean_silhouette = 0.0;

    std::size_t cluster_size(int cluster_id) const;
};

/// Per-point silhouette values s(n) = (b-a)/max(a,b), where a is the mean
/// dissimilarity to co-cluster members and b the smallest mean dissimilarity
/// to any other cluster. Points in singleton clusters score 0.
struct SilhouetteReport {
    std::vector<double> per_point;
    double mean = 0.0;
    std::map<int, double> per_k_curve; // filled by select_k
};

/// Partitioning around medoids: greedy BUILD initialization followed by
/// best-improvement SWAP until no medoid/non-medoid exchange lowers the
/// total cost. Instances small enough to enumerate are solved exactly
/// instead (single-exchange search can stall in local optima on non-metric
/// matrices). All ties break toward the lowest index, so the result is
/// deterministic; the seed parameter is accepted for interface stability
/// but never consulted.
Clustering pam(const SquareMatrix& d, int k, std::uint64_t seed = 0);

SilhouetteReport silhouette(const SquareMatrix& d, const Clustering& clustering);

struct KSelection {
    int best_k = 0;
    Clustering clustering;
    SilhouetteReport report; // per_k_curve holds the full mean-silhouette curve
};

/// Runs pam for every k in [k_min, k_max] and keeps the k with the highest
/// mean silhouette (ties to the smallest k). Runs are independent and
/// executed in parallel. threads = 0 uses hardware concurrency.
KSelection select_k(const SquareMatrix& d, int k_min, int k_max,
                    std::uint64_t seed = 0, int threads = 0);

/// Default search range [2, min(n-1, 60)].
KSelection select_k_default(const SquareMatrix& d, std::uint64_t seed = 0, int threads = 0);

/// CSV export: label,cluster_id,is_medoid,silhouette per point.
void write_clustering_csv(const SimilarityMatrix& sim, const Clustering& clustering,
                          const SilhouetteReport& report, std::ostream& out);
void save_clustering_csv(const SimilarityMatrix& sim, const Clustering& clustering,
                         const SilhouetteReport& report, const std::filesystem::path& path);

/// CSV export of the mean-silhouette-vs-k curve.
void write_silhouette_curve_csv(const std::map<int, double>& curve, std::ostream& out);
void save_silhouette_curve_csv(const std::map<int, double>& curve,
                               const std::filesystem::path& path);

} // namespace striae
