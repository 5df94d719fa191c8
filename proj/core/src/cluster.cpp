#include "striae/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <string>

#include "striae/detail/parallel.hpp"
#include "striae/errors.hpp"

namespace striae {

SquareMatrix to_dissimilarity(const SimilarityMatrix& sim) {
    const std::size_t n = sim.size();
    SquareMatrix d(n);
    for (std::size_t i = 0; i < n; ++i) {
        d.at(i, i) = 0.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = 1.0 - sim.at(i, j);
            d.at(i, j) = v;
            d.at(j, i) = v;
        }
    }
    return d;
}

std::size_t Clustering::cluster_size(int cluster_id) const {
    return static_cast<std::size_t>(
        std::count(assignment.begin(), assignment.end(), cluster_id));
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Nearest and second-nearest medoid distances per point, used for O(1)
// swap-delta evaluation.
struct MedoidCache {
    std::vector<std::size_t> nearest;
    std::vector<double> d_nearest;
    std::vector<double> d_second;
};

MedoidCache build_cache(const SquareMatrix& d, const std::vector<std::size_t>& medoids) {
    const std::size_t n = d.size();
    MedoidCache cache;
    cache.nearest.assign(n, medoids[0]);
    cache.d_nearest.assign(n, kInf);
    cache.d_second.assign(n, kInf);
    for (std::size_t i = 0; i < n; ++i) {
        for (const std::size_t m : medoids) {
            const double dist = d.at(i, m);
            if (dist < cache.d_nearest[i]) {
                cache.d_second[i] = cache.d_nearest[i];
                cache.d_nearest[i] = dist;
                cache.nearest[i] = m;
            } else if (dist < cache.d_second[i]) {
                cache.d_second[i] = dist;
            }
        }
    }
    return cache;
}

// BUILD phase: first medoid minimizes the total dissimilarity; each further
// medoid maximizes the cost reduction. Ties go to the lowest index.
std::vector<std::size_t> pam_build(const SquareMatrix& d, int k) {
    const std::size_t n = d.size();
    std::vector<std::size_t> medoids;
    medoids.reserve(static_cast<std::size_t>(k));

    std::size_t first = 0;
    double best_total = kInf;
    for (std::size_t i = 0; i < n; ++i) {
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j) total += d.at(i, j);
        if (total < best_total) {
            best_total = total;
            first = i;
        }
    }
    medoids.push_back(first);

    std::vector<double> d_nearest(n);
    for (std::size_t j = 0; j < n; ++j) d_nearest[j] = d.at(j, first);

    std::vector<char> is_medoid(n, 0);
    is_medoid[first] = 1;

    while (medoids.size() < static_cast<std::size_t>(k)) {
        std::size_t best_c = n;
        double best_gain = -kInf;
        for (std::size_t c = 0; c < n; ++c) {
            if (is_medoid[c]) continue;
            double gain = 0.0;
            for (std::size_t j = 0; j < n; ++j) {
                const double delta = d_nearest[j] - d.at(j, c);
                if (delta > 0.0) gain += delta;
            }
            if (gain > best_gain) {
                best_gain = gain;
                best_c = c;
            }
        }
        medoids.push_back(best_c);
        is_medoid[best_c] = 1;
        for (std::size_t j = 0; j < n; ++j) {
            d_nearest[j] = std::min(d_nearest[j], d.at(j, best_c));
        }
    }
    return medoids;
}

// Cost change of replacing medoid `out` by candidate `c`, summed over all
// points via the nearest/second-nearest cache.
double swap_delta(const SquareMatrix& d, const MedoidCache& cache, std::size_t out,
                  std::size_t c) {
    const std::size_t n = d.size();
    double delta = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        const double d_jc = d.at(j, c);
        if (cache.nearest[j] == out) {
            delta += std::min(d_jc, cache.d_second[j]) - cache.d_nearest[j];
        } else if (d_jc < cache.d_nearest[j]) {
            delta += d_jc - cache.d_nearest[j];
        }
    }
    return delta;
}

} // namespace

namespace {

// Enumeration work limit for solving small instances exactly. Best-improving
// SWAP can stall in a single-exchange local optimum on non-metric matrices,
// so instances this cheap are enumerated instead.
constexpr double kEnumerationBudget = 4e6;

double subset_count(std::size_t n, int k) {
    double c = 1.0;
    for (int i = 1; i <= k; ++i) {
        c *= static_cast<double>(n - static_cast<std::size_t>(k) + static_cast<std::size_t>(i)) /
             static_cast<double>(i);
        if (c > 1e18) return 1e18;
    }
    return c;
}

// Exhaustive optimum over all k-subsets; ties keep the lexicographically
// smallest medoid set.
std::vector<std::size_t> pam_enumerate(const SquareMatrix& d, int k) {
    const std::size_t n = d.size();
    std::vector<std::size_t> subset(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) subset[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
    std::vector<std::size_t> best_subset = subset;
    double best_cost = kInf;
    while (true) {
        double cost = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double nearest = kInf;
            for (const std::size_t m : subset) nearest = std::min(nearest, d.at(j, m));
            cost += nearest;
        }
        if (cost < best_cost) {
            best_cost = cost;
            best_subset = subset;
        }
        int pos = k - 1;
        while (pos >= 0 &&
               subset[static_cast<std::size_t>(pos)] == n - static_cast<std::size_t>(k - pos)) {
            --pos;
        }
        if (pos < 0) break;
        ++subset[static_cast<std::size_t>(pos)];
        for (int q = pos + 1; q < k; ++q) {
            subset[static_cast<std::size_t>(q)] = subset[static_cast<std::size_t>(q - 1)] + 1;
        }
    }
    return best_subset;
}

} // namespace

namespace {

// Assignment, cost and silhouette for a fixed medoid set. Medoids own their
// cluster even when another medoid sits at distance 0; other points take the
// nearest medoid with ties to the lowest medoid index (the set is sorted).
Clustering finish_clustering(const SquareMatrix& d, std::vector<std::size_t> medoids, int k) {
    const std::size_t n = d.size();
    Clustering result;
    result.k = k;
    result.medoid_indices = std::move(medoids);
    result.assignment.assign(n, -1);
    result.total_cost = 0.0;
    for (std::size_t mi = 0; mi < result.medoid_indices.size(); ++mi) {
        result.assignment[result.medoid_indices[mi]] = static_cast<int>(mi);
    }
    for (std::size_t j = 0; j < n; ++j) {
        if (result.assignment[j] >= 0) continue;
        std::size_t best = 0;
        double best_d = kInf;
        for (std::size_t mi = 0; mi < result.medoid_indices.size(); ++mi) {
            const double dist = d.at(j, result.medoid_indices[mi]);
            if (dist < best_d) {
                best_d = dist;
                best = mi;
            }
        }
        result.assignment[j] = static_cast<int>(best);
        result.total_cost += best_d;
    }
    result.mean_silhouette = silhouette(d, result).mean;
    return result;
}

} // namespace

Clustering pam(const SquareMatrix& d, int k, std::uint64_t /*seed*/) {
    const std::size_t n = d.size();
    if (k < 2 || static_cast<std::size_t>(k) >= n) {
        throw argument_error("pam requires 2 <= k < n, got k=" + std::to_string(k) +
                             ", n=" + std::to_string(n));
    }

    if (subset_count(n, k) * static_cast<double>(n) * static_cast<double>(k) <=
        kEnumerationBudget) {
        return finish_clustering(d, pam_enumerate(d, k), k);
    }

    std::vector<std::size_t> medoids = pam_build(d, k);
    std::sort(medoids.begin(), medoids.end());

    // SWAP phase: apply the single best-improving exchange until none
    // improves. Cost strictly decreases, so this terminates.
    while (true) {
        const MedoidCache cache = build_cache(d, medoids);
        double best_delta = 0.0;
        std::size_t best_mi = medoids.size();
        std::size_t best_c = n;
        std::vector<char> is_medoid(n, 0);
        for (const std::size_t m : medoids) is_medoid[m] = 1;
        for (std::size_t mi = 0; mi < medoids.size(); ++mi) {
            for (std::size_t c = 0; c < n; ++c) {
                if (is_medoid[c]) continue;
                const double delta = swap_delta(d, cache, medoids[mi], c);
                if (delta < best_delta) {
                    best_delta = delta;
                    best_mi = mi;
                    best_c = c;
                }
            }
        }
        if (best_mi == medoids.size()) break;
        medoids[best_mi] = best_c;
        std::sort(medoids.begin(), medoids.end());
    }

    return finish_clustering(d, std::move(medoids), k);
}

SilhouetteReport silhouette(const SquareMatrix& d, const Clustering& clustering) {
    const std::size_t n = d.size();
    if (clustering.assignment.size() != n) {
        throw argument_error("clustering does not match the dissimilarity matrix size");
    }
    const int k = clustering.k;
    std::vector<std::size_t> sizes(static_cast<std::size_t>(k), 0);
    for (const int c : clustering.assignment) {
        if (c < 0 || c >= k) throw argument_error("cluster id out of range");
        ++sizes[static_cast<std::size_t>(c)];
    }

    SilhouetteReport report;
    report.per_point.resize(n, 0.0);
    std::vector<double> sum_to_cluster(static_cast<std::size_t>(k));
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        std::fill(sum_to_cluster.begin(), sum_to_cluster.end(), 0.0);
        for (std::size_t j = 0; j < n; ++j) {
            sum_to_cluster[static_cast<std::size_t>(clustering.assignment[j])] += d.at(i, j);
        }
        const auto own = static_cast<std::size_t>(clustering.assignment[i]);
        if (sizes[own] <= 1) {
            report.per_point[i] = 0.0; // singleton
            continue;
        }
        const double a = sum_to_cluster[own] / static_cast<double>(sizes[own] - 1);
        double b = kInf;
        for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
            if (c == own || sizes[c] == 0) continue;
            b = std::min(b, sum_to_cluster[c] / static_cast<double>(sizes[c]));
        }
        const double denom = std::max(a, b);
        const double s = denom > 0.0 ? (b - a) / denom : 0.0;
        report.per_point[i] = s;
        total += s;
    }
    report.mean = n > 0 ? total / static_cast<double>(n) : 0.0;
    return report;
}

KSelection select_k(const SquareMatrix& d, int k_min, int k_max, std::uint64_t seed,
                    int threads) {
    const std::size_t n = d.size();
    if (k_min < 2 || k_min > k_max || static_cast<std::size_t>(k_max) >= n) {
        throw argument_error("select_k requires 2 <= k_min <= k_max < n");
    }
    const std::size_t n_k = static_cast<std::size_t>(k_max - k_min + 1);
    std::vector<Clustering> runs(n_k);
    detail::parallel_chunks(n_k, threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            runs[i] = pam(d, k_min + static_cast<int>(i), seed);
        }
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < n_k; ++i) {
        if (runs[i].mean_silhouette > runs[best].mean_silhouette) best = i; // ties: smallest k
    }

    KSelection sel;
    sel.best_k = k_min + static_cast<int>(best);
    sel.clustering = runs[best];
    sel.report = silhouette(d, sel.clustering);
    for (std::size_t i = 0; i < n_k; ++i) {
        sel.report.per_k_curve[k_min + static_cast<int>(i)] = runs[i].mean_silhouette;
    }
    return sel;
}

KSelection select_k_default(const SquareMatrix& d, std::uint64_t seed, int threads) {
    const int k_max = static_cast<int>(std::min<std::size_t>(d.size() - 1, 60));
    return select_k(d, 2, k_max, seed, threads);
}

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void write_clustering_csv(const SimilarityMatrix& sim, const Clustering& clustering,
                          const SilhouetteReport& report, std::ostream& out) {
    out << "label,cluster_id,is_medoid,silhouette\n";
    std::vector<char> is_medoid(sim.size(), 0);
    for (const std::size_t m : clustering.medoid_indices) is_medoid[m] = 1;
    for (std::size_t i = 0; i < sim.size(); ++i) {
        out << sim.label(i).label() << ',' << clustering.assignment[i] << ','
            << (is_medoid[i] ? 1 : 0) << ',' << fmt(report.per_point[i]) << '\n';
    }
}

void save_clustering_csv(const SimilarityMatrix& sim, const Clustering& clustering,
                         const SilhouetteReport& report, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open clustering file for writing: " + path.string());
    write_clustering_csv(sim, clustering, report, out);
    out.flush();
    if (!out) throw io_error("write failed: " + path.string());
}

void write_silhouette_curve_csv(const std::map<int, double>& curve, std::ostream& out) {
    out << "k,mean_silhouette\n";
    for (const auto& [k, s] : curve) out << k << ',' << fmt(s) << '\n';
}

void save_silhouette_curve_csv(const std::map<int, double>& curve,
                               const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open curve file for writing: " + path.string());
    write_silhouette_curve_csv(curve, out);
    out.flush();
    if (!out) throw io_error("write failed: " + path.string());
}

} // namespace striae
