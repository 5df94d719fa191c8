#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "striae/matrix.hpp"
#include "striae/scan.hpp"

namespace striae {

/// Result of registering signature b against signature a.
///
/// lag is the shift applied to b's indices: sample b[i + lag] lines up with
/// a[i]. ccf_raw is the Pearson correlation over the overlapping region at
/// that lag, score its [0,1] rescaling (ccf_raw + 1) / 2.
struct Alignment {
    long lag = 0;
    std::size_t overlap_len = 0;
    double ccf_raw = 0.0;
    double score = 0.0;
};

struct AlignOptions {
    double max_lag_frac = 0.9;       // search |lag| <= max_lag_frac * max(len a, len b)
    std::size_t min_overlap_abs = 30;
    double min_overlap_frac = 0.10;  // of the shorter signature

    std::size_t min_overlap(std::size_t shorter_len) const;
};

/// Sliding-window registration: scans every integer lag within the window
/// and overlap constraints and returns the lag with maximum Pearson
/// correlation (population formula, moments recomputed per lag). Correlation
/// ties resolve toward the smallest |lag|, then toward the negative lag.
/// The longer signature stays fixed and the shorter slides, so the score is
/// exactly symmetric in the argument order.
///
/// Throws argument_error on pitch mismatch (> 1% relative) and numeric_error
/// when no lag satisfies the overlap floor or every candidate overlap has
/// zero variance.
Alignment align(const Signature& a, const Signature& b, double max_lag_frac = 0.9);
Alignment align(const Signature& a, const Signature& b, const AlignOptions& opts);

/// Registration score at default options: align(a, b).score.
double similarity_score(const Signature& a, const Signature& b);
double similarity_score(const Signature& a, const Signature& b, const AlignOptions& opts);

/// Symmetric matrix of pairwise similarity scores with unit diagonal,
/// carrying the source metadata of each signature.
class SimilarityMatrix {
public:
    SimilarityMatrix() = default;
    SimilarityMatrix(std::vector<SourceMeta> labels, SquareMatrix scores);

    std::size_t size() const { return scores_.size(); }
    double at(std::size_t i, std::size_t j) const { return scores_.at(i, j); }
    const SourceMeta& label(std::size_t i) const { return labels_[i]; }
    const std::vector<SourceMeta>& labels() const { return labels_; }
    const SquareMatrix& scores() const { return scores_; }

    /// Submatrix restricted to the given indices (in the given order).
    SimilarityMatrix select(std::span<const std::size_t> indices) const;

    void validate() const; // symmetry, unit diagonal, entries in [0,1]

private:
    std::vector<SourceMeta> labels_;
    SquareMatrix scores_;
};

/// All pairwise scores of a collection (>= 2 signatures). The strict upper
/// triangle is computed in parallel over read-only inputs; the result is
/// deterministic regardless of scheduling. A failing pair aborts with that
/// pair identified. threads = 0 uses hardware concurrency.
SimilarityMatrix similarity_matrix(std::span<const Signature> collection,
                                   const AlignOptions& opts = {}, int threads = 0);

/// Square CSV with a label header row and column.
void write_matrix_csv(const SimilarityMatrix& m, std::ostream& out);
void save_matrix_csv(const SimilarityMatrix& m, const std::filesystem::path& path);
SimilarityMatrix read_matrix_csv(std::istream& in, const std::string& name = "<stream>");
SimilarityMatrix load_matrix_csv(const std::filesystem::path& path);

/// Long form (label_i,label_j,score) over i < j, for heat-map plotting.
void write_matrix_long_csv(const SimilarityMatrix& m, std::ostream& out);
void save_matrix_long_csv(const SimilarityMatrix& m, const std::filesystem::path& path);

} // namespace striae
