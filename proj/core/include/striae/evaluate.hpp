#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "striae/densities.hpp"

namespace striae {

struct RocPoint {
    double fpr = 0.0;
    double tpr = 0.0;
    double threshold = 0.0;
};

struct FoldResult {
    std::string training_fold;  // "even" or "odd" tool ids
    double threshold = 0.0;     // fitted on the training fold
    double sensitivity = 0.0;   // measured on the held-out fold
    double specificity = 0.0;
    std::size_t n_km = 0;       // held-out pair counts
    std::size_t n_knm = 0;
};

struct LengthPoint {
    double length_mm = 0.0;
    double sensitivity = 0.0;
    double specificity = 0.0;
    std::size_t n_km = 0;
    std::size_t n_knm = 0;
    bool skipped = false; // length below the registration overlap floor
};

/// One truncated comparison: where the shortened segment of signature j
/// aligned inside the full-length signature i.
struct TruncatedPairRecord {
    double length_mm = 0.0;
    std::size_t i = 0;
    std::size_t j = 0;
    bool same_source = false;
    double score = 0.0;
    long aligned_start = 0; // sample index of the segment's start within i
    std::size_t source_start = 0; // where the segment was cut from j
};

struct EvaluationReport {
    double sensitivity = 0.0; // averaged over folds
    double specificity = 0.0;
    std::vector<FoldResult> per_fold;
    std::vector<RocPoint> roc; // pooled held-out scores, decreasing threshold
    std::vector<LengthPoint> length_sweep;
};

/// Two-fold cross-validation split by tool-id parity (both sides of a tool
/// stay in one fold). Each fold in turn trains the densities and threshold;
/// every within-fold pair of the other fold is then classified against that
/// threshold. Sensitivity/specificity are reported per fold and averaged;
/// the ROC sweeps the pooled held-out scores.
EvaluationReport crossvalidate(const SimilarityMatrix& sim, SampleMode mode);
EvaluationReport crossvalidate(std::span<const Signature> collection, SampleMode mode,
                               const AlignOptions& opts = {}, int threads = 0);

/// Threshold sweep over the sorted union of both score sets plus the 0 and 1
/// sentinels, in decreasing threshold order: tpr = fraction of km > t,
/// fpr = fraction of knm > t.
std::vector<RocPoint> roc_curve(std::span<const double> km_scores,
                                std::span<const double> knm_scores);

/// Trapezoidal area under the curve.
double roc_auc(std::span<const RocPoint> roc);

struct LengthSweepOptions {
    std::size_t max_knm_pairs = 0; // 0 = evaluate every cross-source pair
    std::uint64_t seed = 0;        // drives the KNM pair subsample only
    AlignOptions align;
    int threads = 0;
    bool keep_pair_records = true;
};

struct LengthSweepResult {
    std::vector<LengthPoint> points;
    std::vector<TruncatedPairRecord> pairs;
};

/// Classification performance as one mark of each pair is shortened.
///
/// For each requested length the second member of every evaluated pair is
/// truncated to round(L/pitch) samples taken from its center, re-registered
/// against the full-length partner, and classified with model.threshold.
/// Lengths below the registration overlap floor are skipped and flagged.
/// Requested lengths must not exceed the shortest signature in the
/// collection.
LengthSweepResult length_sweep(std::span<const Signature> collection,
                               const ScoreDensities& model,
                               std::span<const double> lengths_mm,
                               const LengthSweepOptions& opts = {});

/// Full report as JSON; per-plot CSVs (roc.csv, per_fold.csv,
/// length_sweep.csv) for external plotting.
void write_report_json(const EvaluationReport& report, std::ostream& out);
void save_report_json(const EvaluationReport& report, const std::filesystem::path& path);
void write_roc_csv(std::span<const RocPoint> roc, std::ostream& out);
void save_roc_csv(std::span<const RocPoint> roc, const std::filesystem::path& path);
void write_per_fold_csv(std::span<const FoldResult> folds, std::ostream& out);
void save_per_fold_csv(std::span<const FoldResult> folds, const std::filesystem::path& path);
void write_length_sweep_csv(std::span<const LengthPoint> points, std::ostream& out);
void save_length_sweep_csv(std::span<const LengthPoint> points, const std::filesystem::path& path);
void write_length_pairs_csv(const LengthSweepResult& result,
                            std::span<const SourceMeta> labels, std::ostream& out);

} // namespace striae
