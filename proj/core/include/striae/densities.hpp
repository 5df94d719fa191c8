#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <vector>

#include "striae/align.hpp"

namespace striae {

/// How replicate-induced dependencies are handled when building the
/// known-non-match sample. Known-match pairs are identical in every mode.
enum class SampleMode {
    SourceAveraged, // one score per source pair: the mean over all cross-replicate pairs
    Naive,          // every cross-source pair individually
    Downsampled,    // seeded uniform subsample of Naive down to the KM count
};

std::string to_string(SampleMode m);
SampleMode sample_mode_from_string(const std::string& s);

struct ScoreSample {
    std::vector<double> km_scores;
    std::vector<double> knm_scores;
    SampleMode mode = SampleMode::SourceAveraged;
};

/// Splits a labeled similarity matrix into KM (within-source replicate
/// pairs) and KNM (cross-source) score samples. Sources with fewer than two
/// replicates contribute no KM pairs; an empty KM sample is an error. The
/// seed drives only the Downsampled subsample.
ScoreSample collect_scores(const SimilarityMatrix& sim, SampleMode mode,
                           std::uint64_t seed = 0);

/// Beta distribution parameters fitted by matching the first two moments.
struct BetaFit {
    double alpha = 0.0;
    double beta = 0.0;
    double sample_mean = 0.0;
    double sample_var = 0.0; // population variance of the sample

    double mean() const { return alpha / (alpha + beta); }
    double variance() const {
        const double s = alpha + beta;
        return alpha * beta / (s * s * (s + 1.0));
    }
    /// (alpha-1)/(alpha+beta-2) when the density is unimodal in (0,1),
    /// otherwise the mean.
    double mode_or_mean() const;
};

/// Method-of-moments fit: t = mean(1-mean)/var - 1, alpha = mean*t,
/// beta = (1-mean)*t. Requires 0 < mean < 1 and 0 < var < mean(1-mean).
BetaFit fit_beta_moments(double mean, double var);

/// Fits from at least 3 scores in [0,1] (values at exactly 0 or 1 are
/// clamped into (0,1) by 1e-9 first).
BetaFit fit_beta(std::span<const double> scores);

double beta_log_pdf(const BetaFit& fit, double x); // log-gamma based, x in (0,1)
double beta_pdf(const BetaFit& fit, double x);

/// Similarity value where the two fitted densities cross, i.e. the root of
/// log km_pdf - log knm_pdf between the two distribution modes, located by
/// bracketed bisection run to full double precision. The sign goes from
/// KNM-dominant to KM-dominant as x increases through the returned value.
/// Requires km mean > knm mean and a sign change over the bracket.
double intersection_threshold(const BetaFit& km, const BetaFit& knm);

/// A trained score model: the two Beta fits plus their crossing point.
struct ScoreDensities {
    SampleMode mode = SampleMode::SourceAveraged;
    BetaFit km_fit;
    BetaFit knm_fit;
    double threshold = 0.0;
    std::size_t n_km = 0;
    std::size_t n_knm = 0;
    std::uint64_t seed = 0;
};

/// Fits both Betas and the intersection threshold from a score sample.
/// Errors if the KM mean does not exceed the KNM mean.
ScoreDensities fit_densities(const ScoreSample& sample, std::uint64_t seed = 0);

/// When a class has fewer scores than this, fits rest on very little data
/// and downstream tools print a caveat.
inline constexpr std::size_t kSmallSampleWarning = 30;

/// JSON model file: {mode, km:{alpha,beta}, knm:{alpha,beta}, threshold,
/// n_km, n_knm, seed}. This is the artifact consumed by the likelihood and
/// evaluation stages.
void save_model(const ScoreDensities& model, const std::filesystem::path& path);
ScoreDensities load_model(const std::filesystem::path& path);
void write_model_json(const ScoreDensities& model, std::ostream& out);
ScoreDensities read_model_json(std::istream& in, const std::string& name = "<stream>");

/// Raw sample export: class,score rows (class is "km" or "knm").
void write_samples_csv(const ScoreSample& sample, std::ostream& out);
void save_samples_csv(const ScoreSample& sample, const std::filesystem::path& path);

} // namespace striae
