#pragma once

#include <string>
#include <utility>

#include "striae/densities.hpp"
#include "striae/scan.hpp"

namespace striae {

enum class SupportDirection { SameSource, DifferentSource, Neutral };

std::string to_string(SupportDirection d);

/// Score-based likelihood ratio for one comparison.
///
/// lr = km_pdf(score) / knm_pdf(score), evaluated in log space so extreme
/// scores stay finite. decision is Neutral when |log10 lr| <= 1e-12,
/// otherwise the side the ratio supports. verbal carries the band phrase.
struct LRResult {
    double score = 0.0;
    double lr = 0.0;
    double log10_lr = 0.0;
    SupportDirection decision = SupportDirection::Neutral;
    std::string verbal;
};

/// Evaluates the model at a similarity score (clamped into (0,1) by 1e-9).
LRResult likelihood_ratio(const ScoreDensities& model, double score);

/// Verbal band for a likelihood ratio, symmetric around 1 on the log10
/// scale: (1,10] weak, (10,100] moderate, (100,1000] moderately strong,
/// (1000,10000] strong, above that very strong; exactly 1 reads as equal
/// support. Ratios below 1 report the same band with the direction flipped
/// to the different-source proposition.
std::string verbal_scale(double lr);

enum class SourceCall { SameSource, DifferentSource };

std::string to_string(SourceCall c);

/// Threshold classification: same-source iff score > model.threshold.
/// A score exactly at the threshold classifies as different-source.
SourceCall classify(const ScoreDensities& model, double score);

/// End-to-end convenience: registers the pair, scores it, and evaluates the
/// model. Returns the similarity score together with the LR result.
std::pair<double, LRResult> compare_marks(const Signature& a, const Signature& b,
                                          const ScoreDensities& model);

} // namespace striae
