#include "striae/likelihood.hpp"

#include <algorithm>
#include <cmath>

#include "striae/errors.hpp"

namespace striae {

std::string to_string(SupportDirection d) {
    switch (d) {
        case SupportDirection::SameSource: return "supports-same-source";
        case SupportDirection::DifferentSource: return "supports-different-source";
        case SupportDirection::Neutral: return "neutral";
    }
    return "?";
}

std::string to_string(SourceCall c) {
    return c == SourceCall::SameSource ? "same-source" : "different-source";
}

std::string verbal_scale(double lr) {
    if (!(lr > 0.0)) throw argument_error("verbal scale needs a positive likelihood ratio");
    if (lr == 1.0) return "equal support";
    const bool same = lr > 1.0;
    const double m = same ? lr : 1.0 / lr;
    const char* band = nullptr;
    if (m <= 10.0) {
        band = "weak support";
    } else if (m <= 100.0) {
        band = "moderate support";
    } else if (m <= 1000.0) {
        band = "moderately strong support";
    } else if (m <= 10000.0) {
        band = "strong support";
    } else {
        band = "very strong support";
    }
    return std::string(band) + (same ? " for same-source" : " for different-source");
}

LRResult likelihood_ratio(const ScoreDensities& model, double score) {
    if (!(score >= 0.0 && score <= 1.0)) {
        throw argument_error("likelihood ratio needs a score in [0,1]");
    }
    constexpr double eps = 1e-9;
    const double x = std::clamp(score, eps, 1.0 - eps);
    const double log_lr = beta_log_pdf(model.km_fit, x) - beta_log_pdf(model.knm_fit, x);

    LRResult result;
    result.score = score;
    result.lr = std::exp(log_lr);
    result.log10_lr = log_lr / 2.302585092994045684; // ln 10
    if (std::abs(result.log10_lr) <= 1e-12) {
        result.decision = SupportDirection::Neutral;
        result.verbal = "equal support";
    } else if (result.lr > 1.0) {
        result.decision = SupportDirection::SameSource;
        result.verbal = verbal_scale(result.lr);
    } else {
        result.decision = SupportDirection::DifferentSource;
        result.verbal = verbal_scale(result.lr);
    }
    return result;
}

SourceCall classify(const ScoreDensities& model, double score) {
    // a score exactly at the threshold stays different-source
    return score > model.threshold ? SourceCall::SameSource : SourceCall::DifferentSource;
}

std::pair<double, LRResult> compare_marks(const Signature& a, const Signature& b,
                                          const ScoreDensities& model) {
    const double score = similarity_score(a, b);
    return {score, likelihood_ratio(model, score)};
}

} // namespace striae
