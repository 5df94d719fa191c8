#include "striae/densities.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <string>

#include "striae/detail/rng.hpp"
#include "striae/errors.hpp"

namespace striae {

std::string to_string(SampleMode m) {
    switch (m) {
        case SampleMode::SourceAveraged: return "source-averaged";
        case SampleMode::Naive: return "naive";
        case SampleMode::Downsampled: return "downsampled";
    }
    return "?";
}

SampleMode sample_mode_from_string(const std::string& s) {
    if (s == "source-averaged") return SampleMode::SourceAveraged;
    if (s == "naive") return SampleMode::Naive;
    if (s == "downsampled") return SampleMode::Downsampled;
    throw argument_error("unknown sample mode: '" + s + "'");
}

ScoreSample collect_scores(const SimilarityMatrix& sim, SampleMode mode, std::uint64_t seed) {
    const std::size_t n = sim.size();
    // group indices by source, ordered by (tool, side) key
    std::map<long, std::vector<std::size_t>> sources;
    for (std::size_t i = 0; i < n; ++i) sources[sim.label(i).source_key()].push_back(i);
    if (sources.size() < 2) {
        throw argument_error("score collection needs at least 2 sources, got " +
                             std::to_string(sources.size()));
    }

    ScoreSample sample;
    sample.mode = mode;

    for (const auto& [key, members] : sources) {
        for (std::size_t a = 0; a < members.size(); ++a) {
            for (std::size_t b = a + 1; b < members.size(); ++b) {
                sample.km_scores.push_back(sim.at(members[a], members[b]));
            }
        }
    }
    if (sample.km_scores.empty()) {
        throw argument_error("no source has 2 or more replicates; the KM sample is empty");
    }

    std::vector<const std::vector<std::size_t>*> groups;
    groups.reserve(sources.size());
    for (const auto& [key, members] : sources) groups.push_back(&members);

    if (mode == SampleMode::SourceAveraged) {
        // one score per source pair: the mean over all cross-replicate pairs
        for (std::size_t g = 0; g < groups.size(); ++g) {
            for (std::size_t h = g + 1; h < groups.size(); ++h) {
                double sum = 0.0;
                for (const std::size_t i : *groups[g]) {
                    for (const std::size_t j : *groups[h]) sum += sim.at(i, j);
                }
                sample.knm_scores.push_back(
                    sum / static_cast<double>(groups[g]->size() * groups[h]->size()));
            }
        }
    } else {
        for (std::size_t g = 0; g < groups.size(); ++g) {
            for (std::size_t h = g + 1; h < groups.size(); ++h) {
                for (const std::size_t i : *groups[g]) {
                    for (const std::size_t j : *groups[h]) {
                        sample.knm_scores.push_back(sim.at(i, j));
                    }
                }
            }
        }
        if (mode == SampleMode::Downsampled) {
            const std::size_t want = sample.km_scores.size();
            if (sample.knm_scores.size() < want) {
                throw argument_error("cannot downsample " +
                                     std::to_string(sample.knm_scores.size()) +
                                     " KNM scores to the KM count " + std::to_string(want));
            }
            // seeded selection sampling, stable order
            detail::Rng rng(detail::Rng::derive(seed, 0x6b6e6dULL));
            std::vector<double> picked;
            picked.reserve(want);
            std::size_t remaining_pool = sample.knm_scores.size();
            std::size_t remaining_pick = want;
            for (const double s : sample.knm_scores) {
                if (remaining_pick == 0) break;
                if (rng.uniform_int(remaining_pool) < remaining_pick) {
                    picked.push_back(s);
                    --remaining_pick;
                }
                --remaining_pool;
            }
            sample.knm_scores = std::move(picked);
        }
    }
    return sample;
}

double BetaFit::mode_or_mean() const {
    if (alpha > 1.0 && beta > 1.0) return (alpha - 1.0) / (alpha + beta - 2.0);
    return mean();
}

BetaFit fit_beta_moments(double mean, double var) {
    if (!(mean > 0.0 && mean < 1.0)) {
        throw numeric_error("beta fit needs 0 < mean < 1, got " + std::to_string(mean));
    }
    if (!(var > 0.0)) {
        throw numeric_error("beta fit needs positive variance; gather more varied scores");
    }
    const double feasible = mean * (1.0 - mean);
    if (!(var < feasible)) {
        throw numeric_error("variance " + std::to_string(var) +
                            " is infeasible for a Beta with mean " + std::to_string(mean) +
                            " (needs var < mean(1-mean) = " + std::to_string(feasible) +
                            "); gather more data");
    }
    const double t = feasible / var - 1.0;
    BetaFit fit;
    fit.alpha = mean * t;
    fit.beta = (1.0 - mean) * t;
    fit.sample_mean = mean;
    fit.sample_var = var;
    return fit;
}

BetaFit fit_beta(std::span<const double> scores) {
    if (scores.size() < 3) {
        throw argument_error("beta fit needs at least 3 scores, got " +
                             std::to_string(scores.size()));
    }
    // open-support clamp; self-identical replicate pairs can score exactly 1
    constexpr double eps = 1e-9;
    double sum = 0.0;
    for (double s : scores) {
        if (!(s >= 0.0 && s <= 1.0)) throw argument_error("score outside [0,1]");
        sum += std::clamp(s, eps, 1.0 - eps);
    }
    const double mean = sum / static_cast<double>(scores.size());
    double ss = 0.0;
    for (double s : scores) {
        const double c = std::clamp(s, eps, 1.0 - eps) - mean;
        ss += c * c;
    }
    const double var = ss / static_cast<double>(scores.size());
    return fit_beta_moments(mean, var);
}

double beta_log_pdf(const BetaFit& fit, double x) {
    if (!(x > 0.0 && x < 1.0)) throw argument_error("beta pdf needs x in (0,1)");
    const double log_b =
        std::lgamma(fit.alpha) + std::lgamma(fit.beta) - std::lgamma(fit.alpha + fit.beta);
    return (fit.alpha - 1.0) * std::log(x) + (fit.beta - 1.0) * std::log1p(-x) - log_b;
}

double beta_pdf(const BetaFit& fit, double x) { return std::exp(beta_log_pdf(fit, x)); }

double intersection_threshold(const BetaFit& km, const BetaFit& knm) {
    if (!(km.mean() > knm.mean())) {
        throw numeric_error("KM mean must exceed KNM mean for a decision threshold");
    }
    double lo = knm.mode_or_mean();
    double hi = km.mode_or_mean();
    constexpr double eps = 1e-12;
    lo = std::clamp(lo, eps, 1.0 - eps);
    hi = std::clamp(hi, eps, 1.0 - eps);
    if (!(lo < hi)) throw numeric_error("degenerate intersection bracket");

    const auto g = [&](double x) { return beta_log_pdf(km, x) - beta_log_pdf(knm, x); };
    double g_lo = g(lo);
    double g_hi = g(hi);
    if (!(g_lo < 0.0) || !(g_hi > 0.0)) {
        throw numeric_error("densities do not cross between their modes (no unique crossing)");
    }
    // bisection to full double resolution; keeps g(lo) < 0 < g(hi), so the
    // root is a KNM-to-KM dominance flip
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double g_mid = g(mid);
        if (g_mid < 0.0) {
            lo = mid;
            g_lo = g_mid;
        } else if (g_mid > 0.0) {
            hi = mid;
            g_hi = g_mid;
        } else {
            return mid;
        }
    }
    return 0.5 * (lo + hi);
}

ScoreDensities fit_densities(const ScoreSample& sample, std::uint64_t seed) {
    ScoreDensities model;
    model.mode = sample.mode;
    model.km_fit = fit_beta(sample.km_scores);
    model.knm_fit = fit_beta(sample.knm_scores);
    if (!(model.km_fit.mean() > model.knm_fit.mean())) {
        throw numeric_error("KM scores do not exceed KNM scores on average; refusing to build a model");
    }
    model.threshold = intersection_threshold(model.km_fit, model.knm_fit);
    model.n_km = sample.km_scores.size();
    model.n_knm = sample.knm_scores.size();
    model.seed = seed;
    return model;
}

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void write_samples_csv(const ScoreSample& sample, std::ostream& out) {
    out << "class,score\n";
    for (const double s : sample.km_scores) out << "km," << fmt(s) << '\n';
    for (const double s : sample.knm_scores) out << "knm," << fmt(s) << '\n';
}

void save_samples_csv(const ScoreSample& sample, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open samples file for writing: " + path.string());
    write_samples_csv(sample, out);
    out.flush();
    if (!out) throw io_error("write failed: " + path.string());
}

} // namespace striae
