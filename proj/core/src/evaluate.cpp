#include "striae/evaluate.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <string>

#include "striae/detail/parallel.hpp"
#include "striae/detail/rng.hpp"
#include "striae/errors.hpp"
#include "striae/scan.hpp"

namespace striae {

namespace {

struct PairRates {
    double sensitivity = 0.0;
    double specificity = 0.0;
    std::size_t n_km = 0;
    std::size_t n_knm = 0;
};

// Confusion rates of threshold classification over all within-collection
// pairs: same-source iff score > threshold.
PairRates classify_pairs(const SimilarityMatrix& sim, double threshold,
                         std::vector<double>* km_scores, std::vector<double>* knm_scores) {
    std::size_t tp = 0, fn = 0, tn = 0, fp = 0;
    for (std::size_t i = 0; i < sim.size(); ++i) {
        for (std::size_t j = i + 1; j < sim.size(); ++j) {
            const double s = sim.at(i, j);
            const bool predicted_same = s > threshold;
            if (sim.label(i).same_source(sim.label(j))) {
                if (km_scores) km_scores->push_back(s);
                predicted_same ? ++tp : ++fn;
            } else {
                if (knm_scores) knm_scores->push_back(s);
                predicted_same ? ++fp : ++tn;
            }
        }
    }
    PairRates rates;
    rates.n_km = tp + fn;
    rates.n_knm = tn + fp;
    if (rates.n_km == 0 || rates.n_knm == 0) {
        throw argument_error("test fold has no KM or no KNM pairs");
    }
    rates.sensitivity = static_cast<double>(tp) / static_cast<double>(rates.n_km);
    rates.specificity = static_cast<double>(tn) / static_cast<double>(rates.n_knm);
    return rates;
}

} // namespace

EvaluationReport crossvalidate(const SimilarityMatrix& sim, SampleMode mode) {
    std::vector<std::size_t> even_idx, odd_idx;
    for (std::size_t i = 0; i < sim.size(); ++i) {
        (sim.label(i).tool_id % 2 == 0 ? even_idx : odd_idx).push_back(i);
    }
    if (even_idx.size() < 4 || odd_idx.size() < 4) {
        throw argument_error("cross-validation needs marks from both even and odd tool ids");
    }

    const SimilarityMatrix even = sim.select(even_idx);
    const SimilarityMatrix odd = sim.select(odd_idx);

    EvaluationReport report;
    std::vector<double> pooled_km, pooled_knm;

    const auto run_fold = [&](const SimilarityMatrix& train, const SimilarityMatrix& test,
                              const std::string& name) {
        const ScoreSample sample = collect_scores(train, mode);
        const ScoreDensities model = fit_densities(sample);
        const PairRates rates = classify_pairs(test, model.threshold, &pooled_km, &pooled_knm);
        FoldResult fold;
        fold.training_fold = name;
        fold.threshold = model.threshold;
        fold.sensitivity = rates.sensitivity;
        fold.specificity = rates.specificity;
        fold.n_km = rates.n_km;
        fold.n_knm = rates.n_knm;
        report.per_fold.push_back(fold);
    };

    run_fold(even, odd, "even");
    run_fold(odd, even, "odd");

    report.sensitivity = (report.per_fold[0].sensitivity + report.per_fold[1].sensitivity) / 2.0;
    report.specificity = (report.per_fold[0].specificity + report.per_fold[1].specificity) / 2.0;
    report.roc = roc_curve(pooled_km, pooled_knm);
    return report;
}

EvaluationReport crossvalidate(std::span<const Signature> collection, SampleMode mode,
                               const AlignOptions& opts, int threads) {
    return crossvalidate(similarity_matrix(collection, opts, threads), mode);
}

std::vector<RocPoint> roc_curve(std::span<const double> km_scores,
                                std::span<const double> knm_scores) {
    if (km_scores.empty() || knm_scores.empty()) {
        throw argument_error("roc curve needs non-empty KM and KNM score sets");
    }
    std::set<double> thresholds(km_scores.begin(), km_scores.end());
    thresholds.insert(knm_scores.begin(), knm_scores.end());
    thresholds.insert(0.0);
    thresholds.insert(1.0);

    std::vector<RocPoint> roc;
    roc.reserve(thresholds.size());
    for (auto it = thresholds.rbegin(); it != thresholds.rend(); ++it) {
        const double t = *it;
        const auto above = [t](std::span<const double> s) {
            return static_cast<double>(std::count_if(s.begin(), s.end(),
                                                     [t](double v) { return v > t; })) /
                   static_cast<double>(s.size());
        };
        roc.push_back(RocPoint{above(knm_scores), above(km_scores), t});
    }
    return roc;
}

double roc_auc(std::span<const RocPoint> roc) {
    if (roc.size() < 2) return 0.0;
    double area = 0.0;
    for (std::size_t i = 1; i < roc.size(); ++i) {
        area += (roc[i].fpr - roc[i - 1].fpr) * (roc[i].tpr + roc[i - 1].tpr) / 2.0;
    }
    return area;
}

LengthSweepResult length_sweep(std::span<const Signature> collection,
                               const ScoreDensities& model,
                               std::span<const double> lengths_mm,
                               const LengthSweepOptions& opts) {
    if (collection.size() < 2) throw argument_error("length sweep needs at least 2 signatures");
    double shortest_mm = collection[0].length_mm();
    for (const Signature& sig : collection) shortest_mm = std::min(shortest_mm, sig.length_mm());
    for (const double L : lengths_mm) {
        if (!(L > 0.0)) throw argument_error("sweep lengths must be positive");
        if (L > shortest_mm * (1.0 + 1e-9)) {
            throw argument_error("sweep length " + std::to_string(L) +
                                 " mm exceeds the shortest signature (" +
                                 std::to_string(shortest_mm) + " mm)");
        }
    }

    // pair list: every KM pair, KNM pairs optionally subsampled (seeded)
    std::vector<std::pair<std::size_t, std::size_t>> km_pairs, knm_pairs;
    for (std::size_t i = 0; i < collection.size(); ++i) {
        for (std::size_t j = i + 1; j < collection.size(); ++j) {
            (collection[i].meta.same_source(collection[j].meta) ? km_pairs : knm_pairs)
                .emplace_back(i, j);
        }
    }
    if (opts.max_knm_pairs > 0 && knm_pairs.size() > opts.max_knm_pairs) {
        detail::Rng rng(detail::Rng::derive(opts.seed, 0x73776565ULL));
        std::vector<std::pair<std::size_t, std::size_t>> picked;
        picked.reserve(opts.max_knm_pairs);
        std::size_t remaining_pool = knm_pairs.size();
        std::size_t remaining_pick = opts.max_knm_pairs;
        for (const auto& p : knm_pairs) {
            if (remaining_pick == 0) break;
            if (rng.uniform_int(remaining_pool) < remaining_pick) {
                picked.push_back(p);
                --remaining_pick;
            }
            --remaining_pool;
        }
        knm_pairs = std::move(picked);
    }

    std::vector<std::pair<std::size_t, std::size_t>> pairs = km_pairs;
    pairs.insert(pairs.end(), knm_pairs.begin(), knm_pairs.end());

    LengthSweepResult result;
    const std::size_t min_ov = opts.align.min_overlap_abs;

    for (const double L : lengths_mm) {
        LengthPoint point;
        point.length_mm = L;

        // truncated sample count per pair depends on the partner's pitch;
        // check against the coarsest pitch present
        bool too_short = false;
        for (const Signature& sig : collection) {
            if (static_cast<std::size_t>(std::llround(L * 1000.0 / sig.pitch_um)) < min_ov) {
                too_short = true;
                break;
            }
        }
        if (too_short) {
            point.skipped = true;
            result.points.push_back(point);
            continue;
        }

        std::vector<TruncatedPairRecord> records(pairs.size());
        detail::parallel_chunks(pairs.size(), opts.threads, [&](std::size_t begin, std::size_t end) {
            for (std::size_t p = begin; p < end; ++p) {
                const auto [i, j] = pairs[p];
                const Signature& full = collection[i];
                const Signature& donor = collection[j];
                std::size_t m = static_cast<std::size_t>(
                    std::llround(L * 1000.0 / donor.pitch_um));
                m = std::min(m, donor.values.size());
                const std::size_t s0 = (donor.values.size() - m) / 2; // central window
                std::vector<double> window(donor.values.begin() + static_cast<std::ptrdiff_t>(s0),
                                           donor.values.begin() + static_cast<std::ptrdiff_t>(s0 + m));
                const Signature segment =
                    make_signature(std::move(window), donor.pitch_um, donor.meta);
                const Alignment alignment = align(full, segment, opts.align);

                TruncatedPairRecord rec;
                rec.length_mm = L;
                rec.i = i;
                rec.j = j;
                rec.same_source = full.meta.same_source(donor.meta);
                rec.score = alignment.score;
                rec.aligned_start = -alignment.lag; // segment[0] pairs with full[-lag]
                rec.source_start = s0;
                records[p] = rec;
            }
        });

        std::size_t tp = 0, fn = 0, tn = 0, fp = 0;
        for (const TruncatedPairRecord& rec : records) {
            const bool predicted_same = rec.score > model.threshold;
            if (rec.same_source) {
                predicted_same ? ++tp : ++fn;
            } else {
                predicted_same ? ++fp : ++tn;
            }
        }
        point.n_km = tp + fn;
        point.n_knm = tn + fp;
        point.sensitivity = point.n_km ? static_cast<double>(tp) / static_cast<double>(point.n_km) : 0.0;
        point.specificity = point.n_knm ? static_cast<double>(tn) / static_cast<double>(point.n_knm) : 0.0;
        result.points.push_back(point);
        if (opts.keep_pair_records) {
            result.pairs.insert(result.pairs.end(), records.begin(), records.end());
        }
    }
    return result;
}

} // namespace striae
