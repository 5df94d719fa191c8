// Acceptance suite: one line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "striae/cluster.hpp"
#include "striae/densities.hpp"
#include "striae/errors.hpp"
#include "striae/evaluate.hpp"
#include "striae/extract.hpp"
#include "striae/likelihood.hpp"
#include "striae/scan_io.hpp"
#include "striae/synth.hpp"

using namespace striae;

namespace {

struct Checker {
    bool ok = true;
    std::string detail;

    void expect(bool condition, const std::string& what) {
        if (!condition) {
            ok = false;
            if (!detail.empty()) detail += "; ";
            detail += what;
        }
    }
    void note(const std::string& what) {
        if (!detail.empty()) detail += "; ";
        detail += what;
    }
};

std::string fmt(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*g", digits, v);
    return buf;
}

BetaFit paper_km() {
    BetaFit f;
    f.alpha = 15.7494;
    f.beta = 2.0665;
    return f;
}

BetaFit paper_knm() {
    BetaFit f;
    f.alpha = 8.5774;
    f.beta = 11.4628;
    return f;
}

// shared experiment-1 fixture, computed once
struct Exp1Fixture {
    std::vector<Signature> signatures;
    SimilarityMatrix matrix;
    ScoreDensities model;
};

const Exp1Fixture& exp1_fixture() {
    static const Exp1Fixture fixture = [] {
        Exp1Fixture f;
        const GeneratorConfig config = exp1_preset(7);
        {
            const std::vector<SurfaceScan> scans = generate_dataset(config);
            f.signatures = extract_signatures(scans);
        } // scans released before the matrix pass
        f.matrix = similarity_matrix(f.signatures);
        f.model = fit_densities(collect_scores(f.matrix, SampleMode::SourceAveraged));
        return f;
    }();
    return fixture;
}

void criterion_beta_roundtrip(Checker& c) {
    for (const BetaFit& ref : {paper_km(), paper_knm()}) {
        const BetaFit fit = fit_beta_moments(ref.mean(), ref.variance());
        c.expect(std::abs(fit.alpha - ref.alpha) <= 1e-6 * ref.alpha,
                 "alpha " + fmt(fit.alpha, 10) + " != " + fmt(ref.alpha, 10));
        c.expect(std::abs(fit.beta - ref.beta) <= 1e-6 * ref.beta,
                 "beta " + fmt(fit.beta, 10) + " != " + fmt(ref.beta, 10));
    }
    c.note("both fits recovered to 1e-6 relative");
}

void criterion_threshold(Checker& c) {
    const BetaFit km = paper_km();
    const BetaFit knm = paper_knm();
    const double threshold = intersection_threshold(km, knm);
    const double grid = oracle::grid_intersection(km, knm, knm.mode_or_mean(), km.mode_or_mean());
    c.expect(std::abs(threshold - 0.67) <= 0.03,
             "threshold " + fmt(threshold) + " not within 0.03 of 0.67");
    c.expect(grid > 0.0, "grid oracle found no crossing");
    c.expect(std::abs(threshold - grid) <= 2e-6,
             "bisection " + fmt(threshold, 8) + " disagrees with grid " + fmt(grid, 8));
    c.note("threshold = " + fmt(threshold));
}

void criterion_lr_coherence(Checker& c) {
    ScoreDensities model;
    model.km_fit = paper_km();
    model.knm_fit = paper_knm();
    model.threshold = intersection_threshold(model.km_fit, model.knm_fit);

    const LRResult at_threshold = likelihood_ratio(model, model.threshold);
    c.expect(std::abs(at_threshold.lr - 1.0) <= 1e-6,
             "LR(threshold) = " + fmt(at_threshold.lr, 10));

    const LRResult at_09 = likelihood_ratio(model, 0.9);
    const LRResult at_08 = likelihood_ratio(model, 0.8);
    c.expect(at_09.lr / at_08.lr > 5.0,
             "LR(0.9)/LR(0.8) = " + fmt(at_09.lr / at_08.lr) + " <= 5");

    const double direct_09 = oracle::direct_beta_pdf(15.7494, 2.0665, 0.9) /
                             oracle::direct_beta_pdf(8.5774, 11.4628, 0.9);
    const double direct_08 = oracle::direct_beta_pdf(15.7494, 2.0665, 0.8) /
                             oracle::direct_beta_pdf(8.5774, 11.4628, 0.8);
    c.expect(std::abs(at_09.lr - direct_09) <= 1e-9 * direct_09, "LR(0.9) != direct evaluation");
    c.expect(std::abs(at_08.lr - direct_08) <= 1e-9 * direct_08, "LR(0.8) != direct evaluation");
    c.note("LR(0.9)/LR(0.8) = " + fmt(at_09.lr / at_08.lr));
}

void criterion_pam_exactness(Checker& c) {
    std::mt19937_64 rng(1234);
    std::uniform_int_distribution<std::size_t> n_dist(4, 8);
    std::uniform_int_distribution<int> k_dist(2, 3);
    int exact = 0;
    const int reps = 200;
    for (int rep = 0; rep < reps; ++rep) {
        const std::size_t n = n_dist(rng);
        const int k = std::min<int>(k_dist(rng), static_cast<int>(n) - 1);
        const SquareMatrix d = oracle::random_dissimilarity(rng, n);
        const Clustering got = pam(d, k);
        const double best = oracle::brute_pam_cost(d, k);
        if (got.total_cost <= best + 1e-9) ++exact;
        c.expect(got.total_cost <= best * 1.02 + 1e-12,
                 "cost " + fmt(got.total_cost) + " exceeds optimum " + fmt(best) + " by > 2%");
    }
    c.expect(exact >= reps * 95 / 100,
             "only " + std::to_string(exact) + "/200 runs hit the optimum");
    c.note(std::to_string(exact) + "/200 exact");
}

void criterion_silhouette(Checker& c) {
    SquareMatrix d(5);
    const auto set = [&](std::size_t i, std::size_t j, double v) {
        d.at(i, j) = v;
        d.at(j, i) = v;
    };
    set(0, 1, 0.1);
    set(0, 2, 0.9);
    set(0, 3, 0.8);
    set(0, 4, 0.7);
    set(1, 2, 0.6);
    set(1, 3, 0.5);
    set(1, 4, 0.4);
    set(2, 3, 0.2);
    set(2, 4, 0.3);
    set(3, 4, 0.25);
    Clustering clustering;
    clustering.k = 2;
    clustering.medoid_indices = {0, 3};
    clustering.assignment = {0, 0, 1, 1, 1};
    const SilhouetteReport report = silhouette(d, clustering);
    const double want[5] = {7.0 / 8.0, 4.0 / 5.0, 2.0 / 3.0, 17.0 / 26.0, 1.0 / 2.0};
    for (std::size_t i = 0; i < 5; ++i) {
        c.expect(std::abs(report.per_point[i] - want[i]) <= 1e-12,
                 "s(" + std::to_string(i) + ") = " + fmt(report.per_point[i], 15));
    }
}

void criterion_exp1_pipeline(Checker& c) {
    const Exp1Fixture& f = exp1_fixture();
    c.expect(f.signatures.size() == 320, "expected 320 marks");

    const SquareMatrix d = to_dissimilarity(f.matrix);
    const KSelection sel = select_k(d, 2, 60);
    c.expect(sel.best_k >= 38 && sel.best_k <= 50,
             "best_k = " + std::to_string(sel.best_k) + " outside [38, 50]");

    const EvaluationReport cv = crossvalidate(f.matrix, SampleMode::SourceAveraged);
    c.expect(cv.sensitivity >= 0.95, "sensitivity " + fmt(cv.sensitivity) + " < 0.95");
    c.expect(cv.specificity >= 0.90, "specificity " + fmt(cv.specificity) + " < 0.90");
    const double auc = roc_auc(cv.roc);
    c.expect(auc >= 0.97, "roc auc " + fmt(auc) + " < 0.97");
    c.note("best_k = " + std::to_string(sel.best_k) + ", sens = " + fmt(cv.sensitivity) +
           ", spec = " + fmt(cv.specificity) + ", auc = " + fmt(auc));
}

void criterion_exp23_clustering(Checker& c) {
    for (const std::string name : {std::string("exp2"), std::string("exp3")}) {
        const GeneratorConfig config = preset_by_name(name, 7);
        std::vector<Signature> sigs;
        {
            const std::vector<SurfaceScan> scans = generate_dataset(config);
            sigs = extract_signatures(scans);
        }
        const SimilarityMatrix sim = similarity_matrix(sigs);
        const KSelection sel = select_k(to_dissimilarity(sim), 2, 20);
        c.expect(sel.best_k == 6, name + " best_k = " + std::to_string(sel.best_k) + " != 6");
        c.note(name + " best_k = " + std::to_string(sel.best_k));
    }
}

void criterion_length_degradation(Checker& c) {
    const Exp1Fixture& f = exp1_fixture();
    LengthSweepOptions opts;
    opts.max_knm_pairs = 1600;
    opts.seed = 17;
    opts.keep_pair_records = false;
    const double full_mm = f.signatures[0].length_mm();
    const std::vector<double> lengths = {full_mm, 2.5, 2.0, 1.5, 1.0, 0.5};
    const LengthSweepResult sweep = length_sweep(f.signatures, f.model, lengths, opts);

    const auto spec_at = [&](double L) {
        for (const LengthPoint& p : sweep.points) {
            if (std::abs(p.length_mm - L) < 1e-9) return p.specificity;
        }
        return -1.0;
    };
    c.expect(spec_at(full_mm) >= 0.95,
             "full-length specificity " + fmt(spec_at(full_mm)) + " < 0.95");
    c.expect(spec_at(2.5) >= 0.9,
             "specificity at 2.5 mm " + fmt(spec_at(2.5)) + " < 0.9 (no crossing inside [1, 2.5])");
    c.expect(spec_at(1.0) <= 0.9,
             "specificity at 1.0 mm " + fmt(spec_at(1.0)) + " > 0.9 (no crossing inside [1, 2.5])");
    c.expect(spec_at(0.5) <= 0.6, "specificity at 0.5 mm " + fmt(spec_at(0.5)) + " > 0.6");
    std::string curve = "spec(L) =";
    for (const LengthPoint& p : sweep.points) {
        curve += " " + fmt(p.length_mm, 2) + ":" + fmt(p.specificity, 3);
    }
    c.note(curve);
}

void criterion_registration_oracle(Checker& c) {
    std::mt19937_64 rng(4321);
    std::uniform_int_distribution<std::size_t> len(60, 500);
    std::normal_distribution<double> noise(0.0, 1.0);
    int checked = 0;
    for (int rep = 0; rep < 500; ++rep) {
        std::vector<double> av(len(rng)), bv(len(rng));
        for (double& x : av) x = noise(rng);
        for (double& x : bv) x = noise(rng);
        const Signature a = make_signature(std::move(av), 3.45, SourceMeta{});
        SourceMeta mb;
        mb.tool_id = 2;
        const Signature b = make_signature(std::move(bv), 3.45, mb);
        const AlignOptions opts;
        const Alignment got = align(a, b, opts);
        const oracle::BruteAlignment want = oracle::brute_align(
            a.values, b.values, opts.max_lag_frac,
            opts.min_overlap(std::min(a.values.size(), b.values.size())));
        if (got.lag != want.lag) {
            c.expect(false, "lag mismatch at rep " + std::to_string(rep));
            break;
        }
        if (std::abs(got.ccf_raw - want.r) > 1e-12 * std::max(1.0, std::abs(want.r))) {
            c.expect(false, "correlation mismatch at rep " + std::to_string(rep));
            break;
        }
        ++checked;
    }
    c.note(std::to_string(checked) + "/500 pairs matched exactly");
}

void criterion_invariants(Checker& c) {
    // similarity: symmetry, scale, translation
    std::mt19937_64 rng(555);
    std::normal_distribution<double> noise(0.0, 1.0);
    for (int rep = 0; rep < 20; ++rep) {
        std::vector<double> av(200 + 13 * rep), bv(300 - 7 * rep);
        for (double& x : av) x = noise(rng);
        for (double& x : bv) x = noise(rng);
        SourceMeta mb;
        mb.tool_id = 2;
        const Signature a = make_signature(av, 3.45, SourceMeta{});
        const Signature b = make_signature(bv, 3.45, mb);
        const double s = similarity_score(a, b);
        c.expect(similarity_score(b, a) == s, "symmetry violated");
        std::vector<double> scaled = b.values;
        for (double& x : scaled) x *= 4.2;
        c.expect(std::abs(similarity_score(a, make_signature(scaled, 3.45, mb)) - s) <= 1e-12,
                 "scale invariance violated");
        Signature shifted = b;
        for (double& x : shifted.values) x += 2.5;
        c.expect(std::abs(similarity_score(a, shifted) - s) <= 1e-12,
                 "translation invariance violated");
        if (!c.ok) break;
    }

    // ROC: monotone, perfect separation and diagonal endpoints
    {
        std::vector<double> km(50), knm(80);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (double& x : km) x = u(rng);
        for (double& x : knm) x = u(rng);
        const auto roc = roc_curve(km, knm);
        bool monotone = true;
        for (std::size_t i = 1; i < roc.size(); ++i) {
            monotone &= roc[i].fpr >= roc[i - 1].fpr && roc[i].tpr >= roc[i - 1].tpr;
        }
        c.expect(monotone, "roc not monotone");

        const std::vector<double> hi = {0.8, 0.85, 0.9};
        const std::vector<double> lo = {0.1, 0.2, 0.3};
        const auto sep = roc_curve(hi, lo);
        bool corner = false;
        for (const RocPoint& p : sep) corner |= p.fpr == 0.0 && p.tpr == 1.0;
        c.expect(corner && std::abs(roc_auc(sep) - 1.0) <= 1e-12,
                 "perfect-separation roc misses (0,1)");
        const auto diag = roc_curve(lo, lo);
        c.expect(std::abs(roc_auc(diag) - 0.5) <= 1e-12, "identical-distribution roc off diagonal");
    }

    // Beta pdf quadrature normalization
    {
        const BetaFit km = paper_km();
        const double integral = oracle::beta_pdf_quadrature(km.alpha, km.beta);
        c.expect(std::abs(integral - 1.0) <= 1e-6, "pdf integral = " + fmt(integral, 10));
    }

    // full-pipeline determinism: two runs, byte-identical artifacts
    {
        const auto run_pipeline = [] {
            GeneratorConfig config;
            config.seed = 99;
            config.n_tools = 4;
            config.sides = 2;
            config.replicates = 3;
            config.length_mm = 2.0;
            config.scan_rows = 5;
            const auto scans = generate_dataset(config);
            const auto sigs = extract_signatures(scans);
            const SimilarityMatrix sim = similarity_matrix(sigs);
            const ScoreDensities model =
                fit_densities(collect_scores(sim, SampleMode::Downsampled, 3), 3);
            std::ostringstream bytes;
            write_signature_csv(sigs[0], bytes);
            write_matrix_csv(sim, bytes);
            write_model_json(model, bytes);
            return bytes.str();
        };
        const std::string first = run_pipeline();
        const std::string second = run_pipeline();
        c.expect(first == second, "pipeline outputs differ between identical runs");
        c.expect(!first.empty(), "pipeline produced no output");
    }
}

} // namespace

int main() {
    struct Criterion {
        int id;
        std::string name;
        std::function<void(Checker&)> run;
    };
    const std::vector<Criterion> criteria = {
        {1, "beta moment-matching round trip", criterion_beta_roundtrip},
        {2, "threshold derivation from the published fits", criterion_threshold},
        {3, "likelihood-ratio coherence", criterion_lr_coherence},
        {4, "pam matches exhaustive enumeration at desk scale", criterion_pam_exactness},
        {5, "silhouette hand-computed values", criterion_silhouette},
        {6, "synthetic experiment-1 pipeline", criterion_exp1_pipeline},
        {7, "synthetic experiments 2-3 cluster counts", criterion_exp23_clustering},
        {8, "length-degradation shape", criterion_length_degradation},
        {9, "registration equals brute-force search", criterion_registration_oracle},
        {10, "invariant suites", criterion_invariants},
    };

    int failures = 0;
    for (const Criterion& criterion : criteria) {
        Checker checker;
        const auto start = std::chrono::steady_clock::now();
        try {
            criterion.run(checker);
        } catch (const std::exception& e) {
            checker.expect(false, std::string("exception: ") + e.what());
        }
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("[%s] %2d. %s (%.1fs)%s%s\n", checker.ok ? "PASS" : "FAIL", criterion.id,
                    criterion.name.c_str(), seconds, checker.detail.empty() ? "" : " -- ",
                    checker.detail.c_str());
        std::fflush(stdout);
        if (!checker.ok) ++failures;
    }
    std::printf("acceptance: %zu/%zu criteria passed\n", criteria.size() - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
