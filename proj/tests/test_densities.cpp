#include <doctest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "oracles.hpp"
#include "striae/densities.hpp"
#include "striae/errors.hpp"
#include "test_support.hpp"

using namespace striae;

namespace {

// labeled matrix with deterministic fake scores: high within source, lower
// across, unique per pair so multiset checks are meaningful
SimilarityMatrix fake_matrix(int n_sources, int replicates) {
    const std::size_t n = static_cast<std::size_t>(n_sources * replicates);
    std::vector<SourceMeta> labels;
    for (int s = 0; s < n_sources; ++s) {
        for (int r = 1; r <= replicates; ++r) {
            labels.push_back(testsup::meta(s / 2 + 1, s % 2 ? Side::B : Side::A, r));
        }
    }
    SquareMatrix scores(n);
    for (std::size_t i = 0; i < n; ++i) {
        scores.at(i, i) = 1.0;
        for (std::size_t j = i + 1; j < n; ++j) {
            const bool same = labels[i].same_source(labels[j]);
            const double jitter =
                0.05 * static_cast<double>(i * n + j) / static_cast<double>(n * n);
            const double v = (same ? 0.9 : 0.4) + jitter;
            scores.at(i, j) = v;
            scores.at(j, i) = v;
        }
    }
    return SimilarityMatrix(std::move(labels), std::move(scores));
}

} // namespace

TEST_SUITE("densities") {

TEST_CASE("collect_scores counts: 2 sources x 2 replicates") {
    const SimilarityMatrix sim = fake_matrix(2, 2);
    const ScoreSample avg = collect_scores(sim, SampleMode::SourceAveraged);
    CHECK(avg.km_scores.size() == 2);
    CHECK(avg.knm_scores.size() == 1);
    // the source-averaged KNM score is the mean of the 4 cross scores
    double mean = 0.0;
    const ScoreSample naive = collect_scores(sim, SampleMode::Naive);
    REQUIRE(naive.knm_scores.size() == 4);
    for (const double s : naive.knm_scores) mean += s;
    mean /= 4.0;
    CHECK(avg.knm_scores[0] == doctest::Approx(mean).epsilon(1e-12));
}

TEST_CASE("collect_scores counts match the full factorial design") {
    // 20 tools x 2 sides = 40 sources with 8 replicates each
    const SimilarityMatrix sim = fake_matrix(40, 8);
    const ScoreSample sample = collect_scores(sim, SampleMode::SourceAveraged);
    CHECK(sample.km_scores.size() == 40 * 28); // 40 * C(8,2) = 1120
    CHECK(sample.knm_scores.size() == 780);    // C(40,2)
}

TEST_CASE("downsampled KNM has exactly the KM count and is seed-stable") {
    const SimilarityMatrix sim = fake_matrix(6, 4);
    const ScoreSample a = collect_scores(sim, SampleMode::Downsampled, 11);
    const ScoreSample b = collect_scores(sim, SampleMode::Downsampled, 11);
    const ScoreSample c = collect_scores(sim, SampleMode::Downsampled, 12);
    CHECK(a.knm_scores.size() == a.km_scores.size());
    CHECK(a.knm_scores == b.knm_scores);
    CHECK(a.knm_scores != c.knm_scores);

    // every picked score is a genuine naive KNM score
    const ScoreSample naive = collect_scores(sim, SampleMode::Naive);
    for (const double s : a.knm_scores) {
        CHECK(std::count(naive.knm_scores.begin(), naive.knm_scores.end(), s) >= 1);
    }
}

TEST_CASE("KM multiset is invariant to replicate ordering") {
    const SimilarityMatrix sim = fake_matrix(4, 3);
    std::vector<std::size_t> perm(sim.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::mt19937_64 rng(55);
    std::shuffle(perm.begin(), perm.end(), rng);
    const SimilarityMatrix shuffled = sim.select(perm);

    ScoreSample a = collect_scores(sim, SampleMode::SourceAveraged);
    ScoreSample b = collect_scores(shuffled, SampleMode::SourceAveraged);
    std::sort(a.km_scores.begin(), a.km_scores.end());
    std::sort(b.km_scores.begin(), b.km_scores.end());
    CHECK(a.km_scores == b.km_scores);
    std::sort(a.knm_scores.begin(), a.knm_scores.end());
    std::sort(b.knm_scores.begin(), b.knm_scores.end());
    for (std::size_t i = 0; i < a.knm_scores.size(); ++i) {
        CHECK(a.knm_scores[i] == doctest::Approx(b.knm_scores[i]).epsilon(1e-12));
    }
}

TEST_CASE("sources with one replicate contribute no KM pairs") {
    std::vector<SourceMeta> labels = {testsup::meta(1), testsup::meta(2), testsup::meta(3)};
    SquareMatrix s(3, 0.5);
    for (int i = 0; i < 3; ++i) s.at(i, i) = 1.0;
    const SimilarityMatrix sim(labels, s);
    CHECK_THROWS_AS(collect_scores(sim, SampleMode::Naive), argument_error);
}

TEST_CASE("moment matching solves the symmetric case by hand") {
    const BetaFit fit = fit_beta_moments(0.5, 0.05);
    CHECK(fit.alpha == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(fit.beta == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("fitting the analytic moments recovers the published parameters") {
    for (const auto [alpha, beta] : {std::pair{15.7494, 2.0665}, std::pair{8.5774, 11.4628}}) {
        BetaFit ref;
        ref.alpha = alpha;
        ref.beta = beta;
        const BetaFit fit = fit_beta_moments(ref.mean(), ref.variance());
        CHECK(fit.alpha == doctest::Approx(alpha).epsilon(1e-9));
        CHECK(fit.beta == doctest::Approx(beta).epsilon(1e-9));
    }
}

TEST_CASE("fit_beta reproduces the sample moments") {
    std::mt19937_64 rng(56);
    std::uniform_real_distribution<double> score(0.05, 0.95);
    std::vector<double> scores(500);
    for (double& s : scores) s = score(rng);
    const BetaFit fit = fit_beta(scores);
    CHECK(fit.mean() == doctest::Approx(fit.sample_mean).epsilon(1e-9));
    CHECK(fit.variance() == doctest::Approx(fit.sample_var).epsilon(1e-9));
}

TEST_CASE("infeasible variance is rejected with advice") {
    CHECK_THROWS_AS(fit_beta_moments(0.9, 0.2), numeric_error);
    CHECK_THROWS_AS(fit_beta(std::vector<double>{0.5, 0.5}), argument_error); // too few
    CHECK_THROWS_AS(fit_beta(std::vector<double>{0.5, 0.5, 0.5}), numeric_error); // zero var
}

TEST_CASE("beta pdf closed-form spot checks") {
    BetaFit uniform;
    uniform.alpha = 1.0;
    uniform.beta = 1.0;
    for (const double x : {0.1, 0.5, 0.9}) {
        CHECK(beta_pdf(uniform, x) == doctest::Approx(1.0).epsilon(1e-12));
    }
    BetaFit sym;
    sym.alpha = 2.0;
    sym.beta = 2.0;
    CHECK(beta_pdf(sym, 0.5) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK_THROWS_AS(beta_pdf(sym, 1.5), argument_error);
}

TEST_CASE("published KM fit integrates to one") {
    BetaFit km;
    km.alpha = 15.7494;
    km.beta = 2.0665;
    const std::size_t panels = 1 << 20;
    double integral = 0.0;
    // Simpson over the library pdf, checked against the independent route
    const double h = 1.0 / static_cast<double>(panels);
    for (std::size_t i = 1; i < panels; ++i) {
        integral += beta_pdf(km, static_cast<double>(i) * h) * (i % 2 == 1 ? 4.0 : 2.0);
    }
    integral *= h / 3.0;
    CHECK(integral == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(oracle::beta_pdf_quadrature(km.alpha, km.beta) == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("mirror-symmetric fits intersect at one half") {
    BetaFit km, knm;
    km.alpha = 5.0;
    km.beta = 2.0;
    knm.alpha = 2.0;
    knm.beta = 5.0;
    CHECK(intersection_threshold(km, knm) == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("published fits intersect near 0.67") {
    BetaFit km, knm;
    km.alpha = 15.7494;
    km.beta = 2.0665;
    knm.alpha = 8.5774;
    knm.beta = 11.4628;
    const double threshold = intersection_threshold(km, knm);
    CHECK(std::abs(threshold - 0.67) <= 0.03);
    const double grid = oracle::grid_intersection(km, knm, knm.mode_or_mean(), km.mode_or_mean());
    CHECK(threshold == doctest::Approx(grid).epsilon(1e-5));
    // threshold sits strictly between the two means
    CHECK(threshold > knm.mean());
    CHECK(threshold < km.mean());
}

TEST_CASE("identical fits have no unique crossing") {
    BetaFit f;
    f.alpha = 4.0;
    f.beta = 3.0;
    CHECK_THROWS_AS(intersection_threshold(f, f), numeric_error);
}

TEST_CASE("fit_densities wires counts, mode and threshold together") {
    const SimilarityMatrix sim = fake_matrix(6, 4);
    const ScoreSample sample = collect_scores(sim, SampleMode::SourceAveraged);
    const ScoreDensities model = fit_densities(sample, 123);
    CHECK(model.mode == SampleMode::SourceAveraged);
    CHECK(model.n_km == sample.km_scores.size());
    CHECK(model.n_knm == sample.knm_scores.size());
    CHECK(model.seed == 123);
    CHECK(model.threshold > model.knm_fit.mean());
    CHECK(model.threshold < model.km_fit.mean());
    // the fitted densities agree at the threshold
    CHECK(beta_log_pdf(model.km_fit, model.threshold) ==
          doctest::Approx(beta_log_pdf(model.knm_fit, model.threshold)).epsilon(1e-6));

    // reversed classes refuse to build
    ScoreSample reversed;
    reversed.km_scores = sample.knm_scores;
    reversed.knm_scores = sample.km_scores;
    reversed.mode = sample.mode;
    CHECK_THROWS_AS(fit_densities(reversed), numeric_error);
}

TEST_CASE("threshold stays between the means across random separated fits") {
    std::mt19937_64 rng(57);
    std::uniform_real_distribution<double> lo_mean(0.2, 0.45), hi_mean(0.6, 0.9);
    std::uniform_real_distribution<double> var_frac(0.02, 0.2);
    for (int rep = 0; rep < 50; ++rep) {
        const double m0 = lo_mean(rng), m1 = hi_mean(rng);
        const double v0 = var_frac(rng) * m0 * (1 - m0);
        const double v1 = var_frac(rng) * m1 * (1 - m1);
        const BetaFit knm = fit_beta_moments(m0, v0);
        const BetaFit km = fit_beta_moments(m1, v1);
        const double t = intersection_threshold(km, knm);
        CHECK(t > m0);
        CHECK(t < m1);
    }
}

TEST_CASE("model json round-trips") {
    const SimilarityMatrix sim = fake_matrix(6, 4);
    const ScoreDensities model =
        fit_densities(collect_scores(sim, SampleMode::SourceAveraged), 9);
    std::stringstream buf;
    write_model_json(model, buf);
    const ScoreDensities back = read_model_json(buf);
    CHECK(back.mode == model.mode);
    CHECK(back.km_fit.alpha == model.km_fit.alpha);
    CHECK(back.km_fit.beta == model.km_fit.beta);
    CHECK(back.knm_fit.alpha == model.knm_fit.alpha);
    CHECK(back.knm_fit.beta == model.knm_fit.beta);
    CHECK(back.threshold == model.threshold);
    CHECK(back.n_km == model.n_km);
    CHECK(back.n_knm == model.n_knm);
    CHECK(back.seed == model.seed);

    std::stringstream bad("{\"mode\": \"naive\"}");
    CHECK_THROWS_AS(read_model_json(bad), format_error);
}

TEST_CASE("samples csv lists both classes") {
    ScoreSample sample;
    sample.km_scores = {0.9, 0.8};
    sample.knm_scores = {0.3};
    sample.mode = SampleMode::Naive;
    std::ostringstream out;
    write_samples_csv(sample, out);
    CHECK(out.str() ==
          "class,score\nkm,0.90000000000000002\nkm,0.80000000000000004\nknm,0.29999999999999999\n");
}

}
