#include <doctest.h>

#include <cmath>
#include <fstream>
#include <random>
#include <string>

#include "oracles.hpp"
#include "striae/align.hpp"
#include "striae/errors.hpp"
#include "test_support.hpp"

using namespace striae;

TEST_SUITE("align") {

TEST_CASE("self-alignment is lag 0 with score 1") {
    std::mt19937_64 rng(1);
    const Signature s = testsup::random_signature(rng, 400);
    const Alignment a = align(s, s);
    CHECK(a.lag == 0);
    CHECK(a.ccf_raw == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.score == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(a.overlap_len == 400);
}

TEST_CASE("anti-correlated signature scores 0 when pinned to lag 0") {
    std::mt19937_64 rng(2);
    const Signature s = testsup::random_signature(rng, 400);
    std::vector<double> neg(s.values.size());
    for (std::size_t i = 0; i < neg.size(); ++i) neg[i] = -s.values[i];
    const Signature m = testsup::signature_of(neg);

    AlignOptions opts;
    opts.max_lag_frac = 1e-9; // only lag 0 admissible
    const Alignment a = align(s, m, opts);
    CHECK(a.lag == 0);
    CHECK(a.ccf_raw == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(a.score == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("a shifted noisy copy is recovered at the exact lag") {
    std::mt19937_64 rng(3);
    const std::size_t n = 700;
    const Signature s = testsup::random_signature(rng, n);
    // b[i] = s[i - 25] + small noise, so b lags s by +25
    std::normal_distribution<double> noise(0.0, 0.05);
    std::vector<double> shifted(n, 0.0);
    for (std::size_t i = 25; i < n; ++i) shifted[i] = s.values[i - 25] + noise(rng);
    const Signature b = testsup::signature_of(shifted, 3.45, testsup::meta(1, Side::A, 2));

    const Alignment a = align(s, b);
    CHECK(a.lag == 25);
    CHECK(a.ccf_raw >= 0.95);

    const oracle::BruteAlignment brute =
        oracle::brute_align(s.values, b.values, 0.9, AlignOptions{}.min_overlap(n));
    CHECK(brute.lag == a.lag);
    CHECK(a.ccf_raw == doctest::Approx(brute.r).epsilon(1e-12));
}

TEST_CASE("align matches the brute-force oracle on random pairs") {
    std::mt19937_64 rng(4);
    std::uniform_int_distribution<std::size_t> len(60, 500);
    for (int rep = 0; rep < 60; ++rep) {
        const Signature a = testsup::random_signature(rng, len(rng));
        const Signature b =
            testsup::random_signature(rng, len(rng), testsup::meta(2, Side::B, 1));
        const AlignOptions opts;
        const Alignment got = align(a, b, opts);
        const oracle::BruteAlignment want = oracle::brute_align(
            a.values, b.values, opts.max_lag_frac,
            opts.min_overlap(std::min(a.values.size(), b.values.size())));
        REQUIRE(want.found);
        CHECK(got.lag == want.lag);
        CHECK(got.ccf_raw == doctest::Approx(want.r).epsilon(1e-12));
    }
}

TEST_CASE("score is exactly symmetric, scale and translation invariant") {
    std::mt19937_64 rng(5);
    for (int rep = 0; rep < 10; ++rep) {
        const Signature a = testsup::random_signature(rng, 300 + 17 * rep);
        const Signature b =
            testsup::random_signature(rng, 420 - 11 * rep, testsup::meta(2, Side::B, 1));
        const double s_ab = similarity_score(a, b);
        const double s_ba = similarity_score(b, a);
        CHECK(s_ab == s_ba); // exact

        std::vector<double> scaled(b.values);
        for (double& v : scaled) v *= 7.5;
        const Signature b_scaled = testsup::signature_of(scaled, 3.45, b.meta);
        CHECK(similarity_score(a, b_scaled) == doctest::Approx(s_ab).epsilon(1e-12));

        // translation: correlation ignores the offset entirely
        Signature b_off = b;
        for (double& v : b_off.values) v += 3.0;
        CHECK(similarity_score(a, b_off) == doctest::Approx(s_ab).epsilon(1e-12));
    }
}

TEST_CASE("white-noise pairs score in the oracle-derived band") {
    // Monte-Carlo oracle: independent length-2000 noise pairs land in
    // (0.50, 0.68) with the default registration window, mean near 0.59.
    std::mt19937_64 rng(6);
    double sum = 0.0;
    const int reps = 24;
    for (int rep = 0; rep < reps; ++rep) {
        const Signature a = testsup::random_signature(rng, 2000);
        const Signature b =
            testsup::random_signature(rng, 2000, testsup::meta(2, Side::B, 1));
        const double s = similarity_score(a, b);
        CHECK(s > 0.50);
        CHECK(s < 0.68);
        sum += s;
    }
    CHECK(sum / reps > 0.55);
    CHECK(sum / reps < 0.63);
}

TEST_CASE("pitch mismatch and impossible overlaps raise errors") {
    std::mt19937_64 rng(7);
    const Signature a = testsup::random_signature(rng, 100);
    Signature b = testsup::random_signature(rng, 100);
    b.pitch_um = 3.6; // 4% off
    CHECK_THROWS_AS(align(a, b), argument_error);

    const Signature tiny = testsup::signature_of({1.0, -1.0, 0.5, -0.5}, 3.45);
    CHECK_THROWS_AS(align(a, tiny), numeric_error); // shorter than the overlap floor

    const Signature flat_a = testsup::signature_of(std::vector<double>(100, 0.0));
    const Signature flat_b = testsup::signature_of(std::vector<double>(100, 0.0));
    CHECK_THROWS_AS(align(flat_a, flat_b), numeric_error); // zero variance everywhere
}

TEST_CASE("similarity matrix equals element-wise recomputation") {
    std::mt19937_64 rng(8);
    std::vector<Signature> sigs;
    for (int i = 0; i < 3; ++i) {
        sigs.push_back(testsup::random_signature(rng, 260, testsup::meta(i + 1)));
    }
    const SimilarityMatrix m = similarity_matrix(sigs);
    REQUIRE(m.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(m.at(i, i) == 1.0);
        for (std::size_t j = i + 1; j < 3; ++j) {
            CHECK(m.at(i, j) == similarity_score(sigs[i], sigs[j]));
            CHECK(m.at(i, j) == m.at(j, i));
        }
    }
}

TEST_CASE("two identical signatures give the all-ones matrix") {
    std::mt19937_64 rng(9);
    const Signature s = testsup::random_signature(rng, 200);
    Signature t = s;
    t.meta.replicate = 2;
    const SimilarityMatrix m = similarity_matrix(std::vector<Signature>{s, t});
    for (std::size_t i = 0; i < 2; ++i) {
        for (std::size_t j = 0; j < 2; ++j) {
            CHECK(m.at(i, j) == doctest::Approx(1.0).epsilon(1e-12));
        }
    }
}

TEST_CASE("matrix computation is deterministic across thread counts") {
    std::mt19937_64 rng(10);
    std::vector<Signature> sigs;
    for (int i = 0; i < 6; ++i) {
        sigs.push_back(testsup::random_signature(rng, 230, testsup::meta(i + 1)));
    }
    const SimilarityMatrix one = similarity_matrix(sigs, AlignOptions{}, 1);
    const SimilarityMatrix four = similarity_matrix(sigs, AlignOptions{}, 4);
    for (std::size_t i = 0; i < one.size(); ++i) {
        for (std::size_t j = 0; j < one.size(); ++j) {
            CHECK(one.at(i, j) == four.at(i, j));
        }
    }
}

TEST_CASE("matrix csv and long csv round-trip") {
    std::mt19937_64 rng(11);
    std::vector<Signature> sigs;
    for (int i = 0; i < 4; ++i) {
        SourceMeta m = testsup::meta(i / 2 + 1, i % 2 ? Side::B : Side::A, 1);
        sigs.push_back(testsup::random_signature(rng, 210, m));
    }
    const SimilarityMatrix m = similarity_matrix(sigs);
    testsup::TempDir dir("matrix");
    save_matrix_csv(m, dir.path() / "m.csv");
    const SimilarityMatrix back = load_matrix_csv(dir.path() / "m.csv");
    REQUIRE(back.size() == m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        CHECK(back.label(i) == m.label(i));
        for (std::size_t j = 0; j < m.size(); ++j) CHECK(back.at(i, j) == m.at(i, j));
    }
    save_matrix_long_csv(m, dir.path() / "long.csv");
    std::ifstream in(dir.path() / "long.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "label_i,label_j,score");
    std::size_t lines = 0;
    std::string line;
    while (std::getline(in, line)) lines += !line.empty();
    CHECK(lines == 6); // C(4,2)
}

}
