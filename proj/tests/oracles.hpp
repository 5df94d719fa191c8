#pragma once

// Test-side oracles, written independently of the library code paths they
// check: plain brute-force scans, exhaustive enumeration, quadrature and
// two-pass statistics.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "striae/densities.hpp"
#include "striae/matrix.hpp"
#include "striae/scan.hpp"

namespace oracle {

struct BruteAlignment {
    long lag = 0;
    double r = -2.0;
    bool found = false;
};

// Two-pass Pearson correlation of a[i] against b[i + lag].
inline bool brute_correlation(const std::vector<double>& a, const std::vector<double>& b,
                              long lag, double& r_out) {
    const long n_a = static_cast<long>(a.size());
    const long n_b = static_cast<long>(b.size());
    const long i0 = std::max<long>(0, -lag);
    const long i1 = std::min<long>(n_a, n_b - lag);
    const long m = i1 - i0;
    if (m <= 1) return false;
    double mean_a = 0.0, mean_b = 0.0;
    for (long i = i0; i < i1; ++i) {
        mean_a += a[static_cast<std::size_t>(i)];
        mean_b += b[static_cast<std::size_t>(i + lag)];
    }
    mean_a /= static_cast<double>(m);
    mean_b /= static_cast<double>(m);
    double cov = 0.0, va = 0.0, vb = 0.0;
    for (long i = i0; i < i1; ++i) {
        const double da = a[static_cast<std::size_t>(i)] - mean_a;
        const double db = b[static_cast<std::size_t>(i + lag)] - mean_b;
        cov += da * db;
        va += da * da;
        vb += db * db;
    }
    if (!(va > 0.0) || !(vb > 0.0)) return false;
    r_out = cov / std::sqrt(va * vb);
    return true;
}

// Exhaustive lag scan with explicit tie rules: highest correlation, then
// smallest |lag|, then the negative lag.
inline BruteAlignment brute_align(const std::vector<double>& a, const std::vector<double>& b,
                                  double max_lag_frac, std::size_t min_overlap) {
    const long n_a = static_cast<long>(a.size());
    const long n_b = static_cast<long>(b.size());
    const long max_lag = static_cast<long>(
        std::floor(max_lag_frac * static_cast<double>(std::max(n_a, n_b))));
    BruteAlignment best;
    for (long lag = -max_lag; lag <= max_lag; ++lag) {
        const long i0 = std::max<long>(0, -lag);
        const long i1 = std::min<long>(n_a, n_b - lag);
        if (i1 - i0 < static_cast<long>(min_overlap)) continue;
        double r = 0.0;
        if (!brute_correlation(a, b, lag, r)) continue;
        const bool better =
            !best.found || r > best.r ||
            (r == best.r && (std::abs(lag) < std::abs(best.lag) ||
                             (std::abs(lag) == std::abs(best.lag) && lag < best.lag)));
        if (better) {
            best.found = true;
            best.lag = lag;
            best.r = r;
        }
    }
    return best;
}

// Exhaustive k-medoids optimum: minimum assignment cost over all C(n,k)
// medoid subsets.
inline double brute_pam_cost(const striae::SquareMatrix& d, int k) {
    const std::size_t n = d.size();
    std::vector<std::size_t> subset(static_cast<std::size_t>(k));
    double best = std::numeric_limits<double>::infinity();

    const auto cost_of = [&](const std::vector<std::size_t>& medoids) {
        double total = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            double nearest = std::numeric_limits<double>::infinity();
            for (const std::size_t m : medoids) nearest = std::min(nearest, d.at(j, m));
            total += nearest;
        }
        return total;
    };

    // odometer enumeration of k-subsets
    for (int i = 0; i < k; ++i) subset[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
    while (true) {
        best = std::min(best, cost_of(subset));
        int pos = k - 1;
        while (pos >= 0 &&
               subset[static_cast<std::size_t>(pos)] == n - static_cast<std::size_t>(k - pos)) {
            --pos;
        }
        if (pos < 0) break;
        ++subset[static_cast<std::size_t>(pos)];
        for (int q = pos + 1; q < k; ++q) {
            subset[static_cast<std::size_t>(q)] = subset[static_cast<std::size_t>(q - 1)] + 1;
        }
    }
    return best;
}

// Composite Simpson integral of the Beta pdf over [0,1] via an independent
// pdf route (tgamma and pow rather than the log-space evaluation).
inline double direct_beta_pdf(double alpha, double beta, double x) {
    if (x <= 0.0 || x >= 1.0) return 0.0;
    const double b = std::tgamma(alpha) * std::tgamma(beta) / std::tgamma(alpha + beta);
    return std::pow(x, alpha - 1.0) * std::pow(1.0 - x, beta - 1.0) / b;
}

inline double beta_pdf_quadrature(double alpha, double beta, std::size_t panels = 1 << 20) {
    const double h = 1.0 / static_cast<double>(panels);
    double sum = 0.0; // f(0) = f(1) = 0 for alpha, beta > 1
    for (std::size_t i = 1; i < panels; ++i) {
        const double x = static_cast<double>(i) * h;
        sum += direct_beta_pdf(alpha, beta, x) * (i % 2 == 1 ? 4.0 : 2.0);
    }
    return sum * h / 3.0;
}

// Grid scan for the similarity where the KM density overtakes the KNM
// density: the first grid cell in [lo, hi] where log km - log knm changes
// sign from negative to positive.
inline double grid_intersection(const striae::BetaFit& km, const striae::BetaFit& knm,
                                double lo, double hi, std::size_t points = 1000000) {
    const auto g = [&](double x) {
        return striae::beta_log_pdf(km, x) - striae::beta_log_pdf(knm, x);
    };
    double prev_x = lo;
    double prev_g = g(lo);
    for (std::size_t i = 1; i <= points; ++i) {
        const double x = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points);
        const double gx = g(x);
        if (prev_g < 0.0 && gx >= 0.0) return 0.5 * (prev_x + x);
        prev_x = x;
        prev_g = gx;
    }
    return -1.0; // no crossing found
}

// Deterministic helpers for random test inputs.

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double scale = 1.0) {
    std::normal_distribution<double> dist(0.0, scale);
    std::vector<double> v(n);
    for (double& x : v) x = dist(rng);
    return v;
}

inline striae::SquareMatrix random_dissimilarity(std::mt19937_64& rng, std::size_t n) {
    std::uniform_real_distribution<double> dist(0.01, 1.0);
    striae::SquareMatrix d(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double v = dist(rng);
            d.at(i, j) = v;
            d.at(j, i) = v;
        }
    }
    return d;
}

} // namespace oracle
