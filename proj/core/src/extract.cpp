#include "striae/extract.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "striae/detail/parallel.hpp"
#include "striae/errors.hpp"
#include "striae/scan_io.hpp"

namespace striae {

Profile crop(const Profile& profile, std::size_t left, std::size_t right) {
    profile.validate();
    const std::size_t n = profile.values.size();
    if (left >= right || right > n) {
        throw argument_error("crop bounds [" + std::to_string(left) + ", " + std::to_string(right) +
                             ") invalid for profile of length " + std::to_string(n));
    }
    if (right - left < kMinCropWindow) {
        throw argument_error("crop window " + std::to_string(right - left) +
                             " below minimum of " + std::to_string(kMinCropWindow) + " samples");
    }
    Profile out;
    out.values.assign(profile.values.begin() + static_cast<std::ptrdiff_t>(left),
                      profile.values.begin() + static_cast<std::ptrdiff_t>(right));
    out.pitch_um = profile.pitch_um;
    out.meta = profile.meta;
    return out;
}

namespace {

// Weighted degree-2 fit evaluated at the window center. Positions are
// rescaled by 1/h so the normal equations stay well conditioned.
double fit_quadratic_at(const double* y, std::size_t lo, std::size_t hi, std::size_t center,
                        double h) {
    double m0 = 0, m1 = 0, m2 = 0, m3 = 0, m4 = 0;
    double r0 = 0, r1 = 0, r2 = 0;
    const double inv_h = 1.0 / h;
    for (std::size_t j = lo; j < hi; ++j) {
        const double u = (static_cast<double>(j) - static_cast<double>(center)) * inv_h;
        const double t = std::abs(u);
        if (t >= 1.0) continue;
        const double t3 = t * t * t;
        const double om = 1.0 - t3;
        const double w = om * om * om; // tricube
        const double wu = w * u;
        const double wu2 = wu * u;
        m0 += w;
        m1 += wu;
        m2 += wu2;
        m3 += wu2 * u;
        m4 += wu2 * u * u;
        const double yv = y[j];
        r0 += w * yv;
        r1 += wu * yv;
        r2 += wu2 * yv;
    }
    // 3x3 normal equations, Gaussian elimination with partial pivoting
    double a[3][4] = {{m0, m1, m2, r0}, {m1, m2, m3, r1}, {m2, m3, m4, r2}};
    for (int col = 0; col < 3; ++col) {
        int pivot = col;
        for (int row = col + 1; row < 3; ++row) {
            if (std::abs(a[row][col]) > std::abs(a[pivot][col])) pivot = row;
        }
        if (std::abs(a[pivot][col]) < 1e-300) {
            throw numeric_error("degenerate smoothing window at index " + std::to_string(center));
        }
        if (pivot != col) std::swap(a[pivot], a[col]);
        for (int row = col + 1; row < 3; ++row) {
            const double f = a[row][col] / a[col][col];
            for (int k = col; k < 4; ++k) a[row][k] -= f * a[col][k];
        }
    }
    double c[3];
    for (int row = 2; row >= 0; --row) {
        double s = a[row][3];
        for (int k = row + 1; k < 3; ++k) s -= a[row][k] * c[k];
        c[row] = s / a[row][row];
    }
    return c[0]; // value at u = 0
}

} // namespace

std::vector<double> smooth_local_regression(const Profile& profile, double span) {
    profile.validate();
    const std::size_t n = profile.values.size();
    if (n < 10) throw argument_error("smoothing needs at least 10 samples");
    if (!(span > 0.0 && span <= 1.0)) throw argument_error("span must lie in (0, 1]");

    std::size_t q = static_cast<std::size_t>(std::ceil(span * static_cast<double>(n)));
    q = std::clamp<std::size_t>(q, 4, n);

    // With q nearest neighbors on an even grid the window is contiguous;
    // the extra sample of an even-sized window goes to the left.
    const std::size_t left_extent = q / 2;

    std::vector<double> fitted(n);
    const double* y = profile.values.data();
    for (std::size_t i = 0; i < n; ++i) {
        std::size_t lo = i >= left_extent ? i - left_extent : 0;
        lo = std::min(lo, n - q);
        const std::size_t hi = lo + q;
        const double h = static_cast<double>(
            std::max(i - lo, hi - 1 - i));
        fitted[i] = fit_quadratic_at(y, lo, hi, i, h);
    }
    return fitted;
}

Signature extract_signature(const Profile& profile, double span) {
    const std::vector<double> fitted = smooth_local_regression(profile, span);
    std::vector<double> residual(profile.values.size());
    for (std::size_t i = 0; i < residual.size(); ++i) {
        residual[i] = profile.values[i] - fitted[i];
    }
    return make_signature(std::move(residual), profile.pitch_um, profile.meta);
}

std::vector<Signature> extract_signatures(std::span<const SurfaceScan> scans, double span,
                                          int threads) {
    std::vector<Signature> out(scans.size());
    detail::parallel_chunks(scans.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t i = begin; i < end; ++i) {
            out[i] = extract_signature(extract_profile(scans[i]), span);
        }
    });
    return out;
}

} // namespace striae
