#include "striae/scan.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "striae/errors.hpp"

namespace striae {

void SurfaceScan::validate() const {
    if (rows < 1 || cols < 2) {
        throw argument_error("scan grid must have rows >= 1 and cols >= 2, got " +
                             std::to_string(rows) + "x" + std::to_string(cols));
    }
    if (heights.size() != rows * cols) {
        throw argument_error("scan height buffer size " + std::to_string(heights.size()) +
                             " does not match " + std::to_string(rows) + "x" + std::to_string(cols));
    }
    if (!(x_resolution_um > 0.0) || !(y_resolution_um > 0.0)) {
        throw argument_error("scan resolutions must be strictly positive");
    }
    for (std::size_t i = 0; i < heights.size(); ++i) {
        if (!std::isfinite(heights[i])) {
            throw argument_error("non-finite height at row " + std::to_string(i / cols) +
                                 ", col " + std::to_string(i % cols));
        }
    }
}

void Profile::validate() const {
    if (values.size() < 2) throw argument_error("profile needs at least 2 samples");
    if (!(pitch_um > 0.0)) throw argument_error("profile pitch must be positive");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw argument_error("non-finite profile value at index " + std::to_string(i));
        }
    }
}

void Signature::validate() const {
    if (values.size() < 2) throw argument_error("signature needs at least 2 samples");
    if (!(pitch_um > 0.0)) throw argument_error("signature pitch must be positive");
    double lo = values[0], hi = values[0];
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) {
            throw argument_error("non-finite signature value at index " + std::to_string(i));
        }
        lo = std::min(lo, values[i]);
        hi = std::max(hi, values[i]);
    }
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) /
                        static_cast<double>(values.size());
    const double range = hi - lo;
    if (range > 0.0 && std::abs(mean) > 1e-6 * range) {
        throw argument_error("signature is not mean-centered (|mean| = " +
                             std::to_string(std::abs(mean)) + ")");
    }
}

Signature make_signature(std::vector<double> values, double pitch_um, SourceMeta meta) {
    if (values.size() < 2) throw argument_error("signature needs at least 2 samples");
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) /
                        static_cast<double>(values.size());
    for (double& v : values) v -= mean;
    Signature sig{std::move(values), pitch_um, std::move(meta)};
    sig.validate();
    return sig;
}

} // namespace striae
