#pragma once

#include <cstddef>
#include <vector>

#include "striae/meta.hpp"

namespace striae {

/// Rectangular heightmap of one mark. Heights are depths in micrometers,
/// stored row-major as 32-bit floats to match the on-disk representation.
/// The x axis (columns) runs perpendicular to the striations, y (rows)
/// parallel to them.
struct SurfaceScan {
    std::vector<float> heights;
    std::size_t rows = 0;
    std::size_t cols = 0;
    double x_resolution_um = 0.0; // grid pitch along x (default instrument: 3.45)
    double y_resolution_um = 0.0;
    SourceMeta meta;

    float at(std::size_t r, std::size_t c) const { return heights[r * cols + c]; }
    float& at(std::size_t r, std::size_t c) { return heights[r * cols + c]; }

    /// Throws argument_error unless rows >= 1, cols >= 2, resolutions > 0,
    /// heights.size() == rows*cols and every height is finite.
    void validate() const;
};

/// A single cross-section of a scan: depths along x at one y position.
struct Profile {
    std::vector<double> values; // micrometers
    double pitch_um = 0.0;      // sample spacing
    SourceMeta meta;

    void validate() const; // length >= 2, pitch > 0, values finite
    double length_mm() const { return static_cast<double>(values.size()) * pitch_um / 1000.0; }
};

/// Detrended mark signature: the residual depth signal after the macro
/// structure has been removed from a profile. Values are mean-centered
/// (|mean| within 1e-6 of the value range).
struct Signature {
    std::vector<double> values; // micrometers, mean-centered
    double pitch_um = 0.0;
    SourceMeta meta;

    void validate() const;
    double length_mm() const { return static_cast<double>(values.size()) * pitch_um / 1000.0; }
};

/// Builds a Signature from raw values by subtracting their mean.
Signature make_signature(std::vector<double> values, double pitch_um, SourceMeta meta);

} // namespace striae
