#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "striae/scan.hpp"

namespace striae {

/// Returns samples [left, right) of the profile; metadata is preserved.
/// The window must hold at least kMinCropWindow samples.
Profile crop(const Profile& profile, std::size_t left, std::size_t right);

inline constexpr std::size_t kMinCropWindow = 10;

/// Locally weighted polynomial regression (degree 2, tricube weights).
///
/// For each sample the fit uses the ceil(span * n) nearest neighbors, with
/// weights falling from 1 at the center to 0 at the window edge. Returns the
/// fitted value at every sample position. This is the macro-structure model:
/// plate shape and scan-scale trends survive, striations do not. Window is
/// clamped to at least 4 samples so the quadratic stays determined.
std::vector<double> smooth_local_regression(const Profile& profile, double span = 0.75);

/// Residual between the profile and its smooth_local_regression fit,
/// mean-centered. This is the mark signature used for all comparisons.
Signature extract_signature(const Profile& profile, double span = 0.75);

/// Convenience: middle-row profile then extract_signature, for each scan.
/// threads = 0 uses hardware concurrency.
std::vector<Signature> extract_signatures(std::span<const SurfaceScan> scans,
                                          double span = 0.75, int threads = 0);

} // namespace striae
