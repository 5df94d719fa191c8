#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "striae/align.hpp"
#include "striae/scan.hpp"

namespace striae {

/// Latent description of one tool side: the striae pattern it engraves.
struct ToolSpec {
    int tool_id = 0;
    int n_striae = 0;
    std::vector<double> stria_positions_mm;
    std::vector<double> stria_depths_um; // signed
    std::vector<double> stria_widths_um;
    double subclass_component = 0.0; // shared-signature fraction in [0,1)

    void validate(double tool_width_mm) const;
};

/// Factorial design plus signal-shape parameters for the synthetic dataset
/// generator. Defaults are calibrated so that same-source scores separate
/// cleanly from different-source scores after extraction, replicate scores
/// average above 0.8, and classification degrades to chance for sub-mm
/// segments.
struct GeneratorConfig {
    std::uint64_t seed = 7;

    // factorial design
    int n_tools = 4;
    int sides = 2; // 1 or 2
    std::vector<int> angles = {80};
    std::vector<Direction> directions = {Direction::Pull};
    int replicates = 3;
    std::optional<SizeClass> size_class = SizeClass::Small;

    // geometry
    double pitch_um = 3.45;
    double length_mm = 6.0;
    int scan_rows = 50;
    double row_noise_um = 0.02;

    // latent signature shape
    double striae_per_mm = 20.0;
    double stria_depth_um = 1.2;
    double stria_width_um = 9.0;
    double deep_stria_fraction = 0.0; // share of dominant gouges
    double deep_stria_depth_um = 5.0;  // their depth scale (uniform 0.6x..1.4x, signed)
    double texture_rms_um = 0.65;      // band-limited micro texture
    double texture_corr_samples = 1.0; // correlation length of the texture
    double coarse_rms_um = 0.0;        // broad undulations riding under the striae
    double coarse_corr_samples = 25.0; // correlation length of the undulations
    double subclass_component = 0.05;  // median manufacturing share common to all tools
    double subclass_jitter = 0.0;      // log-sd of the per-source subclass share
    double subclass_max = 0.30;        // cap on the per-source share

    // replicate-to-replicate variation
    double noise_sd_um = 0.50;
    double noise_source_jitter = 0.08;    // log-sd of the per-source noise scale
    double noise_replicate_jitter = 0.10; // log-sd of the per-replicate extra
    double shift_frac = 0.05;             // max replicate shift, fraction of length
    double trend_amplitude_um = 12.0;     // macro curvature scale

    // condition effects
    int reference_angle = 80;
    double angle_attenuation = 0.9;       // amplitude factor per 10 degrees
    double angle_smooth_per_10deg = 0.6;  // extra smoothing (samples) per 10 degrees
    double direction_distortion = 0.6;    // derivative mix applied to pushed marks

    void validate() const;
    int samples_per_profile() const;
};

/// Table-style presets: exp1 fixes the condition and varies the tool
/// (20 tools x 2 sides x 8 replicates at 80/pull), exp2 varies the angle
/// (3 large tools x 2 sides x {60,70,80} x 8), exp3 varies the direction
/// (3 tools x 2 sides x {pull,push} x 8).
GeneratorConfig exp1_preset(std::uint64_t seed = 7);
GeneratorConfig exp2_preset(std::uint64_t seed = 7);
GeneratorConfig exp3_preset(std::uint64_t seed = 7);

/// Resolves "exp1" / "exp2" / "exp3".
GeneratorConfig preset_by_name(const std::string& name, std::uint64_t seed = 7);

/// The ToolSpec a given config derives for one tool side.
ToolSpec tool_spec_for(const GeneratorConfig& config, int tool_id, Side side);

/// Generates every scan of the factorial design, fully deterministic given
/// the seed (per-source substreams, fixed emission order: tool, side, angle,
/// direction, replicate). Each replicate is the source's latent signature
/// under the condition modulation, shifted by a random sub-window offset,
/// plus a quadratic macro trend and white noise; scans repeat the profile
/// across rows with small row noise.
std::vector<SurfaceScan> generate_dataset(const GeneratorConfig& config);

struct CalibrationReport {
    double mean_km_score = 0.0;
    double mean_knm_score = 0.0;
    double gap = 0.0;
    std::size_t n_km = 0;
    std::size_t n_knm = 0;
};

/// Runs generation, extraction and pairwise scoring, and reports the mean
/// within-source and between-source scores and their gap. Used to tune the
/// noise parameters against the separation targets.
CalibrationReport calibrate(const GeneratorConfig& config,
                            const AlignOptions& opts = {}, int threads = 0);

/// Manifest CSV naming each emitted scan file with its ground-truth metadata.
struct ManifestEntry {
    std::string filename;
    SourceMeta meta;
};
void write_manifest_csv(std::span<const ManifestEntry> entries, std::ostream& out);

} // namespace striae
