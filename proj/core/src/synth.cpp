#include "striae/synth.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <string>

#include "striae/cluster.hpp"
#include "striae/densities.hpp"
#include "striae/detail/rng.hpp"
#include "striae/errors.hpp"
#include "striae/extract.hpp"
#include "striae/scan_io.hpp"

namespace striae {

void ToolSpec::validate(double tool_width_mm) const {
    if (n_striae < 1) throw argument_error("tool spec needs at least one stria");
    if (stria_positions_mm.size() != static_cast<std::size_t>(n_striae) ||
        stria_depths_um.size() != static_cast<std::size_t>(n_striae) ||
        stria_widths_um.size() != static_cast<std::size_t>(n_striae)) {
        throw argument_error("tool spec arrays must all have n_striae entries");
    }
    for (int i = 0; i < n_striae; ++i) {
        if (!(stria_positions_mm[static_cast<std::size_t>(i)] > 0.0 &&
              stria_positions_mm[static_cast<std::size_t>(i)] < tool_width_mm)) {
            throw argument_error("stria " + std::to_string(i) + " lies outside the tool width");
        }
        if (!(stria_widths_um[static_cast<std::size_t>(i)] > 0.0)) {
            throw argument_error("stria " + std::to_string(i) + " has non-positive width");
        }
    }
    if (!(subclass_component >= 0.0 && subclass_component < 1.0)) {
        throw argument_error("subclass component must lie in [0,1)");
    }
}

void GeneratorConfig::validate() const {
    if (n_tools < 1 || replicates < 1) throw argument_error("config needs tools and replicates");
    if (replicates < 2) throw argument_error("config needs replicates >= 2");
    if (sides < 1 || sides > 2) throw argument_error("config sides must be 1 or 2");
    if (angles.empty() || directions.empty()) {
        throw argument_error("config needs at least one angle and one direction");
    }
    if (!(pitch_um > 0.0) || !(length_mm > 0.0)) {
        throw argument_error("config scales must be positive");
    }
    if (scan_rows < 1) throw argument_error("config needs at least one scan row");
    if (!(striae_per_mm > 0.0) || !(stria_depth_um > 0.0) || !(stria_width_um > 0.0) ||
        !(texture_rms_um >= 0.0) || !(noise_sd_um >= 0.0) || !(trend_amplitude_um >= 0.0)) {
        throw argument_error("config scales must be positive");
    }
    if (!(stria_width_um < length_mm * 1000.0)) {
        throw argument_error("striae are wider than the tool");
    }
    if (!(subclass_component >= 0.0 && subclass_component < 1.0)) {
        throw argument_error("subclass component must lie in [0,1)");
    }
    if (!(shift_frac >= 0.0 && shift_frac < 0.5)) {
        throw argument_error("shift fraction must lie in [0, 0.5)");
    }
}

int GeneratorConfig::samples_per_profile() const {
    return static_cast<int>(std::llround(length_mm * 1000.0 / pitch_um));
}

GeneratorConfig exp1_preset(std::uint64_t seed) {
    GeneratorConfig config;
    config.seed = seed;
    config.length_mm = 4.5; // small screwdriver tip
    config.n_tools = 20;
    config.sides = 2;
    config.angles = {80};
    config.directions = {Direction::Pull};
    config.replicates = 8;
    config.size_class = SizeClass::Small;
    return config;
}

GeneratorConfig exp2_preset(std::uint64_t seed) {
    GeneratorConfig config;
    config.seed = seed;
    config.n_tools = 3;
    config.sides = 2;
    config.angles = {60, 70, 80};
    config.directions = {Direction::Pull};
    config.replicates = 8;
    config.size_class = SizeClass::Large;
    return config;
}

GeneratorConfig exp3_preset(std::uint64_t seed) {
    GeneratorConfig config;
    config.seed = seed;
    config.length_mm = 4.5; // small screwdrivers, matching the tool experiment
    config.n_tools = 3;
    config.sides = 2;
    config.angles = {80};
    config.directions = {Direction::Pull, Direction::Push};
    config.replicates = 8;
    config.size_class = SizeClass::Small;
    return config;
}

GeneratorConfig preset_by_name(const std::string& name, std::uint64_t seed) {
    if (name == "exp1") return exp1_preset(seed);
    if (name == "exp2") return exp2_preset(seed);
    if (name == "exp3") return exp3_preset(seed);
    throw argument_error("unknown preset '" + name + "' (expected exp1, exp2 or exp3)");
}

namespace {

std::uint64_t source_stream(const GeneratorConfig& config, int tool_id, Side side) {
    const std::uint64_t idx =
        static_cast<std::uint64_t>(tool_id) * 2ULL + (side == Side::B ? 1ULL : 0ULL);
    return detail::Rng::derive(config.seed, 0x746f6f6cULL + idx);
}

std::vector<double> gaussian_kernel(double sigma) {
    if (!(sigma > 0.0)) return {1.0};
    const int radius = std::max(1, static_cast<int>(std::ceil(3.0 * sigma)));
    std::vector<double> kernel(static_cast<std::size_t>(2 * radius + 1));
    double sum = 0.0;
    for (int i = -radius; i <= radius; ++i) {
        const double w = std::exp(-0.5 * (static_cast<double>(i) / sigma) *
                                  (static_cast<double>(i) / sigma));
        kernel[static_cast<std::size_t>(i + radius)] = w;
        sum += w;
    }
    for (double& w : kernel) w /= sum;
    return kernel;
}

// same-length convolution with edge clamping
std::vector<double> smooth_gaussian(const std::vector<double>& v, double sigma) {
    if (!(sigma > 0.0)) return v;
    const std::vector<double> kernel = gaussian_kernel(sigma);
    const int radius = static_cast<int>(kernel.size() / 2);
    const int n = static_cast<int>(v.size());
    std::vector<double> out(v.size(), 0.0);
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int t = -radius; t <= radius; ++t) {
            const int j = std::clamp(i + t, 0, n - 1);
            acc += kernel[static_cast<std::size_t>(t + radius)] * v[static_cast<std::size_t>(j)];
        }
        out[static_cast<std::size_t>(i)] = acc;
    }
    return out;
}

std::vector<double> central_gradient(const std::vector<double>& v) {
    const std::size_t n = v.size();
    std::vector<double> g(n, 0.0);
    if (n < 2) return g;
    g[0] = v[1] - v[0];
    g[n - 1] = v[n - 1] - v[n - 2];
    for (std::size_t i = 1; i + 1 < n; ++i) g[i] = (v[i + 1] - v[i - 1]) / 2.0;
    return g;
}

ToolSpec draw_tool_spec(const GeneratorConfig& config, int tool_id, Side side,
                        double width_mm) {
    detail::Rng rng(source_stream(config, tool_id, side));
    ToolSpec spec;
    spec.tool_id = tool_id;
    spec.n_striae = std::max(1, static_cast<int>(std::llround(config.striae_per_mm * width_mm)));
    spec.stria_positions_mm.reserve(static_cast<std::size_t>(spec.n_striae));
    spec.stria_depths_um.reserve(static_cast<std::size_t>(spec.n_striae));
    spec.stria_widths_um.reserve(static_cast<std::size_t>(spec.n_striae));
    for (int i = 0; i < spec.n_striae; ++i) {
        spec.stria_positions_mm.push_back(rng.uniform(0.02 * width_mm, 0.98 * width_mm));
        // heavy-tailed depths: a few dominant gouges over fine scratches
        double depth = rng.normal(0.0, config.stria_depth_um);
        if (rng.uniform01() < config.deep_stria_fraction) {
            const double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
            depth = sign * rng.uniform(0.6, 1.4) * config.deep_stria_depth_um;
        }
        spec.stria_depths_um.push_back(depth);
        spec.stria_widths_um.push_back(rng.uniform(0.75, 1.25) * config.stria_width_um);
    }
    // how much of the shared manufacturing signature this tool side retained
    spec.subclass_component = std::min(
        config.subclass_max,
        config.subclass_component * std::exp(rng.normal() * config.subclass_jitter));
    spec.validate(width_mm);
    return spec;
}

std::vector<double> render_striae(const ToolSpec& spec, double pitch_um, std::size_t n) {
    std::vector<double> sig(n, 0.0);
    for (int s = 0; s < spec.n_striae; ++s) {
        const double center = spec.stria_positions_mm[static_cast<std::size_t>(s)] * 1000.0 / pitch_um;
        const double depth = spec.stria_depths_um[static_cast<std::size_t>(s)];
        const double width = spec.stria_widths_um[static_cast<std::size_t>(s)] / pitch_um;
        const long lo = std::max<long>(0, static_cast<long>(std::floor(center - 4.0 * width)));
        const long hi = std::min<long>(static_cast<long>(n) - 1,
                                       static_cast<long>(std::ceil(center + 4.0 * width)));
        for (long x = lo; x <= hi; ++x) {
            const double u = (static_cast<double>(x) - center) / width;
            sig[static_cast<std::size_t>(x)] += depth * std::exp(-0.5 * u * u);
        }
    }
    return sig;
}

// band-limited noise: white noise smoothed to the given correlation length
// and rescaled to the target rms
std::vector<double> band_limited(detail::Rng& rng, std::size_t n, double corr_samples,
                                 double rms_um) {
    std::vector<double> v(n);
    for (double& w : v) w = rng.normal();
    v = smooth_gaussian(v, corr_samples);
    double ss = 0.0;
    for (const double t : v) ss += t * t;
    const double rms = std::sqrt(ss / static_cast<double>(n));
    const double scale = rms > 1e-12 ? rms_um / rms : 0.0;
    for (double& t : v) t *= scale;
    return v;
}

// micro texture plus optional broad undulations
std::vector<double> render_texture(detail::Rng& rng, const GeneratorConfig& config,
                                   std::size_t n) {
    std::vector<double> tex = band_limited(rng, n, config.texture_corr_samples,
                                           config.texture_rms_um);
    if (config.coarse_rms_um > 0.0) {
        const std::vector<double> coarse =
            band_limited(rng, n, config.coarse_corr_samples, config.coarse_rms_um);
        for (std::size_t i = 0; i < n; ++i) tex[i] += coarse[i];
    }
    return tex;
}

struct LatentSource {
    ToolSpec spec;
    std::vector<double> signal; // striae + texture + subclass share, extended grid
};

// The shared manufacturing component all tools inherit a small fraction of.
std::vector<double> shared_component(const GeneratorConfig& config, std::size_t n_ext,
                                     double width_mm) {
    detail::Rng rng(detail::Rng::derive(config.seed, 0x73686172ULL));
    ToolSpec spec;
    spec.tool_id = 0;
    spec.n_striae = std::max(1, static_cast<int>(std::llround(config.striae_per_mm * width_mm)));
    for (int i = 0; i < spec.n_striae; ++i) {
        spec.stria_positions_mm.push_back(rng.uniform(0.02 * width_mm, 0.98 * width_mm));
        double depth = rng.normal(0.0, config.stria_depth_um);
        if (rng.uniform01() < config.deep_stria_fraction) {
            const double sign = rng.uniform01() < 0.5 ? -1.0 : 1.0;
            depth = sign * rng.uniform(0.6, 1.4) * config.deep_stria_depth_um;
        }
        spec.stria_depths_um.push_back(depth);
        spec.stria_widths_um.push_back(rng.uniform(0.75, 1.25) * config.stria_width_um);
    }
    std::vector<double> sig = render_striae(spec, config.pitch_um, n_ext);
    const std::vector<double> tex = render_texture(rng, config, n_ext);
    for (std::size_t i = 0; i < n_ext; ++i) sig[i] += tex[i];
    return sig;
}

LatentSource make_latent(const GeneratorConfig& config, int tool_id, Side side,
                         std::size_t n_ext, const std::vector<double>& shared,
                         double width_mm) {
    LatentSource source;
    source.spec = draw_tool_spec(config, tool_id, side, width_mm);
    detail::Rng rng(detail::Rng::derive(source_stream(config, tool_id, side), 0x74657874ULL));
    const double c = source.spec.subclass_component;
    source.signal = render_striae(source.spec, config.pitch_um, n_ext);
    const std::vector<double> tex = render_texture(rng, config, n_ext);
    for (std::size_t i = 0; i < n_ext; ++i) {
        source.signal[i] = (1.0 - c) * (source.signal[i] + tex[i]) + c * shared[i];
    }
    return source;
}

} // namespace

ToolSpec tool_spec_for(const GeneratorConfig& config, int tool_id, Side side) {
    config.validate();
    const std::size_t n = static_cast<std::size_t>(config.samples_per_profile());
    const std::size_t margin =
        static_cast<std::size_t>(std::ceil(config.shift_frac * static_cast<double>(n)));
    const double width_mm =
        static_cast<double>(n + 2 * margin) * config.pitch_um / 1000.0; // extended latent width
    return draw_tool_spec(config, tool_id, side, width_mm);
}

std::vector<SurfaceScan> generate_dataset(const GeneratorConfig& config) {
    config.validate();
    const std::size_t n = static_cast<std::size_t>(config.samples_per_profile());
    if (n < 2) throw argument_error("config yields fewer than 2 samples per profile");
    const std::size_t margin =
        static_cast<std::size_t>(std::ceil(config.shift_frac * static_cast<double>(n)));
    const std::size_t n_ext = n + 2 * margin;
    const double width_mm = static_cast<double>(n_ext) * config.pitch_um / 1000.0;

    const std::vector<double> shared = shared_component(config, n_ext, width_mm);

    std::vector<SurfaceScan> scans;
    scans.reserve(static_cast<std::size_t>(config.n_tools) * static_cast<std::size_t>(config.sides) *
                  config.angles.size() * config.directions.size() *
                  static_cast<std::size_t>(config.replicates));

    for (int tool = 1; tool <= config.n_tools; ++tool) {
        for (int side_idx = 0; side_idx < config.sides; ++side_idx) {
            const Side side = side_idx == 0 ? Side::A : Side::B;
            const LatentSource source = make_latent(config, tool, side, n_ext, shared, width_mm);
            detail::Rng rng(detail::Rng::derive(source_stream(config, tool, side), 0x7265706cULL));
            const double source_noise =
                config.noise_sd_um * std::exp(rng.normal() * config.noise_source_jitter);

            for (const int angle : config.angles) {
                const double d_angle = std::abs(angle - config.reference_angle);
                const double amplitude = std::pow(config.angle_attenuation, d_angle / 10.0);
                std::vector<double> base =
                    smooth_gaussian(source.signal, config.angle_smooth_per_10deg * d_angle / 10.0);
                for (double& v : base) v *= amplitude;

                for (const Direction dir : config.directions) {
                    std::vector<double> conditioned = base;
                    if (dir == Direction::Push) {
                        const std::vector<double> grad = central_gradient(base);
                        for (std::size_t i = 0; i < conditioned.size(); ++i) {
                            conditioned[i] += config.direction_distortion * grad[i];
                        }
                    }

                    for (int rep = 1; rep <= config.replicates; ++rep) {
                        const long max_off = static_cast<long>(margin);
                        const long off = rng.uniform_range(-max_off, max_off);
                        const double rep_noise =
                            source_noise * std::exp(rng.normal() * config.noise_replicate_jitter);
                        const double curvature =
                            rng.uniform(-1.0, 1.0) * config.trend_amplitude_um;
                        const double tilt =
                            rng.uniform(-1.0, 1.0) * config.trend_amplitude_um / 3.0;

                        std::vector<double> profile(n);
                        const std::size_t start =
                            static_cast<std::size_t>(static_cast<long>(margin) + off);
                        for (std::size_t i = 0; i < n; ++i) {
                            const double u =
                                2.0 * static_cast<double>(i) / static_cast<double>(n - 1) - 1.0;
                            profile[i] = conditioned[start + i] + curvature * u * u + tilt * u +
                                         rng.normal() * rep_noise;
                        }

                        SurfaceScan scan;
                        scan.rows = static_cast<std::size_t>(config.scan_rows);
                        scan.cols = n;
                        scan.x_resolution_um = config.pitch_um;
                        scan.y_resolution_um = config.pitch_um;
                        scan.meta.tool_id = tool;
                        scan.meta.side = side;
                        scan.meta.angle_deg = angle;
                        scan.meta.direction = dir;
                        scan.meta.replicate = rep;
                        scan.meta.size_class = config.size_class;
                        scan.heights.resize(scan.rows * scan.cols);
                        for (std::size_t r = 0; r < scan.rows; ++r) {
                            for (std::size_t c = 0; c < scan.cols; ++c) {
                                scan.heights[r * scan.cols + c] = static_cast<float>(
                                    profile[c] + rng.normal() * config.row_noise_um);
                            }
                        }
                        scans.push_back(std::move(scan));
                    }
                }
            }
        }
    }
    return scans;
}

CalibrationReport calibrate(const GeneratorConfig& config, const AlignOptions& opts,
                            int threads) {
    const std::vector<SurfaceScan> scans = generate_dataset(config);
    const std::vector<Signature> signatures = extract_signatures(scans, 0.75, threads);
    const SimilarityMatrix sim = similarity_matrix(signatures, opts, threads);
    const ScoreSample sample = collect_scores(sim, SampleMode::Naive);

    CalibrationReport report;
    report.n_km = sample.km_scores.size();
    report.n_knm = sample.knm_scores.size();
    report.mean_km_score =
        std::accumulate(sample.km_scores.begin(), sample.km_scores.end(), 0.0) /
        static_cast<double>(sample.km_scores.size());
    report.mean_knm_score =
        std::accumulate(sample.knm_scores.begin(), sample.knm_scores.end(), 0.0) /
        static_cast<double>(sample.knm_scores.size());
    report.gap = report.mean_km_score - report.mean_knm_score;
    return report;
}

void write_manifest_csv(std::span<const ManifestEntry> entries, std::ostream& out) {
    out << "filename,label,tool_id,side,angle_deg,direction,replicate,size_class\n";
    for (const ManifestEntry& e : entries) {
        out << e.filename << ',' << e.meta.label() << ',' << e.meta.tool_id << ','
            << to_string(e.meta.side) << ',';
        if (e.meta.angle_deg) out << *e.meta.angle_deg;
        out << ',';
        if (e.meta.direction) out << to_string(*e.meta.direction);
        out << ',' << e.meta.replicate << ',';
        if (e.meta.size_class) out << to_string(*e.meta.size_class);
        out << '\n';
    }
}

} // namespace striae
