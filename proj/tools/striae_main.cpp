// striae: objective striated-toolmark comparison toolkit.
//
// Pipeline: synth (or your own scans) -> extract -> matrix -> cluster / fit
// -> compare / evaluate / lengthsweep. Run `striae --help` for the list.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "striae/cluster.hpp"
#include "striae/densities.hpp"
#include "striae/errors.hpp"
#include "striae/evaluate.hpp"
#include "striae/extract.hpp"
#include "striae/likelihood.hpp"
#include "striae/scan_io.hpp"
#include "striae/synth.hpp"

namespace fs = std::filesystem;
using namespace striae;

namespace {

// expands directories to their .csv files, sorted for determinism
std::vector<fs::path> expand_signature_paths(const std::vector<std::string>& inputs) {
    std::vector<fs::path> paths;
    for (const std::string& input : inputs) {
        const fs::path p(input);
        if (fs::is_directory(p)) {
            std::vector<fs::path> found;
            for (const auto& entry : fs::directory_iterator(p)) {
                if (entry.is_regular_file() && entry.path().extension() == ".csv") {
                    found.push_back(entry.path());
                }
            }
            std::sort(found.begin(), found.end());
            paths.insert(paths.end(), found.begin(), found.end());
        } else {
            paths.push_back(p);
        }
    }
    if (paths.empty()) throw argument_error("no signature files found");
    return paths;
}

std::vector<Signature> load_signatures(const std::vector<std::string>& inputs) {
    std::vector<Signature> sigs;
    for (const fs::path& p : expand_signature_paths(inputs)) {
        sigs.push_back(load_signature_csv(p));
    }
    return sigs;
}

std::vector<double> parse_lengths(const std::string& csv) {
    std::vector<double> lengths;
    std::istringstream in(csv);
    std::string token;
    while (std::getline(in, token, ',')) {
        if (!token.empty()) lengths.push_back(std::stod(token));
    }
    if (lengths.empty()) throw argument_error("no lengths given");
    return lengths;
}

void small_sample_caveat(std::size_t n_km, std::size_t n_knm) {
    if (n_km < kSmallSampleWarning || n_knm < kSmallSampleWarning) {
        std::cerr << "warning: small score sample (KM " << n_km << ", KNM " << n_knm
                  << "); densities fitted on so few scores should not be used for "
                     "statistical analysis\n";
    }
}

int cmd_synth(const std::string& preset, std::uint64_t seed, const std::string& out_dir,
              const std::string& format_name, int tools, int replicates) {
    GeneratorConfig config = preset.empty() ? GeneratorConfig{} : preset_by_name(preset, seed);
    config.seed = seed;
    if (preset.empty()) {
        if (tools > 0) config.n_tools = tools;
        if (replicates > 0) config.replicates = replicates;
    }
    const ScanFormat format =
        format_name == "grid-csv" ? ScanFormat::GridCsv : ScanFormat::GridBin;
    const char* ext = format == ScanFormat::GridCsv ? ".csv" : ".bin";

    fs::create_directories(out_dir);
    const std::vector<SurfaceScan> scans = generate_dataset(config);
    std::vector<ManifestEntry> manifest;
    manifest.reserve(scans.size());
    for (std::size_t i = 0; i < scans.size(); ++i) {
        char name[32];
        std::snprintf(name, sizeof(name), "scan_%04zu%s", i, ext);
        save_scan(scans[i], fs::path(out_dir) / name, format);
        manifest.push_back(ManifestEntry{name, scans[i].meta});
    }
    std::ofstream mf(fs::path(out_dir) / "manifest.csv");
    if (!mf) throw io_error("cannot write manifest.csv");
    write_manifest_csv(manifest, mf);
    std::cout << "wrote " << scans.size() << " scans and manifest.csv to " << out_dir << "\n";
    return 0;
}

int cmd_extract(const std::vector<std::string>& scan_paths, const std::string& out,
                const std::string& out_dir, double row_fraction, long crop_left, long crop_right,
                double span) {
    if (scan_paths.size() > 1 && out_dir.empty()) {
        throw argument_error("multiple scans need --out-dir");
    }
    if (!out_dir.empty()) fs::create_directories(out_dir);
    for (const std::string& scan_path : scan_paths) {
        const fs::path p(scan_path);
        const SurfaceScan scan = load_scan(p, scan_format_for_path(p));
        Profile profile = extract_profile(scan, row_fraction);
        if (crop_left >= 0 || crop_right >= 0) {
            const std::size_t left = crop_left >= 0 ? static_cast<std::size_t>(crop_left) : 0;
            const std::size_t right =
                crop_right >= 0 ? static_cast<std::size_t>(crop_right) : profile.values.size();
            profile = crop(profile, left, right);
        }
        const Signature sig = extract_signature(profile, span);
        const fs::path target = out_dir.empty()
                                    ? fs::path(out)
                                    : fs::path(out_dir) / (p.stem().string() + ".csv");
        save_signature_csv(sig, target);
        std::cout << "extracted " << sig.values.size() << " samples (" << sig.meta.label()
                  << ") -> " << target.string() << "\n";
    }
    return 0;
}

int cmd_matrix(const std::vector<std::string>& inputs, const std::string& out,
               const std::string& long_form, double max_lag_frac, int threads) {
    const std::vector<Signature> sigs = load_signatures(inputs);
    AlignOptions opts;
    opts.max_lag_frac = max_lag_frac;
    const SimilarityMatrix m = similarity_matrix(sigs, opts, threads);
    save_matrix_csv(m, out);
    if (!long_form.empty()) save_matrix_long_csv(m, long_form);
    std::cout << "computed " << m.size() << "x" << m.size() << " similarity matrix -> " << out
              << "\n";
    return 0;
}

int cmd_cluster(const std::string& matrix_path, int k_min, int k_max, std::uint64_t seed,
                const std::string& out, const std::string& curve, int threads) {
    const SimilarityMatrix sim = load_matrix_csv(matrix_path);
    const SquareMatrix d = to_dissimilarity(sim);
    if (k_max <= 0) k_max = static_cast<int>(std::min<std::size_t>(sim.size() - 1, 60));
    const KSelection sel = select_k(d, k_min, k_max, seed, threads);
    if (!out.empty()) save_clustering_csv(sim, sel.clustering, sel.report, out);
    if (!curve.empty()) save_silhouette_curve_csv(sel.report.per_k_curve, curve);
    std::cout << "best k = " << sel.best_k
              << " (mean silhouette = " << sel.clustering.mean_silhouette << ") over ["
              << k_min << ", " << k_max << "]\n";
    return 0;
}

int cmd_fit(const std::string& matrix_path, const std::string& mode_name, std::uint64_t seed,
            const std::string& out, const std::string& samples) {
    const SimilarityMatrix sim = load_matrix_csv(matrix_path);
    const SampleMode mode = sample_mode_from_string(mode_name);
    const ScoreSample sample = collect_scores(sim, mode, seed);
    small_sample_caveat(sample.km_scores.size(), sample.knm_scores.size());
    const ScoreDensities model = fit_densities(sample, seed);
    save_model(model, out);
    if (!samples.empty()) save_samples_csv(sample, samples);
    std::printf("fitted %s model: KM Beta(%.4f, %.4f), KNM Beta(%.4f, %.4f), threshold %.4f\n",
                to_string(model.mode).c_str(), model.km_fit.alpha, model.km_fit.beta,
                model.knm_fit.alpha, model.knm_fit.beta, model.threshold);
    std::cout << "model -> " << out << "\n";
    return 0;
}

int cmd_compare(const std::string& sig_a, const std::string& sig_b, const std::string& model_path,
                bool as_json) {
    const Signature a = load_signature_csv(sig_a);
    const Signature b = load_signature_csv(sig_b);
    const ScoreDensities model = load_model(model_path);
    const auto [score, lr] = compare_marks(a, b, model);
    const SourceCall call = classify(model, score);
    if (as_json) {
        nlohmann::ordered_json j;
        j["score"] = score;
        j["lr"] = lr.lr;
        j["log10_lr"] = lr.log10_lr;
        j["decision"] = to_string(lr.decision);
        j["classification"] = to_string(call);
        j["threshold"] = model.threshold;
        j["verbal"] = lr.verbal;
        std::cout << j.dump(2) << "\n";
    } else {
        std::printf("score:          %.6f\n", score);
        std::printf("threshold:      %.6f -> %s\n", model.threshold, to_string(call).c_str());
        std::printf("LR:             %.6g\n", lr.lr);
        std::printf("log10 LR:       %.4f\n", lr.log10_lr);
        std::printf("decision:       %s\n", to_string(lr.decision).c_str());
        std::printf("verbal:         %s\n", lr.verbal.c_str());
    }
    return 0;
}

int cmd_evaluate(const std::vector<std::string>& inputs, const std::string& mode_name,
                 const std::string& out_dir, int threads) {
    const std::vector<Signature> sigs = load_signatures(inputs);
    const SampleMode mode = sample_mode_from_string(mode_name);
    const EvaluationReport report = crossvalidate(sigs, mode, AlignOptions{}, threads);
    if (!out_dir.empty()) {
        fs::create_directories(out_dir);
        save_report_json(report, fs::path(out_dir) / "report.json");
        save_roc_csv(report.roc, fs::path(out_dir) / "roc.csv");
        save_per_fold_csv(report.per_fold, fs::path(out_dir) / "per_fold.csv");
    }
    std::printf("cross-validated classification performance (%s mode):\n",
                to_string(mode).c_str());
    std::printf("  %-12s %10s %12s %12s\n", "fold", "threshold", "sensitivity", "specificity");
    for (const FoldResult& fold : report.per_fold) {
        std::printf("  %-12s %10.4f %12.4f %12.4f\n", fold.training_fold.c_str(), fold.threshold,
                    fold.sensitivity, fold.specificity);
    }
    std::printf("  %-12s %10s %12.4f %12.4f\n", "average", "", report.sensitivity,
                report.specificity);
    std::printf("  roc auc: %.4f\n", roc_auc(report.roc));
    return 0;
}

int cmd_lengthsweep(const std::vector<std::string>& inputs, const std::string& model_path,
                    const std::string& lengths_csv, std::size_t max_knm, std::uint64_t seed,
                    const std::string& out, const std::string& pairs_out, int threads) {
    const std::vector<Signature> sigs = load_signatures(inputs);
    const ScoreDensities model = load_model(model_path);
    const std::vector<double> lengths = parse_lengths(lengths_csv);
    LengthSweepOptions opts;
    opts.max_knm_pairs = max_knm;
    opts.seed = seed;
    opts.threads = threads;
    opts.keep_pair_records = !pairs_out.empty();
    const LengthSweepResult result = length_sweep(sigs, model, lengths, opts);
    if (!out.empty()) save_length_sweep_csv(result.points, out);
    if (!pairs_out.empty()) {
        std::ofstream pf(pairs_out);
        if (!pf) throw io_error("cannot write " + pairs_out);
        std::vector<SourceMeta> labels;
        for (const Signature& s : sigs) labels.push_back(s.meta);
        write_length_pairs_csv(result, labels, pf);
    }
    std::printf("  %-10s %12s %12s %8s %8s\n", "length_mm", "sensitivity", "specificity", "n_km",
                "n_knm");
    for (const LengthPoint& p : result.points) {
        if (p.skipped) {
            std::printf("  %-10.3g %25s\n", p.length_mm, "skipped (below overlap floor)");
        } else {
            std::printf("  %-10.3g %12.4f %12.4f %8zu %8zu\n", p.length_mm, p.sensitivity,
                        p.specificity, p.n_km, p.n_knm);
        }
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"striae: objective striated-toolmark comparison"};
    app.require_subcommand(1);

    // synth
    std::string preset, out_dir, format_name = "grid-bin";
    std::uint64_t seed = 7;
    int tools = 0, replicates = 0;
    auto* synth = app.add_subcommand("synth", "generate a synthetic scan dataset with manifest");
    synth->add_option("--preset", preset, "exp1 | exp2 | exp3 (factorial presets)");
    synth->add_option("--seed", seed, "generator seed");
    synth->add_option("--tools", tools, "tool count (custom config only)");
    synth->add_option("--replicates", replicates, "replicates per source (custom config only)");
    synth->add_option("--format", format_name, "grid-bin | grid-csv")
        ->check(CLI::IsMember({"grid-bin", "grid-csv"}));
    synth->add_option("--out", out_dir, "output directory")->required();

    // extract
    std::vector<std::string> scan_paths;
    std::string sig_out = "signature.csv", sig_out_dir;
    double row_fraction = 0.5, span = 0.75;
    long crop_left = -1, crop_right = -1;
    auto* extract = app.add_subcommand("extract", "scan -> detrended signature csv");
    extract->add_option("scans", scan_paths, "scan files (grid-bin or grid-csv)")->required();
    extract->add_option("--out", sig_out, "output signature csv (single scan)");
    extract->add_option("--out-dir", sig_out_dir, "output directory (multiple scans)");
    extract->add_option("--row-fraction", row_fraction, "cross-section row in [0,1], default middle");
    extract->add_option("--crop-left", crop_left, "crop start index");
    extract->add_option("--crop-right", crop_right, "crop end index (exclusive)");
    extract->add_option("--span", span, "local-regression span fraction");

    // matrix
    std::vector<std::string> sig_inputs;
    std::string matrix_out = "matrix.csv", long_out;
    double max_lag_frac = 0.9;
    int threads = 0;
    auto* matrix = app.add_subcommand("matrix", "pairwise similarity matrix of signatures");
    matrix->add_option("signatures", sig_inputs, "signature csv files or directories")->required();
    matrix->add_option("--out", matrix_out, "matrix csv output");
    matrix->add_option("--long-form", long_out, "long-form csv (label_i,label_j,score)");
    matrix->add_option("--max-lag-frac", max_lag_frac, "registration window fraction");
    matrix->add_option("--threads", threads, "worker threads (0 = auto)");

    // cluster
    std::string matrix_in, cluster_out, curve_out;
    int k_min = 2, k_max = 0;
    std::uint64_t cluster_seed = 0;
    auto* cluster = app.add_subcommand("cluster", "k-medoids partition with silhouette selection");
    cluster->add_option("--matrix", matrix_in, "similarity matrix csv")->required();
    cluster->add_option("--k-min", k_min, "smallest k");
    cluster->add_option("--k-max", k_max, "largest k (default min(n-1, 60))");
    cluster->add_option("--seed", cluster_seed, "tie-break seed (kept for reproducibility flags)");
    cluster->add_option("--out", cluster_out, "clustering csv");
    cluster->add_option("--curve", curve_out, "silhouette-vs-k csv");
    cluster->add_option("--threads", threads, "worker threads (0 = auto)");

    // fit
    std::string fit_matrix, mode_name = "source-averaged", model_out = "model.json", samples_out;
    std::uint64_t fit_seed = 0;
    auto* fit = app.add_subcommand("fit", "fit KM/KNM Beta densities and decision threshold");
    fit->add_option("--matrix", fit_matrix, "similarity matrix csv")->required();
    fit->add_option("--mode", mode_name, "source-averaged | naive | downsampled")
        ->check(CLI::IsMember({"source-averaged", "naive", "downsampled"}));
    fit->add_option("--seed", fit_seed, "subsample seed (downsampled mode)");
    fit->add_option("--out", model_out, "model json output");
    fit->add_option("--samples", samples_out, "raw KM/KNM sample csv");

    // compare
    std::string cmp_a, cmp_b, cmp_model;
    bool cmp_json = false;
    auto* compare = app.add_subcommand("compare", "score a pair and report the likelihood ratio");
    compare->add_option("signature_a", cmp_a, "first signature csv")->required();
    compare->add_option("signature_b", cmp_b, "second signature csv")->required();
    compare->add_option("--model", cmp_model, "model json from `fit`")->required();
    compare->add_flag("--json", cmp_json, "machine-readable output");

    // evaluate
    std::vector<std::string> eval_inputs;
    std::string eval_mode = "source-averaged", eval_out_dir;
    auto* evaluate = app.add_subcommand("evaluate", "two-fold cross-validated performance + roc");
    evaluate->add_option("signatures", eval_inputs, "signature csv files or directories")
        ->required();
    evaluate->add_option("--mode", eval_mode, "source-averaged | naive | downsampled")
        ->check(CLI::IsMember({"source-averaged", "naive", "downsampled"}));
    evaluate->add_option("--out-dir", eval_out_dir, "directory for report.json/roc.csv/per_fold.csv");
    evaluate->add_option("--threads", threads, "worker threads (0 = auto)");

    // lengthsweep
    std::vector<std::string> sweep_inputs;
    std::string sweep_model, sweep_lengths, sweep_out = "length_sweep.csv", sweep_pairs;
    std::size_t sweep_max_knm = 0;
    std::uint64_t sweep_seed = 0;
    auto* sweep = app.add_subcommand("lengthsweep", "performance vs truncated signal length");
    sweep->add_option("signatures", sweep_inputs, "signature csv files or directories")->required();
    sweep->add_option("--model", sweep_model, "model json from `fit`")->required();
    sweep->add_option("--lengths", sweep_lengths, "comma-separated lengths in mm")->required();
    sweep->add_option("--max-knm-pairs", sweep_max_knm, "subsample cross-source pairs (0 = all)");
    sweep->add_option("--seed", sweep_seed, "subsample seed");
    sweep->add_option("--out", sweep_out, "sweep csv output");
    sweep->add_option("--pairs", sweep_pairs, "per-pair csv with aligned positions");
    sweep->add_option("--threads", threads, "worker threads (0 = auto)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (synth->parsed()) {
            return cmd_synth(preset, seed, out_dir, format_name, tools, replicates);
        }
        if (extract->parsed()) {
            return cmd_extract(scan_paths, sig_out, sig_out_dir, row_fraction, crop_left,
                               crop_right, span);
        }
        if (matrix->parsed()) {
            return cmd_matrix(sig_inputs, matrix_out, long_out, max_lag_frac, threads);
        }
        if (cluster->parsed()) {
            return cmd_cluster(matrix_in, k_min, k_max, cluster_seed, cluster_out, curve_out,
                               threads);
        }
        if (fit->parsed()) {
            return cmd_fit(fit_matrix, mode_name, fit_seed, model_out, samples_out);
        }
        if (compare->parsed()) {
            return cmd_compare(cmp_a, cmp_b, cmp_model, cmp_json);
        }
        if (evaluate->parsed()) {
            return cmd_evaluate(eval_inputs, eval_mode, eval_out_dir, threads);
        }
        if (sweep->parsed()) {
            return cmd_lengthsweep(sweep_inputs, sweep_model, sweep_lengths, sweep_max_knm,
                                   sweep_seed, sweep_out, sweep_pairs, threads);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
