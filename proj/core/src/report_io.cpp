#include <cstdio>
#include <fstream>

#include <json.hpp>

#include "striae/errors.hpp"
#include "striae/evaluate.hpp"

namespace striae {

namespace {

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

void write_report_json(const EvaluationReport& report, std::ostream& out) {
    nlohmann::ordered_json j;
    j["sensitivity"] = report.sensitivity;
    j["specificity"] = report.specificity;
    j["per_fold"] = nlohmann::ordered_json::array();
    for (const FoldResult& fold : report.per_fold) {
        j["per_fold"].push_back({{"training_fold", fold.training_fold},
                                 {"threshold", fold.threshold},
                                 {"sensitivity", fold.sensitivity},
                                 {"specificity", fold.specificity},
                                 {"n_km", fold.n_km},
                                 {"n_knm", fold.n_knm}});
    }
    j["roc"] = nlohmann::ordered_json::array();
    for (const RocPoint& p : report.roc) {
        j["roc"].push_back({{"fpr", p.fpr}, {"tpr", p.tpr}, {"threshold", p.threshold}});
    }
    j["length_sweep"] = nlohmann::ordered_json::array();
    for (const LengthPoint& p : report.length_sweep) {
        j["length_sweep"].push_back({{"length_mm", p.length_mm},
                                     {"sensitivity", p.sensitivity},
                                     {"specificity", p.specificity},
                                     {"n_km", p.n_km},
                                     {"n_knm", p.n_knm},
                                     {"skipped", p.skipped}});
    }
    out << j.dump(2) << '\n';
}

void save_report_json(const EvaluationReport& report, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open report file for writing: " + path.string());
    write_report_json(report, out);
    out.flush();
    if (!out) throw io_error("write failed: " + path.string());
}

void write_roc_csv(std::span<const RocPoint> roc, std::ostream& out) {
    out << "fpr,tpr,threshold\n";
    for (const RocPoint& p : roc) {
        out << fmt(p.fpr) << ',' << fmt(p.tpr) << ',' << fmt(p.threshold) << '\n';
    }
}

void save_roc_csv(std::span<const RocPoint> roc, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open roc file for writing: " + path.string());
    write_roc_csv(roc, out);
    out.flush();
    if (!out) throw io_error("write failed: " + path.string());
}

void write_per_fold_csv(std::span<const FoldResult> folds, std::ostream& out) {
    out << "training_fold,threshold,sensitivity,specificity,n_km,n_knm\n";
    for (const FoldResult& f : folds) {
        out << f.training_fold << ',' << fmt(f.threshold) << ',' << fmt(f.sensitivity) << ','
            << fmt(f.specificity) << ',' << f.n_km << ',' << f.n_knm << '\n';
    }
}

void save_per_fold_csv(std::span<const FoldResult> folds, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open per-fold file for writing: " + path.string());
    write_per_fold_csv(folds, out);
    out.flush();
    if (!out) throw io_error("write failed: " + path.string());
}

void write_length_sweep_csv(std::span<const LengthPoint> points, std::ostream& out) {
    out << "length_mm,sensitivity,specificity,n_km,n_knm,skipped\n";
    for (const LengthPoint& p : points) {
        out << fmt(p.length_mm) << ',' << fmt(p.sensitivity) << ',' << fmt(p.specificity) << ','
            << p.n_km << ',' << p.n_knm << ',' << (p.skipped ? 1 : 0) << '\n';
    }
}

void save_length_sweep_csv(std::span<const LengthPoint> points,
                           const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open sweep file for writing: " + path.string());
    write_length_sweep_csv(points, out);
    out.flush();
    if (!out) throw io_error("write failed: " + path.string());
}

void write_length_pairs_csv(const LengthSweepResult& result, std::span<const SourceMeta> labels,
                            std::ostream& out) {
    out << "length_mm,label_full,label_truncated,same_source,score,aligned_start,source_start\n";
    for (const TruncatedPairRecord& r : result.pairs) {
        out << fmt(r.length_mm) << ',' << labels[r.i].label() << ',' << labels[r.j].label() << ','
            << (r.same_source ? 1 : 0) << ',' << fmt(r.score) << ',' << r.aligned_start << ','
            << r.source_start << '\n';
    }
}

} // namespace striae
