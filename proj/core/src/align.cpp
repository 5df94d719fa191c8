#include "striae/align.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

#include "striae/detail/parallel.hpp"
#include "striae/errors.hpp"

namespace striae {

std::size_t AlignOptions::min_overlap(std::size_t shorter_len) const {
    const auto frac = static_cast<std::size_t>(
        std::ceil(min_overlap_frac * static_cast<double>(shorter_len)));
    return std::max(min_overlap_abs, frac);
}

namespace {

struct LagScan {
    bool found = false;
    long lag = 0;
    std::size_t overlap = 0;
    double r = -2.0;
    bool any_lag_allowed = false;
};

// Pearson correlation of the overlap at one lag; population moments
// accumulated in index order. Returns false when either side has zero
// variance over the overlap.
bool correlation_at(const double* a, std::size_t n_a, const double* b, std::size_t n_b, long lag,
                    std::size_t& overlap, double& r) {
    const std::size_t i0 = lag < 0 ? static_cast<std::size_t>(-lag) : 0;
    const long i1s = std::min<long>(static_cast<long>(n_a), static_cast<long>(n_b) - lag);
    if (i1s <= static_cast<long>(i0)) return false;
    const std::size_t i1 = static_cast<std::size_t>(i1s);
    const std::size_t m = i1 - i0;
    double sa = 0, sb = 0, saa = 0, sbb = 0, sab = 0;
    const double* ap = a + i0;
    const double* bp = b + (static_cast<long>(i0) + lag); // >= b for every admissible lag
    for (std::size_t k = 0; k < m; ++k) {
        const double x = ap[k];
        const double y = bp[k];
        sa += x;
        sb += y;
        saa += x * x;
        sbb += y * y;
        sab += x * y;
    }
    const double inv_m = 1.0 / static_cast<double>(m);
    const double va = saa - sa * sa * inv_m;
    const double vb = sbb - sb * sb * inv_m;
    overlap = m;
    if (!(va > 0.0) || !(vb > 0.0)) return false;
    r = (sab - sa * sb * inv_m) / std::sqrt(va * vb);
    return true;
}

// Scans lags in the order 0, -1, +1, -2, +2, ... keeping the first strict
// maximum, which realizes the smallest-|lag|-then-negative tie rule.
LagScan scan_lags(const double* a, std::size_t n_a, const double* b, std::size_t n_b,
                  const AlignOptions& opts) {
    const std::size_t longer = std::max(n_a, n_b);
    const std::size_t shorter = std::min(n_a, n_b);
    const long max_lag =
        static_cast<long>(std::floor(opts.max_lag_frac * static_cast<double>(longer)));
    const std::size_t min_ov = opts.min_overlap(shorter);

    LagScan best;
    for (long mag = 0; mag <= max_lag; ++mag) {
        for (int sign = 0; sign < (mag == 0 ? 1 : 2); ++sign) {
            const long lag = sign == 0 ? -mag : mag;
            // overlap bounds before touching the data
            const long i0 = lag < 0 ? -lag : 0;
            const long i1 = std::min<long>(static_cast<long>(n_a), static_cast<long>(n_b) - lag);
            if (i1 - i0 < static_cast<long>(min_ov)) continue;
            best.any_lag_allowed = true;
            std::size_t overlap = 0;
            double r = 0.0;
            if (!correlation_at(a, n_a, b, n_b, lag, overlap, r)) continue;
            if (!best.found || r > best.r) {
                best.found = true;
                best.lag = lag;
                best.overlap = overlap;
                best.r = r;
            }
        }
    }
    return best;
}

std::string pair_name(const SourceMeta& a, const SourceMeta& b) {
    return a.label() + " vs " + b.label();
}

} // namespace

Alignment align(const Signature& a, const Signature& b, const AlignOptions& opts) {
    if (a.values.size() < 2 || b.values.size() < 2) {
        throw argument_error("alignment needs signatures with at least 2 samples");
    }
    const double pitch_rel = std::abs(a.pitch_um - b.pitch_um) / std::max(a.pitch_um, b.pitch_um);
    if (!(pitch_rel <= 0.01)) {
        throw argument_error("pitch mismatch: " + std::to_string(a.pitch_um) + " vs " +
                             std::to_string(b.pitch_um) + " um (" + pair_name(a.meta, b.meta) + ")");
    }
    if (!(opts.max_lag_frac > 0.0 && opts.max_lag_frac <= 1.0)) {
        throw argument_error("max_lag_frac must lie in (0, 1]");
    }

    // Keep the longer signature fixed and slide the shorter over it; the
    // reported lag is mapped back to the caller's argument order.
    const bool swapped = b.values.size() > a.values.size();
    const Signature& fixed = swapped ? b : a;
    const Signature& sliding = swapped ? a : b;

    const LagScan best = scan_lags(fixed.values.data(), fixed.values.size(),
                                   sliding.values.data(), sliding.values.size(), opts);
    if (!best.any_lag_allowed) {
        throw numeric_error("no lag satisfies the minimum overlap of " +
                            std::to_string(opts.min_overlap(
                                std::min(a.values.size(), b.values.size()))) +
                            " samples (" + pair_name(a.meta, b.meta) + ")");
    }
    if (!best.found) {
        throw numeric_error("zero-variance overlap at every candidate lag (" +
                            pair_name(a.meta, b.meta) + ")");
    }
    Alignment result;
    result.lag = swapped ? -best.lag : best.lag;
    result.overlap_len = best.overlap;
    result.ccf_raw = best.r;
    result.score = (best.r + 1.0) / 2.0;
    return result;
}

Alignment align(const Signature& a, const Signature& b, double max_lag_frac) {
    AlignOptions opts;
    opts.max_lag_frac = max_lag_frac;
    return align(a, b, opts);
}

double similarity_score(const Signature& a, const Signature& b) {
    return align(a, b, AlignOptions{}).score;
}

double similarity_score(const Signature& a, const Signature& b, const AlignOptions& opts) {
    return align(a, b, opts).score;
}

SimilarityMatrix::SimilarityMatrix(std::vector<SourceMeta> labels, SquareMatrix scores)
    : labels_(std::move(labels)), scores_(std::move(scores)) {
    validate();
}

void SimilarityMatrix::validate() const {
    if (labels_.size() != scores_.size()) {
        throw argument_error("similarity matrix label count does not match its dimension");
    }
    const std::size_t n = scores_.size();
    for (std::size_t i = 0; i < n; ++i) {
        if (scores_.at(i, i) != 1.0) {
            throw argument_error("similarity matrix diagonal must be 1 (row " + std::to_string(i) +
                                 ")");
        }
        for (std::size_t j = i + 1; j < n; ++j) {
            const double s = scores_.at(i, j);
            if (!(s >= 0.0 && s <= 1.0)) {
                throw argument_error("similarity score out of [0,1] at (" + std::to_string(i) +
                                     ", " + std::to_string(j) + ")");
            }
            if (s != scores_.at(j, i)) {
                throw argument_error("similarity matrix asymmetric at (" + std::to_string(i) +
                                     ", " + std::to_string(j) + ")");
            }
        }
    }
}

SimilarityMatrix SimilarityMatrix::select(std::span<const std::size_t> indices) const {
    std::vector<SourceMeta> labels;
    labels.reserve(indices.size());
    SquareMatrix scores(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i) {
        labels.push_back(labels_[indices[i]]);
        for (std::size_t j = 0; j < indices.size(); ++j) {
            scores.at(i, j) = scores_.at(indices[i], indices[j]);
        }
    }
    return SimilarityMatrix(std::move(labels), std::move(scores));
}

SimilarityMatrix similarity_matrix(std::span<const Signature> collection,
                                   const AlignOptions& opts, int threads) {
    const std::size_t n = collection.size();
    if (n < 2) throw argument_error("similarity matrix needs at least 2 signatures");

    // strict upper triangle as a flat task list
    std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
    pairs.reserve(n * (n - 1) / 2);
    for (std::uint32_t i = 0; i < n; ++i) {
        for (std::uint32_t j = i + 1; j < n; ++j) pairs.emplace_back(i, j);
    }

    SquareMatrix scores(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) scores.at(i, i) = 1.0;

    detail::parallel_chunks(pairs.size(), threads, [&](std::size_t begin, std::size_t end) {
        for (std::size_t p = begin; p < end; ++p) {
            const auto [i, j] = pairs[p];
            const double s = similarity_score(collection[i], collection[j], opts);
            scores.at(i, j) = s;
            scores.at(j, i) = s;
        }
    });

    std::vector<SourceMeta> labels;
    labels.reserve(n);
    for (const Signature& sig : collection) labels.push_back(sig.meta);
    return SimilarityMatrix(std::move(labels), std::move(scores));
}

namespace {

std::string fmt_score(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_score(const std::string& s, const std::string& where) {
    try {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size()) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw format_error(where + ": cannot parse score '" + s + "'");
    }
}

} // namespace

void write_matrix_csv(const SimilarityMatrix& m, std::ostream& out) {
    out << "label";
    for (std::size_t j = 0; j < m.size(); ++j) out << ',' << m.label(j).label();
    out << '\n';
    for (std::size_t i = 0; i < m.size(); ++i) {
        out << m.label(i).label();
        for (std::size_t j = 0; j < m.size(); ++j) out << ',' << fmt_score(m.at(i, j));
        out << '\n';
    }
}

void save_matrix_csv(const SimilarityMatrix& m, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open matrix file for writing: " + path.string());
    write_matrix_csv(m, out);
    out.flush();
    if (!out) throw io_error("write failed: " + path.string());
}

SimilarityMatrix read_matrix_csv(std::istream& in, const std::string& name) {
    std::string line;
    if (!std::getline(in, line)) throw format_error(name + ": empty matrix file");
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::vector<std::string> header;
    {
        std::istringstream hs(line);
        std::string cell;
        while (std::getline(hs, cell, ',')) header.push_back(cell);
    }
    if (header.size() < 3 || header[0] != "label") {
        throw format_error(name + ": expected 'label,<labels...>' header");
    }
    const std::size_t n = header.size() - 1;
    std::vector<SourceMeta> labels;
    labels.reserve(n);
    for (std::size_t j = 1; j < header.size(); ++j) {
        labels.push_back(SourceMeta::parse_label(header[j]));
    }

    SquareMatrix scores(n);
    std::size_t row = 0;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (row >= n) throw format_error(name + ": more rows than labels");
        std::istringstream rs(line);
        std::string cell;
        std::getline(rs, cell, ','); // row label
        if (cell != header[row + 1]) {
            throw format_error(name + ": row label '" + cell + "' does not match header order");
        }
        for (std::size_t j = 0; j < n; ++j) {
            if (!std::getline(rs, cell, ',')) {
                throw format_error(name + ": row " + std::to_string(row + 1) + " has too few columns");
            }
            scores.at(row, j) =
                parse_score(cell, name + " row " + std::to_string(row + 1) + " col " +
                                      std::to_string(j + 1));
        }
        ++row;
    }
    if (row != n) throw format_error(name + ": expected " + std::to_string(n) + " rows, got " +
                                     std::to_string(row));
    return SimilarityMatrix(std::move(labels), std::move(scores));
}

SimilarityMatrix load_matrix_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open matrix file: " + path.string());
    return read_matrix_csv(in, path.string());
}

void write_matrix_long_csv(const SimilarityMatrix& m, std::ostream& out) {
    out << "label_i,label_j,score\n";
    for (std::size_t i = 0; i < m.size(); ++i) {
        for (std::size_t j = i + 1; j < m.size(); ++j) {
            out << m.label(i).label() << ',' << m.label(j).label() << ',' << fmt_score(m.at(i, j))
                << '\n';
        }
    }
}

void save_matrix_long_csv(const SimilarityMatrix& m, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw io_error("cannot open matrix file for writing: " + path.string());
    write_matrix_long_csv(m, out);
    out.flush();
    if (!out) throw io_error("write failed: " + path.string());
}

} // namespace striae
