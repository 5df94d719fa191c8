#include "striae/scan_io.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

#include "striae/errors.hpp"

namespace striae {

namespace {

constexpr char kMagic[4] = {'S', 'T', 'R', 'I'};
constexpr std::uint8_t kBinVersion = 1;

std::string fmt_g9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9g", v);
    return buf;
}

std::string fmt_g12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string fmt_g17(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(std::string_view s, const std::string& where) {
    double value = 0.0;
    const char* begin = s.data();
    const char* end = s.data() + s.size();
    while (begin != end && (*begin == ' ' || *begin == '\t')) ++begin;
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc{} || ptr != end) {
        throw format_error(where + ": cannot parse number '" + std::string(s) + "'");
    }
    return value;
}

// little-endian primitives

void put_u32(std::ostream& out, std::uint32_t v) {
    const std::array<char, 4> b = {static_cast<char>(v & 0xff), static_cast<char>((v >> 8) & 0xff),
                                   static_cast<char>((v >> 16) & 0xff),
                                   static_cast<char>((v >> 24) & 0xff)};
    out.write(b.data(), 4);
}

std::uint32_t get_u32(std::istream& in) {
    std::array<unsigned char, 4> b{};
    in.read(reinterpret_cast<char*>(b.data()), 4);
    return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
           (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void put_u64(std::ostream& out, std::uint64_t v) {
    put_u32(out, static_cast<std::uint32_t>(v & 0xffffffffULL));
    put_u32(out, static_cast<std::uint32_t>(v >> 32));
}

std::uint64_t get_u64(std::istream& in) {
    const std::uint64_t lo = get_u32(in);
    const std::uint64_t hi = get_u32(in);
    return lo | (hi << 32);
}

void put_f32(std::ostream& out, float v) {
    std::uint32_t bits;
    std::memcpy(&bits, &v, 4);
    put_u32(out, bits);
}

float get_f32(std::istream& in) {
    const std::uint32_t bits = get_u32(in);
    float v;
    std::memcpy(&v, &bits, 4);
    return v;
}

void put_f64(std::ostream& out, double v) {
    std::uint64_t bits;
    std::memcpy(&bits, &v, 8);
    put_u64(out, bits);
}

double get_f64(std::istream& in) {
    const std::uint64_t bits = get_u64(in);
    double v;
    std::memcpy(&v, &bits, 8);
    return v;
}

std::string meta_block(const SurfaceScan& scan) {
    std::ostringstream out;
    for (const auto& [k, v] : scan.meta.to_key_values()) out << k << '=' << v << '\n';
    return out.str();
}

void apply_meta_line(SurfaceScan& scan, const std::string& line, const std::string& where) {
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw format_error(where + ": malformed header line '" + line + "'");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "x_res") {
        scan.x_resolution_um = parse_double(value, where);
    } else if (key == "y_res") {
        scan.y_resolution_um = parse_double(value, where);
    } else if (!scan.meta.apply_key_value(key, value)) {
        throw format_error(where + ": unknown header key '" + key + "'");
    }
}

void save_scan_csv(const SurfaceScan& scan, std::ostream& out) {
    out << "x_res=" << fmt_g12(scan.x_resolution_um) << '\n';
    out << "y_res=" << fmt_g12(scan.y_resolution_um) << '\n';
    for (const auto& [k, v] : scan.meta.to_key_values()) out << k << '=' << v << '\n';
    for (std::size_t r = 0; r < scan.rows; ++r) {
        for (std::size_t c = 0; c < scan.cols; ++c) {
            if (c) out << ',';
            out << fmt_g9(scan.at(r, c));
        }
        out << '\n';
    }
}

SurfaceScan load_scan_csv(std::istream& in, const std::string& name) {
    SurfaceScan scan;
    bool have_x = false, have_y = false;
    std::string line;
    std::size_t line_no = 0;
    std::vector<float> heights;
    std::size_t cols = 0, rows = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string where = name + ":" + std::to_string(line_no);
        if (line.find('=') != std::string::npos && line.find(',') == std::string::npos) {
            if (rows > 0) throw format_error(where + ": header line after data rows");
            apply_meta_line(scan, line, where);
            have_x = have_x || line.rfind("x_res=", 0) == 0;
            have_y = have_y || line.rfind("y_res=", 0) == 0;
            continue;
        }
        // data row
        std::size_t col = 0;
        std::size_t pos = 0;
        while (pos <= line.size()) {
            const std::size_t next = line.find(',', pos);
            const std::string_view cell(line.data() + pos,
                                        (next == std::string::npos ? line.size() : next) - pos);
            const double v = parse_double(cell, where + " col " + std::to_string(col + 1));
            if (!std::isfinite(v)) {
                throw format_error(where + ": non-finite value at row " + std::to_string(rows + 1) +
                                   ", col " + std::to_string(col + 1));
            }
            heights.push_back(static_cast<float>(v));
            ++col;
            if (next == std::string::npos) break;
            pos = next + 1;
        }
        if (rows == 0) {
            cols = col;
        } else if (col != cols) {
            throw format_error(where + ": row " + std::to_string(rows + 1) + " has " +
                               std::to_string(col) + " columns, expected " + std::to_string(cols));
        }
        ++rows;
    }
    if (!have_x || !have_y) throw format_error(name + ": missing x_res/y_res header");
    if (rows == 0) throw format_error(name + ": no data rows");
    scan.rows = rows;
    scan.cols = cols;
    scan.heights = std::move(heights);
    scan.validate();
    return scan;
}

void save_scan_bin(const SurfaceScan& scan, std::ostream& out) {
    out.write(kMagic, 4);
    out.put(static_cast<char>(kBinVersion));
    put_u32(out, static_cast<std::uint32_t>(scan.rows));
    put_u32(out, static_cast<std::uint32_t>(scan.cols));
    put_f64(out, scan.x_resolution_um);
    put_f64(out, scan.y_resolution_um);
    const std::string meta = meta_block(scan);
    put_u32(out, static_cast<std::uint32_t>(meta.size()));
    out.write(meta.data(), static_cast<std::streamsize>(meta.size()));
    for (const float h : scan.heights) put_f32(out, h);
}

SurfaceScan load_scan_bin(std::istream& in, const std::string& name) {
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0) {
        throw format_error(name + ": bad magic, not a grid-bin scan");
    }
    const int version = in.get();
    if (version != kBinVersion) {
        throw format_error(name + ": unsupported grid-bin version " + std::to_string(version));
    }
    SurfaceScan scan;
    scan.rows = get_u32(in);
    scan.cols = get_u32(in);
    scan.x_resolution_um = get_f64(in);
    scan.y_resolution_um = get_f64(in);
    const std::uint32_t meta_len = get_u32(in);
    std::string meta(meta_len, '\0');
    in.read(meta.data(), meta_len);
    if (!in) throw format_error(name + ": truncated header");
    std::istringstream meta_in(meta);
    std::string line;
    while (std::getline(meta_in, line)) {
        if (!line.empty()) apply_meta_line(scan, line, name + " meta");
    }
    scan.heights.resize(scan.rows * scan.cols);
    for (std::size_t i = 0; i < scan.heights.size(); ++i) {
        scan.heights[i] = get_f32(in);
        if (!in) {
            throw format_error(name + ": truncated heights at row " + std::to_string(i / scan.cols) +
                               ", col " + std::to_string(i % scan.cols));
        }
    }
    scan.validate();
    return scan;
}

} // namespace

ScanFormat scan_format_for_path(const std::filesystem::path& path) {
    const auto ext = path.extension().string();
    if (ext == ".csv") return ScanFormat::GridCsv;
    return ScanFormat::GridBin;
}

SurfaceScan load_scan(const std::filesystem::path& path, ScanFormat format) {
    std::ifstream in(path, format == ScanFormat::GridBin ? std::ios::binary : std::ios::in);
    if (!in) throw io_error("cannot open scan file: " + path.string());
    return format == ScanFormat::GridBin ? load_scan_bin(in, path.string())
                                         : load_scan_csv(in, path.string());
}

void save_scan(const SurfaceScan& scan, const std::filesystem::path& path, ScanFormat format) {
    scan.validate();
    std::ofstream out(path, format == ScanFormat::GridBin ? std::ios::binary : std::ios::out);
    if (!out) throw io_error("cannot open scan file for writing: " + path.string());
    if (format == ScanFormat::GridBin) {
        save_scan_bin(scan, out);
    } else {
        save_scan_csv(scan, out);
    }
    out.flush();
    if (!out) throw io_error("write failed: " + path.string());
}

Profile extract_profile(const SurfaceScan& scan, double row_fraction) {
    scan.validate();
    if (!(row_fraction >= 0.0 && row_fraction <= 1.0)) {
        throw argument_error("row_fraction must lie in [0,1]");
    }
    const auto row = static_cast<std::size_t>(
        std::llround(row_fraction * static_cast<double>(scan.rows - 1)));
    Profile profile;
    profile.values.resize(scan.cols);
    for (std::size_t c = 0; c < scan.cols; ++c) {
        profile.values[c] = static_cast<double>(scan.at(row, c));
    }
    profile.pitch_um = scan.x_resolution_um;
    profile.meta = scan.meta;
    return profile;
}

void write_signature_csv(const Signature& sig, std::ostream& out) {
    for (const auto& [k, v] : sig.meta.to_key_values()) out << "# " << k << '=' << v << '\n';
    out << "# pitch_um=" << fmt_g12(sig.pitch_um) << '\n';
    out << "position_um,depth_um\n";
    for (std::size_t i = 0; i < sig.values.size(); ++i) {
        out << fmt_g12(static_cast<double>(i) * sig.pitch_um) << ',' << fmt_g17(sig.values[i])
            << '\n';
    }
}

Signature read_signature_csv(std::istream& in, const std::string& name) {
    Signature sig;
    std::string line;
    std::size_t line_no = 0;
    bool have_pitch = false;
    bool seen_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        const std::string where = name + ":" + std::to_string(line_no);
        if (line[0] == '#') {
            std::size_t start = 1;
            while (start < line.size() && line[start] == ' ') ++start;
            const std::string kv = line.substr(start);
            const auto eq = kv.find('=');
            if (eq == std::string::npos) continue; // free-form comment
            const std::string key = kv.substr(0, eq);
            const std::string value = kv.substr(eq + 1);
            if (key == "pitch_um") {
                sig.pitch_um = parse_double(value, where);
                have_pitch = true;
            } else {
                sig.meta.apply_key_value(key, value);
            }
            continue;
        }
        if (!seen_header) {
            if (line != "position_um,depth_um") {
                throw format_error(where + ": expected 'position_um,depth_um' header");
            }
            seen_header = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw format_error(where + ": expected two columns");
        sig.values.push_back(
            parse_double(std::string_view(line).substr(comma + 1), where + " depth"));
    }
    if (!seen_header) throw format_error(name + ": missing column header");
    if (!have_pitch) throw format_error(name + ": missing pitch_um metadata");
    sig.validate();
    return sig;
}

void save_signature_csv(const Signature& sig, const std::filesystem::path& path) {
    sig.validate();
    std::ofstream out(path);
    if (!out) throw io_error("cannot open signature file for writing: " + path.string());
    write_signature_csv(sig, out);
    out.flush();
    if (!out) throw io_error("write failed: " + path.string());
}

Signature load_signature_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw io_error("cannot open signature file: " + path.string());
    return read_signature_csv(in, path.string());
}

} // namespace striae
