#pragma once

#include <filesystem>
#include <iosfwd>

#include "striae/scan.hpp"

namespace striae {

/// On-disk scan representations.
///
/// GridCsv: text. Header lines `x_res=`, `y_res=` and key=value metadata,
/// then one comma-separated row of heights per line. Heights round-trip
/// exactly (they are written with 9 significant digits, enough to recover
/// the stored 32-bit floats bit-exactly).
///
/// GridBin: binary, little-endian. Magic "STRI", version byte, u32 rows,
/// u32 cols, f64 x/y resolution, length-prefixed metadata block, then
/// row-major f32 heights. Round-trips bit-exactly.
enum class ScanFormat { GridCsv, GridBin };

SurfaceScan load_scan(const std::filesystem::path& path, ScanFormat format);
void save_scan(const SurfaceScan& scan, const std::filesystem::path& path, ScanFormat format);

/// Picks GridBin for ".bin" / ".stri" extensions, GridCsv for ".csv".
ScanFormat scan_format_for_path(const std::filesystem::path& path);

/// Extracts the cross-section profile at round(row_fraction * (rows-1)).
/// The default 0.5 takes the vertical middle of the mark, where striations
/// are consistent across the scan. Pitch is the scan's x resolution.
Profile extract_profile(const SurfaceScan& scan, double row_fraction = 0.5);

/// Signature CSV: `# key=value` metadata comment lines (including pitch_um),
/// a `position_um,depth_um` header, then one sample per line.
void save_signature_csv(const Signature& sig, const std::filesystem::path& path);
Signature load_signature_csv(const std::filesystem::path& path);

void write_signature_csv(const Signature& sig, std::ostream& out);
Signature read_signature_csv(std::istream& in, const std::string& name = "<stream>");

} // namespace striae
