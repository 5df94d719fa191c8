#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace striae {

enum class Side : std::uint8_t { A, B };
enum class Direction : std::uint8_t { Pull, Push };
enum class SizeClass : std::uint8_t { Small, Large };

std::string to_string(Side s);
std::string to_string(Direction d);
std::string to_string(SizeClass c);

/// Identity and generation conditions of one mark.
///
/// (tool_id, side) jointly identify the source; angle, direction and size
/// class describe the condition the mark was made under and may be left
/// unspecified. Replicate indices distinguish repeated marks made by one
/// source under one condition.
struct SourceMeta {
    int tool_id = 1;
    Side side = Side::A;
    std::optional<int> angle_deg;
    std::optional<Direction> direction;
    int replicate = 1;
    std::optional<SizeClass> size_class;

    /// Sources are tool sides: two marks share a source iff tool and side match.
    long source_key() const { return tool_id * 2 + (side == Side::B ? 1 : 0); }

    bool same_source(const SourceMeta& o) const { return source_key() == o.source_key(); }

    /// Compact unique label, e.g. "T3-A-a80-pull-r2-S". Optional segments are
    /// omitted when unspecified. Round-trips through parse_label().
    std::string label() const;
    static SourceMeta parse_label(const std::string& label);

    /// key=value serialization shared by the scan and signature file headers.
    std::vector<std::pair<std::string, std::string>> to_key_values() const;
    /// Applies one key=value entry; returns false for unknown keys.
    bool apply_key_value(const std::string& key, const std::string& value);

    bool operator==(const SourceMeta&) const = default;
};

} // namespace striae
