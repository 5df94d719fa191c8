#include "striae/meta.hpp"

#include <charconv>
#include <sstream>

#include "striae/errors.hpp"

namespace striae {

std::string to_string(Side s) { return s == Side::A ? "A" : "B"; }
std::string to_string(Direction d) { return d == Direction::Pull ? "pull" : "push"; }
std::string to_string(SizeClass c) { return c == SizeClass::Small ? "small" : "large"; }

namespace {

int parse_int(const std::string& s, const std::string& what) {
    int value = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc{} || ptr != s.data() + s.size()) {
        throw format_error("invalid " + what + ": '" + s + "'");
    }
    return value;
}

Side parse_side(const std::string& s) {
    if (s == "A") return Side::A;
    if (s == "B") return Side::B;
    throw format_error("invalid side: '" + s + "'");
}

Direction parse_direction(const std::string& s) {
    if (s == "pull") return Direction::Pull;
    if (s == "push") return Direction::Push;
    throw format_error("invalid direction: '" + s + "'");
}

SizeClass parse_size_class(const std::string& s) {
    if (s == "small" || s == "S") return SizeClass::Small;
    if (s == "large" || s == "L") return SizeClass::Large;
    throw format_error("invalid size class: '" + s + "'");
}

} // namespace

std::string SourceMeta::label() const {
    std::ostringstream out;
    out << 'T' << tool_id << '-' << to_string(side);
    if (angle_deg) out << "-a" << *angle_deg;
    if (direction) out << '-' << to_string(*direction);
    out << "-r" << replicate;
    if (size_class) out << '-' << (*size_class == SizeClass::Small ? 'S' : 'L');
    return out.str();
}

SourceMeta SourceMeta::parse_label(const std::string& label) {
    std::vector<std::string> tokens;
    std::string token;
    std::istringstream in(label);
    while (std::getline(in, token, '-')) tokens.push_back(token);
    if (tokens.size() < 3 || tokens[0].size() < 2 || tokens[0][0] != 'T') {
        throw format_error("unparseable label: '" + label + "'");
    }
    SourceMeta meta;
    meta.tool_id = parse_int(tokens[0].substr(1), "tool id");
    meta.side = parse_side(tokens[1]);
    bool have_replicate = false;
    for (std::size_t i = 2; i < tokens.size(); ++i) {
        const std::string& t = tokens[i];
        if (t.empty()) throw format_error("unparseable label: '" + label + "'");
        if (t[0] == 'a' && t.size() > 1) {
            meta.angle_deg = parse_int(t.substr(1), "angle");
        } else if (t[0] == 'r' && t.size() > 1) {
            meta.replicate = parse_int(t.substr(1), "replicate");
            have_replicate = true;
        } else if (t == "pull" || t == "push") {
            meta.direction = parse_direction(t);
        } else if (t == "S" || t == "L") {
            meta.size_class = parse_size_class(t);
        } else {
            throw format_error("unparseable label segment '" + t + "' in '" + label + "'");
        }
    }
    if (!have_replicate) throw format_error("label missing replicate: '" + label + "'");
    return meta;
}

std::vector<std::pair<std::string, std::string>> SourceMeta::to_key_values() const {
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("tool_id", std::to_string(tool_id));
    kv.emplace_back("side", to_string(side));
    if (angle_deg) kv.emplace_back("angle_deg", std::to_string(*angle_deg));
    if (direction) kv.emplace_back("direction", to_string(*direction));
    kv.emplace_back("replicate", std::to_string(replicate));
    if (size_class) kv.emplace_back("size_class", to_string(*size_class));
    return kv;
}

bool SourceMeta::apply_key_value(const std::string& key, const std::string& value) {
    if (key == "tool_id") {
        tool_id = parse_int(value, "tool_id");
    } else if (key == "side") {
        side = parse_side(value);
    } else if (key == "angle_deg") {
        angle_deg = parse_int(value, "angle_deg");
    } else if (key == "direction") {
        direction = parse_direction(value);
    } else if (key == "replicate") {
        replicate = parse_int(value, "replicate");
    } else if (key == "size_class") {
        size_class = parse_size_class(value);
    } else {
        return false;
    }
    return true;
}

} // namespace striae
