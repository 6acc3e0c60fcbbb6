#pragma once

#include <charconv>
#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

#include <json.hpp>

namespace storm {

/// Raised when a document (dataset, repertoire, snapshot, ...) cannot be
/// read; the message names the file, line or entry at fault.
class ParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

namespace jsonio {

inline std::string escape(std::string_view s) {
    std::string out;
    out.reserve(s.size() + 2);
    for (const char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(c) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += c;
            }
        }
    }
    return out;
}

inline std::string quoted(std::string_view s) { return "\"" + escape(s) + "\""; }

/// Fixed 9-significant-digit form used by snapshot-style files, so equal
/// values always serialize to equal bytes.
inline std::string num9(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("cannot serialize non-finite value");
    if (v == 0.0) return "0"; // fold -0 into 0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

/// Shortest decimal form that parses back to the same double; used by
/// dataset files where round-trips must be exact.
inline std::string num_exact(double v) {
    if (!std::isfinite(v)) throw std::invalid_argument("cannot serialize non-finite value");
    if (v == 0.0) return "0";
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

inline nlohmann::json parse(const std::string& text, const std::string& context) {
    try {
        return nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(context + ": " + e.what());
    }
}

inline const nlohmann::json& field(const nlohmann::json& obj, const char* key,
                                   const std::string& context) {
    if (!obj.is_object() || !obj.contains(key))
        throw ParseError(context + ": missing field \"" + key + "\"");
    return obj.at(key);
}

template <typename T>
T field_as(const nlohmann::json& obj, const char* key, const std::string& context) {
    try {
        return field(obj, key, context).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(context + ": field \"" + key + "\": " + e.what());
    }
}

} // namespace jsonio
} // namespace storm
