#pragma once

#include <charconv>
#include <string>

namespace divcap {

/// Locale-independent decimal formatting with a significant-digit budget.
inline std::string format_sig(double value, int digits = 9) {
    char buf[64];
    const auto res =
        std::to_chars(buf, buf + sizeof buf, value, std::chars_format::general, digits);
    return std::string(buf, res.ptr);
}

/// Shortest representation that round-trips exactly; used for config files.
inline std::string format_exact(double value) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, value);
    return std::string(buf, res.ptr);
}

}  // namespace divcap
