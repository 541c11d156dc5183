#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace riswpc {

/// Fixed 10-significant-digit rendering. All user-facing numeric output goes
/// through this so that repeated runs are byte-identical.
inline std::string format_g10(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return buf;
}

/// Rounds to the value format_g10 prints, for emitting numbers through
/// serializers that re-render doubles themselves.
inline double round_g10(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.10g", v);
    return std::strtod(buf, nullptr);
}

} // namespace riswpc
