#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace dlnoc {

/// Decimal with 12 significant digits ("%.12g"); negative zero prints as "0".
inline std::string sig12(double v) {
    if (v == 0.0) return "0";
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

/// Value rounded to what sig12() prints, so JSON and CSV carry the same digits.
inline double round12(double v) {
    if (!std::isfinite(v) || v == 0.0) return v == 0.0 ? 0.0 : v;
    return std::stod(sig12(v));
}

} // namespace dlnoc
