#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace curvemom {

// Fixed formatting helpers. All data files use these so that identical inputs
// produce byte-identical outputs (no locale, no shortest-round-trip variance).

// 9 significant digits, %g style.
inline std::string g9(double v) {
    if (v == 0.0) v = 0.0;  // normalize -0
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

// Fixed 9 decimals (Touchstone S columns).
inline std::string f9(double v) {
    if (v == 0.0) v = 0.0;
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.9f", v);
    return buf;
}

// 6 significant digits (NEC cards).
inline std::string g6(double v) {
    if (v == 0.0) v = 0.0;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

}  // namespace curvemom
