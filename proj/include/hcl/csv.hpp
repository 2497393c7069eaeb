#pragma once

#include <cstdio>
#include <ostream>
#include <string>

namespace hcl {

/// Formats a double with 17 significant digits, enough to round-trip exactly.
inline std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void csv_row(std::ostream& os, const std::initializer_list<double>& vals) {
    bool first = true;
    for (double v : vals) {
        if (!first) os << ',';
        os << csv_num(v);
        first = false;
    }
    os << '\n';
}

} // namespace hcl
