// SPDX-License-Identifier: Apache-2.0
#include "optionrace/format.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace optionrace::cli {

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    if (x == 0.0) return "0";  // folds -0
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.9g", x);
    return buf;
}

nlohmann::json json_number(double x) {
    if (std::isnan(x)) return nullptr;
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return std::strtod(format_number(x).c_str(), nullptr);
}

}  // namespace optionrace::cli
