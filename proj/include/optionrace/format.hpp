// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

#include <json.hpp>

namespace optionrace::cli {

/// Nine significant digits; "inf", "-inf" and "nan" for non-finite values.
std::string format_number(double x);

/// JSON value for a result number: rounded to nine significant digits,
/// "inf"/"-inf" strings for infinities, null for NaN.
nlohmann::json json_number(double x);

}  // namespace optionrace::cli
