// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "optionrace/core_model.hpp"

namespace optionrace::cli {

struct RunConfig;
struct AxisSpec;

/// Independent quantities a sweep axis may vary.
const std::vector<std::string>& sweep_axis_names();

struct SweepCell {
    double x = 0.0;
    double y = 0.0;
    double v_preempt = 0.0;
    double v_survival = 0.0;
    double v_nuclear = 0.0;
    double v_liability = 0.0;
    model::RegionLabel label;
};

/// Cells are stored x-major: cell(i, j) = cells[i * y_steps + j].
struct SweepGrid {
    std::string x_name;
    std::string y_name;
    std::vector<double> x_values;
    std::vector<double> y_values;
    std::vector<SweepCell> cells;
    std::optional<std::pair<double, double>> annotation;

    const SweepCell& cell(std::size_t i, std::size_t j) const { return cells[i * y_values.size() + j]; }
};

/// Point evaluated by a sweep cell: parameters, pi and asset value.
struct SweepPoint {
    model::RaceParameters params;
    double pi = 0.0;
    double v = 0.0;
};

/// Applies one axis value to a point. Throws ConfigError for unknown names.
void apply_axis(SweepPoint& point, const std::string& name, double value);

SweepGrid build_sweep(const RunConfig& config);

/// One header row, then one row per cell in storage order.
std::string sweep_to_csv(const SweepGrid& grid);

/// Static phase diagram: cells shaded by region, threshold curves when the
/// y axis is the asset value, optional annotation point.
std::string sweep_to_svg(const SweepGrid& grid);

}  // namespace optionrace::cli
