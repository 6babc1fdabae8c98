// SPDX-License-Identifier: Apache-2.0
#include "optionrace/sweep.hpp"

#include <cmath>

#include "optionrace/config.hpp"
#include "optionrace/errors.hpp"
#include "optionrace/format.hpp"
#include "optionrace/svg.hpp"

namespace optionrace::cli {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 520.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 550.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 460.0;

std::string_view region_fill(model::Region region) {
    switch (region) {
        case model::Region::WaitBelowAll: return "#e9ecef";
        case model::Region::SuicideRegion: return "#f4a261";
        case model::Region::ProfitableWait: return "#a8dadc";
        case model::Region::RaceViable: return "#b7e4c7";
    }
    return "#ffffff";
}

// Splits a curve into drawable runs, dropping points outside [lo, hi].
std::vector<std::vector<std::pair<double, double>>> visible_runs(const std::vector<double>& xs,
                                                                 const std::vector<double>& ys, double lo,
                                                                 double hi) {
    std::vector<std::vector<std::pair<double, double>>> runs(1);
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (std::isfinite(ys[i]) && ys[i] >= lo && ys[i] <= hi) {
            runs.back().emplace_back(xs[i], ys[i]);
        } else if (!runs.back().empty()) {
            runs.emplace_back();
        }
    }
    return runs;
}

}  // namespace

const std::vector<std::string>& sweep_axis_names() {
    static const std::vector<std::string> names{"v", "d_social", "d_private", "share", "pi", "invest_cost"};
    return names;
}

void apply_axis(SweepPoint& point, const std::string& name, double value) {
    if (name == "v") {
        point.v = value;
    } else if (name == "d_social") {
        point.params.d_social = value;
    } else if (name == "d_private") {
        point.params.d_private = value;
    } else if (name == "share") {
        point.params.share = value;
    } else if (name == "pi") {
        point.pi = value;
    } else if (name == "invest_cost") {
        point.params.invest_cost = value;
    } else {
        throw ConfigError("sweep axis '" + name + "' is not a swept parameter");
    }
}

SweepGrid build_sweep(const RunConfig& config) {
    SweepGrid grid;
    grid.x_name = config.x_axis.name;
    grid.y_name = config.y_axis.name;
    grid.annotation = config.annotation;
    for (int i = 0; i < config.x_axis.steps; ++i) grid.x_values.push_back(config.x_axis.value(i));
    for (int j = 0; j < config.y_axis.steps; ++j) grid.y_values.push_back(config.y_axis.value(j));

    grid.cells.reserve(grid.x_values.size() * grid.y_values.size());
    for (double x : grid.x_values) {
        for (double y : grid.y_values) {
            SweepPoint point{config.params, config.beliefs.pi_self, config.v};
            apply_axis(point, grid.x_name, x);
            apply_axis(point, grid.y_name, y);
            point.params.validate();

            SweepCell cell;
            cell.x = x;
            cell.y = y;
            cell.v_preempt = model::preemption_threshold(point.pi, point.params);
            cell.v_survival = model::survival_threshold(point.pi, point.params, config.include_private);
            cell.v_nuclear = model::nuclear_threshold(point.pi, point.params);
            cell.v_liability = model::liability_threshold(point.pi, point.params);
            cell.label = model::classify_region(point.v, point.pi, point.params, config.include_private);
            grid.cells.push_back(cell);
        }
    }
    return grid;
}

std::string sweep_to_csv(const SweepGrid& grid) {
    std::string out = grid.x_name + "," + grid.y_name + ",v_preempt,v_survival,v_nuclear,v_liability,region\n";
    for (const auto& c : grid.cells) {
        out += format_number(c.x) + "," + format_number(c.y) + "," + format_number(c.v_preempt) + "," +
               format_number(c.v_survival) + "," + format_number(c.v_nuclear) + "," +
               format_number(c.v_liability) + "," + std::string(model::to_string(c.label.region)) + "\n";
    }
    return out;
}

std::string sweep_to_svg(const SweepGrid& grid) {
    SvgWriter svg(kWidth, kHeight);
    svg.rect(0, 0, kWidth, kHeight, "#ffffff");

    const std::size_t nx = grid.x_values.size();
    const std::size_t ny = grid.y_values.size();
    const double cw = (kRight - kLeft) / static_cast<double>(nx);
    const double ch = (kBottom - kTop) / static_cast<double>(ny);
    const double x_min = grid.x_values.front(), x_max = grid.x_values.back();
    const double y_min = grid.y_values.front(), y_max = grid.y_values.back();

    auto px = [&](double x) { return kLeft + 0.5 * cw + (x - x_min) / (x_max - x_min) * (kRight - kLeft - cw); };
    auto py = [&](double y) { return kBottom - 0.5 * ch - (y - y_min) / (y_max - y_min) * (kBottom - kTop - ch); };

    for (std::size_t i = 0; i < nx; ++i) {
        for (std::size_t j = 0; j < ny; ++j) {
            svg.rect(kLeft + static_cast<double>(i) * cw, kBottom - static_cast<double>(j + 1) * ch, cw, ch,
                     region_fill(grid.cell(i, j).label.region));
        }
    }

    if (grid.y_name == "v") {
        std::vector<double> preempt, survival;
        for (std::size_t i = 0; i < nx; ++i) {
            preempt.push_back(grid.cell(i, 0).label.v_preempt);
            survival.push_back(grid.cell(i, 0).label.v_survival);
        }
        auto draw = [&](const std::vector<double>& ys, std::string_view stroke, std::string_view dash) {
            for (const auto& run : visible_runs(grid.x_values, ys, y_min, y_max)) {
                std::vector<std::pair<double, double>> pts;
                for (auto [x, y] : run) pts.emplace_back(px(x), py(y));
                if (pts.size() == 1) {
                    svg.circle(pts[0].first, pts[0].second, 1.5, std::string(stroke));
                } else {
                    svg.polyline(pts, stroke, 2.0, dash);
                }
            }
        };
        draw(preempt, "#d62828", "6,4");
        draw(survival, "#2a9d8f", {});
    }

    if (grid.annotation) {
        svg.circle(px(grid.annotation->first), py(grid.annotation->second), 5.0, "#1d3557", "#ffffff");
    }

    svg.rect(kLeft, kTop, kRight - kLeft, kBottom - kTop, "none", "#333333");
    for (double frac : {0.0, 0.5, 1.0}) {
        const double xv = x_min + frac * (x_max - x_min);
        const double yv = y_min + frac * (y_max - y_min);
        svg.line(px(xv), kBottom, px(xv), kBottom + 5.0, "#333333");
        svg.text(px(xv), kBottom + 18.0, format_number(xv), 11.0, "middle");
        svg.line(kLeft - 5.0, py(yv), kLeft, py(yv), "#333333");
        svg.text(kLeft - 8.0, py(yv) + 4.0, format_number(yv), 11.0, "end");
    }
    svg.text(0.5 * (kLeft + kRight), kBottom + 40.0, grid.x_name, 13.0, "middle");
    svg.text(20.0, 0.5 * (kTop + kBottom), grid.y_name, 13.0, "middle", -90.0);
    svg.text(0.5 * (kLeft + kRight), 24.0, "Deployment regions (" + grid.y_name + " vs " + grid.x_name + ")",
             14.0, "middle");

    double ly = kTop + 10.0;
    for (model::Region r : {model::Region::SuicideRegion, model::Region::RaceViable, model::Region::ProfitableWait,
                            model::Region::WaitBelowAll}) {
        svg.rect(kRight + 20.0, ly, 14.0, 14.0, region_fill(r), "#333333");
        svg.text(kRight + 40.0, ly + 11.0, model::to_string(r), 11.0);
        ly += 22.0;
    }
    if (grid.y_name == "v") {
        svg.line(kRight + 20.0, ly + 7.0, kRight + 34.0, ly + 7.0, "#d62828", 2.0, "6,4");
        svg.text(kRight + 40.0, ly + 11.0, "preemption (L = F)", 11.0);
        ly += 22.0;
        svg.line(kRight + 20.0, ly + 7.0, kRight + 34.0, ly + 7.0, "#2a9d8f", 2.0);
        svg.text(kRight + 40.0, ly + 11.0, "survival (L = 0)", 11.0);
        ly += 22.0;
    }
    if (grid.annotation) {
        svg.circle(kRight + 27.0, ly + 7.0, 5.0, "#1d3557", "#ffffff");
        svg.text(kRight + 40.0, ly + 11.0, "annotation", 11.0);
    }
    return svg.str();
}

}  // namespace optionrace::cli
