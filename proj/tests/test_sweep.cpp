// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <fstream>
#include <sstream>

#include "optionrace/config.hpp"
#include "optionrace/core_model.hpp"
#include "optionrace/errors.hpp"
#include "optionrace/sweep.hpp"

using namespace optionrace;
using namespace optionrace::cli;

#ifndef OPTIONRACE_GOLDEN_DIR
#error "OPTIONRACE_GOLDEN_DIR must be defined"
#endif

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

}  // namespace

TEST_CASE("figure1 grid has the expected shape") {
    RunConfig c = preset("figure1");
    c.finalize();
    const auto grid = build_sweep(c);
    REQUIRE(grid.x_values.size() == 41);
    REQUIRE(grid.y_values.size() == 61);
    CHECK(grid.cells.size() == 41 * 61);
    const double pi = c.beliefs.pi_self;
    for (std::size_t i = 0; i < grid.x_values.size(); ++i) {
        const double d = grid.x_values[i];
        // Independent evaluation of the two boundaries at this column.
        const double vp = c.params.invest_cost / pi;
        const double vs = (c.params.invest_cost + (1 - pi) * d) / pi;
        for (std::size_t j = 0; j < grid.y_values.size(); ++j) {
            const auto& cell = grid.cell(i, j);
            CHECK(cell.x == d);
            CHECK(cell.v_preempt == vp);
            CHECK(cell.v_survival == doctest::Approx(vs).epsilon(1e-14));
            const double v = cell.y;
            const bool suicide = v >= vp && v < vs;
            CHECK((cell.label.region == model::Region::SuicideRegion) == suicide);
        }
    }
}

TEST_CASE("suicide band width is linear in D") {
    RunConfig c = preset("figure1");
    c.y_axis = {"v", 0.0, 60.0, 6001};
    c.finalize();
    const auto grid = build_sweep(c);
    const double dv = 0.01;
    for (std::size_t i = 0; i < grid.x_values.size(); ++i) {
        std::size_t count = 0;
        for (std::size_t j = 0; j < grid.y_values.size(); ++j) {
            if (grid.cell(i, j).label.region == model::Region::SuicideRegion) ++count;
        }
        const double width = grid.x_values[i];  // (1 - pi) D / pi with pi = 0.5
        CHECK(std::abs(static_cast<double>(count) * dv - width) <= 2 * dv);
    }
}

TEST_CASE("share axis sweeps through one half") {
    RunConfig c;
    c.x_axis = {"share", 0.0, 0.9, 10};
    c.y_axis = {"d_social", 0.0, 20.0, 5};
    c.finalize();
    const auto grid = build_sweep(c);
    for (std::size_t j = 0; j < grid.y_values.size(); ++j) {
        CHECK(std::isinf(grid.cell(5, j).v_preempt));
        CHECK(std::isfinite(grid.cell(9, j).v_survival));
    }
    CHECK_NOTHROW(sweep_to_svg(grid));
    const auto csv = sweep_to_csv(grid);
    CHECK(csv.find("inf") != std::string::npos);
}

TEST_CASE("unknown axis is rejected") {
    SweepPoint point{model::RaceParameters{}, 0.5, 1.0};
    CHECK_THROWS_AS(apply_axis(point, "sigma", 1.0), ConfigError);
    apply_axis(point, "pi", 0.3);
    CHECK(point.pi == 0.3);
}

TEST_CASE("figure1 CSV and SVG match the golden files") {
    RunConfig c = preset("figure1");
    c.finalize();
    const auto grid = build_sweep(c);
    const auto csv = sweep_to_csv(grid);
    const auto svg = sweep_to_svg(grid);
    CHECK(csv == sweep_to_csv(build_sweep(c)));
    CHECK(svg == sweep_to_svg(build_sweep(c)));
    CHECK(csv == slurp(std::string(OPTIONRACE_GOLDEN_DIR) + "/figure1_sweep.csv"));
    CHECK(svg == slurp(std::string(OPTIONRACE_GOLDEN_DIR) + "/figure1_sweep.svg"));
    CHECK(csv.rfind("d_social,v,v_preempt,v_survival,v_nuclear,v_liability,region\n", 0) == 0);
    CHECK(svg.find("<circle") != std::string::npos);
}
