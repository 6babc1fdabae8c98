// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "generators.hpp"
#include "optionrace/config.hpp"
#include "optionrace/errors.hpp"
#include "optionrace/format.hpp"

using namespace optionrace;
using namespace optionrace::cli;
using optionrace::testing::Gen;

#ifndef OPTIONRACE_PRESET_DIR
#error "OPTIONRACE_PRESET_DIR must be defined"
#endif

TEST_CASE("number formatting") {
    CHECK(format_number(2.0) == "2");
    CHECK(format_number(1.0 / 3.0) == "0.333333333");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_number(1.5e-12) == "1.5e-12");
    CHECK(json_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(json_number(std::nan("")).is_null());
    CHECK(json_number(1.0 / 3.0).get<double>() == 0.333333333);
}

TEST_CASE("every preset round-trips through JSON") {
    for (const auto& name : preset_names()) {
        CAPTURE(name);
        RunConfig c = preset(name);
        c.finalize();
        const RunConfig back = load_config_json(to_config_json(c));
        CHECK(back == c);
    }
    CHECK_THROWS_AS(preset("nope"), ConfigError);
}

TEST_CASE("property: random configs round-trip") {
    Gen g(41);
    for (int i = 0; i < 300; ++i) {
        RunConfig c = preset(preset_names()[static_cast<std::size_t>(g.integer(0, 9))]);
        c.params = g.params();
        c.params.sigma = g.uniform(0.01, 2.0);
        c.params.r = g.uniform(0.0, 0.2);
        c.params.gamma = g.uniform(-1, 1);
        if (g.coin()) {
            c.beliefs = model::BeliefState::learned(c.params.lambda_rate, g.uniform(0, 10));
        } else {
            const double ps = g.uniform(0, 1);
            c.beliefs = model::BeliefState::asymmetric(ps, g.uniform(0, 1));
        }
        c.v = g.uniform(0, 100);
        c.sim.dt = g.uniform(1e-4, 0.1);
        c.sim.horizon = g.uniform(c.sim.dt, 50);
        c.sim.seed = g.engine()();
        c.sim.discounting = g.coin();
        c.include_private = g.coin();
        c.epsilon = g.uniform(0, 3);
        if (g.coin()) c.annotation = std::pair{g.uniform(0, 10), g.uniform(0, 10)};
        c.finalize();
        CHECK(load_config_json(to_config_json(c)) == c);
    }
}

TEST_CASE("shipped preset files match the built-ins") {
    for (const auto& name : preset_names()) {
        CAPTURE(name);
        const auto path = std::filesystem::path(OPTIONRACE_PRESET_DIR) / (name + ".json");
        REQUIRE(std::filesystem::exists(path));
        RunConfig from_file = load_config_file(path.string());
        RunConfig built_in = preset(name);
        from_file.preset.clear();
        built_in.preset.clear();
        from_file.finalize();
        built_in.finalize();
        CHECK(from_file == built_in);
    }
}

TEST_CASE("settings") {
    RunConfig c;
    apply_setting(c, "d-social", "25");
    CHECK(c.params.d_social == 25.0);
    apply_setting(c, "pi", "0.7");
    CHECK(c.beliefs.pi_self == 0.7);
    CHECK(c.beliefs.pi_rival == 0.7);
    apply_setting(c, "barrier", "saviour");
    CHECK(c.sim.barrier == sim::BarrierKind::Saviour);
    apply_setting(c, "include_private", "false");
    CHECK_FALSE(c.include_private);
    apply_setting(c, "formats", "csv,svg");
    CHECK(c.wants("svg"));
    CHECK_FALSE(c.wants("json"));
    apply_setting(c, "seed", "18446744073709551615");
    CHECK(c.sim.seed == 18446744073709551615ull);

    CHECK_THROWS_AS(apply_setting(c, "colour", "blue"), ConfigError);
    CHECK_THROWS_AS(apply_setting(c, "d_social", "ten"), ConfigError);
    CHECK_THROWS_AS(apply_setting(c, "barrier", "wall"), ConfigError);
    CHECK_THROWS_AS(apply_setting(c, "n_paths", "-3"), ConfigError);

    RunConfig bad;
    bad.params.share = 2.0;
    CHECK_THROWS_AS(bad.finalize(), ConfigError);
    bad = {};
    bad.x_axis.name = "colour";
    CHECK_THROWS_AS(bad.finalize(), ConfigError);
    bad = {};
    bad.formats = {"pdf"};
    CHECK_THROWS_AS(bad.finalize(), ConfigError);
}

TEST_CASE("learned beliefs are recomputed from the clock") {
    RunConfig c;
    apply_setting(c, "belief_source", "learned");
    apply_setting(c, "lambda_rate", "0.69314718055994530942");
    apply_setting(c, "tau", "1");
    c.finalize();
    CHECK(c.beliefs.pi_self == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(c.beliefs.pi_rival == c.beliefs.pi_self);
}

TEST_CASE("file values are overridden later and presets apply first") {
    RunConfig c = load_config_json(R"({"d_social": 3, "preset": "liability-demo"})");
    CHECK(c.params.share == 0.25);
    CHECK(c.params.d_social == 3.0);
    CHECK_THROWS_AS(load_config_json("{not json"), ConfigError);
    CHECK_THROWS_AS(load_config_json("[1, 2]"), ConfigError);
    CHECK_THROWS_AS(load_config_file("/definitely/missing.json"), ConfigError);
}
