// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "optionrace/core_model.hpp"
#include "optionrace/simulator.hpp"

namespace optionrace::cli {

struct AxisSpec {
    std::string name;
    double min = 0.0;
    double max = 1.0;
    int steps = 2;

    double value(int index) const;
    bool operator==(const AxisSpec&) const = default;
};

/// Everything one invocation needs. Serialized as a flat JSON object whose
/// keys are listed by config_keys().
struct RunConfig {
    std::string preset;
    model::RaceParameters params;
    model::BeliefState beliefs;
    bool include_private = true;
    double v = 3.0;  ///< asset value for `classify`
    sim::SimConfig sim;
    double lag = 1.0;
    double epsilon = 0.5;
    double validate_level = 2.0;
    double d_after = 50.0;
    AxisSpec x_axis{"d_social", 0.0, 20.0, 41};
    AxisSpec y_axis{"v", 0.0, 30.0, 61};
    std::optional<std::pair<double, double>> annotation;
    std::string out_dir = "optionrace-out";
    std::vector<std::string> formats{"csv", "json", "svg"};

    bool wants(std::string_view format) const;
    /// Recomputes learned beliefs and checks cross-field invariants.
    /// Throws ConfigError.
    void finalize();

    bool operator==(const RunConfig&) const = default;
};

/// Names accepted by --set and in config files, in serialization order.
const std::vector<std::string>& config_keys();

/// Names of the built-in presets.
const std::vector<std::string>& preset_names();

/// Built-in preset by name. Throws ConfigError for unknown names.
RunConfig preset(std::string_view name);

/// Applies one key/value pair given as text (the --set form). Accepts
/// dashes in place of underscores. Throws ConfigError.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Loads a JSON config file on top of `base`. A "preset" key is applied
/// before the other keys. Throws ConfigError with position diagnostics.
RunConfig load_config_json(std::string_view text, RunConfig base = {});
RunConfig load_config_file(const std::string& path, RunConfig base = {});

/// Full-precision JSON for round-tripping.
std::string to_config_json(const RunConfig& config);

}  // namespace optionrace::cli
