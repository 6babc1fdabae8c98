// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "optionrace/config.hpp"
#include "optionrace/mechanisms.hpp"
#include "optionrace/simulator.hpp"

namespace optionrace::cli {

/// Process exit codes.
enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitNumerical = 2 };

// Each command prints a human-readable report to `out`, writes the requested
// files into config.out_dir and returns an exit code. Exceptions propagate to
// run_cli, which maps them to exit codes.

int cmd_thresholds(const RunConfig& config, std::ostream& out);
int cmd_classify(const RunConfig& config, std::ostream& out);
int cmd_sweep(const RunConfig& config, std::ostream& out);
/// variant: race | breakout | validate
int cmd_simulate(const std::string& variant, const RunConfig& config, const sim::ExecutionOptions& exec,
                 std::ostream& out);
/// variant: liability | windfall | warning-shot
int cmd_mechanism(const std::string& variant, const RunConfig& config, std::ostream& out);

/// Whole command line (argv[0] excluded). Reads OPTIONRACE_THREADS.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

// JSON payloads of the reports, exposed for tests.
nlohmann::json thresholds_to_json(const model::ThresholdSet& set);
nlohmann::json stats_to_json(const sim::EnsembleStats& stats);
nlohmann::json liability_to_json(const mechanisms::LiabilitySolution& solution);
nlohmann::json warning_shot_to_json(const mechanisms::WarningShotReport& report);
nlohmann::json validation_to_json(const sim::ValidationReport& report);
nlohmann::json breakout_to_json(const sim::BreakoutReport& report);

/// One row per path.
std::string outcomes_to_csv(const std::vector<sim::RaceOutcome>& outcomes, bool discounted);

}  // namespace optionrace::cli
