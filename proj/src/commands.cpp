// SPDX-License-Identifier: Apache-2.0
#include "optionrace/commands.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <map>

#include <CLI11.hpp>

#include "optionrace/errors.hpp"
#include "optionrace/format.hpp"
#include "optionrace/sweep.hpp"

namespace optionrace::cli {

using nlohmann::json;

namespace {

void write_file(const RunConfig& config, const std::string& name, const std::string& content) {
    const std::filesystem::path dir(config.out_dir);
    std::filesystem::create_directories(dir);
    std::ofstream file(dir / name, std::ios::binary | std::ios::trunc);
    if (!file) throw ConfigError("cannot write '" + (dir / name).string() + "'");
    file << content;
}

void write_json(const RunConfig& config, const std::string& name, const json& doc) {
    if (!config.wants("json")) return;
    write_file(config, name, doc.dump(2) + "\n");
    write_file(config, "config.json", to_config_json(config));
}

void row(std::ostream& out, std::string_view label, const std::string& value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "  %-28s ", std::string(label).c_str());
    out << buf << value << "\n";
}

std::string saviour_text(const std::optional<model::SaviourThreshold>& s) {
    if (!s) return "n/a (requires share = 0)";
    return format_number(s->value) + (s->immediate_deploy ? " (immediate_deploy)" : "");
}

json config_echo(const RunConfig& config) {
    return {{"preset", config.preset},
            {"pi_self", json_number(config.beliefs.pi_self)},
            {"pi_rival", json_number(config.beliefs.pi_rival)},
            {"include_private", config.include_private}};
}

}  // namespace

json thresholds_to_json(const model::ThresholdSet& set) {
    json doc = {{"v_preempt", json_number(set.v_preempt)},
                {"v_survival", json_number(set.v_survival)},
                {"v_nuclear", json_number(set.v_nuclear)},
                {"v_liability", json_number(set.v_liability)}};
    if (set.v_saviour) {
        doc["v_saviour"] = {{"value", json_number(set.v_saviour->value)},
                            {"immediate_deploy", set.v_saviour->immediate_deploy}};
    } else {
        doc["v_saviour"] = nullptr;
    }
    return doc;
}

json stats_to_json(const sim::EnsembleStats& s) {
    json doc = {{"n_paths", s.n_paths},
                {"n_deployed", s.n_deployed},
                {"deployment_probability", json_number(s.deployment_probability)},
                {"t_deploy_mean", json_number(s.t_deploy_mean)},
                {"t_deploy_quantiles",
                 {{"q05", json_number(s.t_deploy_quantiles[0])},
                  {"q25", json_number(s.t_deploy_quantiles[1])},
                  {"q50", json_number(s.t_deploy_quantiles[2])},
                  {"q75", json_number(s.t_deploy_quantiles[3])},
                  {"q95", json_number(s.t_deploy_quantiles[4])}}},
                {"ruin_frequency", json_number(s.ruin_frequency)},
                {"ruin_frequency_se", json_number(s.ruin_frequency_se)},
                {"expected_ruin", json_number(s.expected_ruin)},
                {"ruin_excess_mean", json_number(s.ruin_excess_mean)},
                {"ruin_excess_se", json_number(s.ruin_excess_se)},
                {"leader_payoff_mean", json_number(s.leader_payoff_mean)},
                {"leader_payoff_se", json_number(s.leader_payoff_se)},
                {"follower_payoff_mean", json_number(s.follower_payoff_mean)},
                {"follower_payoff_se", json_number(s.follower_payoff_se)},
                {"n_indifference", s.n_indifference},
                {"indifference_gap_mean", json_number(s.indifference_gap_mean)},
                {"indifference_gap_max", json_number(s.indifference_gap_max)}};
    if (s.discounted) {
        doc["leader_payoff_discounted_mean"] = json_number(s.leader_payoff_discounted_mean);
        doc["follower_payoff_discounted_mean"] = json_number(s.follower_payoff_discounted_mean);
    }
    return doc;
}

json liability_to_json(const mechanisms::LiabilitySolution& sol) {
    return {{"survival_mode", std::string(mechanisms::to_string(sol.survival_mode))},
            {"d_private_printed", json_number(sol.d_private_printed)},
            {"d_private_numeric", json_number(sol.d_private_numeric)},
            {"discrepancy", json_number(sol.discrepancy)},
            {"closure_gap", json_number(sol.closure_gap)},
            {"already_closed", sol.already_closed},
            {"iterations", sol.iterations}};
}

json warning_shot_to_json(const mechanisms::WarningShotReport& r) {
    return {{"d_before", json_number(r.d_before)},
            {"d_after", json_number(r.d_after)},
            {"delta_v_preempt", json_number(r.delta_v_preempt)},
            {"delta_v_survival", json_number(r.delta_v_survival)},
            {"delta_v_saviour", r.delta_v_saviour ? json_number(*r.delta_v_saviour) : json(nullptr)},
            {"region_width_change", r.region_width_change ? json_number(*r.region_width_change) : json(nullptr)}};
}

json validation_to_json(const sim::ValidationReport& r) {
    json doc = {{"applicable", r.applicable}};
    if (!r.applicable) {
        doc["reason"] = r.reason;
        return doc;
    }
    doc.update({{"beta1", json_number(r.beta1)},
                {"target", json_number(r.target)},
                {"estimate", json_number(r.estimate)},
                {"standard_error", json_number(r.standard_error)},
                {"relative_error", json_number(r.relative_error)},
                {"estimate_grid", json_number(r.estimate_grid)},
                {"standard_error_grid", json_number(r.standard_error_grid)},
                {"relative_error_grid", json_number(r.relative_error_grid)},
                {"truncation_bound", json_number(r.truncation_bound)},
                {"tolerance", json_number(r.tolerance)},
                {"within_tolerance", r.within_tolerance}});
    return doc;
}

json breakout_to_json(const sim::BreakoutReport& r) {
    return {{"lag", json_number(r.lag)},
            {"epsilon", json_number(r.epsilon)},
            {"n_breakout", r.n_breakout},
            {"n_survival", r.n_survival},
            {"deployer_counts", {r.deployer_counts[0], r.deployer_counts[1]}},
            {"mean_pi_breakout", json_number(r.mean_pi_breakout)},
            {"mean_pi_survival", json_number(r.mean_pi_survival)},
            {"scenario", stats_to_json(r.scenario.stats)},
            {"survival_baseline", stats_to_json(r.survival_baseline)},
            {"no_monitoring_baseline", stats_to_json(r.no_monitoring_baseline)}};
}

std::string outcomes_to_csv(const std::vector<sim::RaceOutcome>& outcomes, bool discounted) {
    std::string out =
        "path,deployed,kind,step,t_deploy,v_deploy,pi_at_deploy,aligned,leader_id,follower_id,leader_payoff,"
        "follower_payoff";
    if (discounted) out += ",leader_payoff_discounted,follower_payoff_discounted";
    out += ",t_cross_refined,v_cross_refined,indifference_gap\n";
    for (const auto& o : outcomes) {
        out += std::to_string(o.path_index) + "," + (o.deployed ? "1" : "0") + "," + std::string(sim::to_string(o.kind));
        if (!o.deployed) {
            out += discounted ? ",,,,,,,,,,,,,," : ",,,,,,,,,,,,";
            out += "\n";
            continue;
        }
        out += "," + std::to_string(o.step) + "," + format_number(o.t_deploy) + "," + format_number(o.v_deploy) +
               "," + format_number(o.pi_at_deploy) + "," + (o.aligned ? "1" : "0") + "," +
               std::to_string(o.leader_id) + "," + std::to_string(o.follower_id) + "," +
               format_number(o.leader_payoff) + "," + format_number(o.follower_payoff);
        if (discounted) {
            out += "," + format_number(o.leader_payoff_discounted) + "," + format_number(o.follower_payoff_discounted);
        }
        out += "," + format_number(o.t_cross_refined) + "," + format_number(o.v_cross_refined) + "," +
               format_number(o.indifference_gap) + "\n";
    }
    return out;
}

int cmd_thresholds(const RunConfig& config, std::ostream& out) {
    const auto set = model::compute_thresholds(config.beliefs, config.params, config.include_private);
    out << "thresholds (pi_self = " << format_number(config.beliefs.pi_self)
        << ", pi_rival = " << format_number(config.beliefs.pi_rival) << ")\n";
    row(out, "v_preempt", format_number(set.v_preempt));
    row(out, "v_survival", format_number(set.v_survival));
    row(out, "v_nuclear", format_number(set.v_nuclear));
    row(out, "v_saviour", saviour_text(set.v_saviour));
    row(out, "v_liability", format_number(set.v_liability));
    write_json(config, "thresholds.json", {{"command", "thresholds"}, {"inputs", config_echo(config)},
                                           {"thresholds", thresholds_to_json(set)}});
    return kExitOk;
}

int cmd_classify(const RunConfig& config, std::ostream& out) {
    const double pi = config.beliefs.pi_self;
    const auto label = model::classify_region(config.v, pi, config.params, config.include_private);
    out << "classify (v = " << format_number(config.v) << ", pi = " << format_number(pi) << ")\n";
    row(out, "region", std::string(model::to_string(label.region)));
    row(out, "v_preempt", format_number(label.v_preempt));
    row(out, "v_survival", format_number(label.v_survival));
    json doc = {{"command", "classify"},
                {"inputs", config_echo(config)},
                {"v", json_number(config.v)},
                {"region", std::string(model::to_string(label.region))},
                {"v_preempt", json_number(label.v_preempt)},
                {"v_survival", json_number(label.v_survival)}};
    if (pi < 1.0) {
        const double bound = model::suicide_bound_d(config.v, pi, config.params);
        row(out, "suicide_bound_d", format_number(bound));
        doc["suicide_bound_d"] = json_number(bound);
    }
    write_json(config, "classify.json", doc);
    return kExitOk;
}

int cmd_sweep(const RunConfig& config, std::ostream& out) {
    const auto grid = build_sweep(config);
    std::map<model::Region, std::size_t> counts;
    for (const auto& c : grid.cells) ++counts[c.label.region];
    out << "sweep " << grid.y_name << " x " << grid.x_name << ": " << grid.cells.size() << " cells\n";
    for (auto [region, n] : counts) row(out, model::to_string(region), std::to_string(n));
    if (config.wants("csv")) write_file(config, "sweep.csv", sweep_to_csv(grid));
    if (config.wants("svg")) write_file(config, "sweep.svg", sweep_to_svg(grid));
    json summary = json::object();
    for (auto [region, n] : counts) summary[std::string(model::to_string(region))] = n;
    write_json(config, "sweep.json",
               {{"command", "sweep"},
                {"x_axis", {{"name", config.x_axis.name}, {"min", json_number(config.x_axis.min)},
                            {"max", json_number(config.x_axis.max)}, {"steps", config.x_axis.steps}}},
                {"y_axis", {{"name", config.y_axis.name}, {"min", json_number(config.y_axis.min)},
                            {"max", json_number(config.y_axis.max)}, {"steps", config.y_axis.steps}}},
                {"cells", grid.cells.size()},
                {"region_counts", summary}});
    return kExitOk;
}

int cmd_simulate(const std::string& variant, const RunConfig& config, const sim::ExecutionOptions& exec,
                 std::ostream& out) {
    out << "seed: " << config.sim.seed << "\n";
    if (variant == "race") {
        const auto result = sim::run_race(config.sim, config.params, config.beliefs, exec);
        const auto& s = result.stats;
        out << "race (barrier = " << sim::to_string(config.sim.barrier) << ", paths = " << s.n_paths << ")\n";
        row(out, "deployment_probability", format_number(s.deployment_probability));
        row(out, "t_deploy_mean", format_number(s.t_deploy_mean));
        row(out, "ruin_frequency", format_number(s.ruin_frequency) + " +/- " + format_number(s.ruin_frequency_se));
        row(out, "expected_ruin", format_number(s.expected_ruin));
        row(out, "leader_payoff_mean", format_number(s.leader_payoff_mean) + " +/- " + format_number(s.leader_payoff_se));
        row(out, "follower_payoff_mean",
            format_number(s.follower_payoff_mean) + " +/- " + format_number(s.follower_payoff_se));
        if (s.n_indifference > 0) row(out, "indifference_gap_mean", format_number(s.indifference_gap_mean));
        if (config.wants("csv")) write_file(config, "paths.csv", outcomes_to_csv(result.outcomes, config.sim.discounting));
        write_json(config, "simulate_race.json",
                   {{"command", "simulate race"}, {"seed", config.sim.seed},
                    {"barrier", std::string(sim::to_string(config.sim.barrier))}, {"stats", stats_to_json(s)}});
        return kExitOk;
    }
    if (variant == "breakout") {
        const auto report = sim::breakout_scenario(config.sim, config.params, config.lag, config.epsilon, exec);
        out << "breakout (lag = " << format_number(report.lag) << ", epsilon = " << format_number(report.epsilon)
            << ")\n";
        row(out, "breakout_deployments", std::to_string(report.n_breakout));
        row(out, "survival_deployments", std::to_string(report.n_survival));
        row(out, "mean_pi_breakout", format_number(report.mean_pi_breakout));
        row(out, "mean_pi_survival", format_number(report.mean_pi_survival));
        row(out, "ruin_frequency", format_number(report.scenario.stats.ruin_frequency));
        row(out, "ruin_frequency (survival rule)", format_number(report.survival_baseline.ruin_frequency));
        row(out, "ruin_frequency (no monitoring)", format_number(report.no_monitoring_baseline.ruin_frequency));
        if (config.wants("csv")) {
            write_file(config, "paths.csv", outcomes_to_csv(report.scenario.outcomes, config.sim.discounting));
        }
        write_json(config, "simulate_breakout.json",
                   {{"command", "simulate breakout"}, {"seed", config.sim.seed}, {"report", breakout_to_json(report)}});
        return kExitOk;
    }
    if (variant == "validate") {
        const auto report = sim::validate_engine(config.sim, config.params, config.validate_level, exec);
        out << "validate (barrier = " << format_number(config.validate_level) << ", paths = " << config.sim.n_paths
            << ")\n";
        if (!report.applicable) {
            row(out, "declined", report.reason);
        } else {
            row(out, "beta1", format_number(report.beta1));
            row(out, "target", format_number(report.target));
            row(out, "estimate", format_number(report.estimate) + " +/- " + format_number(report.standard_error));
            row(out, "relative_error", format_number(report.relative_error));
            row(out, "estimate (grid only)",
                format_number(report.estimate_grid) + " +/- " + format_number(report.standard_error_grid));
            row(out, "relative_error (grid only)", format_number(report.relative_error_grid));
            row(out, "within_tolerance", report.within_tolerance ? "yes" : "no");
        }
        write_json(config, "simulate_validate.json",
                   {{"command", "simulate validate"}, {"seed", config.sim.seed}, {"report", validation_to_json(report)}});
        return report.applicable && report.within_tolerance ? kExitOk : kExitNumerical;
    }
    throw ConfigError("unknown simulate variant '" + variant + "' (race, breakout, validate)");
}

int cmd_mechanism(const std::string& variant, const RunConfig& config, std::ostream& out) {
    const double pi = config.beliefs.pi_self;
    if (variant == "liability") {
        out << "critical private liability (pi = " << format_number(pi) << ", share = "
            << format_number(config.params.share) << ")\n";
        row(out, "printed closed form", format_number(mechanisms::printed_critical_liability(pi, config.params)));
        json doc = {{"command", "mechanism liability"},
                    {"inputs", config_echo(config)},
                    {"d_private_printed", json_number(mechanisms::printed_critical_liability(pi, config.params))}};
        for (auto mode : {mechanisms::SurvivalMode::ExcludesPrivate, mechanisms::SurvivalMode::IncludesPrivate}) {
            const std::string name(mechanisms::to_string(mode));
            std::string key = name;
            std::replace(key.begin(), key.end(), '-', '_');
            try {
                const auto sol = mechanisms::critical_private_liability(pi, config.params, mode);
                row(out, "numeric (" + name + ")", format_number(sol.d_private_numeric));
                row(out, "discrepancy (" + name + ")", format_number(sol.discrepancy));
                if (sol.already_closed) row(out, "note (" + name + ")", "region already closed");
                doc[key] = liability_to_json(sol);
            } catch (const SolverError& e) {
                // With S = 0 and the private term on both sides the gap is constant.
                row(out, "numeric (" + name + ")", "no closure");
                doc[key] = {{"survival_mode", name}, {"error", e.what()}};
            }
        }
        write_json(config, "mechanism_liability.json", doc);
        return kExitOk;
    }
    if (variant == "windfall") {
        const double s = mechanisms::critical_windfall_share(pi, config.params, config.include_private);
        out << "critical windfall share (pi = " << format_number(pi) << ", d_social = "
            << format_number(config.params.d_social) << ")\n";
        row(out, "critical_share", format_number(s));
        write_json(config, "mechanism_windfall.json",
                   {{"command", "mechanism windfall"}, {"inputs", config_echo(config)}, {"critical_share", json_number(s)}});
        return kExitOk;
    }
    if (variant == "warning-shot") {
        const auto r = mechanisms::warning_shot(config.beliefs, config.params, config.d_after, config.include_private);
        out << "warning shot (d_social " << format_number(r.d_before) << " -> " << format_number(r.d_after) << ")\n";
        row(out, "delta_v_preempt", format_number(r.delta_v_preempt));
        row(out, "delta_v_survival", format_number(r.delta_v_survival));
        row(out, "delta_v_saviour", r.delta_v_saviour ? format_number(*r.delta_v_saviour) : "n/a (requires share = 0)");
        row(out, "region_width_change", r.region_width_change ? format_number(*r.region_width_change) : "n/a");
        write_json(config, "mechanism_warning_shot.json",
                   {{"command", "mechanism warning-shot"}, {"inputs", config_echo(config)},
                    {"report", warning_shot_to_json(r)}});
        return kExitOk;
    }
    throw ConfigError("unknown mechanism variant '" + variant + "' (liability, windfall, warning-shot)");
}

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"optionrace: deployment-race thresholds, phase diagrams, mechanisms and Monte Carlo"};
    app.require_subcommand(1, 1);

    std::string config_path;
    std::string preset_name;
    std::vector<std::string> sets;
    std::string out_dir;
    std::string formats;
    std::optional<std::uint64_t> seed;
    std::string variant;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON config file");
        sub->add_option("--preset", preset_name, "built-in preset");
        sub->add_option("--set", sets, "override, key=value (repeatable)");
        sub->add_option("--out", out_dir, "output directory");
        sub->add_option("--format", formats, "comma-separated subset of csv,json,svg");
        sub->add_option("--seed", seed, "master RNG seed");
        sub->allow_extras();
        return sub;
    };
    auto* thresholds = add_common(app.add_subcommand("thresholds", "all deployment thresholds"));
    auto* classify = add_common(app.add_subcommand("classify", "region of the configured asset value"));
    auto* sweep = add_common(app.add_subcommand("sweep", "phase-diagram grid (CSV + SVG)"));
    auto* simulate = add_common(app.add_subcommand("simulate", "Monte Carlo: race | breakout | validate"));
    simulate->add_option("variant", variant, "race, breakout or validate")
        ->required()
        ->check(CLI::IsMember({"race", "breakout", "validate"}));
    auto* mechanism = add_common(app.add_subcommand("mechanism", "policy solvers: liability | windfall | warning-shot"));
    mechanism->add_option("variant", variant, "liability, windfall or warning-shot")
        ->required()
        ->check(CLI::IsMember({"liability", "windfall", "warning-shot"}));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    CLI::App* active = app.get_subcommands().front();
    sim::ExecutionOptions exec;
    try {
        if (const char* env = std::getenv("OPTIONRACE_THREADS"); env != nullptr && *env != '\0') {
            errno = 0;
            char* end = nullptr;
            const unsigned long n = std::strtoul(env, &end, 10);
            if (*end != '\0' || errno == ERANGE || n > 4096) {
                throw ConfigError(std::string("OPTIONRACE_THREADS must be a small nonnegative integer, got '") + env + "'");
            }
            exec.threads = static_cast<unsigned>(n);
        }

        RunConfig config = preset_name.empty() ? RunConfig{} : preset(preset_name);
        if (!config_path.empty()) config = load_config_file(config_path, config);

        // Unrecognized --key value / --key=value pairs are config overrides.
        const auto extras = active->remaining();
        for (std::size_t i = 0; i < extras.size(); ++i) {
            const std::string& token = extras[i];
            if (token.rfind("--", 0) != 0) throw ConfigError("unexpected argument '" + token + "'");
            const std::string body = token.substr(2);
            if (const auto eq = body.find('='); eq != std::string::npos) {
                apply_setting(config, body.substr(0, eq), body.substr(eq + 1));
            } else {
                if (i + 1 >= extras.size()) throw ConfigError("option '" + token + "' needs a value");
                apply_setting(config, body, extras[++i]);
            }
        }
        for (const auto& s : sets) {
            const auto eq = s.find('=');
            if (eq == std::string::npos) throw ConfigError("--set expects key=value, got '" + s + "'");
            apply_setting(config, s.substr(0, eq), s.substr(eq + 1));
        }
        if (seed) config.sim.seed = *seed;
        if (!out_dir.empty()) config.out_dir = out_dir;
        if (!formats.empty()) apply_setting(config, "formats", formats);
        config.finalize();

        if (active == thresholds) return cmd_thresholds(config, out);
        if (active == classify) return cmd_classify(config, out);
        if (active == sweep) return cmd_sweep(config, out);
        if (active == simulate) return cmd_simulate(variant, config, exec, out);
        if (active == mechanism) return cmd_mechanism(variant, config, out);
        return kExitUsage;
    } catch (const ConfigError& e) {
        err << "config error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const DomainError& e) {
        err << "domain error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const SolverError& e) {
        err << "solver failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const SimulationError& e) {
        err << "simulation failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitNumerical;
    }
}

}  // namespace optionrace::cli
