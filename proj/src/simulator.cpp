// SPDX-License-Identifier: Apache-2.0
#include "optionrace/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "optionrace/errors.hpp"

namespace optionrace::sim {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

unsigned resolve_threads(const ExecutionOptions& exec, std::uint64_t n_items) {
    unsigned threads = exec.threads != 0 ? exec.threads : std::thread::hardware_concurrency();
    threads = std::max(1u, threads);
    return static_cast<unsigned>(std::min<std::uint64_t>(threads, std::max<std::uint64_t>(1, n_items)));
}

// Runs body(i) for i in [0, n) over contiguous chunks. If any call throws,
// the exception of the lowest failing index is rethrown.
template <class Body>
void parallel_for(std::uint64_t n, const ExecutionOptions& exec, Body&& body) {
    const unsigned threads = resolve_threads(exec, n);
    if (threads == 1) {
        for (std::uint64_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::mutex error_mutex;
    std::exception_ptr first_error;
    std::uint64_t first_error_index = std::numeric_limits<std::uint64_t>::max();

    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::uint64_t chunk = (n + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::uint64_t begin = t * chunk;
        const std::uint64_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&, begin, end] {
            for (std::uint64_t i = begin; i < end; ++i) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (i < first_error_index) {
                        first_error_index = i;
                        first_error = std::current_exception();
                    }
                    return;
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

double mean_of(const std::vector<double>& xs) {
    double sum = 0.0;
    for (double x : xs) sum += x;
    return xs.empty() ? kNaN : sum / static_cast<double>(xs.size());
}

// Standard error of the mean from i.i.d. samples.
double standard_error(const std::vector<double>& xs, double mean) {
    if (xs.size() < 2) return kNaN;
    double ss = 0.0;
    for (double x : xs) ss += (x - mean) * (x - mean);
    const double n = static_cast<double>(xs.size());
    return std::sqrt(ss / (n - 1.0) / n);
}

// Linear interpolation between order statistics.
double quantile_sorted(const std::vector<double>& sorted, double q) {
    if (sorted.empty()) return kNaN;
    const double pos = q * static_cast<double>(sorted.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const auto hi = std::min(lo + 1, sorted.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

double pi_at(const model::RaceParameters& params, double t) {
    return model::safety_probability(params.lambda_rate, t);
}

void draw_deployer(RaceOutcome& outcome, const SimConfig& config, std::uint64_t path_index) {
    const UniformStream coin(config.seed, path_index, StreamPurpose::TieBreak);
    outcome.leader_id = coin.at(0) < 0.5 ? 0 : 1;
    outcome.follower_id = 1 - outcome.leader_id;
}

void draw_alignment(RaceOutcome& outcome, const SimConfig& config, std::uint64_t path_index) {
    const UniformStream lottery(config.seed, path_index, StreamPurpose::Alignment);
    outcome.aligned = lottery.at(0) < outcome.pi_at_deploy;
}

// |L - F| at the refined crossing for barriers defined by L = F.
double indifference_gap(BarrierKind kind, const model::RaceParameters& params, double v, double t) {
    if (kind != BarrierKind::Preemption && kind != BarrierKind::Liability) return kNaN;
    model::RaceParameters p = params;
    if (kind == BarrierKind::Preemption) p.d_private = 0.0;
    const double pi = pi_at(params, t);
    return std::abs(model::leader_payoff(v, pi, p) - model::follower_payoff(v, pi, p));
}

}  // namespace

std::string_view to_string(BarrierKind kind) noexcept {
    switch (kind) {
        case BarrierKind::Preemption: return "preemption";
        case BarrierKind::Survival: return "survival";
        case BarrierKind::Fixed: return "fixed";
        case BarrierKind::Saviour: return "saviour";
        case BarrierKind::Liability: return "liability";
    }
    return "unknown";
}

std::optional<BarrierKind> barrier_kind_from_string(std::string_view name) noexcept {
    for (BarrierKind k : {BarrierKind::Preemption, BarrierKind::Survival, BarrierKind::Fixed,
                          BarrierKind::Saviour, BarrierKind::Liability}) {
        if (to_string(k) == name) return k;
    }
    return std::nullopt;
}

std::string_view to_string(DeployKind kind) noexcept {
    switch (kind) {
        case DeployKind::None: return "none";
        case DeployKind::Barrier: return "barrier";
        case DeployKind::Breakout: return "breakout";
    }
    return "unknown";
}

void SimConfig::validate() const {
    auto fail = [](const std::string& msg) { throw DomainError("SimConfig: " + msg); };
    if (!(v0 > 0.0) || !std::isfinite(v0)) fail("v0 must be > 0");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) fail("horizon must be > 0");
    if (!(dt > 0.0)) fail("dt must be > 0");
    if (!(dt <= horizon)) fail("dt must not exceed horizon");
    if (n_paths < 1) fail("n_paths must be >= 1");
    if (barrier == BarrierKind::Fixed && !(barrier_level > 0.0)) fail("barrier_level must be > 0");
}

std::size_t SimConfig::n_steps() const {
    return static_cast<std::size_t>(std::ceil(horizon / dt - 1e-9));
}

Barrier::Barrier(BarrierKind kind, const model::RaceParameters& params,
                 const model::BeliefState& beliefs, double fixed_level)
    : kind_(kind), params_(params), belief_gap_(beliefs.pi_self - beliefs.pi_rival), fixed_level_(fixed_level) {
    params_.validate();
    beliefs.validate();
    if (kind_ == BarrierKind::Saviour && params_.share != 0.0) {
        throw DomainError("saviour barrier requires share = 0");
    }
}

Barrier Barrier::from_config(const SimConfig& config, const model::RaceParameters& params,
                             const model::BeliefState& beliefs) {
    return Barrier(config.barrier, params, beliefs, config.barrier_level);
}

double Barrier::operator()(double t) const {
    if (kind_ == BarrierKind::Fixed) return fixed_level_;
    const double pi = pi_at(params_, t);
    switch (kind_) {
        case BarrierKind::Preemption: return model::preemption_threshold(pi, params_);
        case BarrierKind::Survival: return model::survival_threshold(pi, params_, true);
        case BarrierKind::Liability: return model::liability_threshold(pi, params_);
        case BarrierKind::Saviour: {
            model::BeliefState b;
            b.pi_self = pi;
            b.pi_rival = std::clamp(pi - belief_gap_, 0.0, 1.0);
            return model::saviour_threshold(b, params_).value;
        }
        case BarrierKind::Fixed: break;
    }
    return fixed_level_;
}

GbmPath::GbmPath(const SimConfig& config, const model::RaceParameters& params, std::uint64_t path_index)
    : normals_(config.seed, path_index, StreamPurpose::Increments),
      path_index_(path_index),
      dt_(config.dt),
      sqrt_dt_(std::sqrt(config.dt)),
      mu_(params.drift()),
      sigma_(params.sigma),
      gamma_(params.gamma),
      log_v_ref_(std::log(params.v_ref)),
      log_value_(std::log(config.v0)),
      previous_log_value_(log_value_),
      value_(config.v0) {}

void GbmPath::advance() {
    double vol = sigma_;
    if (gamma_ != 0.0) vol = sigma_ * std::exp(gamma_ * (log_value_ - log_v_ref_));
    const double z = normals_.next();
    previous_log_value_ = log_value_;
    log_value_ += (mu_ - 0.5 * vol * vol) * dt_ + vol * sqrt_dt_ * z;
    ++step_;
    value_ = std::exp(log_value_);
    if (!std::isfinite(log_value_) || !std::isfinite(value_)) {
        throw SimulationError("non-finite asset value (log V = " + std::to_string(log_value_) +
                                  ", volatility = " + std::to_string(vol) + ")",
                              path_index_, step_);
    }
}

std::vector<double> simulate_path(const SimConfig& config, const model::RaceParameters& params,
                                  std::uint64_t path_index) {
    config.validate();
    params.validate();
    const std::size_t n = config.n_steps();
    std::vector<double> series;
    series.reserve(n + 1);
    GbmPath path(config, params, path_index);
    series.push_back(path.value());
    for (std::size_t k = 0; k < n; ++k) {
        path.advance();
        series.push_back(path.value());
    }
    return series;
}

std::pair<double, double> refine_crossing(double t_prev, double dt, double log_prev, double log_next,
                                          const Barrier& barrier) {
    // g(theta) < 0 before the crossing, >= 0 at theta = 1.
    auto g = [&](double theta) {
        return log_prev + theta * (log_next - log_prev) - std::log(barrier(t_prev + theta * dt));
    };
    double lo = 0.0;
    double hi = 1.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (!(mid > lo && mid < hi)) break;
        if (g(mid) >= 0.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    const double t = t_prev + hi * dt;
    return {t, std::exp(log_prev + hi * (log_next - log_prev))};
}

void assign_payoffs(RaceOutcome& o, const model::RaceParameters& params, bool discounting) {
    if (o.aligned) {
        o.leader_payoff = (1.0 - params.share) * o.v_deploy - params.invest_cost;
        o.follower_payoff = params.share * o.v_deploy;
    } else {
        o.leader_payoff = -(params.d_social + params.d_private) - params.invest_cost;
        o.follower_payoff = -params.d_social;
    }
    if (discounting) {
        const double df = std::exp(-params.r * o.t_deploy);
        o.leader_payoff_discounted = o.leader_payoff * df;
        o.follower_payoff_discounted = o.follower_payoff * df;
    }
}

EnsembleStats summarize(std::span<const RaceOutcome> outcomes, bool discounted) {
    EnsembleStats s;
    s.n_paths = outcomes.size();
    s.discounted = discounted;

    std::vector<double> times, ruin, excess, leader, follower, leader_disc, follower_disc, gaps;
    double one_minus_pi = 0.0;
    for (const auto& o : outcomes) {
        if (!o.deployed) continue;
        times.push_back(o.t_deploy);
        ruin.push_back(o.aligned ? 0.0 : 1.0);
        excess.push_back((o.aligned ? 0.0 : 1.0) - (1.0 - o.pi_at_deploy));
        one_minus_pi += 1.0 - o.pi_at_deploy;
        leader.push_back(o.leader_payoff);
        follower.push_back(o.follower_payoff);
        leader_disc.push_back(o.leader_payoff_discounted);
        follower_disc.push_back(o.follower_payoff_discounted);
        if (!std::isnan(o.indifference_gap)) gaps.push_back(o.indifference_gap);
    }
    s.n_deployed = times.size();
    s.deployment_probability = s.n_paths == 0 ? kNaN : static_cast<double>(s.n_deployed) / static_cast<double>(s.n_paths);
    s.t_deploy_mean = mean_of(times);
    std::vector<double> sorted = times;
    std::sort(sorted.begin(), sorted.end());
    const double qs[5] = {0.05, 0.25, 0.5, 0.75, 0.95};
    for (int i = 0; i < 5; ++i) s.t_deploy_quantiles[i] = quantile_sorted(sorted, qs[i]);
    s.ruin_frequency = mean_of(ruin);
    s.ruin_frequency_se = standard_error(ruin, s.ruin_frequency);
    s.expected_ruin = times.empty() ? kNaN : one_minus_pi / static_cast<double>(times.size());
    s.ruin_excess_mean = mean_of(excess);
    s.ruin_excess_se = standard_error(excess, s.ruin_excess_mean);
    s.leader_payoff_mean = mean_of(leader);
    s.leader_payoff_se = standard_error(leader, s.leader_payoff_mean);
    s.follower_payoff_mean = mean_of(follower);
    s.follower_payoff_se = standard_error(follower, s.follower_payoff_mean);
    if (discounted) {
        s.leader_payoff_discounted_mean = mean_of(leader_disc);
        s.follower_payoff_discounted_mean = mean_of(follower_disc);
    }
    s.n_indifference = gaps.size();
    s.indifference_gap_mean = mean_of(gaps);
    s.indifference_gap_max = gaps.empty() ? kNaN : *std::max_element(gaps.begin(), gaps.end());
    return s;
}

RaceResult run_race(const SimConfig& config, const model::RaceParameters& params,
                    const model::BeliefState& beliefs, const ExecutionOptions& exec) {
    config.validate();
    params.validate();
    const Barrier barrier = Barrier::from_config(config, params, beliefs);
    const std::size_t n_steps = config.n_steps();

    RaceResult result;
    result.outcomes.resize(config.n_paths);
    parallel_for(config.n_paths, exec, [&](std::uint64_t i) {
        RaceOutcome& o = result.outcomes[i];
        o.path_index = i;
        o.t_cross_refined = o.v_cross_refined = o.indifference_gap = kNaN;
        GbmPath path(config, params, i);
        for (;;) {
            const double t = path.time();
            if (path.value() >= barrier(t)) {
                o.deployed = true;
                o.kind = DeployKind::Barrier;
                o.step = path.step();
                o.t_deploy = t;
                o.v_deploy = path.value();
                o.pi_at_deploy = pi_at(params, t);
                if (path.step() == 0) {
                    o.t_cross_refined = t;
                    o.v_cross_refined = path.value();
                } else {
                    std::tie(o.t_cross_refined, o.v_cross_refined) = refine_crossing(
                        t - config.dt, config.dt, path.previous_log_value(), path.log_value(), barrier);
                }
                o.indifference_gap = indifference_gap(config.barrier, params, o.v_cross_refined, o.t_cross_refined);
                break;
            }
            if (path.step() >= n_steps) break;
            path.advance();
        }
        if (!o.deployed) return;
        draw_deployer(o, config, i);
        draw_alignment(o, config, i);
        assign_payoffs(o, params, config.discounting);
    });
    result.stats = summarize(result.outcomes, config.discounting);
    return result;
}

double positive_characteristic_root(double mu, double sigma, double r) {
    const double a = 0.5 * sigma * sigma;
    const double b = mu - a;
    const double disc = std::sqrt(b * b + 4.0 * a * r);
    // The second form avoids cancellation when b > 0 (and covers sigma = 0).
    if (b > 0.0) return 2.0 * r / (b + disc);
    return (-b + disc) / (2.0 * a);
}

ValidationReport validate_engine(const SimConfig& config, const model::RaceParameters& params,
                                 double barrier_level, const ExecutionOptions& exec, double tolerance) {
    config.validate();
    params.validate();
    ValidationReport report;
    report.tolerance = tolerance;
    if (!(params.r > 0.0)) {
        report.applicable = false;
        report.reason = "identity needs r > 0 (with r = 0 the drift r - delta is never positive)";
        return report;
    }
    if (params.gamma != 0.0) throw DomainError("validate_engine: requires gamma = 0");
    if (!(barrier_level >= config.v0)) throw DomainError("validate_engine: barrier_level must be >= v0");

    const double mu = params.drift();
    const double sigma = params.sigma;
    report.beta1 = positive_characteristic_root(mu, sigma, params.r);
    report.target = std::pow(config.v0 / barrier_level, report.beta1);
    report.truncation_bound = std::exp(-params.r * config.horizon);

    const std::size_t n_steps = config.n_steps();
    const double log_barrier = std::log(barrier_level);
    const double bridge_scale = -2.0 / (sigma * sigma * config.dt);
    // Draws are >= 2^-54, so a bridge probability below exp(-40) can never fire.
    constexpr double kNeverFires = -40.0;

    std::vector<double> grid_samples(config.n_paths, 0.0);
    std::vector<double> bridge_samples(config.n_paths, 0.0);
    parallel_for(config.n_paths, exec, [&](std::uint64_t i) {
        GbmPath path(config, params, i);
        if (path.log_value() >= log_barrier) {
            grid_samples[i] = bridge_samples[i] = 1.0;
            return;
        }
        const UniformStream bridge(config.seed, i, StreamPurpose::Bridge);
        bool bridge_hit = false;
        while (path.step() < n_steps) {
            path.advance();
            const double t = path.time();
            const double x0 = path.previous_log_value();
            const double x1 = path.log_value();
            if (x1 >= log_barrier) {
                const double disc = std::exp(-params.r * t);
                grid_samples[i] = disc;
                if (!bridge_hit) bridge_samples[i] = disc;
                return;
            }
            if (!bridge_hit) {
                const double exponent = bridge_scale * (log_barrier - x0) * (log_barrier - x1);
                if (exponent > kNeverFires && bridge.at(path.step()) < std::exp(exponent)) {
                    bridge_hit = true;
                    bridge_samples[i] = std::exp(-params.r * t);
                }
            }
        }
    });

    auto mean_se = [](const std::vector<double>& xs) {
        const double m = mean_of(xs);
        return std::pair{m, standard_error(xs, m)};
    };
    std::tie(report.estimate, report.standard_error) = mean_se(bridge_samples);
    std::tie(report.estimate_grid, report.standard_error_grid) = mean_se(grid_samples);
    report.relative_error = std::abs(report.estimate - report.target) / report.target;
    report.relative_error_grid = std::abs(report.estimate_grid - report.target) / report.target;
    report.within_tolerance = report.relative_error <= tolerance;
    return report;
}

BreakoutReport breakout_scenario(const SimConfig& config, const model::RaceParameters& params,
                                 double lag, double epsilon, const ExecutionOptions& exec) {
    config.validate();
    params.validate();
    if (!(lag >= 0.0)) throw DomainError("breakout_scenario: lag must be >= 0");
    if (!(epsilon >= 0.0)) throw DomainError("breakout_scenario: epsilon must be >= 0");

    BreakoutReport report;
    report.lag = lag;
    report.epsilon = epsilon;
    const std::size_t n_steps = config.n_steps();
    const auto lag_steps = static_cast<std::size_t>(std::llround(lag / config.dt));

    const Barrier survival(BarrierKind::Survival, params, model::BeliefState::symmetric(0.5), 0.0);
    auto& outcomes = report.scenario.outcomes;
    outcomes.resize(config.n_paths);
    parallel_for(config.n_paths, exec, [&](std::uint64_t i) {
        RaceOutcome& o = outcomes[i];
        o.path_index = i;
        o.t_cross_refined = o.v_cross_refined = o.indifference_gap = kNaN;
        GbmPath path(config, params, i);
        std::vector<double> history;  // leader's values, read back for the trailing agent
        history.reserve(n_steps + 1);
        for (;;) {
            history.push_back(path.value());
            const double t = path.time();
            const double v_survival = survival(t);
            if (path.value() >= v_survival) {
                o.deployed = true;
                o.kind = DeployKind::Barrier;
                o.step = path.step();
                o.t_deploy = t;
                o.v_deploy = path.value();
                o.pi_at_deploy = pi_at(params, t);
                if (path.step() == 0) {
                    o.t_cross_refined = t;
                    o.v_cross_refined = path.value();
                } else {
                    std::tie(o.t_cross_refined, o.v_cross_refined) = refine_crossing(
                        t - config.dt, config.dt, path.previous_log_value(), path.log_value(), survival);
                }
                if (lag_steps == 0) {
                    draw_deployer(o, config, i);
                } else {
                    o.leader_id = 0;
                    o.follower_id = 1;
                }
                break;
            }
            if (epsilon > 0.0 && path.value() >= v_survival - epsilon) {
                const std::size_t k = path.step();
                const std::size_t k_lag = k >= lag_steps ? k - lag_steps : 0;
                o.deployed = true;
                o.kind = DeployKind::Breakout;
                o.step = k;
                o.t_deploy = t;
                o.v_deploy = history[k_lag];
                o.pi_at_deploy = pi_at(params, static_cast<double>(k_lag) * config.dt);
                if (lag_steps == 0) {
                    draw_deployer(o, config, i);
                } else {
                    o.leader_id = 1;
                    o.follower_id = 0;
                }
                break;
            }
            if (path.step() >= n_steps) break;
            path.advance();
        }
        if (!o.deployed) return;
        draw_alignment(o, config, i);
        assign_payoffs(o, params, config.discounting);
    });
    report.scenario.stats = summarize(outcomes, config.discounting);

    double pi_breakout = 0.0;
    double pi_survival = 0.0;
    for (const auto& o : outcomes) {
        if (!o.deployed) continue;
        ++report.deployer_counts[o.leader_id];
        if (o.kind == DeployKind::Breakout) {
            ++report.n_breakout;
            pi_breakout += o.pi_at_deploy;
        } else {
            ++report.n_survival;
            pi_survival += o.pi_at_deploy;
        }
    }
    report.mean_pi_breakout = report.n_breakout ? pi_breakout / static_cast<double>(report.n_breakout) : kNaN;
    report.mean_pi_survival = report.n_survival ? pi_survival / static_cast<double>(report.n_survival) : kNaN;

    SimConfig baseline = config;
    baseline.barrier = BarrierKind::Survival;
    const auto symmetric = model::BeliefState::symmetric(0.5);
    report.survival_baseline = run_race(baseline, params, symmetric, exec).stats;
    baseline.barrier = BarrierKind::Preemption;
    report.no_monitoring_baseline = run_race(baseline, params, symmetric, exec).stats;
    return report;
}

}  // namespace optionrace::sim
