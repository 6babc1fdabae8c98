// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "optionrace/core_model.hpp"
#include "optionrace/rng.hpp"

namespace optionrace::sim {

enum class BarrierKind { Preemption, Survival, Fixed, Saviour, Liability };

std::string_view to_string(BarrierKind kind) noexcept;
std::optional<BarrierKind> barrier_kind_from_string(std::string_view name) noexcept;

/// Monte Carlo controls. The deployment clock starts at t = 0, so safety
/// research time equals calendar time.
struct SimConfig {
    double v0 = 1.0;
    double horizon = 10.0;
    double dt = 1.0 / 252.0;
    std::uint64_t n_paths = 1000;
    std::uint64_t seed = 20240101;
    BarrierKind barrier = BarrierKind::Preemption;
    double barrier_level = 2.0;  ///< used by BarrierKind::Fixed
    bool discounting = false;    ///< also report payoffs discounted to t = 0 at rate r

    void validate() const;
    /// Number of time steps; grid times are k * dt for k = 0..n_steps().
    std::size_t n_steps() const;

    bool operator==(const SimConfig&) const = default;
};

/// Parallelism only; never affects results.
struct ExecutionOptions {
    unsigned threads = 0;  ///< 0 selects std::thread::hardware_concurrency()
};

/// Deployment barrier as a function of calendar time. Safety-dependent kinds
/// use pi(t) = 1 - exp(-lambda t), so they are +inf at t = 0.
class Barrier {
public:
    Barrier(BarrierKind kind, const model::RaceParameters& params, const model::BeliefState& beliefs,
            double fixed_level);

    static Barrier from_config(const SimConfig& config, const model::RaceParameters& params,
                               const model::BeliefState& beliefs);

    double operator()(double t) const;
    BarrierKind kind() const noexcept { return kind_; }

private:
    BarrierKind kind_;
    model::RaceParameters params_;
    double belief_gap_;  // pi_self - pi_rival, held constant for the saviour barrier
    double fixed_level_;
};

/// Step-by-step geometric Brownian motion for one path. With gamma == 0 the
/// log-increments are exact; otherwise Euler-Maruyama in log space with the
/// volatility sigma (V / v_ref)^gamma frozen over each step.
class GbmPath {
public:
    GbmPath(const SimConfig& config, const model::RaceParameters& params, std::uint64_t path_index);

    /// Throws SimulationError on a non-finite state.
    void advance();

    std::size_t step() const noexcept { return step_; }
    double time() const noexcept { return static_cast<double>(step_) * dt_; }
    double value() const noexcept { return value_; }
    double log_value() const noexcept { return log_value_; }
    double previous_log_value() const noexcept { return previous_log_value_; }

private:
    NormalStream normals_;
    std::uint64_t path_index_;
    double dt_;
    double sqrt_dt_;
    double mu_;
    double sigma_;
    double gamma_;
    double log_v_ref_;
    std::size_t step_ = 0;
    double log_value_;
    double previous_log_value_;
    double value_;
};

/// Values V_0..V_N of one path on the grid k * dt.
std::vector<double> simulate_path(const SimConfig& config, const model::RaceParameters& params,
                                  std::uint64_t path_index);

struct Crossing {
    std::size_t step = 0;
    double time = 0.0;
};

/// Earliest grid point with V_t >= barrier(t). An infinite barrier is never
/// crossed.
template <class BarrierFn>
std::optional<Crossing> first_crossing(std::span<const double> series, double dt, BarrierFn&& barrier) {
    for (std::size_t k = 0; k < series.size(); ++k) {
        const double t = static_cast<double>(k) * dt;
        if (series[k] >= barrier(t)) return Crossing{k, t};
    }
    return std::nullopt;
}

/// Locates the crossing inside the step (k - 1, k] by bisection on the
/// log-linear interpolant of the path against the barrier. Returns
/// (time, value) at the interpolated meeting point.
std::pair<double, double> refine_crossing(double t_prev, double dt, double log_prev, double log_next,
                                          const Barrier& barrier);

enum class DeployKind { None, Barrier, Breakout };

std::string_view to_string(DeployKind kind) noexcept;

/// Realized result of one path.
struct RaceOutcome {
    std::uint64_t path_index = 0;
    bool deployed = false;
    DeployKind kind = DeployKind::None;
    std::size_t step = 0;
    double t_deploy = 0.0;
    double v_deploy = 0.0;
    double pi_at_deploy = 0.0;
    bool aligned = false;
    int leader_id = -1;
    int follower_id = -1;
    double leader_payoff = 0.0;
    double follower_payoff = 0.0;
    double leader_payoff_discounted = 0.0;
    double follower_payoff_discounted = 0.0;
    /// Sub-grid crossing point and |L - F| there; NaN where not applicable.
    double t_cross_refined = 0.0;
    double v_cross_refined = 0.0;
    double indifference_gap = 0.0;
};

struct EnsembleStats {
    std::uint64_t n_paths = 0;
    std::uint64_t n_deployed = 0;
    double deployment_probability = 0.0;
    double t_deploy_mean = 0.0;
    /// 5%, 25%, 50%, 75%, 95% quantiles of t_deploy over deployed paths.
    std::array<double, 5> t_deploy_quantiles{};
    double ruin_frequency = 0.0;  ///< misaligned share of deployed paths
    double ruin_frequency_se = 0.0;
    double expected_ruin = 0.0;   ///< mean of 1 - pi(t_deploy)
    /// Mean and standard error of 1{ruin} - (1 - pi(t_deploy)).
    double ruin_excess_mean = 0.0;
    double ruin_excess_se = 0.0;
    double leader_payoff_mean = 0.0;
    double leader_payoff_se = 0.0;
    double follower_payoff_mean = 0.0;
    double follower_payoff_se = 0.0;
    bool discounted = false;
    double leader_payoff_discounted_mean = 0.0;
    double follower_payoff_discounted_mean = 0.0;
    std::uint64_t n_indifference = 0;
    double indifference_gap_mean = 0.0;  ///< mean |L - F| at refined crossings
    double indifference_gap_max = 0.0;
};

struct RaceResult {
    EnsembleStats stats;
    std::vector<RaceOutcome> outcomes;
};

/// Aggregates outcomes in path order.
EnsembleStats summarize(std::span<const RaceOutcome> outcomes, bool discounted);

/// Realized payoffs of a deployment at (v, pi) given the alignment draw.
void assign_payoffs(RaceOutcome& outcome, const model::RaceParameters& params, bool discounting);

/// Simulates every path against the configured barrier, tie-breaks the
/// deployer with a fair coin and draws alignment with probability pi(t).
RaceResult run_race(const SimConfig& config, const model::RaceParameters& params,
                    const model::BeliefState& beliefs, const ExecutionOptions& exec = {});

struct ValidationReport {
    bool applicable = true;
    std::string reason;
    double beta1 = 0.0;
    double target = 0.0;             ///< (v0 / b)^beta1
    double estimate = 0.0;           ///< bridge-corrected E[exp(-r tau_b)]
    double standard_error = 0.0;
    double relative_error = 0.0;
    double estimate_grid = 0.0;      ///< grid-only crossing detection
    double standard_error_grid = 0.0;
    double relative_error_grid = 0.0;
    double truncation_bound = 0.0;   ///< exp(-r horizon)
    double tolerance = 0.01;
    bool within_tolerance = false;
};

/// Positive root of 0.5 sigma^2 b (b - 1) + mu b - r = 0.
double positive_characteristic_root(double mu, double sigma, double r);

/// Certifies the engine against E[exp(-r tau_b)] = (v0 / b)^beta1 for the
/// first passage of the fixed level b. Requires gamma == 0 and b >= v0.
ValidationReport validate_engine(const SimConfig& config, const model::RaceParameters& params,
                                 double barrier_level, const ExecutionOptions& exec = {},
                                 double tolerance = 0.01);

struct BreakoutReport {
    double lag = 0.0;
    double epsilon = 0.0;
    RaceResult scenario;
    std::uint64_t n_breakout = 0;
    std::uint64_t n_survival = 0;
    double mean_pi_breakout = 0.0;  ///< NaN without breakouts
    double mean_pi_survival = 0.0;  ///< NaN without survival deployments
    std::uint64_t deployer_counts[2] = {0, 0};
    EnsembleStats survival_baseline;       ///< leader follows the survival barrier, no breakout
    EnsembleStats no_monitoring_baseline;  ///< race at the preemption barrier
};

/// Perfect-monitoring race. The lagging agent trails by `lag` time units in
/// both capability and safety research. While the leader's value is below
/// V_S - epsilon the leader waits for the survival barrier; once it enters
/// [V_S - epsilon, V_S) the lagging agent deploys immediately.
BreakoutReport breakout_scenario(const SimConfig& config, const model::RaceParameters& params,
                                 double lag, double epsilon, const ExecutionOptions& exec = {});

}  // namespace optionrace::sim
