// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string_view>

namespace optionrace::model {

/// Exogenous constants of the two-player deployment race.
///
/// The risk-neutral drift is always derived as r - delta (see drift()); it is
/// never stored separately.
struct RaceParameters {
    double r = 0.05;            ///< risk-free rate
    double delta = 0.02;        ///< convenience yield
    double sigma = 0.3;         ///< base volatility
    double gamma = 0.0;         ///< state-dependence exponent of volatility
    double v_ref = 1.0;         ///< reference value for state-dependent volatility
    double invest_cost = 1.0;   ///< sunk deployment cost I
    double d_social = 10.0;     ///< shared ruin magnitude
    double d_private = 0.0;     ///< ruin liability borne by the deployer only
    double share = 0.0;         ///< Follower market share S
    double lambda_rate = 0.5;   ///< safety learning rate

    double drift() const noexcept { return r - delta; }

    /// Throws DomainError when an invariant is violated.
    void validate() const;

    bool operator==(const RaceParameters&) const = default;
};

enum class BeliefSource { Direct, Learned };

/// Alignment probabilities for own and rival deployment.
struct BeliefState {
    double pi_self = 0.5;
    double pi_rival = 0.5;
    BeliefSource source = BeliefSource::Direct;
    double tau = 0.0;  ///< research time, meaningful when source == Learned

    static BeliefState symmetric(double pi);
    static BeliefState asymmetric(double pi_self, double pi_rival);
    /// pi_self = pi_rival = 1 - exp(-lambda * tau).
    static BeliefState learned(double lambda_rate, double tau);

    bool is_symmetric() const noexcept { return pi_self == pi_rival; }
    void validate() const;

    bool operator==(const BeliefState&) const = default;
};

struct SaviourThreshold {
    double value = 0.0;
    bool immediate_deploy = false;  ///< raw threshold was <= 0 and got clamped
};

/// All critical asset values for one parameter point. Infinite thresholds
/// are represented by +inf.
struct ThresholdSet {
    double v_preempt = 0.0;
    double v_survival = 0.0;
    double v_nuclear = 0.0;
    /// Only defined for a winner-takes-all race (share == 0).
    std::optional<SaviourThreshold> v_saviour;
    double v_liability = 0.0;
};

enum class Region { WaitBelowAll, SuicideRegion, ProfitableWait, RaceViable };

std::string_view to_string(Region region) noexcept;
std::optional<Region> region_from_string(std::string_view name) noexcept;

struct RegionLabel {
    Region region = Region::WaitBelowAll;
    double v_preempt = 0.0;   ///< preemption boundary used
    double v_survival = 0.0;  ///< survival boundary used
};

// --- safety learning -------------------------------------------------------

/// 1 - exp(-lambda * tau).
double safety_probability(double lambda_rate, double tau);

/// Inverse of safety_probability: -log(1 - pi) / lambda.
double research_time_for_safety(double lambda_rate, double pi);

// --- payoffs ---------------------------------------------------------------

/// Expected payoff of the deployer:
/// (1 - S) pi v - (1 - pi)(d_social + d_private) - I.
double leader_payoff(double v, double pi, const RaceParameters& params);

/// Expected payoff of the non-deployer: S pi v - (1 - pi) d_social.
double follower_payoff(double v, double pi, const RaceParameters& params);

// --- thresholds ------------------------------------------------------------

/// Value where leader and follower payoffs coincide, I / ((1 - 2S) pi).
/// Independent of every ruin magnitude. +inf when pi == 0 or S >= 0.5.
double preemption_threshold(double pi, const RaceParameters& params);

/// Value where the leader's NPV turns nonnegative,
/// (I + (1 - pi) D_eff) / ((1 - S) pi). D_eff adds d_private when
/// include_private is set. Throws DomainError for share == 1.
double survival_threshold(double pi, const RaceParameters& params, bool include_private = true);

/// First-strike threshold of a deterrence standoff, (I + (1 - pi) D) / pi.
double nuclear_threshold(double pi, const RaceParameters& params);

/// Preemption threshold under asymmetric safety beliefs (winner-takes-all):
/// (I - D (pi_self - pi_rival)) / pi_self, clamped at zero. Throws
/// DomainError when share != 0.
SaviourThreshold saviour_threshold(const BeliefState& beliefs, const RaceParameters& params);

/// D (pi_self - pi_rival). Negative when the rival is believed safer.
double saviour_premium(const BeliefState& beliefs, const RaceParameters& params);

/// Preemption threshold with a privatized ruin liability,
/// (I + (1 - pi) d_private) / (pi (1 - 2S)). +inf when pi == 0 or S >= 0.5.
double liability_threshold(double pi, const RaceParameters& params);

/// Ruin magnitude above which (v, pi) lies in the suicide region:
/// (pi v (1 - 2S) - I) / (1 - pi). The bound is exact for S == 0; for S > 0
/// it is the printed inequality, not the classifier's boundary.
double suicide_bound_d(double v, double pi, const RaceParameters& params);

/// Region of v relative to the preemption and survival boundaries, using the
/// half-open convention [lower, upper). The preemption boundary is the
/// liability-adjusted one, which equals preemption_threshold whenever
/// d_private == 0.
RegionLabel classify_region(double v, double pi, const RaceParameters& params,
                            bool include_private = true);

/// Aggregates every threshold at pi = beliefs.pi_self. The saviour threshold
/// is left empty when share != 0.
ThresholdSet compute_thresholds(const BeliefState& beliefs, const RaceParameters& params,
                                bool include_private = true);

}  // namespace optionrace::model
