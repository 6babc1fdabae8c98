// SPDX-License-Identifier: Apache-2.0
#include "optionrace/core_model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "optionrace/errors.hpp"

namespace optionrace::model {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_probability(double pi, const char* what) {
    if (!(pi >= 0.0 && pi <= 1.0)) {
        throw DomainError(std::string(what) + " must lie in [0, 1], got " + std::to_string(pi));
    }
}

// Preemption-type thresholds never bind once the follower gets half the prize.
bool preemption_never_binds(double pi, const RaceParameters& params) {
    return pi == 0.0 || params.share >= 0.5;
}

}  // namespace

void RaceParameters::validate() const {
    auto fail = [](const std::string& msg) { throw DomainError("RaceParameters: " + msg); };
    if (!(sigma > 0.0)) fail("sigma must be > 0");
    if (!(lambda_rate > 0.0)) fail("lambda_rate must be > 0");
    if (!(invest_cost > 0.0)) fail("invest_cost must be > 0");
    if (!(v_ref > 0.0)) fail("v_ref must be > 0");
    if (!(r >= 0.0)) fail("r must be >= 0");
    if (!(delta >= 0.0)) fail("delta must be >= 0");
    if (!(share >= 0.0 && share <= 1.0)) fail("share must lie in [0, 1]");
    if (!(d_social >= 0.0)) fail("d_social must be >= 0");
    if (!(d_private >= 0.0)) fail("d_private must be >= 0");
    if (!std::isfinite(gamma)) fail("gamma must be finite");
}

BeliefState BeliefState::symmetric(double pi) { return asymmetric(pi, pi); }

BeliefState BeliefState::asymmetric(double pi_self, double pi_rival) {
    BeliefState b;
    b.pi_self = pi_self;
    b.pi_rival = pi_rival;
    b.source = BeliefSource::Direct;
    b.validate();
    return b;
}

BeliefState BeliefState::learned(double lambda_rate, double tau) {
    BeliefState b;
    b.pi_self = b.pi_rival = safety_probability(lambda_rate, tau);
    b.source = BeliefSource::Learned;
    b.tau = tau;
    return b;
}

void BeliefState::validate() const {
    require_probability(pi_self, "pi_self");
    require_probability(pi_rival, "pi_rival");
    if (source == BeliefSource::Learned && !(tau >= 0.0)) {
        throw DomainError("BeliefState: learned beliefs need tau >= 0");
    }
}

std::string_view to_string(Region region) noexcept {
    switch (region) {
        case Region::WaitBelowAll: return "WaitBelowAll";
        case Region::SuicideRegion: return "SuicideRegion";
        case Region::ProfitableWait: return "ProfitableWait";
        case Region::RaceViable: return "RaceViable";
    }
    return "Unknown";
}

std::optional<Region> region_from_string(std::string_view name) noexcept {
    for (Region r : {Region::WaitBelowAll, Region::SuicideRegion, Region::ProfitableWait,
                     Region::RaceViable}) {
        if (to_string(r) == name) return r;
    }
    return std::nullopt;
}

double safety_probability(double lambda_rate, double tau) {
    if (!(lambda_rate > 0.0)) throw DomainError("safety_probability: lambda_rate must be > 0");
    if (!(tau >= 0.0)) throw DomainError("safety_probability: tau must be >= 0");
    // -expm1 keeps precision for small lambda * tau.
    return -std::expm1(-lambda_rate * tau);
}

double research_time_for_safety(double lambda_rate, double pi) {
    if (!(lambda_rate > 0.0)) throw DomainError("research_time_for_safety: lambda_rate must be > 0");
    if (!(pi >= 0.0 && pi < 1.0)) {
        throw DomainError("research_time_for_safety: pi must lie in [0, 1) (pi = 1 needs infinite research)");
    }
    return -std::log1p(-pi) / lambda_rate;
}

double leader_payoff(double v, double pi, const RaceParameters& params) {
    require_probability(pi, "pi");
    return (1.0 - params.share) * pi * v - (1.0 - pi) * (params.d_social + params.d_private) -
           params.invest_cost;
}

double follower_payoff(double v, double pi, const RaceParameters& params) {
    require_probability(pi, "pi");
    return params.share * pi * v - (1.0 - pi) * params.d_social;
}

double preemption_threshold(double pi, const RaceParameters& params) {
    require_probability(pi, "pi");
    if (preemption_never_binds(pi, params)) return kInf;
    return params.invest_cost / ((1.0 - 2.0 * params.share) * pi);
}

double survival_threshold(double pi, const RaceParameters& params, bool include_private) {
    require_probability(pi, "pi");
    if (params.share >= 1.0) {
        throw DomainError("survival_threshold: share = 1 leaves the leader nothing to win");
    }
    if (pi == 0.0) return kInf;
    const double d_eff = include_private ? params.d_social + params.d_private : params.d_social;
    return (params.invest_cost + (1.0 - pi) * d_eff) / ((1.0 - params.share) * pi);
}

double nuclear_threshold(double pi, const RaceParameters& params) {
    require_probability(pi, "pi");
    if (pi == 0.0) return kInf;
    return (params.invest_cost + (1.0 - pi) * params.d_social) / pi;
}

SaviourThreshold saviour_threshold(const BeliefState& beliefs, const RaceParameters& params) {
    beliefs.validate();
    if (params.share != 0.0) {
        throw DomainError("saviour_threshold: only defined for a winner-takes-all race (share = 0)");
    }
    if (beliefs.pi_self == 0.0) return {kInf, false};
    const double raw =
        (params.invest_cost - params.d_social * (beliefs.pi_self - beliefs.pi_rival)) / beliefs.pi_self;
    if (raw <= 0.0) return {0.0, true};
    return {raw, false};
}

double saviour_premium(const BeliefState& beliefs, const RaceParameters& params) {
    beliefs.validate();
    return params.d_social * (beliefs.pi_self - beliefs.pi_rival);
}

double liability_threshold(double pi, const RaceParameters& params) {
    require_probability(pi, "pi");
    if (preemption_never_binds(pi, params)) return kInf;
    return (params.invest_cost + (1.0 - pi) * params.d_private) / (pi * (1.0 - 2.0 * params.share));
}

double suicide_bound_d(double v, double pi, const RaceParameters& params) {
    require_probability(pi, "pi");
    if (pi == 1.0) throw DomainError("suicide_bound_d: pi = 1 rules out ruin");
    return (pi * v * (1.0 - 2.0 * params.share) - params.invest_cost) / (1.0 - pi);
}

RegionLabel classify_region(double v, double pi, const RaceParameters& params, bool include_private) {
    if (!(v >= 0.0)) throw DomainError("classify_region: v must be >= 0");
    RegionLabel label;
    label.v_preempt = liability_threshold(pi, params);
    label.v_survival = survival_threshold(pi, params, include_private);
    const double hi = std::max(label.v_preempt, label.v_survival);
    if (label.v_preempt <= v && v < label.v_survival) {
        label.region = Region::SuicideRegion;
    } else if (label.v_survival <= v && v < label.v_preempt) {
        label.region = Region::ProfitableWait;
    } else if (v >= hi) {
        label.region = Region::RaceViable;
    } else {
        label.region = Region::WaitBelowAll;
    }
    return label;
}

ThresholdSet compute_thresholds(const BeliefState& beliefs, const RaceParameters& params,
                                bool include_private) {
    params.validate();
    beliefs.validate();
    const double pi = beliefs.pi_self;
    ThresholdSet set;
    set.v_preempt = preemption_threshold(pi, params);
    set.v_survival = survival_threshold(pi, params, include_private);
    set.v_nuclear = nuclear_threshold(pi, params);
    set.v_liability = liability_threshold(pi, params);
    if (params.share == 0.0) set.v_saviour = saviour_threshold(beliefs, params);
    return set;
}

}  // namespace optionrace::model
