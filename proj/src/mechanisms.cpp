// SPDX-License-Identifier: Apache-2.0
#include "optionrace/mechanisms.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "optionrace/errors.hpp"

namespace optionrace::mechanisms {

namespace {

struct BisectionResult {
    double closed = 0.0;  // smallest point found where the predicate holds
    int iterations = 0;
};

// Shrinks [open, closed] around the switch point of a monotone predicate that
// is false at `open` and true at `closed`. Runs until the midpoint is no
// longer representable strictly inside the bracket.
template <class Pred>
BisectionResult bisect_switch_point(double open, double closed, Pred&& holds, int max_iterations) {
    BisectionResult result;
    while (result.iterations < max_iterations) {
        const double mid = open + 0.5 * (closed - open);
        if (!(mid > open && mid < closed)) break;
        ++result.iterations;
        if (holds(mid)) {
            closed = mid;
        } else {
            open = mid;
        }
    }
    result.closed = closed;
    return result;
}

void require_interior_probability(double pi, const char* op) {
    if (!(pi > 0.0 && pi < 1.0)) throw DomainError(std::string(op) + ": pi must lie in (0, 1)");
}

}  // namespace

std::string_view to_string(SurvivalMode mode) noexcept {
    return mode == SurvivalMode::ExcludesPrivate ? "excludes-private" : "includes-private";
}

std::optional<SurvivalMode> survival_mode_from_string(std::string_view name) noexcept {
    if (name == "excludes-private") return SurvivalMode::ExcludesPrivate;
    if (name == "includes-private") return SurvivalMode::IncludesPrivate;
    return std::nullopt;
}

double printed_critical_liability(double pi, const model::RaceParameters& params) {
    const double s = params.share;
    return s * (params.invest_cost + (1.0 - pi) * params.d_social) / (1.0 - s);
}

LiabilitySolution critical_private_liability(double pi, const model::RaceParameters& params,
                                             SurvivalMode mode, const BisectionOptions& options) {
    params.validate();
    require_interior_probability(pi, "critical_private_liability");

    LiabilitySolution sol;
    sol.survival_mode = mode;
    sol.d_private_printed = printed_critical_liability(pi, params);

    const bool include_private = mode == SurvivalMode::IncludesPrivate;
    auto gap_at = [&](double d_private) {
        model::RaceParameters p = params;
        p.d_private = d_private;
        return model::liability_threshold(pi, p) - model::survival_threshold(pi, p, include_private);
    };
    auto closes = [&](double d_private) { return gap_at(d_private) >= 0.0; };

    if (params.share >= 0.5 || closes(0.0)) {
        sol.already_closed = true;
        sol.d_private_numeric = 0.0;
        sol.closure_gap = params.share >= 0.5 ? 0.0 : gap_at(0.0);
        sol.discrepancy = std::abs(sol.d_private_printed - sol.d_private_numeric);
        return sol;
    }

    double hi = std::max(10.0 * params.d_social, 10.0 * params.invest_cost);
    while (!closes(hi)) {
        if (hi >= options.bracket_limit) {
            throw SolverError("critical_private_liability: region cannot be closed by liability alone "
                              "(no crossing below " + std::to_string(options.bracket_limit) + ")");
        }
        hi = std::min(hi * 10.0, options.bracket_limit);
    }

    const auto root = bisect_switch_point(0.0, hi, closes, options.max_iterations);
    sol.d_private_numeric = root.closed;
    sol.iterations = root.iterations;
    sol.closure_gap = gap_at(root.closed);
    sol.discrepancy = std::abs(sol.d_private_printed - sol.d_private_numeric);
    return sol;
}

double critical_windfall_share(double pi, const model::RaceParameters& params, bool include_private,
                               const BisectionOptions& options) {
    params.validate();
    require_interior_probability(pi, "critical_windfall_share");

    auto closes = [&](double share) {
        model::RaceParameters p = params;
        p.share = share;
        return model::liability_threshold(pi, p) >= model::survival_threshold(pi, p, include_private);
    };
    if (closes(0.0)) return 0.0;
    // liability_threshold is +inf at S = 0.5, so the upper end always closes.
    return bisect_switch_point(0.0, 0.5, closes, options.max_iterations).closed;
}

WarningShotReport warning_shot(const model::BeliefState& beliefs,
                               const model::RaceParameters& params, double d_after,
                               bool include_private) {
    params.validate();
    beliefs.validate();
    if (!(d_after >= params.d_social)) {
        throw DomainError("warning_shot: d_after must be >= the current d_social");
    }
    model::RaceParameters after = params;
    after.d_social = d_after;

    const double pi = beliefs.pi_self;
    WarningShotReport report;
    report.d_before = params.d_social;
    report.d_after = d_after;

    const double vp0 = model::preemption_threshold(pi, params);
    const double vp1 = model::preemption_threshold(pi, after);
    const double vs0 = model::survival_threshold(pi, params, include_private);
    const double vs1 = model::survival_threshold(pi, after, include_private);
    // inf - inf would be NaN; an unchanged infinite threshold has moved by zero.
    auto change = [](double before, double after_v) { return before == after_v ? 0.0 : after_v - before; };
    report.delta_v_preempt = change(vp0, vp1);
    report.delta_v_survival = change(vs0, vs1);

    if (params.share == 0.0) {
        report.delta_v_saviour = change(model::saviour_threshold(beliefs, params).value,
                                        model::saviour_threshold(beliefs, after).value);
    }
    const double w0 = vs0 - vp0;
    const double w1 = vs1 - vp1;
    if (std::isfinite(w0) && std::isfinite(w1)) report.region_width_change = w1 - w0;
    return report;
}

}  // namespace optionrace::mechanisms
