// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string_view>

#include "optionrace/core_model.hpp"

namespace optionrace::mechanisms {

/// Which ruin magnitude the survival boundary charges the leader with.
enum class SurvivalMode {
    ExcludesPrivate,  ///< D_eff = d_social
    IncludesPrivate,  ///< D_eff = d_social + d_private
};

std::string_view to_string(SurvivalMode mode) noexcept;
std::optional<SurvivalMode> survival_mode_from_string(std::string_view name) noexcept;

/// Critical private liability: the printed closed form next to a bisection
/// solve of V_P,liability(D_p) >= V_S(D_p). The two generally disagree, so
/// both are always reported.
struct LiabilitySolution {
    double d_private_printed = 0.0;    ///< S (I + (1 - pi) D_social) / (1 - S)
    double d_private_numeric = 0.0;  ///< smallest D_p closing the region
    SurvivalMode survival_mode = SurvivalMode::ExcludesPrivate;
    double discrepancy = 0.0;        ///< |printed - numeric|
    double closure_gap = 0.0;        ///< V_P,liability - V_S at d_private_numeric
    bool already_closed = false;     ///< S >= 0.5 or closed at D_p = 0
    int iterations = 0;
};

struct WarningShotReport {
    double d_before = 0.0;
    double d_after = 0.0;
    double delta_v_preempt = 0.0;
    double delta_v_survival = 0.0;
    /// Present only for share == 0, where the saviour threshold exists.
    std::optional<double> delta_v_saviour;
    /// Empty when either width is not finite.
    std::optional<double> region_width_change;
};

/// Bisection settings shared by the solvers.
struct BisectionOptions {
    double bracket_limit = 1e12;
    int max_iterations = 200;
};

/// Smallest D_p >= 0 such that the liability-adjusted preemption threshold
/// meets the survival threshold of the given mode.
///
/// pi must lie in (0, 1). For share >= 0.5 the preemption threshold is
/// infinite for every D_p and the result is flagged already_closed.
/// Throws SolverError if no closing D_p exists below bracket_limit.
LiabilitySolution critical_private_liability(double pi, const model::RaceParameters& params,
                                             SurvivalMode mode,
                                             const BisectionOptions& options = {});

/// The closed form as printed: S (I + (1 - pi) D_social) / (1 - S).
double printed_critical_liability(double pi, const model::RaceParameters& params);

/// Smallest share S in [0, 0.5] at which the preemption boundary meets the
/// survival boundary. Returns 0 when the region is already closed at S = 0.
double critical_windfall_share(double pi, const model::RaceParameters& params,
                               bool include_private = true, const BisectionOptions& options = {});

/// Comparative statics of a one-shot upward revision of d_social to d_after.
/// Thresholds are evaluated at pi_self; the saviour delta uses both beliefs.
WarningShotReport warning_shot(const model::BeliefState& beliefs,
                               const model::RaceParameters& params, double d_after,
                               bool include_private = true);

}  // namespace optionrace::mechanisms
