// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <limits>

#include "generators.hpp"
#include "optionrace/core_model.hpp"
#include "optionrace/errors.hpp"

using namespace optionrace;
using namespace optionrace::model;
using optionrace::testing::Gen;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTol = 1e-9;

RaceParameters make(double invest, double d_social, double share = 0.0, double d_private = 0.0) {
    RaceParameters p;
    p.invest_cost = invest;
    p.d_social = d_social;
    p.share = share;
    p.d_private = d_private;
    return p;
}

// Label implied by the signs of (L - F) and L.
Region brute_force_region(double v, double pi, const RaceParameters& p, bool include_private) {
    RaceParameters q = p;
    if (!include_private) q.d_private = 0.0;
    const bool preempts = leader_payoff(v, pi, p) - follower_payoff(v, pi, p) >= 0.0;
    const bool survives = leader_payoff(v, pi, q) >= 0.0;
    if (preempts && survives) return Region::RaceViable;
    if (preempts) return Region::SuicideRegion;
    if (survives) return Region::ProfitableWait;
    return Region::WaitBelowAll;
}

}  // namespace

TEST_CASE("safety probability") {
    CHECK(safety_probability(0.5, 0.0) == 0.0);
    CHECK(safety_probability(std::log(2.0), 1.0) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(safety_probability(0.5, 200.0) == 1.0);
    CHECK(safety_probability(0.5, 60.0) < 1.0);
    CHECK_THROWS_AS(safety_probability(0.5, -1.0), DomainError);
    CHECK_THROWS_AS(safety_probability(0.0, 1.0), DomainError);

    Gen g(11);
    for (int i = 0; i < 500; ++i) {
        const double lambda = g.uniform(0.01, 3.0);
        const double a = g.uniform(0.0, 10.0);
        const double b = a + g.uniform(1e-3, 5.0);
        const double fa = safety_probability(lambda, a);
        const double fb = safety_probability(lambda, b);
        CHECK(fb > fa);
        // Concavity: the midpoint lies above the chord.
        CHECK(safety_probability(lambda, 0.5 * (a + b)) >= 0.5 * (fa + fb) - 1e-15);
    }
}

TEST_CASE("research time inverts the safety curve") {
    CHECK(research_time_for_safety(std::log(2.0), 0.5) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(research_time_for_safety(1.0, 0.0) == 0.0);
    CHECK_THROWS_AS(research_time_for_safety(1.0, 1.0), DomainError);
    CHECK_THROWS_AS(research_time_for_safety(1.0, -0.1), DomainError);
    Gen g(12);
    for (int i = 0; i < 1000; ++i) {
        // lambda * tau <= 5 keeps 1 - pi well resolved in double precision.
        const double lambda = g.uniform(0.1, 3.0);
        const double tau = g.uniform(0.0, 5.0 / lambda);
        CHECK(std::abs(research_time_for_safety(lambda, safety_probability(lambda, tau)) - tau) <= 1e-12);
    }
}

TEST_CASE("payoff examples") {
    CHECK(leader_payoff(10, 0.5, make(1, 10)) == -1.0);
    CHECK(leader_payoff(7.25, 1.0, make(1, 1e6)) == 6.25);
    CHECK(leader_payoff(0, 0.0, make(1, 10)) == -11.0);
    CHECK(leader_payoff(10, 0.5, make(1, 10, 0.0, 4)) == -3.0);

    CHECK(follower_payoff(10, 0.5, make(1, 10)) == -5.0);
    CHECK(follower_payoff(10, 1.0, make(1, 1e3)) == 0.0);
    CHECK(follower_payoff(10, 0.5, make(1, 0, 0.5)) == 2.5);
    // The follower never pays the private liability or the cost.
    CHECK(follower_payoff(10, 0.5, make(99, 10, 0.0, 1e6)) == -5.0);
}

TEST_CASE("threshold examples") {
    CHECK(preemption_threshold(0.5, make(1, 10)) == 2.0);
    CHECK(preemption_threshold(0.8, make(2, 10, 0.25)) == doctest::Approx(5.0).epsilon(1e-15));
    CHECK(preemption_threshold(0.5, make(1, 10, 0.5)) == kInf);
    CHECK(preemption_threshold(0.0, make(1, 10)) == kInf);
    CHECK(preemption_threshold(0.5, make(1, 10, 0.7)) == kInf);

    CHECK(survival_threshold(0.5, make(1, 0), false) == 2.0);
    CHECK(survival_threshold(0.5, make(1, 10), false) == 12.0);
    CHECK(survival_threshold(0.5, make(1, 10, 0.25, 8), true) == doctest::Approx(10.0 / 0.375).epsilon(1e-15));
    CHECK(survival_threshold(0.5, make(1, 10, 0.25, 8), false) == doctest::Approx(6.0 / 0.375).epsilon(1e-15));
    CHECK(survival_threshold(0.0, make(1, 10)) == kInf);
    CHECK_THROWS_AS(survival_threshold(0.5, make(1, 10, 1.0)), DomainError);

    CHECK(nuclear_threshold(0.5, make(1, 10)) == 12.0);
    CHECK(nuclear_threshold(1.0, make(1, 123)) == 1.0);
    CHECK(nuclear_threshold(0.5, make(1, 0)) == 2.0);
    CHECK(nuclear_threshold(0.0, make(1, 10)) == kInf);

    CHECK(liability_threshold(0.5, make(1, 10)) == 2.0);
    CHECK(liability_threshold(0.5, make(1, 10, 0.0, 10)) == 12.0);
    CHECK(liability_threshold(0.5, make(1, 10, 0.25, 6)) == 16.0);
    CHECK(liability_threshold(0.5, make(1, 10, 0.5, 6)) == kInf);
}

TEST_CASE("saviour threshold") {
    auto s = saviour_threshold(BeliefState::asymmetric(0.6, 0.4), make(1, 10));
    CHECK(s.value == 0.0);
    CHECK(s.immediate_deploy);

    s = saviour_threshold(BeliefState::symmetric(0.5), make(1, 1234));
    CHECK(s.value == 2.0);
    CHECK_FALSE(s.immediate_deploy);

    s = saviour_threshold(BeliefState::asymmetric(0.6, 0.5), make(1, 5));
    CHECK(s.value == doctest::Approx(0.5 / 0.6).epsilon(1e-15));
    CHECK(s.value < preemption_threshold(0.6, make(1, 5)));

    CHECK(saviour_threshold(BeliefState::asymmetric(0.0, 0.0), make(1, 5)).value == kInf);
    CHECK_THROWS_AS(saviour_threshold(BeliefState::symmetric(0.5), make(1, 5, 0.1)), DomainError);

    CHECK(saviour_premium(BeliefState::asymmetric(0.6, 0.4), make(1, 10)) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(saviour_premium(BeliefState::symmetric(0.3), make(1, 10)) == 0.0);
    CHECK(saviour_premium(BeliefState::asymmetric(0.3, 0.5), make(1, 10)) < 0.0);
}

TEST_CASE("saviour premium decomposes the payoff gap") {
    Gen g(13);
    for (int i = 0; i < 2000; ++i) {
        RaceParameters p = g.params();
        p.share = 0.0;
        p.d_private = 0.0;
        const auto b = BeliefState::asymmetric(g.uniform(0, 1), g.uniform(0, 1));
        const double v = g.uniform(0, 200);
        const double gap = leader_payoff(v, b.pi_self, p) - follower_payoff(v, b.pi_rival, p);
        const double oracle = (b.pi_self * v - p.invest_cost) + saviour_premium(b, p);
        CHECK(std::abs(gap - oracle) <= kTol * std::max(1.0, std::abs(v) + p.d_social));
    }
}

TEST_CASE("suicide bound") {
    CHECK(suicide_bound_d(3, 0.5, make(1, 0)) == 1.0);
    CHECK(survival_threshold(0.5, make(1, 1.0), false) == 3.0);
    CHECK(suicide_bound_d(2, 0.5, make(1, 0)) == 0.0);
    CHECK(suicide_bound_d(1, 0.5, make(1, 0)) < 0.0);
    CHECK_THROWS_AS(suicide_bound_d(3, 1.0, make(1, 0)), DomainError);

    // At S = 0, D just above the bound puts (V, pi) in the suicide region.
    Gen g(14);
    for (int i = 0; i < 500; ++i) {
        RaceParameters p = g.params();
        p.share = 0.0;
        p.d_private = 0.0;
        const double pi = g.uniform(0.05, 0.95);
        const double v = preemption_threshold(pi, p) * g.uniform(1.0, 5.0);
        const double bound = suicide_bound_d(v, pi, p);
        p.d_social = std::max(0.0, bound) * 1.01 + 1e-6;
        CHECK(classify_region(v, pi, p).region == Region::SuicideRegion);
        if (bound > 1e-6) {
            p.d_social = bound * 0.99;
            CHECK(classify_region(v, pi, p).region == Region::RaceViable);
        }
    }
}

TEST_CASE("classify examples") {
    const RaceParameters p = make(1, 5);
    auto label = classify_region(3, 0.5, p);
    CHECK(label.region == Region::SuicideRegion);
    CHECK(label.v_preempt == 2.0);
    CHECK(label.v_survival == 7.0);
    CHECK(classify_region(1, 0.5, p).region == Region::WaitBelowAll);
    CHECK(classify_region(13, 0.5, p).region == Region::RaceViable);
    CHECK(leader_payoff(13, 0.5, p) == 3.0);
    CHECK(follower_payoff(13, 0.5, p) == -2.5);

    // Half-open boundaries.
    CHECK(classify_region(2, 0.5, p).region == Region::SuicideRegion);
    CHECK(classify_region(7, 0.5, p).region == Region::RaceViable);
    CHECK(classify_region(2, 0.5, make(1, 0)).region == Region::RaceViable);

    // S above one half: preemption never binds.
    CHECK(classify_region(100, 0.5, make(1, 5, 0.6)).region == Region::ProfitableWait);
    CHECK(classify_region(1, 0.5, make(1, 5, 0.6)).region == Region::WaitBelowAll);

    for (Region r : {Region::WaitBelowAll, Region::SuicideRegion, Region::ProfitableWait, Region::RaceViable}) {
        CHECK(region_from_string(to_string(r)) == r);
    }
    CHECK_FALSE(region_from_string("nowhere").has_value());
}

TEST_CASE("parameter and belief validation") {
    CHECK_NOTHROW(RaceParameters{}.validate());
    RaceParameters p;
    p.sigma = 0.0;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = {};
    p.share = 1.5;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = {};
    p.d_social = -1;
    CHECK_THROWS_AS(p.validate(), DomainError);
    p = {};
    p.invest_cost = 0;
    CHECK_THROWS_AS(p.validate(), DomainError);
    CHECK(RaceParameters{}.drift() == doctest::Approx(0.03));

    CHECK_THROWS_AS(BeliefState::asymmetric(1.2, 0.5).validate(), DomainError);
    const auto learned = BeliefState::learned(std::log(2.0), 1.0);
    CHECK(learned.source == BeliefSource::Learned);
    CHECK(learned.tau == 1.0);
    CHECK(learned.is_symmetric());
    CHECK(learned.pi_self == doctest::Approx(0.5));
}

TEST_CASE("property: D-neutrality is bitwise") {
    Gen g(21);
    for (int i = 0; i < 2000; ++i) {
        RaceParameters p = g.params(0.6);
        const double pi = g.uniform(0, 1);
        p.d_social = 0.0;
        const double ref = preemption_threshold(pi, p);
        for (double d : {1.0, 1e6, 1e9, g.uniform(0, 1e4)}) {
            p.d_social = d;
            CHECK(preemption_threshold(pi, p) == ref);
        }
    }
}

TEST_CASE("property: indifference and zero NPV at the thresholds") {
    Gen g(22);
    int finite = 0;
    for (int i = 0; i < 5000; ++i) {
        RaceParameters p = g.params();
        p.d_private = 0.0;
        const double pi = g.pi();
        const double vp = preemption_threshold(pi, p);
        if (std::isfinite(vp)) {
            ++finite;
            const double gap = leader_payoff(vp, pi, p) - follower_payoff(vp, pi, p);
            CHECK(std::abs(gap) <= kTol);
        }
        RaceParameters q = g.params();
        for (bool flag : {false, true}) {
            const double vs = survival_threshold(pi, q, flag);
            RaceParameters eff = q;
            if (!flag) eff.d_private = 0.0;
            CHECK(std::abs(leader_payoff(vs, pi, eff)) <= kTol * std::max(1.0, vs));
        }
        const double vl = liability_threshold(pi, q);
        if (std::isfinite(vl)) {
            CHECK(std::abs(leader_payoff(vl, pi, q) - follower_payoff(vl, pi, q)) <= kTol * std::max(1.0, vl));
        }
    }
    CHECK(finite > 4000);
}

TEST_CASE("property: suicide region width at S = 0") {
    Gen g(23);
    for (int i = 0; i < 5000; ++i) {
        RaceParameters p = g.params();
        p.share = 0.0;
        const double pi = g.uniform(0.01, 1.0);
        const double width = survival_threshold(pi, p, false) - preemption_threshold(pi, p);
        const double oracle = (1.0 - pi) * p.d_social / pi;
        CHECK(std::abs(width - oracle) <= kTol * std::max(1.0, oracle));
        if (p.d_social > 0.0 && pi < 1.0) CHECK(width > 0.0);
    }
}

TEST_CASE("property: monotonicity") {
    Gen g(24);
    for (int i = 0; i < 2000; ++i) {
        RaceParameters p = g.params();
        const double pi = g.uniform(0.01, 0.99);
        RaceParameters hi = p;
        hi.d_social += g.uniform(1e-3, 50.0);
        CHECK(survival_threshold(pi, hi) > survival_threshold(pi, p));
        CHECK(nuclear_threshold(pi, hi) > nuclear_threshold(pi, p));
        hi = p;
        hi.d_private += g.uniform(1e-3, 50.0);
        CHECK(liability_threshold(pi, hi) > liability_threshold(pi, p));

        const double pi2 = pi + g.uniform(1e-3, 1.0 - pi);
        CHECK(preemption_threshold(pi2, p) < preemption_threshold(pi, p));
        hi = p;
        hi.share = p.share + g.uniform(1e-4, 0.49 - p.share + 1e-4);
        if (hi.share < 0.5) CHECK(preemption_threshold(pi, hi) > preemption_threshold(pi, p));

        RaceParameters s0 = p;
        s0.share = 0.0;
        const double ps = g.uniform(0.02, 1.0);
        const auto beliefs = BeliefState::asymmetric(ps, g.uniform(0.0, ps * 0.99));
        RaceParameters more = s0;
        more.d_social += g.uniform(0.0, 50.0);
        CHECK(saviour_threshold(beliefs, more).value <= saviour_threshold(beliefs, s0).value);
    }
}

TEST_CASE("property: reductions") {
    Gen g(25);
    for (int i = 0; i < 2000; ++i) {
        RaceParameters p = g.params();
        const double pi = g.pi();
        RaceParameters no_priv = p;
        no_priv.d_private = 0.0;
        CHECK(liability_threshold(pi, no_priv) == preemption_threshold(pi, no_priv));
        RaceParameters s0 = p;
        s0.share = 0.0;
        CHECK(saviour_threshold(BeliefState::symmetric(pi), s0).value == preemption_threshold(pi, s0));
        CHECK(nuclear_threshold(pi, s0) == doctest::Approx(survival_threshold(pi, s0, false)).epsilon(1e-15));
    }
}

TEST_CASE("property: classifier agrees with payoff signs") {
    Gen g(26);
    int checked = 0;
    for (int i = 0; i < 10000; ++i) {
        const RaceParameters p = g.params(0.7);
        const double pi = g.integer(0, 50) == 0 ? 0.0 : g.pi();
        const bool flag = g.coin();
        const double v = g.uniform(0.0, 150.0);
        const auto label = classify_region(v, pi, p, flag);
        // Skip points within rounding distance of a boundary.
        auto near = [&](double b) { return std::isfinite(b) && std::abs(v - b) <= 1e-9 * std::max(1.0, b); };
        if (near(label.v_preempt) || near(label.v_survival)) continue;
        ++checked;
        CHECK(label.region == brute_force_region(v, pi, p, flag));
    }
    CHECK(checked > 9900);
}

TEST_CASE("compute_thresholds bundles the set") {
    const auto set = compute_thresholds(BeliefState::symmetric(0.5), make(1, 10));
    CHECK(set.v_preempt == 2.0);
    CHECK(set.v_survival == 12.0);
    CHECK(set.v_nuclear == 12.0);
    CHECK(set.v_liability == 2.0);
    REQUIRE(set.v_saviour.has_value());
    CHECK(set.v_saviour->value == 2.0);
    CHECK_FALSE(compute_thresholds(BeliefState::symmetric(0.5), make(1, 10, 0.2)).v_saviour.has_value());
}
