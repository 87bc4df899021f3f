#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "excursion/dd.hpp"
#include "excursion/exact.hpp"
#include "excursion/profile.hpp"
#include "enumeration.hpp"
#include "test_util.hpp"

using namespace excursion;
using excursion::test::enumerate_paths;
using excursion::test::example_pmf;


TEST_CASE("small-area oracle values") {
    DpCaps caps;
    caps.a_max = 60;
    caps.s_max = 40;
    const ExcursionTable table = excursion_law(example_pmf(), caps);
    const auto marginal = area_marginal(table);
    CHECK(marginal[0] == doctest::Approx(0.8).epsilon(1e-14));
    CHECK(marginal[1] == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(marginal[2] == doctest::Approx(0.03).epsilon(1e-14));
    CHECK(marginal[3] == doctest::Approx(0.009).epsilon(1e-14));
    CHECK(table.stopped(0, 0) == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(std::fabs(table.conservation_residual()) <= 1e-10);

    // conservation including truncation
    double total = 0.0;
    for (double m : marginal) total += m;
    total += table.overflow_area() + table.overflow_height() + table.alive_mass_at_caps();
    CHECK(total == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("brute-force equivalence up to eight steps") {
    const LatticePmf pmf = example_pmf();
    std::map<std::pair<int, std::int64_t>, double> oracle;
    enumerate_paths(pmf, 8, 0, 0, 1.0, 0, oracle);

    DpCaps caps;
    caps.a_max = 80;
    caps.s_max = 40;
    const ExcursionTable table = excursion_law(pmf, caps);
    for (const auto& [key, prob] : oracle) {
        const auto [n, a] = key;
        CHECK(std::fabs(table.stopped(n, a) - prob) <= 1e-14);
    }
    // and nothing extra below the enumeration horizon
    for (int n = 0; n <= 8; ++n) {
        for (std::int64_t a = 0; a <= 80; ++a) {
            const double dp = table.stopped(n, a);
            const auto it = oracle.find({n, a});
            const double ref = it == oracle.end() ? 0.0 : it->second;
            CHECK(std::fabs(dp - ref) <= 1e-14);
        }
    }
}

TEST_CASE("tail bracket and monotonicity") {
    DpCaps caps;
    caps.a_max = 400;
    caps.s_max = 64;
    const ExcursionTable table = excursion_law(example_pmf(), caps);
    double prev = 2.0;
    for (std::int64_t x : {0, 1, 5, 20, 100, 300, 400}) {
        const TailBracket b = area_tail(table, x);
        CHECK(b.lower <= b.upper);
        CHECK(b.upper <= prev + 1e-15);
        prev = b.upper;
    }
    const TailBracket all = area_tail(table, 0);
    CHECK(all.upper == doctest::Approx(1.0).epsilon(1e-10));
    const auto marginal = area_marginal(table);
    const TailBracket one = area_tail(table, 1);
    CHECK(one.mid() == doctest::Approx(1.0 - marginal[0]).epsilon(1e-10));
}

TEST_CASE("conditional duration at small areas") {
    DpCaps caps;
    caps.a_max = 60;
    caps.s_max = 40;
    const ExcursionTable table = excursion_law(example_pmf(), caps);

    const ConditionalTau at0 = conditional_tau(table, 0);
    CHECK(at0.k_min == 1);
    CHECK(at0.prob.size() == 1);
    CHECK(at0.prob[0] == doctest::Approx(1.0));

    const ConditionalTau at1 = conditional_tau(table, 1);
    CHECK(at1.k_min == 2);
    CHECK(at1.prob[0] == doctest::Approx(1.0).epsilon(1e-13));

    const ConditionalTau at2 = conditional_tau(table, 2);
    CHECK(at2.k_min == 3);
    CHECK(at2.prob[0] == doctest::Approx(1.0).epsilon(1e-13));

    double mass = 0.0;
    for (double p : conditional_tau(table, 30).prob) mass += p;
    CHECK(mass == doctest::Approx(1.0).epsilon(1e-12));

    CHECK_THROWS_AS(conditional_tau(table, 61), ZeroConditioningError); // beyond the cap
}

TEST_CASE("caps accounting and errors") {
    // unresolved mass beyond a tiny budget must be refused
    DpCaps caps;
    caps.a_max = 2000;
    caps.s_max = 64;
    caps.n_max = 30; // stops while plenty of mass is alive
    caps.alive_budget = 1e-12;
    CHECK_THROWS_AS(excursion_law(example_pmf(), caps), CapsError);

    caps.alive_budget = 1.0; // opt in to the truncation instead
    const ExcursionTable table = excursion_law(example_pmf(), caps);
    CHECK(table.alive_mass_at_caps() > 1e-12);
    CHECK(std::fabs(table.conservation_residual()) <= 1e-10);

    CHECK_THROWS_AS(excursion_law(LatticePmf({{-1, 0.2}, {1, 0.8}}), caps), ValidationError);
}

TEST_CASE("height cap certainty") {
    DpCaps caps;
    caps.a_max = 50;
    caps.s_max = 30; // forced descent area 31*30/2 = 465 > 50: certain
    const ExcursionTable certain = excursion_law(example_pmf(), caps);
    CHECK(certain.height_overflow_is_tail_certain());

    DpCaps caps2;
    caps2.a_max = 2000;
    caps2.s_max = 30; // 465 < 2000: height-capped mass could still end below a_max
    caps2.alive_budget = 1.0;
    const ExcursionTable uncertain = excursion_law(example_pmf(), caps2);
    CHECK_FALSE(uncertain.height_overflow_is_tail_certain());
}

TEST_CASE("double-double mode agrees with double") {
    DpCaps caps;
    caps.a_max = 300;
    caps.s_max = 64;
    const ExcursionTable a = excursion_law(example_pmf(), caps, Precision::Double);
    const ExcursionTable b = excursion_law(example_pmf(), caps, Precision::DoubleDouble);
    const auto ma = area_marginal(a);
    const auto mb = area_marginal(b);
    for (std::size_t i = 0; i < ma.size(); ++i) {
        if (mb[i] > 0.0) CHECK(std::fabs(ma[i] - mb[i]) / mb[i] <= 1e-12);
    }
}

TEST_CASE("double-double primitives") {
    DoubleDouble x(1.0);
    for (int i = 0; i < 10; ++i) x += DoubleDouble(1e-30);
    CHECK(x.hi == 1.0);
    CHECK(x.lo == doctest::Approx(1e-29).epsilon(1e-12));
    const DoubleDouble y = DoubleDouble(1.0, 0.0) * (1.0 + 1e-16);
    CHECK(to_double(y - DoubleDouble(1.0)) == doctest::Approx(1e-16).epsilon(1e-10));
}

TEST_CASE("duration law") {
    const TauLaw law = tau_law(example_pmf(), 2048, 256);
    CHECK(law.prob[0] == doctest::Approx(0.8).epsilon(1e-14)); // P(tau = 1)
    CHECK(law.prob[1] == doctest::Approx(0.1).epsilon(1e-14)); // only path: up then down
    double expect_tau = 0.0, total = 0.0;
    for (int n = 1; n <= 2048; ++n) {
        expect_tau += n * law.prob[n - 1];
        total += law.prob[n - 1];
    }
    // skip-free down walk: E S_tau = -P(X1 = -1) and Wald gives E tau = 5/3
    CHECK(expect_tau == doctest::Approx(5.0 / 3.0).epsilon(1e-9));
    CHECK(total + law.alive_mass + law.overflow_height == doctest::Approx(1.0).epsilon(1e-10));
    // P(tau > n) nonincreasing comes with the law being a probability vector
    for (double p : law.prob) CHECK(p >= 0.0);
}

TEST_CASE("survival barrier DP") {
    const LatticePmf pmf = example_pmf();
    const LatticePmf tilted = tilt(pmf, cramer_root(pmf));

    // monotone in the horizon, and in the barrier
    double prev = 1.0;
    for (int K : {1, 5, 20, 100, 300}) {
        const SurvivalEstimate s = survival_dp(tilted, 0, K);
        CHECK(s.value <= prev + 1e-15);
        prev = s.value;
    }
    CHECK(survival_dp(tilted, 1, 200).value > survival_dp(tilted, 0, 200).value);

    // far barrier: survival approaches one
    CHECK(survival_dp(tilted, 400, 300).value == doctest::Approx(1.0).epsilon(1e-9));

    // a = 0: the K = 1 truncation is P(U1 >= 1) exactly, and the infinite-
    // horizon constant sits between any truncation and its bias bracket
    const SurvivalEstimate q1 = survival_dp(tilted, 0, 1);
    CHECK(q1.value == doctest::Approx(1.0 - tilted.cdf_leq(0)).epsilon(1e-15));
    const SurvivalEstimate q0 = survival_dp(tilted, 0, 300);
    CHECK(q0.value > 0.0);
    CHECK(q0.value <= q1.value);
    CHECK(q0.tail_bias <= 1e-7); // rho^{301}/(1-rho) at this drift
    // the bracket really contains the longer-horizon value
    const SurvivalEstimate q0_long = survival_dp(tilted, 0, 600);
    CHECK(q0_long.value >= q0.lower() - 1e-15);
    CHECK(q0_long.value <= q0.value + 1e-15);

    CHECK_THROWS_AS(survival_dp(pmf, 0, 100), ValidationError); // negative drift refused
}

TEST_CASE("tilted layer basics") {
    const CramerProfile prof = build_profile(example_pmf());

    // one step: the table is the fully tilted law on the diagonal
    const LayerTable one = tilted_layer(prof, 40, 1.0 / 40.0, std::nullopt);
    const LatticePmf at_root = tilt(example_pmf(), prof.lambda);
    for (const auto& [k, p] : at_root.entries()) {
        CHECK(one.at(k, k) == doctest::Approx(p).epsilon(1e-13));
    }
    CHECK(one.mass() == doctest::Approx(1.0).epsilon(1e-12));

    // a barrier can only remove mass, cell by cell
    const LayerTable free2 = original_layer(example_pmf(), 2, std::nullopt);
    const LayerTable hard2 = original_layer(example_pmf(), 2, 0);
    const auto& caps = hard2.caps();
    for (std::int64_t s = caps.s_min; s <= caps.s_max; ++s) {
        for (std::int64_t y = caps.y_min; y <= caps.y_max; ++y) {
            CHECK(hard2.at(s, y) <= free2.at(s, y) + 1e-15);
        }
    }
    CHECK(hard2.mass() + hard2.killed() + hard2.overflow() == doctest::Approx(1.0).epsilon(1e-12));

    // full-horizon free layer keeps all mass inside the suggested window
    const LayerTable half = tilted_layer(prof, 40, 0.5, std::nullopt);
    CHECK(half.mass() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(half.overflow() <= 1e-10);
}

TEST_CASE("change of measure identity") {
    const CramerProfile prof = build_profile(example_pmf());

    // n = 1: reduces to one-step tilt algebra
    const MeasureChangeCheck tiny(prof, 1);
    const auto s = tiny.at(1, 1);
    CHECK(s.lhs == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(s.relative_gap <= 1e-14);

    // n = 12: every populated cell agrees to 1e-10, and the weighted tilted
    // table reproduces the original survival probability
    const MeasureChangeCheck check(prof, 12);
    CHECK(check.max_relative_gap(1e-14) <= 1e-10);
    CHECK(check.rhs_survival() == doctest::Approx(check.lhs_survival()).epsilon(1e-10));
    const auto sample = change_of_measure_identity(prof, 12, 12, 1);
    CHECK(sample.lhs > 0.0);
    CHECK(sample.relative_gap <= 1e-10);
}
