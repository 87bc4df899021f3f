#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "excursion/constants.hpp"
#include "excursion/fit.hpp"
#include "test_util.hpp"

using namespace excursion;
using excursion::test::example_pmf;
using excursion::test::zero_mean_pmf;

namespace {

const CramerProfile& profile() {
    static const CramerProfile prof = build_profile(example_pmf());
    return prof;
}

const ExcursionTable& table1200() {
    static const ExcursionTable table = [] {
        DpCaps caps;
        caps.a_max = 1200;
        caps.s_max = 96;
        return excursion_law(example_pmf(), caps);
    }();
    return table;
}

} // namespace

TEST_CASE("kappa trace climbs toward the assembled constant") {
    const KappaFit kf = kappa_fit(table1200(), profile());
    CHECK_FALSE(kf.trace.points.empty());
    for (const auto& p : kf.trace.points) CHECK(p.value > 0.0);
    // still converging at this short grid; pinned from the oracle run
    CHECK(kf.kappa_hat == doctest::Approx(0.0364137).epsilon(1e-3));
    CHECK(kf.top_decade_variation == doctest::Approx(0.0668).epsilon(0.05));

    // the assembled constant is the limit the trace climbs toward
    const LatticePmf pmf = example_pmf();
    const double q0 = survival_dp(tilt(pmf, profile().lambda), 0, 400).value;
    const double qh1 = survival_dp(pmf.negated(), 1, 400).value;
    const ConstantAssembly assembly = assemble_constants(profile(), q0, {qh1});
    CHECK(std::fabs(assembly.kappa / kf.kappa_hat - 1.0) <= 0.10);
    const auto& last = kf.trace.points.back();
    CHECK(last.value < assembly.kappa); // approach from below, per the x^{-3/4} correction
}

TEST_CASE("tail to local ratio approaches one") {
    const TailRatioFit tr = tail_ratio(table1200(), profile());
    CHECK(tr.ratio_top == doctest::Approx(0.968076).epsilon(1e-3));
    CHECK(std::fabs(tr.ratio_top - 1.0) <= 0.05);
    for (const auto& p : tr.trace.points) CHECK(p.value > 0.0);
}

TEST_CASE("chebyshev bound dominates the exact tail") {
    std::vector<std::int64_t> xs;
    for (std::int64_t x = 50; x <= 1200; x += 50) xs.push_back(x);
    const ChebCheck cc = cheb_check(table1200(), profile(), xs);
    CHECK(cc.dominates);
    CHECK(cc.trace.all_pass());
    for (double g : cc.scaled_gap) {
        CHECK(g > 0.0);
        CHECK(g < 1.0);
    }
    CHECK(cc.scaled_gap_top_octave_spread <= 2.0);
}

TEST_CASE("duration CLT diagnostics") {
    const DurationCltResult d = duration_clt(table1200(), profile(), 1200);
    CHECK(d.tv_distance >= 0.0);
    CHECK(d.sup_distance >= 0.0);
    CHECK(d.mean_target == doctest::Approx(std::sqrt(1200.0 / profile().I)).epsilon(1e-12));
    CHECK(d.variance_target == doctest::Approx(profile().delta2 * std::sqrt(1200.0)).epsilon(1e-12));

    // distances shrink along the grid
    const ConvergenceTrace trace = duration_clt_trace(table1200(), profile(), {400, 800, 1200});
    REQUIRE(trace.points.size() == 3);
    CHECK(trace.points[0].value > trace.points[1].value);
    CHECK(trace.points[1].value > trace.points[2].value);

    // the variance growth rate matches delta2 well before the absolute law does:
    // regress Var(tau | A = x) on sqrt(x) across the grid
    const DurationCltResult lo = duration_clt(table1200(), profile(), 400);
    const double slope =
        (d.variance_dp - lo.variance_dp) / (std::sqrt(1200.0) - std::sqrt(400.0));
    CHECK(std::fabs(slope / profile().delta2 - 1.0) <= 0.05); // measured 3.5%
}

TEST_CASE("free local CLT error decreases") {
    double prev = 1e300;
    for (int n : {20, 40, 80}) {
        const double err = llt_free_error(profile(), n, 0.5);
        CHECK(err < prev);
        prev = err;
    }
    CHECK(prev == doctest::Approx(0.24447).epsilon(2e-2)); // n = 80 baseline
}

TEST_CASE("barrier layer matches q(a) at the peak") {
    const LatticePmf pmf = example_pmf();
    const LatticePmf tilted = tilt(pmf, profile().lambda);
    for (std::int64_t a : {0, 2}) {
        const double q_a = survival_dp(tilted, a, 400).value;
        const LltBarrierResult r = llt_barrier(profile(), 160, 0.5, a, q_a);
        CHECK(std::fabs(r.peak_ratio / q_a - 1.0) <= 0.15);
        CHECK(r.sup_error > 0.0);
    }
}

TEST_CASE("bridge slice approaches q(0) qhat(x)") {
    const LatticePmf pmf = example_pmf();
    const double q0 = survival_dp(tilt(pmf, profile().lambda), 0, 400).value;
    const double qh1 = survival_dp(pmf.negated(), 1, 400).value;
    double prev = 1e300;
    for (int n : {80, 160, 240}) {
        const LltBridgeResult r = llt_bridge(profile(), n, 1, q0 * qh1);
        CHECK(r.relative_gap < prev);
        prev = r.relative_gap;
        CHECK(r.peak_ratio < r.prediction); // approach from below at desk scale
    }
    CHECK(prev <= 0.15); // measured 11.1% at n = 240
}

TEST_CASE("zero-mean pipeline closes") {
    ZeroMeanOptions opt;
    opt.a_max = 1200;
    opt.s_max = 160;
    opt.tau_n_max = 2048;
    opt.tau_s_max = 512;
    opt.cond_n = 150;
    opt.cond_paths = 4'000'000;
    opt.seed = 911;
    const ZeroMeanCheck z = zero_mean_check(zero_mean_pmf(), opt);
    CHECK(z.sigma == doctest::Approx(std::sqrt(0.6)).epsilon(1e-12));
    CHECK(z.c0 == doctest::Approx(0.1546).epsilon(2e-3)); // duration-law prefactor
    CHECK(z.tail_at_top.upper - z.tail_at_top.lower <= 1e-10);
    CHECK(z.relative_gap() <= 0.02); // measured 0.76%
    CHECK(z.pass());

    // n^{3/2} P(tau = n) flattens: the top octave stays within a band
    const TauLaw law = tau_law(zero_mean_pmf(), 2048, 512);
    double lo = 1e300, hi = 0.0;
    for (int n = 1024; n <= 2048; n += 64) {
        const double v = std::pow(n, 1.5) * law.prob[n - 1];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    CHECK(hi / lo <= 1.01);

    CHECK_THROWS_AS(zero_mean_check(example_pmf(), opt), ValidationError);
}
