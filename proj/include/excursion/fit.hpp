#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "excursion/constants.hpp"
#include "excursion/estimators.hpp"
#include "excursion/exact.hpp"
#include "excursion/profile.hpp"

namespace excursion {

struct TracePoint {
    double x = 0.0;      // grid coordinate (x or n)
    double value = 0.0;  // measured statistic
    double target = 0.0; // limit / bound it should approach
    double gap = 0.0;    // relative or absolute, per trace
    bool pass = true;
};

struct ConvergenceTrace {
    std::string name;
    double tolerance = 0.0;
    std::vector<TracePoint> points;
    bool all_pass() const;
};

/// kappa_hat(x) = P(A_tau = x) x^{3/4} e^{theta sqrt(x)}; should flatten to kappa.
struct KappaFit {
    ConvergenceTrace trace;
    double kappa_hat = 0.0;             // average over the top decade of the grid
    double top_decade_variation = 0.0;  // (max - min) / mean over the top decade
};

KappaFit kappa_fit(const ExcursionTable& table, const CramerProfile& profile,
                   double tolerance = 0.05);

/// P(A_tau > x) / ((2/theta) sqrt(x) P(A_tau = x)) -> 1.
struct TailRatioFit {
    ConvergenceTrace trace;
    double ratio_top = 0.0;
};

TailRatioFit tail_ratio(const ExcursionTable& table, const CramerProfile& profile,
                        double tolerance = 0.05);

/// Chebyshev bound domination and its sqrt(x)-order gap.
struct ChebCheck {
    ConvergenceTrace trace; // value = exact tail, target = bound; pass = bound >= exact
    std::vector<double> scaled_gap; // (exact / bound) * sqrt(x) per grid point
    bool dominates = true;
    double scaled_gap_top_octave_spread = 0.0; // max/min over the top octave
};

ChebCheck cheb_check(const ExcursionTable& table, const CramerProfile& profile,
                     const std::vector<std::int64_t>& xs);

/// Conditional duration law vs the discretized Gaussian of the duration CLT.
struct DurationCltResult {
    double tv_distance = 0.0;
    double sup_distance = 0.0; // of x^{1/4} |p_dp - p_gauss|
    double mean_dp = 0.0;
    double mean_target = 0.0; // x^{1/2} / sqrt(I)
    double variance_dp = 0.0;
    double variance_target = 0.0; // delta2 sqrt(x)
};

DurationCltResult duration_clt(const ExcursionTable& table, const CramerProfile& profile,
                               std::int64_t x);

ConvergenceTrace duration_clt_trace(const ExcursionTable& table, const CramerProfile& profile,
                                    const std::vector<std::int64_t>& xs, double tolerance = 0.05);

/// sup_{s,y} |n^2 P-hat(S_m=s, A_m=y) - f_t(standardized)| for the free layer.
double llt_free_error(const CramerProfile& profile, int n, double t);

/// Barrier layer against q(a) f_t: sup error and the box peak ratio.
struct LltBarrierResult {
    double sup_error = 0.0;   // vs q_a * f_t
    double peak_ratio = 0.0;  // (sum n^2 P-hat) / (sum f_t) over the +-1 sigma box
};

LltBarrierResult llt_barrier(const CramerProfile& profile, int n, double t, std::int64_t a,
                             double q_a);

/// Bridge slice at fixed endpoint x against q(0) qhat(x) f_1(0, .).
struct LltBridgeResult {
    double peak_ratio = 0.0;   // box ratio of n^2 P-hat to f_1(0,.) at the peak
    double prediction = 0.0;   // q0_qhat supplied by the caller
    double relative_gap = 0.0; // |peak_ratio - prediction| / prediction
};

LltBridgeResult llt_bridge(const CramerProfile& profile, int n, std::int64_t x, double q0_qhat);

// ---------------------------------------------------------------------------

struct ZeroMeanOptions {
    std::int64_t a_max = 3000;
    std::int64_t s_max = 256;
    int tau_n_max = 4096;
    std::int64_t tau_s_max = 1024;
    int cond_n = 300;
    std::int64_t cond_paths = 40'000'000;
    std::uint64_t seed = 20240901;
    int replicas = 8;
    double z = 3.0;
};

/// Driftless pipeline: C0 from the duration law, Gbar from conditioned
/// excursions, the singular integral, and the comparison against the exact
/// scaled tail.
struct ZeroMeanCheck {
    double sigma = 0.0;
    double c0 = 0.0;            // top-quartile average of n^{3/2} P(tau = n)
    double gbar_integral = 0.0; // int z^{-2/3} Gbar(z) dz, empirical quadrature
    EstimatorReport third_root_moment;
    double predicted = 0.0;     // (2 C0 sigma^{1/3} / 3) * gbar_integral
    double predicted_ci = 0.0;  // propagated MC half-width
    std::int64_t x_top = 0;
    TailBracket tail_at_top;
    double observed = 0.0;      // x^{1/3} P(A_tau > x) at x_top
    double acceptance_rate = 0.0;

    double relative_gap() const;
    bool pass(double extra_tol = 0.10) const;
};

ZeroMeanCheck zero_mean_check(const LatticePmf& pmf_zero_mean, const ZeroMeanOptions& options);

} // namespace excursion
