#include "excursion/fit.hpp"

#include <algorithm>
#include <cmath>

#include "excursion/gaussian.hpp"
#include "excursion/numeric.hpp"

namespace excursion {

bool ConvergenceTrace::all_pass() const {
    return std::all_of(points.begin(), points.end(), [](const TracePoint& p) { return p.pass; });
}

KappaFit kappa_fit(const ExcursionTable& table, const CramerProfile& profile, double tolerance) {
    const auto marginal = area_marginal(table);
    const std::int64_t a_max = table.caps().a_max;
    const std::int64_t decade_lo = std::max<std::int64_t>(1, a_max / 10);

    KappaFit out;
    out.trace.name = "kappa_hat";
    out.trace.tolerance = tolerance;

    std::vector<double> top_values;
    for (std::int64_t x = 1; x <= a_max; ++x) {
        const double m = marginal[static_cast<std::size_t>(x)];
        if (m <= 0.0) continue;
        const double xs = static_cast<double>(x);
        const double k_hat = m * std::pow(xs, 0.75) * std::exp(profile.theta * std::sqrt(xs));
        out.trace.points.push_back({xs, k_hat, 0.0, 0.0, true});
        if (x >= decade_lo) top_values.push_back(k_hat);
    }
    if (top_values.empty()) return out;

    double mx = top_values.front(), mn = top_values.front();
    KahanSum mean;
    for (double v : top_values) {
        mx = std::max(mx, v);
        mn = std::min(mn, v);
        mean.add(v);
    }
    out.kappa_hat = mean.value() / static_cast<double>(top_values.size());
    out.top_decade_variation = (mx - mn) / out.kappa_hat;
    for (auto& p : out.trace.points) {
        p.target = out.kappa_hat;
        p.gap = std::fabs(p.value - p.target) / p.target;
        p.pass = p.x < static_cast<double>(decade_lo) || p.gap <= tolerance;
    }
    return out;
}

TailRatioFit tail_ratio(const ExcursionTable& table, const CramerProfile& profile,
                        double tolerance) {
    const auto marginal = area_marginal(table);
    const std::int64_t a_max = table.caps().a_max;

    // running strict tail P(A > x) accumulated from the top of the grid
    std::vector<double> strict_tail(static_cast<std::size_t>(a_max + 2), 0.0);
    {
        const TailBracket top = area_tail(table, a_max + 1);
        strict_tail[static_cast<std::size_t>(a_max + 1)] = top.mid();
        for (std::int64_t x = a_max; x >= 0; --x) {
            strict_tail[static_cast<std::size_t>(x)] =
                strict_tail[static_cast<std::size_t>(x + 1)] +
                marginal[static_cast<std::size_t>(x)];
        }
    }

    TailRatioFit out;
    out.trace.name = "tail_to_local_ratio";
    out.trace.tolerance = tolerance;
    for (std::int64_t x = 1; x <= a_max; ++x) {
        const double m = marginal[static_cast<std::size_t>(x)];
        if (m <= 0.0) continue;
        const double xs = static_cast<double>(x);
        const double denom = (2.0 / profile.theta) * std::sqrt(xs) * m;
        const double ratio = strict_tail[static_cast<std::size_t>(x + 1)] / denom;
        const double gap = std::fabs(ratio - 1.0);
        out.trace.points.push_back({xs, ratio, 1.0, gap, gap <= tolerance});
        out.ratio_top = ratio;
    }
    // only the top of the grid is expected to satisfy the tolerance
    for (auto& p : out.trace.points) {
        if (p.x < static_cast<double>(a_max) / 2.0) p.pass = true;
    }
    return out;
}

ChebCheck cheb_check(const ExcursionTable& table, const CramerProfile& profile,
                     const std::vector<std::int64_t>& xs) {
    ChebCheck out;
    out.trace.name = "chebyshev_domination";
    const double gap_constant = std::exp(euler_gap_sup(profile));
    for (std::int64_t x : xs) {
        const ChebyshevBound cb = chebyshev_bound(profile, static_cast<double>(x), gap_constant);
        const TailBracket tail = area_tail(table, x);
        const bool ok = cb.bound >= tail.upper;
        out.dominates = out.dominates && ok;
        out.trace.points.push_back(
            {static_cast<double>(x), tail.upper, cb.bound, tail.upper / cb.bound, ok});
        out.scaled_gap.push_back(tail.upper / cb.bound * std::sqrt(static_cast<double>(x)));
    }
    if (!xs.empty()) {
        const std::int64_t x_top = *std::max_element(xs.begin(), xs.end());
        double mx = 0.0, mn = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < xs.size(); ++i) {
            if (xs[i] >= x_top / 2) {
                mx = std::max(mx, out.scaled_gap[i]);
                mn = std::min(mn, out.scaled_gap[i]);
            }
        }
        out.scaled_gap_top_octave_spread = mn > 0.0 ? mx / mn : std::numeric_limits<double>::infinity();
    }
    return out;
}

DurationCltResult duration_clt(const ExcursionTable& table, const CramerProfile& profile,
                               std::int64_t x) {
    const ConditionalTau cond = conditional_tau(table, x);
    const double xs = static_cast<double>(x);
    const double mu = std::sqrt(xs / profile.I);
    const double var = profile.delta2 * std::sqrt(xs);
    const double sd = std::sqrt(var);

    const std::int64_t k_lo =
        std::min<std::int64_t>(cond.k_min, static_cast<std::int64_t>(std::floor(mu - 14.0 * sd)));
    const std::int64_t k_hi = std::max<std::int64_t>(
        cond.k_min + static_cast<std::int64_t>(cond.prob.size()) - 1,
        static_cast<std::int64_t>(std::ceil(mu + 14.0 * sd)));

    DurationCltResult out;
    // integrate the Gaussian over unit intervals centered at integers
    double tv = 0.0, sup = 0.0;
    for (std::int64_t k = k_lo; k <= k_hi; ++k) {
        const double hi = normal_cdf((static_cast<double>(k) + 0.5 - mu) / sd);
        const double lo = normal_cdf((static_cast<double>(k) - 0.5 - mu) / sd);
        const double pg = hi - lo;
        double pd = 0.0;
        if (k >= cond.k_min &&
            k < cond.k_min + static_cast<std::int64_t>(cond.prob.size())) {
            pd = cond.prob[static_cast<std::size_t>(k - cond.k_min)];
        }
        tv += std::fabs(pd - pg);
        sup = std::max(sup, std::pow(xs, 0.25) * std::fabs(pd - pg));
    }
    out.tv_distance = 0.5 * tv;
    out.sup_distance = sup;
    out.mean_dp = cond.mean();
    out.mean_target = mu;
    out.variance_dp = cond.variance();
    out.variance_target = var;
    return out;
}

ConvergenceTrace duration_clt_trace(const ExcursionTable& table, const CramerProfile& profile,
                                    const std::vector<std::int64_t>& xs, double tolerance) {
    ConvergenceTrace trace;
    trace.name = "duration_clt_tv";
    trace.tolerance = tolerance;
    for (std::int64_t x : xs) {
        const DurationCltResult r = duration_clt(table, profile, x);
        trace.points.push_back({static_cast<double>(x), r.tv_distance, 0.0, r.tv_distance,
                                r.tv_distance <= tolerance});
    }
    return trace;
}

namespace {

struct StdArgs {
    double n_pow2;
    double mean_s;
    double mean_y;
    double sqrt_n;
    double n_pow32;
};

StdArgs std_args(const CramerProfile& profile, int n, double t) {
    StdArgs a;
    a.n_pow2 = static_cast<double>(n) * static_cast<double>(n);
    a.mean_s = static_cast<double>(n) * profile.psi(t);
    a.mean_y = a.n_pow2 * profile.psi_integral(t);
    a.sqrt_n = std::sqrt(static_cast<double>(n));
    a.n_pow32 = std::pow(static_cast<double>(n), 1.5);
    return a;
}

} // namespace

double llt_free_error(const CramerProfile& profile, int n, double t) {
    const LayerTable layer = tilted_layer(profile, n, t, std::nullopt);
    const GaussianBridgeKernel kernel(profile);
    const FrozenGaussian f = kernel.bridge(t);
    const StdArgs args = std_args(profile, n, t);
    const auto& caps = layer.caps();

    double sup = 0.0;
    for (std::int64_t s = caps.s_min; s <= caps.s_max; ++s) {
        for (std::int64_t y = caps.y_min; y <= caps.y_max; ++y) {
            const double xs = (static_cast<double>(s) - args.mean_s) / args.sqrt_n;
            const double ys = (static_cast<double>(y) - args.mean_y) / args.n_pow32;
            const double err = std::fabs(args.n_pow2 * layer.at(s, y) - f(xs, ys));
            sup = std::max(sup, err);
        }
    }
    return sup;
}

LltBarrierResult llt_barrier(const CramerProfile& profile, int n, double t, std::int64_t a,
                             double q_a) {
    const LayerTable layer = tilted_layer(profile, n, t, a);
    const GaussianBridgeKernel kernel(profile);
    const FrozenGaussian f = kernel.bridge(t);
    const StdArgs args = std_args(profile, n, t);
    const auto& caps = layer.caps();
    const double sd_s = std::sqrt(f.covariance().a11);
    const double sd_y = std::sqrt(f.covariance().a22);

    LltBarrierResult out;
    KahanSum box_dp, box_f;
    for (std::int64_t s = caps.s_min; s <= caps.s_max; ++s) {
        for (std::int64_t y = caps.y_min; y <= caps.y_max; ++y) {
            const double xs = (static_cast<double>(s) - args.mean_s) / args.sqrt_n;
            const double ys = (static_cast<double>(y) - args.mean_y) / args.n_pow32;
            const double fv = f(xs, ys);
            const double dv = args.n_pow2 * layer.at(s, y);
            out.sup_error = std::max(out.sup_error, std::fabs(dv - q_a * fv));
            if (std::fabs(xs) <= sd_s && std::fabs(ys) <= sd_y) {
                box_dp.add(dv);
                box_f.add(fv);
            }
        }
    }
    out.peak_ratio = box_f.value() > 0.0 ? box_dp.value() / box_f.value() : 0.0;
    return out;
}

LltBridgeResult llt_bridge(const CramerProfile& profile, int n, std::int64_t x, double q0_qhat) {
    const LayerTable layer = tilted_layer(profile, n, 1.0, 0);
    const GaussianBridgeKernel kernel(profile);
    const FrozenGaussian f1 = kernel.bridge(1.0);
    const double n_pow2 = static_cast<double>(n) * static_cast<double>(n);
    const double n_pow32 = std::pow(static_cast<double>(n), 1.5);
    const double mean_y = n_pow2 * profile.I;
    const double sd_z = std::sqrt(f1.covariance().conditional_variance());
    const auto& caps = layer.caps();

    KahanSum box_dp, box_f;
    for (std::int64_t y = caps.y_min; y <= caps.y_max; ++y) {
        const double z = (static_cast<double>(y) - mean_y) / n_pow32;
        if (std::fabs(z) > sd_z) continue;
        box_dp.add(n_pow2 * layer.at(x, y));
        box_f.add(f1(0.0, z));
    }
    LltBridgeResult out;
    out.peak_ratio = box_f.value() > 0.0 ? box_dp.value() / box_f.value() : 0.0;
    out.prediction = q0_qhat;
    out.relative_gap =
        q0_qhat > 0.0 ? std::fabs(out.peak_ratio - q0_qhat) / q0_qhat : 0.0;
    return out;
}

// ---------------------------------------------------------------------------

double ZeroMeanCheck::relative_gap() const {
    return predicted > 0.0 ? std::fabs(observed - predicted) / predicted : 0.0;
}

bool ZeroMeanCheck::pass(double extra_tol) const {
    const double bracket = 0.5 * (tail_at_top.upper - tail_at_top.lower) *
                           std::cbrt(static_cast<double>(x_top));
    return std::fabs(observed - predicted) <= predicted_ci + extra_tol * predicted + bracket;
}

ZeroMeanCheck zero_mean_check(const LatticePmf& pmf_zero_mean, const ZeroMeanOptions& options) {
    if (std::fabs(pmf_zero_mean.mean()) > 1e-9) {
        throw ValidationError("zero_mean_check: pmf must have zero mean");
    }
    ZeroMeanCheck out;
    out.sigma = std::sqrt(pmf_zero_mean.variance());

    // (i) C0 from the duration law: average n^{3/2} P(tau = n) over the top quartile
    const TauLaw law = tau_law(pmf_zero_mean, options.tau_n_max, options.tau_s_max);
    {
        KahanSum acc;
        std::int64_t count = 0;
        for (int n = 3 * options.tau_n_max / 4; n <= options.tau_n_max; ++n) {
            acc.add(std::pow(static_cast<double>(n), 1.5) *
                    law.prob[static_cast<std::size_t>(n - 1)]);
            ++count;
        }
        out.c0 = acc.value() / static_cast<double>(count);
    }

    // (ii) Gbar from conditioned excursions
    const ConditionedAreaSample cond = conditioned_excursion_area(
        pmf_zero_mean, options.cond_n, options.cond_paths, options.seed, options.replicas);
    out.acceptance_rate = cond.acceptance_rate;
    out.third_root_moment = cond.third_root_moment;

    // (iii) int z^{-2/3} Gbar(z) dz: empirical step function, the piece below the
    // smallest sample handled exactly as int z^{-2/3} dz = 3 z^{1/3}
    {
        std::vector<double> zs = cond.scaled_areas;
        std::sort(zs.begin(), zs.end());
        const double n_samples = static_cast<double>(zs.size());
        KahanSum integral;
        integral.add(3.0 * std::cbrt(zs.front()));
        for (std::size_t i = 0; i + 1 < zs.size(); ++i) {
            const double gbar = (n_samples - static_cast<double>(i + 1)) / n_samples;
            integral.add(gbar * 3.0 * (std::cbrt(zs[i + 1]) - std::cbrt(zs[i])));
        }
        out.gbar_integral = integral.value();
    }

    const double front = 2.0 * out.c0 * std::cbrt(out.sigma) / 3.0;
    out.predicted = front * out.gbar_integral;
    // the integral is 3 E Z^{1/3}; propagate the replica SE of that moment
    out.predicted_ci = front * 3.0 * options.z * out.third_root_moment.std_error;

    // (iv) exact scaled tail at the top of the DP grid
    DpCaps caps;
    caps.a_max = options.a_max;
    caps.s_max = options.s_max;
    const ExcursionTable table = excursion_law(pmf_zero_mean, caps);
    out.x_top = options.a_max;
    out.tail_at_top = area_tail(table, out.x_top + 1); // strict: P(A_tau > x_top)
    out.observed = std::cbrt(static_cast<double>(out.x_top)) * out.tail_at_top.mid();
    return out;
}

} // namespace excursion
