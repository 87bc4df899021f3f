#include "excursion/profile.hpp"

#include <algorithm>
#include <cmath>

#include "excursion/gaussian.hpp"
#include "excursion/numeric.hpp"

namespace excursion {

namespace {

double psi_of(const LatticePmf& pmf, double lambda, double u) {
    return -std::log(mgf(pmf, lambda * (1.0 - u))) / lambda;
}

double sigma2_of(const LatticePmf& pmf, double lambda, double u) {
    return tilted_variance(pmf, lambda * (1.0 - u));
}

} // namespace

double cramer_root(const LatticePmf& pmf) {
    if (!pmf.has_positive_offset()) {
        throw NoRootError("NoRoot: support has no positive offset, phi is nonincreasing");
    }
    if (!(pmf.mean() < 0.0)) {
        throw NoRootError("NoRoot: mean is not negative, the positive root degenerates to 0");
    }
    // phi is convex with phi(0) = 1 and phi'(0) < 0, so the positive root is unique.
    const double lo0 = 1e-8;
    double hi = 1.0;
    while (mgf(pmf, hi) <= 1.0) {
        hi *= 2.0;
        if (hi > 1e9) throw NoRootError("NoRoot: bracketing failed");
    }
    double lo = lo0;
    for (int it = 0; it < 200 && (hi - lo) > 1e-13; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mgf(pmf, mid) > 1.0) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    double root = 0.5 * (lo + hi);
    // one Newton polish
    const double f = mgf(pmf, root) - 1.0;
    const double fp = mgf_derivatives(pmf, root).first;
    if (fp != 0.0) {
        const double polished = root - f / fp;
        if (polished > 0.0 && std::isfinite(polished)) root = polished;
    }
    return root;
}

double CramerProfile::psi(double u) const { return psi_of(pmf, lambda, u); }

double CramerProfile::sigma2(double u) const { return sigma2_of(pmf, lambda, u); }

double CramerProfile::psi_integral(double t) const {
    if (t == 0.0) return 0.0;
    return adaptive_simpson([this](double u) { return psi(u); }, 0.0, t, quadrature_tol);
}

CramerProfile build_profile(const LatticePmf& pmf, double quadrature_tol,
                            std::size_t grid_size) {
    const auto report = validate(pmf);
    if (!report.valid) {
        std::string msg = "build_profile: pmf fails standing assumptions:";
        for (const auto& issue : report.issues) msg += " " + issue + ";";
        throw ValidationError(msg);
    }
    CramerProfile p(pmf);
    p.quadrature_tol = quadrature_tol;
    p.lambda = cramer_root(pmf);
    if (std::fabs(mgf(pmf, p.lambda) - 1.0) > 1e-10) {
        throw NoRootError("build_profile: root residual exceeds 1e-10");
    }

    auto quad = adaptive_simpson_checked(
        [&](double u) { return psi_of(pmf, p.lambda, u); }, 0.0, 1.0, quadrature_tol);
    p.I = quad.value;
    p.theta = 2.0 * p.lambda * std::sqrt(p.I);

    p.V = adaptive_simpson(
        [&](double u) {
            const double w = 1.0 - u;
            return sigma2_of(pmf, p.lambda, u) * w * w;
        },
        0.0, 1.0, quadrature_tol);

    if (grid_size >= 2) {
        p.psi_grid.resize(grid_size);
        p.sigma2_grid.resize(grid_size);
        for (std::size_t i = 0; i < grid_size; ++i) {
            const double u = static_cast<double>(i) / static_cast<double>(grid_size - 1);
            p.psi_grid[i] = psi_of(pmf, p.lambda, u);
            p.sigma2_grid[i] = sigma2_of(pmf, p.lambda, u);
        }
        // endpoints are exact zeros of psi by phi(lambda) = phi(0) = 1
        p.psi_grid.front() = 0.0;
        p.psi_grid.back() = 0.0;
        for (double v : p.sigma2_grid) {
            if (!(v > 0.0)) {
                throw SingularCovarianceError("build_profile: degenerate tilted variance");
            }
        }
    }

    GaussianBridgeKernel kernel(p);
    const Matrix2 cov1 = kernel.covariance(1.0);
    if (!cov1.positive_definite()) {
        throw SingularCovarianceError("build_profile: Sigma_1 is not positive definite");
    }
    p.v_cond = cov1.conditional_variance();
    p.delta2 = 1.0 / (2.0 * std::pow(p.I, 1.5) * (p.lambda + 2.0 * p.I / p.v_cond));
    return p;
}

std::pair<double, double> area_rate(const CramerProfile& profile) {
    auto quad = adaptive_simpson_checked([&](double u) { return profile.psi(u); }, 0.0, 1.0,
                                         profile.quadrature_tol);
    if (!quad.converged) {
        throw Error("area_rate: quadrature did not converge, achieved tolerance " +
                    std::to_string(quad.achieved_tol));
    }
    return {quad.value, 2.0 * profile.lambda * std::sqrt(quad.value)};
}

double euler_gap(const CramerProfile& profile, int n) {
    if (n < 1) throw ValidationError("euler_gap: n must be >= 1");
    KahanSum sum;
    for (int j = 1; j <= n; ++j) {
        const double u = profile.lambda * static_cast<double>(n - j + 1) / static_cast<double>(n);
        sum.add(std::log(mgf(profile.pmf, u)));
    }
    return sum.value() + profile.lambda * profile.I * static_cast<double>(n);
}

long double euler_gap_extended(const CramerProfile& profile, int n) {
    if (n < 1) throw ValidationError("euler_gap_extended: n must be >= 1");
    long double sum = 0.0L;
    for (int j = 1; j <= n; ++j) {
        const long double u = static_cast<long double>(profile.lambda) *
                              static_cast<long double>(n - j + 1) / static_cast<long double>(n);
        long double phi = 0.0L;
        for (const auto& [k, p] : profile.pmf.entries()) {
            phi += static_cast<long double>(p) * std::exp(u * static_cast<long double>(k));
        }
        sum += std::log(phi);
    }
    return sum + static_cast<long double>(profile.lambda) * static_cast<long double>(profile.I) *
                     static_cast<long double>(n);
}

SaddleInfo saddle(const CramerProfile& profile, double x) {
    if (!(x > 0.0)) throw ValidationError("saddle: x must be positive");
    SaddleInfo s;
    s.t0 = std::sqrt(x / profile.I);
    s.n_minus = static_cast<std::int64_t>(std::floor(s.t0));
    s.n_plus = s.n_minus + 1;
    return s;
}

double euler_gap_sup(const CramerProfile& profile, int n_scan) {
    double sup = 0.0;
    for (int n = 1; n <= n_scan; ++n) {
        sup = std::max(sup, std::fabs(euler_gap(profile, n)));
    }
    // Euler-Maclaurin remainder: |g(n)| <= lambda sup|psi''| / (12 n), and
    // |psi''| = lambda sigma^2(u) <= lambda k_max^2, covering every n > n_scan.
    const double k_max = static_cast<double>(
        std::max(profile.pmf.max_offset(), -profile.pmf.min_offset()));
    const double tail = profile.lambda * profile.lambda * k_max * k_max /
                        (12.0 * static_cast<double>(n_scan + 1));
    return std::max(sup, tail);
}

ChebyshevBound chebyshev_bound(const CramerProfile& profile, double x, double gap_constant) {
    if (!(x > 0.0)) throw ValidationError("chebyshev_bound: x must be positive");
    ChebyshevBound out;
    const double lam = profile.lambda;
    const double rate = lam * profile.I;

    const double t0 = std::sqrt(x / profile.I);
    KahanSum series;
    double head = 0.0;
    int n = 1;
    for (;; ++n) {
        const double term = std::exp(-lam * x / n - rate * n);
        series.add(term);
        head = std::max(head, term);
        if (n > t0 && term < 1e-18 * head) break;
        if (n > 100'000'000) break;
    }
    // geometric bound on the discarded tail: exp(-lambda x / m) <= 1 for m > n
    out.series_tail_bound = std::exp(-rate * (n + 1)) / (1.0 - std::exp(-rate));
    out.series = series.value();

    // the per-n products differ from exp(-lambda I n) by exp(g(n))
    out.gap_constant = gap_constant > 0.0 ? gap_constant : std::exp(euler_gap_sup(profile));
    out.bound = out.gap_constant * (out.series + out.series_tail_bound);
    return out;
}

double chebyshev_envelope_constant(const CramerProfile& profile, const std::vector<double>& xs) {
    const double gap_constant = std::exp(euler_gap_sup(profile));
    double c = 0.0;
    for (double x : xs) {
        const double b = chebyshev_bound(profile, x, gap_constant).bound;
        const double envelope = std::pow(x, 0.25) * std::exp(-profile.theta * std::sqrt(x));
        c = std::max(c, b / envelope);
    }
    return c;
}

double delta_squared(const CramerProfile& profile) {
    return 1.0 /
           (2.0 * std::pow(profile.I, 1.5) * (profile.lambda + 2.0 * profile.I / profile.v_cond));
}

} // namespace excursion
