#pragma once

#include <vector>

#include "excursion/pmf.hpp"

namespace excursion {

/// Everything derived analytically from one negative-drift pmf:
/// the root lambda of phi(lambda) = 1, the fluid-path shape psi, its integral I,
/// the rate theta = 2 lambda sqrt(I), the tilted variance profile sigma^2(u),
/// and the reconstructed duration-CLT variance factor delta2.
///
/// Immutable after build_profile; cheap to copy, safe to share.
struct CramerProfile {
    explicit CramerProfile(LatticePmf p) : pmf(std::move(p)) {}

    LatticePmf pmf;
    double lambda = 0.0;
    double I = 0.0;     // integral of psi over [0,1]
    double theta = 0.0; // 2 lambda sqrt(I)
    double V = 0.0;     // integral of sigma^2(u) (1-u)^2
    double v_cond = 0.0; // conditional variance of the area coordinate given end value 0
    double delta2 = 0.0;
    double quadrature_tol = 1e-10;
    std::vector<double> psi_grid;    // uniform grid on [0,1], psi_grid.size() points
    std::vector<double> sigma2_grid; // same grid

    double psi(double u) const;
    double psi_integral(double t) const; // integral of psi over [0,t]
    double sigma2(double u) const;
};

/// Unique positive root of phi(t) = 1. Throws NoRootError when the drift is
/// non-negative or the support has no positive offset.
double cramer_root(const LatticePmf& pmf);

/// Builds the full profile; grid_size controls the tabulated psi/sigma2 grids.
CramerProfile build_profile(const LatticePmf& pmf, double quadrature_tol = 1e-10,
                            std::size_t grid_size = 513);

/// (I, theta) recomputed by quadrature at the profile's tolerance.
std::pair<double, double> area_rate(const CramerProfile& profile);

/// g(n) = sum_j log phi(u_{n,j}) + lambda I n; O(1/n) by Euler-Maclaurin.
double euler_gap(const CramerProfile& profile, int n);

/// Same sum carried in 80-bit arithmetic; precision-escalation cross-check.
long double euler_gap_extended(const CramerProfile& profile, int n);

struct SaddleInfo {
    double t0 = 0.0;       // sqrt(x / I)
    std::int64_t n_minus = 0; // floor(t0)
    std::int64_t n_plus = 0;  // n_minus + 1
};

SaddleInfo saddle(const CramerProfile& profile, double x);

struct ChebyshevBound {
    double bound = 0.0;           // exp(sup_n |g(n)|) * (truncated series + geometric tail)
    double series = 0.0;          // sum over n of exp(-lambda x / n - lambda I n)
    double gap_constant = 0.0;    // exp(sup_n |g(n)|)
    double series_tail_bound = 0.0;
};

/// sup over all n >= 1 of |g(n)|: a scan up to n_scan plus the Euler-Maclaurin
/// remainder envelope lambda^2 k_max^2 / (12 n) beyond it.
double euler_gap_sup(const CramerProfile& profile, int n_scan = 256);

/// Explicit upper bound for P(A_tau >= x) via the exponential Chebyshev chain.
/// Pass a precomputed exp(sup |g|) as gap_constant to amortize grid sweeps.
ChebyshevBound chebyshev_bound(const CramerProfile& profile, double x,
                               double gap_constant = 0.0);

/// C such that bound(x) <= C x^{1/4} e^{-theta sqrt(x)} on the given grid,
/// fitted as the max ratio.
double chebyshev_envelope_constant(const CramerProfile& profile, const std::vector<double>& xs);

/// Variance factor of the conditional duration CLT: Var(tau | A_tau = x) ~ delta2 sqrt(x).
/// Reconstructed from the Gaussian exponents of the duration analysis; reported
/// values must be validated against the exact table before being trusted.
double delta_squared(const CramerProfile& profile);

} // namespace excursion
