#include "excursion/gaussian.hpp"

#include <cmath>
#include <numbers>

#include "excursion/numeric.hpp"

namespace excursion {

FrozenGaussian::FrozenGaussian(const Matrix2& cov) : cov_(cov) {
    const double det = cov.det();
    if (!(det > 0.0) || !(cov.a11 > 0.0)) {
        throw SingularCovarianceError("SingularCovariance: det Sigma <= 0");
    }
    inv11_ = cov.a22 / det;
    inv12_ = -cov.a12 / det;
    inv22_ = cov.a11 / det;
    norm_ = 1.0 / (2.0 * std::numbers::pi * std::sqrt(det));
}

double FrozenGaussian::operator()(double x, double y) const {
    const double q = x * (inv11_ * x + inv12_ * y) + y * (inv12_ * x + inv22_ * y);
    return norm_ * std::exp(-0.5 * q);
}

GaussianBridgeKernel::GaussianBridgeKernel(const CramerProfile& profile)
    : tol_(profile.quadrature_tol) {
    // capture what the closure needs by value; the kernel outlives the profile reference
    const LatticePmf pmf = profile.pmf;
    const double lambda = profile.lambda;
    sigma2_ = [pmf, lambda](double u) { return tilted_variance(pmf, lambda * (1.0 - u)); };
}

GaussianBridgeKernel::GaussianBridgeKernel(std::function<double(double)> sigma2_fn,
                                           double quadrature_tol)
    : sigma2_(std::move(sigma2_fn)), tol_(quadrature_tol) {}

Matrix2 GaussianBridgeKernel::covariance(double t) const {
    if (!(t > 0.0) || t > 1.0) throw ValidationError("covariance: t must lie in (0,1]");
    Matrix2 m;
    m.a11 = adaptive_simpson([&](double u) { return sigma2_(u); }, 0.0, t, tol_);
    m.a12 = adaptive_simpson([&](double u) { return sigma2_(u) * (t - u); }, 0.0, t, tol_);
    m.a22 =
        adaptive_simpson([&](double u) { return sigma2_(u) * (t - u) * (t - u); }, 0.0, t, tol_);
    return m;
}

Matrix2 GaussianBridgeKernel::reversed(double t) const {
    if (!(t > 0.0) || t > 1.0) throw ValidationError("reversed: t must lie in (0,1]");
    Matrix2 m;
    const double a = 1.0 - t;
    m.a11 = adaptive_simpson([&](double u) { return sigma2_(u); }, a, 1.0, tol_);
    m.a12 = adaptive_simpson([&](double u) { return sigma2_(u) * (t - 1.0 + u); }, a, 1.0, tol_);
    m.a22 = adaptive_simpson(
        [&](double u) {
            const double w = t - 1.0 + u;
            return sigma2_(u) * w * w;
        },
        a, 1.0, tol_);
    return m;
}

Matrix2 covariance_matrix(const GaussianBridgeKernel& kernel, double t) {
    return kernel.covariance(t);
}

Matrix2 reversed_kernel(const GaussianBridgeKernel& kernel, double t) { return kernel.reversed(t); }

double bridge_density(const GaussianBridgeKernel& kernel, double t, double x, double y) {
    return kernel.bridge(t)(x, y);
}

} // namespace excursion
