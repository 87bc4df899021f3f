#pragma once

#include <functional>

#include "excursion/errors.hpp"
#include "excursion/profile.hpp"

namespace excursion {

/// Symmetric 2x2 covariance matrix.
struct Matrix2 {
    double a11 = 0.0;
    double a12 = 0.0;
    double a22 = 0.0;

    double det() const { return a11 * a22 - a12 * a12; }
    bool positive_definite() const { return a11 > 0.0 && det() > 0.0; }
    /// Conditional variance of the second coordinate given the first.
    double conditional_variance() const { return a22 - a12 * a12 / a11; }
};

/// Centered bivariate Gaussian with a fixed covariance; evaluate with operator().
class FrozenGaussian {
  public:
    explicit FrozenGaussian(const Matrix2& cov);

    double operator()(double x, double y) const;
    const Matrix2& covariance() const { return cov_; }
    double peak() const { return norm_; } // density at the origin

  private:
    Matrix2 cov_;
    double inv11_ = 0.0, inv12_ = 0.0, inv22_ = 0.0;
    double norm_ = 0.0;
};

/// Covariances and densities of the limiting pair (walk endpoint, walk area)
/// under the scheduled tilt, as functions of the time fraction t.
class GaussianBridgeKernel {
  public:
    explicit GaussianBridgeKernel(const CramerProfile& profile);
    /// For synthetic variance profiles in tests.
    GaussianBridgeKernel(std::function<double(double)> sigma2_fn, double quadrature_tol);

    /// Sigma_t with entries (int sigma^2, int sigma^2 (t-u); ..., int sigma^2 (t-u)^2).
    Matrix2 covariance(double t) const;
    /// Reversed-time covariance with weights (t - 1 + u) over [1-t, 1].
    Matrix2 reversed(double t) const;

    FrozenGaussian bridge(double t) const { return FrozenGaussian(covariance(t)); }
    FrozenGaussian reversed_bridge(double t) const { return FrozenGaussian(reversed(t)); }

  private:
    std::function<double(double)> sigma2_;
    double tol_ = 1e-10;
};

/// Free functions mirroring the kernel members.
Matrix2 covariance_matrix(const GaussianBridgeKernel& kernel, double t);
Matrix2 reversed_kernel(const GaussianBridgeKernel& kernel, double t);
double bridge_density(const GaussianBridgeKernel& kernel, double t, double x, double y);

} // namespace excursion
