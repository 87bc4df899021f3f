#pragma once

#include <cmath>
#include <functional>

namespace excursion {

/// Compensated accumulator (Kahan). Keeps long probability sums near 1 ulp.
class KahanSum {
  public:
    void add(double x) {
        const double y = x - c_;
        const double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

  private:
    double s_ = 0.0;
    double c_ = 0.0;
};

/// Adaptive Simpson quadrature with absolute tolerance.
/// The integrands used here are smooth (entire mgfs), so plain bisection
/// refinement with the standard 15x error estimate is enough.
double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double abs_tol, int max_depth = 40);

struct QuadratureResult {
    double value = 0.0;
    double achieved_tol = 0.0;
    bool converged = true;
};

QuadratureResult adaptive_simpson_checked(const std::function<double(double)>& f, double a,
                                          double b, double abs_tol, int max_depth = 40);

/// Standard normal CDF.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

} // namespace excursion
