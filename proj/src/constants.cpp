#include "excursion/constants.hpp"

#include <cmath>

#include "excursion/numeric.hpp"

namespace excursion {

double kappa_gaussian_integral(const CramerProfile& profile) {
    GaussianBridgeKernel kernel(profile);
    const FrozenGaussian f1 = kernel.bridge(1.0);
    const double lam_i = profile.lambda * profile.I;
    // integrand std dev in u: the tighter of the two Gaussian factors
    const double width = 1.0 / std::sqrt(lam_i + 2.0 * profile.I * profile.I / profile.v_cond);
    const double cut = 12.0 * width;
    return adaptive_simpson(
        [&](double u) { return std::exp(-lam_i * u * u) * f1(0.0, -2.0 * profile.I * u); }, -cut,
        cut, profile.quadrature_tol);
}

ConstantAssembly assemble_constants(const CramerProfile& profile, double q0,
                                    const std::vector<double>& qhat_table) {
    if (!(q0 > 0.0) || q0 > 1.0) throw ValidationError("assemble_constants: q0 outside (0,1]");
    ConstantAssembly out;
    out.q0 = q0;
    out.qhat_table = qhat_table;

    // finite support: P(X <= -y) = 0 beyond y_max = -min offset, so the series is exact
    const auto y_max = static_cast<std::int64_t>(qhat_table.size());
    double series = 0.0;
    for (std::int64_t y = 1; y <= y_max; ++y) {
        series += qhat_table[static_cast<std::size_t>(y - 1)] * profile.pmf.cdf_leq(-y);
    }
    double tail = 0.0; // qhat <= 1
    for (std::int64_t y = y_max + 1; y <= -profile.pmf.min_offset(); ++y) {
        tail += profile.pmf.cdf_leq(-y);
    }
    out.qhat_tail_bound = tail;
    if (series > 0.0 && tail > 0.01 * series) {
        throw TruncationError("TruncationTooCoarse: qhat series tail bound exceeds 1%");
    }
    out.Q = q0 * series;
    out.kappa = out.Q * std::pow(profile.I, 0.75) * kappa_gaussian_integral(profile);
    return out;
}

} // namespace excursion
