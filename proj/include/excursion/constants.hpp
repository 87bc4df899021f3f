#pragma once

#include <cstdint>
#include <vector>

#include "excursion/gaussian.hpp"
#include "excursion/profile.hpp"

namespace excursion {

/// Prefactor assembly for the local asymptotics P(A_tau = x) ~ kappa x^{-3/4} e^{-theta sqrt(x)}.
///
/// q0 and qhat are survival constants of the two limiting boundary walks,
/// supplied by the exact barrier DP or the Monte Carlo estimators. kappa is a
/// reconstruction from proof ingredients, not a printed formula, so it carries
/// an explicit validation flag that only the table-based fit may set.
struct ConstantAssembly {
    double q0 = 0.0;                 // survival constant of the fully tilted walk, barrier 0
    std::vector<double> qhat_table;  // qhat(y) for y = 1..y_max
    double Q = 0.0;                  // q0 * sum_y qhat(y) P(X <= -y)
    double qhat_tail_bound = 0.0;    // <= sum_{y > y_max} P(X <= -y), zero for finite support
    double kappa = 0.0;
    bool validated_against_table = false;
};

/// Q and kappa from supplied survival constants. y indexes qhat_table from 1.
/// Throws TruncationError when the qhat-series tail bound exceeds 1% of the
/// partial sum.
ConstantAssembly assemble_constants(const CramerProfile& profile, double q0,
                                    const std::vector<double>& qhat_table);

/// The Gaussian integral entering kappa: int e^{-lambda I u^2} f_1(0, -2 I u) du over R.
double kappa_gaussian_integral(const CramerProfile& profile);

} // namespace excursion
