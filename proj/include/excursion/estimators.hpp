#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "excursion/exact.hpp"
#include "excursion/pmf.hpp"
#include "excursion/profile.hpp"

namespace excursion {

/// A Monte Carlo estimate with its replica lineage. estimate is the mean of
/// the replica means, std_error their sample deviation over sqrt(replicas).
/// Reports keep the raw replica means so that merging is exact: merge
/// concatenates them and recomputes the statistics, which makes the operation
/// associative by construction.
struct EstimatorReport {
    double estimate = 0.0;
    double std_error = 0.0;
    std::int64_t replicas = 0;
    std::uint64_t seed = 0;
    std::int64_t stream_count = 0;
    std::string method;
    double z = 3.0; // CI half-width multiplier recorded with the estimate
    double truncation_bracket = 0.0; // window / horizon bias bound, when applicable
    std::vector<double> replica_means;

    double ci_lo() const { return estimate - z * std_error; }
    double ci_hi() const { return estimate + z * std_error; }
};

EstimatorReport make_report(std::string method, std::uint64_t seed, std::int64_t stream_count,
                            std::vector<double> replica_means, double z = 3.0);

/// Replica-weighted combination; associative because it concatenates lineages.
EstimatorReport merge(const EstimatorReport& a, const EstimatorReport& b);

/// One trajectory drawn under the scheduled tilt, with its log-domain
/// importance weight; the weight is recomputable from the path itself.
struct PathSample {
    std::vector<std::int64_t> increments;
    std::int64_t endpoint = 0;     // S after the drawn steps
    std::int64_t area = 0;         // A over the surviving prefix
    std::int64_t tau = 0;          // first nonpositive time, 0 if it never stopped
    double log_weight = 0.0;       // -lambda A_n / n + sum_j log phi(u_{n,j})
};

/// Draws one full-horizon path under the n-schedule; diagnostic surface.
PathSample sample_tilted_path(const CramerProfile& profile, int n, std::uint64_t seed,
                              std::uint64_t replica = 0);

// ---------------------------------------------------------------------------

struct NaiveQuery {
    enum class Kind { PointMass, TailMass, MeanTau, MeanArea };
    Kind kind = Kind::PointMass;
    std::int64_t x = 0;
};

/// Plain simulation of complete excursions; one report per query.
/// Requires negative drift so tau has finite expectation.
std::vector<EstimatorReport> naive_excursion(const LatticePmf& pmf,
                                             const std::vector<NaiveQuery>& queries,
                                             std::int64_t paths, std::uint64_t seed,
                                             int replicas = 32);

/// Horizons around the saddle t0(x) carrying all but a negligible share of
/// P(A_tau = x); sigmas scales the width in units of the duration-CLT std.
std::vector<int> default_window(const CramerProfile& profile, std::int64_t x,
                                double sigmas = 6.0);

/// Importance-sampling estimate of sum_{n in window} P(A_n = x, tau = n+1)
/// under the scheduled tilt, with the exact absorption factor folded in.
/// Throws WindowError when the out-of-window bound exceeds 10% of the estimate.
EstimatorReport is_local(const CramerProfile& profile, std::int64_t x,
                         const std::vector<int>& window, std::int64_t paths_per_n,
                         std::uint64_t seed, int replicas = 32);

/// Same sampler scoring the tail event A_n >= x with the path-dependent weight.
EstimatorReport is_tail(const CramerProfile& profile, std::int64_t x,
                        const std::vector<int>& window, std::int64_t paths_per_n,
                        std::uint64_t seed, int replicas = 32);

/// Rigorous bound on sum of P(A_n = x, tau = n+1) over horizons outside the
/// window, from the per-horizon exponential Chebyshev estimate.
double window_truncation_bound(const CramerProfile& profile, std::int64_t x,
                               const std::vector<int>& window);

/// MC estimate of P(min_{k<=K} walk > -a) for the supplied step law, with the
/// Chernoff bias bracket on later dips. Throws HorizonError when the bracket
/// exceeds 1% of the estimate. Pass tilt(pmf, lambda) for the forward constant
/// q(a); use survival_qhat for the reversed one.
EstimatorReport survival_q(const LatticePmf& step, std::int64_t a, int K, std::int64_t paths,
                           std::uint64_t seed, int replicas = 32);

/// Reversed-time variant: the limiting increments are -X under the original
/// law, so this negates the supplied pmf internally.
EstimatorReport survival_qhat(const LatticePmf& pmf, std::int64_t a, int K, std::int64_t paths,
                              std::uint64_t seed, int replicas = 32);

// ---------------------------------------------------------------------------

/// Conditioned zero-mean excursions by rejection: resample until tau = n + 1.
struct ConditionedAreaSample {
    std::vector<double> scaled_areas; // A_n / (sigma n^{3/2}), accepted paths, replica order
    std::int64_t paths_tried = 0;
    std::int64_t accepted = 0;
    double acceptance_rate = 0.0;
    EstimatorReport mean_scaled_area;  // estimates E int e(t) dt as n grows
    EstimatorReport third_root_moment; // E (scaled area)^{1/3}

    /// Empirical survival function Gbar(z) of the scaled area.
    double gbar(double z) const;
    /// Dvoretzky-Kiefer-Wolfowitz uniform half-width at confidence 1 - alpha.
    double dkw_band(double alpha = 0.05) const;
};

ConditionedAreaSample conditioned_excursion_area(const LatticePmf& pmf_zero_mean, int n,
                                                 std::int64_t paths, std::uint64_t seed,
                                                 int replicas = 8);

/// 95th percentile over sampled tilted paths of sup_k |S_k / n - psi(k/n)|;
/// the functional-LLN diagnostic.
double tilted_lln_p95(const CramerProfile& profile, int n, std::int64_t paths,
                      std::uint64_t seed);

} // namespace excursion
