#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "excursion/pmf.hpp"
#include "excursion/profile.hpp"

namespace excursion {

enum class Precision { Double, DoubleDouble };

struct DpCaps {
    std::int64_t a_max = 2000;
    std::int64_t s_max = 96;
    std::int64_t n_max = 0;      // 0: defaults to a_max (drains every path)
    double alive_atom = 1e-22;   // stop early once alive mass falls below
    double alive_budget = 1e-12; // CapsTooSmall if unresolved mass exceeds this
};

/// Exact joint law P(A_tau = a, tau = n + 1) under the original measure,
/// computed by a forward DP over alive states (height >= 1, area <= a_max).
/// Mass leaving the caps is never dropped silently: it lands in one of the
/// overflow buckets below and every reported probability carries a bracket.
class ExcursionTable {
  public:
    /// P(A_tau = a, tau = n + 1); zero outside the stored trapezoid.
    double stopped(std::int64_t n, std::int64_t a) const;

    std::int64_t rows() const { return static_cast<std::int64_t>(rows_.size()); }
    std::int64_t row_lo(std::int64_t n) const { return n == 0 ? 0 : n; }
    std::span<const double> row(std::int64_t n) const;

    const LatticePmf& pmf() const { return pmf_; }
    const DpCaps& caps() const { return caps_; }

    double total_stopped_mass() const { return total_stopped_; }
    /// Paths whose area passed a_max; their final area certainly exceeds a_max.
    double overflow_area() const { return overflow_area_; }
    /// Paths whose height passed s_max with area still inside the cap.
    double overflow_height() const { return overflow_height_; }
    /// True when a path at height s_max+1 is forced (max downward step) to
    /// accumulate more than a_max of area before it can die.
    bool height_overflow_is_tail_certain() const { return height_overflow_certain_; }
    double alive_mass_at_caps() const { return alive_at_caps_; }

    /// 1 - (stopped + overflows + alive); conservation check.
    double conservation_residual() const;

    friend ExcursionTable excursion_law(const LatticePmf&, const DpCaps&, Precision);
    friend class TableCodec;

  private:
    explicit ExcursionTable(LatticePmf pmf) : pmf_(std::move(pmf)) {}

    LatticePmf pmf_;
    DpCaps caps_;
    std::vector<std::vector<double>> rows_; // row n: a in [row_lo(n), a_max]
    double total_stopped_ = 0.0;
    double overflow_area_ = 0.0;
    double overflow_height_ = 0.0;
    bool height_overflow_certain_ = false;
    double alive_at_caps_ = 0.0;
};

ExcursionTable excursion_law(const LatticePmf& pmf, const DpCaps& caps,
                             Precision precision = Precision::Double);

/// P(A_tau = a) for a = 0..a_max, summed over durations.
std::vector<double> area_marginal(const ExcursionTable& table);

struct TailBracket {
    double lower = 0.0; // provably accounted mass with area >= x
    double upper = 0.0; // lower + mass whose area is unresolved
    double mid() const { return 0.5 * (lower + upper); }
};

/// P(A_tau >= x) with exact truncation brackets.
TailBracket area_tail(const ExcursionTable& table, std::int64_t x);

/// P(tau = k | A_tau = x) as a dense vector indexed from k_min.
struct ConditionalTau {
    std::int64_t k_min = 0;
    std::vector<double> prob;
    double mean() const;
    double variance() const;
};

ConditionalTau conditional_tau(const ExcursionTable& table, std::int64_t x);

/// Duration law P(tau = n), n = 1..n_max, from a height-only DP (no area cap).
struct TauLaw {
    std::vector<double> prob; // prob[n-1] = P(tau = n)
    double alive_mass = 0.0;  // P(tau > n_max), minus the height overflow below
    double overflow_height = 0.0;
};

TauLaw tau_law(const LatticePmf& pmf, int n_max, std::int64_t s_max);

/// P(min_{k<=K} S_k > -a) for the walk with the given step law, plus an
/// exponential-Chebyshev bound on the mass that dips after K. The infinite
/// horizon survival constant lies in [value - tail_bias, value].
struct SurvivalEstimate {
    double value = 0.0;
    double tail_bias = 0.0;
    int horizon = 0;
    double lower() const { return value - tail_bias; }
};

SurvivalEstimate survival_dp(const LatticePmf& step, std::int64_t a, int K);

// ---------------------------------------------------------------------------
// Inhomogeneous (scheduled-tilt) layer DP

struct TiltedCaps {
    std::int64_t s_min = 0, s_max = 0;
    std::int64_t y_min = 0, y_max = 0;
};

/// Window covering mean +- width_sigmas std of (S_m, A_m) under the given
/// per-step laws, clipped at the barrier.
TiltedCaps suggest_tilted_caps(const std::vector<LatticePmf>& steps,
                               std::optional<std::int64_t> barrier, double width_sigmas = 10.0);

/// Joint table P(S_m = s, A_m = y, min_{k<=m} S_k > -barrier) for independent
/// steps with the supplied per-step laws (identical laws give the homogeneous
/// case, scheduled tilts the transformed measure).
class LayerTable {
  public:
    double at(std::int64_t s, std::int64_t y) const;
    const TiltedCaps& caps() const { return caps_; }
    int steps() const { return m_; }
    std::optional<std::int64_t> barrier() const { return barrier_; }

    double mass() const { return mass_; }          // total retained
    double killed() const { return killed_; }      // barrier-absorbed
    double overflow() const { return overflow_; }  // left the window

    friend LayerTable layer_dp(const std::vector<LatticePmf>&, std::optional<std::int64_t>,
                               const TiltedCaps&);

  private:
    LayerTable() = default;
    std::int64_t index(std::int64_t s, std::int64_t y) const;

    TiltedCaps caps_;
    int m_ = 0;
    std::optional<std::int64_t> barrier_;
    std::int64_t width_ = 0;
    std::vector<double> table_;
    double mass_ = 0.0, killed_ = 0.0, overflow_ = 0.0;
};

LayerTable layer_dp(const std::vector<LatticePmf>& steps, std::optional<std::int64_t> barrier,
                    const TiltedCaps& caps);

/// Laws tilt(pmf, u_{n,j}) for j = 1..m; m = floor(n t).
std::vector<LatticePmf> scheduled_steps(const LatticePmf& pmf, double lambda, int n, int m);

/// P-hat(S_m = s, A_m = y, min <= m above -barrier) for m = floor(n t) steps of
/// the n-horizon schedule. Caps auto-suggested when not supplied.
LayerTable tilted_layer(const CramerProfile& profile, int n, double t,
                        std::optional<std::int64_t> barrier,
                        std::optional<TiltedCaps> caps = std::nullopt);

/// Same DP under the original measure (zero tilt), barrier 0 giving tau > m.
LayerTable original_layer(const LatticePmf& pmf, int m, std::optional<std::int64_t> barrier,
                          std::optional<TiltedCaps> caps = std::nullopt);

/// sum_j log phi(u_{n,j}) over the full horizon.
double log_phi_product(const LatticePmf& pmf, double lambda, int n);

/// Both sides of the change-of-measure identity at one (x, y):
///   P(A_n = x, S_n = y, tau > n) = e^{-lambda x / n} prod_j phi(u_{n,j})
///                                  P-hat(A_n = x, S_n = y, tau > n).
class MeasureChangeCheck {
  public:
    MeasureChangeCheck(const CramerProfile& profile, int n);

    struct Sample {
        double lhs = 0.0;
        double rhs = 0.0;
        double relative_gap = 0.0;
    };

    Sample at(std::int64_t x, std::int64_t y) const; // x: area, y: endpoint
    /// Max relative gap over all (x, y) with lhs >= mass_floor.
    double max_relative_gap(double mass_floor) const;
    /// Sum of rhs over all (x, y): reproduces P(tau > n).
    double rhs_survival() const;
    double lhs_survival() const;

  private:
    int n_;
    double weight_log_; // log prod phi(u_{n,j})
    double lambda_;
    LayerTable original_;
    LayerTable tilted_;
};

MeasureChangeCheck::Sample change_of_measure_identity(const CramerProfile& profile, int n,
                                                      std::int64_t x, std::int64_t y);

} // namespace excursion
