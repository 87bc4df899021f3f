#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "excursion/errors.hpp"

namespace excursion {

/// Probability mass function of an integer-valued increment X.
///
/// Entries are (offset, probability) pairs sorted by offset, all probabilities
/// strictly positive and summing to one within 1e-12. Construction validates;
/// instances are immutable afterwards and safe to share across threads.
class LatticePmf {
  public:
    static constexpr double kNormalizationTol = 1e-12;
    static constexpr std::int64_t kMaxAbsOffset = 1'000'000;

    using Entry = std::pair<std::int64_t, double>;

    explicit LatticePmf(std::vector<Entry> entries);

    const std::vector<Entry>& entries() const { return entries_; }
    std::size_t support_size() const { return entries_.size(); }
    std::int64_t min_offset() const { return entries_.front().first; }
    std::int64_t max_offset() const { return entries_.back().first; }

    double mean() const { return mean_; }
    double second_moment() const { return second_moment_; }
    double variance() const { return second_moment_ - mean_ * mean_; }

    /// P(X = k); zero for offsets outside the support.
    double prob_at(std::int64_t k) const;
    /// P(X <= k).
    double cdf_leq(std::int64_t k) const;
    /// E[X^-] = sum_{y>=1} P(X <= -y).
    double mean_negative_part() const;

    bool aperiodic() const { return aperiodic_; }
    bool has_positive_offset() const { return entries_.back().first > 0; }

    /// Law of -X.
    LatticePmf negated() const;

  private:
    std::vector<Entry> entries_;
    double mean_ = 0.0;
    double second_moment_ = 0.0;
    bool aperiodic_ = false;
};

struct ValidationReport {
    bool valid = false;
    double mean = 0.0;
    bool aperiodic = false;
    bool has_positive_offset = false;
    bool negative_drift = false;
    // Negative mean plus a positive offset guarantees a Cramer root for finite support.
    bool cramer_root_available = false;
    std::vector<std::string> issues;
};

/// Diagnostic checks of the standing assumptions; never throws.
ValidationReport validate(const LatticePmf& pmf);

/// Moment generating function phi(t) = E e^{tX}.
double mgf(const LatticePmf& pmf, double t);

/// (phi'(t), phi''(t)).
std::pair<double, double> mgf_derivatives(const LatticePmf& pmf, double t);

/// Exponentially tilted law p_k e^{uk} / phi(u).
LatticePmf tilt(const LatticePmf& pmf, double u);

/// Mean and variance of tilt(pmf, u) without materializing the tilted law.
double tilted_mean(const LatticePmf& pmf, double u);
double tilted_variance(const LatticePmf& pmf, double u);

/// Step-dependent tilt parameters u_{n,j} = lambda (n - j + 1) / n, j = 1..n.
struct TiltSchedule {
    int n = 0;
    double lambda = 0.0;
    std::vector<double> values;
};

TiltSchedule tilt_schedule(double lambda, int n);

} // namespace excursion
