#include "excursion/pmf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace excursion {

namespace {

std::int64_t gcd64(std::int64_t a, std::int64_t b) {
    while (b != 0) {
        std::int64_t t = a % b;
        a = b;
        b = t;
    }
    return a < 0 ? -a : a;
}

// gcd over all pairwise support differences; equals gcd of gaps to the first offset.
bool support_is_aperiodic(const std::vector<LatticePmf::Entry>& entries) {
    if (entries.size() < 2) return false;
    std::int64_t g = 0;
    for (std::size_t i = 1; i < entries.size(); ++i) {
        g = gcd64(g, entries[i].first - entries.front().first);
    }
    return g == 1;
}

} // namespace

LatticePmf::LatticePmf(std::vector<Entry> entries) : entries_(std::move(entries)) {
    if (entries_.empty()) {
        throw ValidationError("LatticePmf: empty support");
    }
    std::sort(entries_.begin(), entries_.end());
    double total = 0.0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        auto [k, p] = entries_[i];
        if (std::llabs(k) > kMaxAbsOffset) {
            throw ValidationError("LatticePmf: |offset| exceeds 1e6 at k=" + std::to_string(k));
        }
        if (!(p > 0.0) || !(p <= 1.0)) {
            throw ValidationError("LatticePmf: probability out of (0,1] at k=" + std::to_string(k));
        }
        if (i > 0 && entries_[i - 1].first == k) {
            throw ValidationError("LatticePmf: duplicate offset k=" + std::to_string(k));
        }
        total += p;
        mean_ += static_cast<double>(k) * p;
        second_moment_ += static_cast<double>(k) * static_cast<double>(k) * p;
    }
    if (std::fabs(total - 1.0) > kNormalizationTol) {
        std::ostringstream os;
        os << "LatticePmf: probabilities sum to " << total << ", off by more than 1e-12";
        throw ValidationError(os.str());
    }
    aperiodic_ = support_is_aperiodic(entries_);
}

double LatticePmf::prob_at(std::int64_t k) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), k,
                               [](const Entry& e, std::int64_t v) { return e.first < v; });
    if (it != entries_.end() && it->first == k) return it->second;
    return 0.0;
}

double LatticePmf::cdf_leq(std::int64_t k) const {
    double s = 0.0;
    for (const auto& [off, p] : entries_) {
        if (off > k) break;
        s += p;
    }
    return s;
}

double LatticePmf::mean_negative_part() const {
    double s = 0.0;
    for (const auto& [off, p] : entries_) {
        if (off < 0) s += static_cast<double>(-off) * p;
    }
    return s;
}

LatticePmf LatticePmf::negated() const {
    std::vector<Entry> flipped;
    flipped.reserve(entries_.size());
    for (const auto& [off, p] : entries_) flipped.emplace_back(-off, p);
    return LatticePmf(std::move(flipped));
}

ValidationReport validate(const LatticePmf& pmf) {
    ValidationReport r;
    r.mean = pmf.mean();
    r.aperiodic = pmf.aperiodic();
    r.has_positive_offset = pmf.has_positive_offset();
    r.negative_drift = pmf.mean() < 0.0;
    r.cramer_root_available = r.negative_drift && r.has_positive_offset;
    if (!r.aperiodic) r.issues.push_back("support is periodic: gcd of offset differences exceeds 1");
    if (!r.has_positive_offset) r.issues.push_back("no positive offset: excursions are degenerate");
    if (!r.negative_drift) r.issues.push_back("mean is not negative");
    r.valid = r.aperiodic && r.has_positive_offset && r.negative_drift;
    return r;
}

double mgf(const LatticePmf& pmf, double t) {
    double s = 0.0;
    for (const auto& [k, p] : pmf.entries()) {
        s += p * std::exp(t * static_cast<double>(k));
    }
    return s;
}

std::pair<double, double> mgf_derivatives(const LatticePmf& pmf, double t) {
    double d1 = 0.0;
    double d2 = 0.0;
    for (const auto& [k, p] : pmf.entries()) {
        const double kk = static_cast<double>(k);
        const double w = p * std::exp(t * kk);
        d1 += kk * w;
        d2 += kk * kk * w;
    }
    return {d1, d2};
}

LatticePmf tilt(const LatticePmf& pmf, double u) {
    if (!(u >= 0.0) || !std::isfinite(u)) {
        throw ValidationError("tilt: parameter must be finite and >= 0");
    }
    const double phi = mgf(pmf, u);
    if (!std::isfinite(phi) || phi <= 0.0) {
        throw ValidationError("tilt: mgf not finite at u=" + std::to_string(u));
    }
    std::vector<LatticePmf::Entry> tilted;
    tilted.reserve(pmf.support_size());
    for (const auto& [k, p] : pmf.entries()) {
        tilted.emplace_back(k, p * std::exp(u * static_cast<double>(k)) / phi);
    }
    return LatticePmf(std::move(tilted));
}

double tilted_mean(const LatticePmf& pmf, double u) {
    auto [d1, d2] = mgf_derivatives(pmf, u);
    (void)d2;
    return d1 / mgf(pmf, u);
}

double tilted_variance(const LatticePmf& pmf, double u) {
    const double phi = mgf(pmf, u);
    auto [d1, d2] = mgf_derivatives(pmf, u);
    const double m = d1 / phi;
    return d2 / phi - m * m;
}

TiltSchedule tilt_schedule(double lambda, int n) {
    if (n < 1) throw ValidationError("tilt_schedule: horizon must be >= 1");
    if (!(lambda > 0.0)) throw ValidationError("tilt_schedule: lambda must be positive");
    TiltSchedule s;
    s.n = n;
    s.lambda = lambda;
    s.values.resize(static_cast<std::size_t>(n));
    for (int j = 1; j <= n; ++j) {
        s.values[static_cast<std::size_t>(j - 1)] =
            lambda * static_cast<double>(n - j + 1) / static_cast<double>(n);
    }
    return s;
}

} // namespace excursion
