#pragma once

#include <cstdint>
#include <vector>

#include "excursion/pmf.hpp"

namespace excursion {

/// Counter-based stream: SplitMix64 over a key mixed from
/// (seed, stream id, replica id). Identical keys give identical streams
/// regardless of scheduling, which is what makes parallel replicas
/// reproducible.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream, std::uint64_t replica) {
        state_ = mix(mix(mix(seed) ^ stream) ^ replica);
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double next_unit() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_ = 0;
};

/// Inverse-CDF sampler over a lattice pmf support.
class PmfSampler {
  public:
    explicit PmfSampler(const LatticePmf& pmf) {
        offsets_.reserve(pmf.support_size());
        cdf_.reserve(pmf.support_size());
        double c = 0.0;
        for (const auto& [k, p] : pmf.entries()) {
            c += p;
            offsets_.push_back(k);
            cdf_.push_back(c);
        }
        cdf_.back() = 1.0;
    }

    std::int64_t operator()(CounterRng& rng) const {
        const double u = rng.next_unit();
        // supports are small; a forward scan beats binary search here
        for (std::size_t i = 0; i + 1 < cdf_.size(); ++i) {
            if (u < cdf_[i]) return offsets_[i];
        }
        return offsets_.back();
    }

  private:
    std::vector<std::int64_t> offsets_;
    std::vector<double> cdf_;
};

} // namespace excursion
