#pragma once

#include <cstdint>
#include <map>

#include "excursion/pmf.hpp"

namespace excursion::test {

// Exhaustive path enumeration: every stopped excursion with tau <= n_cap + 1,
// probability accumulated at (n, area). The independent oracle for the DP.
inline void enumerate_paths(const LatticePmf& pmf, int n_cap, std::int64_t s, std::int64_t area,
                            double prob, int steps,
                            std::map<std::pair<int, std::int64_t>, double>& out) {
    if (steps > 0 && s <= 0) {
        out[{steps - 1, area}] += prob;
        return;
    }
    if (steps == n_cap + 1) return;
    for (const auto& [k, p] : pmf.entries()) {
        const std::int64_t s2 = s + k;
        enumerate_paths(pmf, n_cap, s2, s2 > 0 ? area + s2 : area, prob * p, steps + 1, out);
    }
}

} // namespace excursion::test
