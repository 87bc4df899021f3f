#include "excursion/exact.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>

#include "excursion/dd.hpp"
#include "excursion/numeric.hpp"

namespace excursion {

namespace {

// Area a path at height h must still collect before it can die, when every
// step drops by at most d: the descent h, h-d, h-2d, ... stays positive for
// floor((h-1)/d) steps.
std::int64_t forced_remaining_area(std::int64_t h, std::int64_t d) {
    if (h <= 0 || d <= 0) return 0;
    const std::int64_t m = (h - 1) / d;
    return m * h - d * m * (m + 1) / 2;
}

template <class Real>
struct MassAccum {
    Real total{};
    void add(Real x) { total += x; }
    double value() const { return to_double(total); }
};

template <>
struct MassAccum<double> {
    KahanSum total;
    void add(double x) { total.add(x); }
    double value() const { return total.value(); }
};

// Absorption accumulator for one stopped row; Kahan-compensated in double mode.
template <class Real>
struct RowAccum {
    std::vector<Real> sum;
    void reset(std::size_t n) { sum.assign(n, Real{}); }
    void add(std::size_t i, Real x) { sum[i] += x; }
    double get(std::size_t i) const { return to_double(sum[i]); }
};

template <>
struct RowAccum<double> {
    std::vector<double> sum;
    std::vector<double> comp;
    void reset(std::size_t n) {
        sum.assign(n, 0.0);
        comp.assign(n, 0.0);
    }
    void add(std::size_t i, double x) {
        const double y = x - comp[i];
        const double t = sum[i] + y;
        comp[i] = (t - sum[i]) - y;
        sum[i] = t;
    }
    double get(std::size_t i) const { return sum[i]; }
};

struct DpResult {
    DpCaps caps;
    std::vector<std::vector<double>> rows;
    double total_stopped = 0.0;
    double overflow_area = 0.0;
    double overflow_height = 0.0;
    bool height_overflow_certain = false;
    double alive_at_caps = 0.0;
};

template <class Real>
DpResult run_excursion_dp(const LatticePmf& pmf, const DpCaps& caps_in) {
    DpResult out;
    DpCaps caps = caps_in;
    if (caps.n_max <= 0) caps.n_max = caps.a_max;
    if (caps.a_max < 1 || caps.s_max < 1) throw CapsError("CapsTooSmall: caps must be positive");
    out.caps = caps;

    const std::int64_t w = caps.a_max + 1;
    const std::int64_t s_cap = caps.s_max;
    std::vector<Real> cur(static_cast<std::size_t>((s_cap + 1) * w), Real{});
    std::vector<Real> next(static_cast<std::size_t>((s_cap + 1) * w), Real{});

    const std::int64_t d = -pmf.min_offset();
    out.height_overflow_certain = d > 0 && forced_remaining_area(s_cap + 1, d) + 1 > caps.a_max;

    MassAccum<Real> stopped_total, over_area, over_height;

    // tau = 1: empty excursion, area 0
    out.rows.push_back({pmf.cdf_leq(0)});
    stopped_total.add(Real{pmf.cdf_leq(0)});

    // layer 1
    std::int64_t s_lo = std::numeric_limits<std::int64_t>::max(), s_hi = 0;
    std::int64_t a_lo = std::numeric_limits<std::int64_t>::max(), a_hi = 0;
    double alive = 0.0;
    for (const auto& [k, p] : pmf.entries()) {
        if (k < 1) continue;
        if (k > caps.a_max) {
            over_area.add(Real{p});
        } else if (k > s_cap) {
            over_height.add(Real{p});
        } else {
            cur[static_cast<std::size_t>(k * w + k)] = Real{p};
            s_lo = std::min(s_lo, k);
            s_hi = std::max(s_hi, k);
            a_lo = std::min(a_lo, k);
            a_hi = std::max(a_hi, k);
            alive += p;
        }
    }

    RowAccum<Real> absorb;
    for (std::int64_t n = 1; n <= caps.n_max && alive > 0.0; ++n) {
        // absorb layer n into stopped row n
        const std::int64_t row_lo = n;
        absorb.reset(static_cast<std::size_t>(caps.a_max - row_lo + 1));
        for (std::int64_t s = s_lo; s <= s_hi; ++s) {
            const double c = pmf.cdf_leq(-s);
            if (c <= 0.0) continue;
            const Real* src = cur.data() + s * w;
            for (std::int64_t a = a_lo; a <= a_hi; ++a) {
                absorb.add(static_cast<std::size_t>(a - row_lo), src[a] * c);
            }
        }
        std::vector<double> row(static_cast<std::size_t>(caps.a_max - row_lo + 1));
        KahanSum row_mass;
        for (std::size_t i = 0; i < row.size(); ++i) {
            row[i] = absorb.get(i);
            row_mass.add(row[i]);
        }
        stopped_total.add(Real{row_mass.value()});
        alive -= row_mass.value();
        out.rows.push_back(std::move(row));

        if (n == caps.n_max || alive < caps.alive_atom) {
            // drain: whatever survives is unresolved at the caps
            MassAccum<Real> rest;
            for (std::int64_t s = s_lo; s <= s_hi; ++s) {
                const Real* src = cur.data() + s * w;
                const double keep = 1.0 - pmf.cdf_leq(-s);
                for (std::int64_t a = a_lo; a <= a_hi; ++a) rest.add(src[a] * keep);
            }
            out.alive_at_caps = rest.value();
            break;
        }

        // transition into layer n+1
        const std::int64_t ns_lo = std::max<std::int64_t>(1, s_lo + pmf.min_offset());
        const std::int64_t ns_hi = std::min(s_cap, s_hi + pmf.max_offset());
        const std::int64_t na_lo = a_lo + ns_lo;
        const std::int64_t na_hi = std::min(caps.a_max, a_hi + ns_hi);
        for (std::int64_t s = ns_lo; s <= ns_hi; ++s) {
            Real* dst = next.data() + s * w;
            std::fill(dst + na_lo, dst + na_hi + 1, Real{});
        }

        // layer-local spill accounting keeps the alive tracker free of
        // big-number cancellation, so it can decay to the atom cleanly
        MassAccum<Real> layer_area, layer_height;
        for (std::int64_t s = s_lo; s <= s_hi; ++s) {
            const Real* __restrict src = cur.data() + s * w;
            for (const auto& [k, p] : pmf.entries()) {
                const std::int64_t s2 = s + k;
                if (s2 < 1) continue; // absorbed above
                // destination area = a + s2 must stay inside the cap
                const std::int64_t a_fit = caps.a_max - s2;
                const std::int64_t a_mid = std::min(a_hi, a_fit);
                if (s2 > s_cap) {
                    MassAccum<Real> spill_low, spill_high;
                    for (std::int64_t a = a_lo; a <= a_mid; ++a) spill_low.add(src[a]);
                    for (std::int64_t a = std::max(a_lo, a_mid + 1); a <= a_hi; ++a)
                        spill_high.add(src[a]);
                    layer_height.add(Real{spill_low.value()} * p);
                    layer_area.add(Real{spill_high.value()} * p);
                    continue;
                }
                Real* __restrict dst = next.data() + s2 * w + s2;
                for (std::int64_t a = a_lo; a <= a_mid; ++a) {
                    dst[a] += src[a] * p;
                }
                if (a_mid < a_hi) {
                    MassAccum<Real> spill;
                    for (std::int64_t a = std::max(a_lo, a_mid + 1); a <= a_hi; ++a)
                        spill.add(src[a]);
                    layer_area.add(Real{spill.value()} * p);
                }
            }
        }
        over_area.add(Real{layer_area.value()});
        over_height.add(Real{layer_height.value()});
        cur.swap(next);
        s_lo = ns_lo;
        s_hi = ns_hi;
        a_lo = na_lo;
        a_hi = na_hi;
        // exact alive mass: the tracker must stay meaningful down to the atom
        KahanSum layer_mass;
        for (std::int64_t s = s_lo; s <= s_hi; ++s) {
            const Real* src = cur.data() + s * w;
            for (std::int64_t a = a_lo; a <= a_hi; ++a) layer_mass.add(to_double(src[a]));
        }
        alive = layer_mass.value();
    }

    out.total_stopped = stopped_total.value();
    out.overflow_area = over_area.value();
    out.overflow_height = over_height.value();

    const double unresolved =
        out.alive_at_caps + (out.height_overflow_certain ? 0.0 : out.overflow_height);
    if (unresolved > caps.alive_budget) {
        throw CapsError("CapsTooSmall: unresolved mass " + std::to_string(unresolved) +
                        " exceeds budget " + std::to_string(caps.alive_budget));
    }
    return out;
}

} // namespace

ExcursionTable excursion_law(const LatticePmf& pmf, const DpCaps& caps, Precision precision) {
    if (!(pmf.mean() < 0.0) && !(pmf.mean() == 0.0)) {
        throw ValidationError("excursion_law: drift must be non-positive");
    }
    ExcursionTable out(pmf);
    DpResult result = precision == Precision::Double ? run_excursion_dp<double>(pmf, caps)
                                                     : run_excursion_dp<DoubleDouble>(pmf, caps);
    out.caps_ = result.caps;
    out.rows_ = std::move(result.rows);
    out.total_stopped_ = result.total_stopped;
    out.overflow_area_ = result.overflow_area;
    out.overflow_height_ = result.overflow_height;
    out.height_overflow_certain_ = result.height_overflow_certain;
    out.alive_at_caps_ = result.alive_at_caps;
    return out;
}

double ExcursionTable::stopped(std::int64_t n, std::int64_t a) const {
    if (n < 0 || n >= rows()) return 0.0;
    const std::int64_t lo = row_lo(n);
    if (a < lo || a > caps_.a_max) return 0.0;
    if (n == 0) return a == 0 ? rows_[0][0] : 0.0;
    return rows_[static_cast<std::size_t>(n)][static_cast<std::size_t>(a - lo)];
}

std::span<const double> ExcursionTable::row(std::int64_t n) const {
    return {rows_[static_cast<std::size_t>(n)].data(), rows_[static_cast<std::size_t>(n)].size()};
}

double ExcursionTable::conservation_residual() const {
    return 1.0 - total_stopped_ - overflow_area_ - overflow_height_ - alive_at_caps_;
}

std::vector<double> area_marginal(const ExcursionTable& table) {
    std::vector<KahanSum> acc(static_cast<std::size_t>(table.caps().a_max + 1));
    for (std::int64_t n = 0; n < table.rows(); ++n) {
        const auto row = table.row(n);
        const std::int64_t lo = table.row_lo(n);
        for (std::size_t i = 0; i < row.size(); ++i) {
            acc[static_cast<std::size_t>(lo) + i].add(row[i]);
        }
    }
    std::vector<double> out(acc.size());
    for (std::size_t i = 0; i < acc.size(); ++i) out[i] = acc[i].value();
    return out;
}

TailBracket area_tail(const ExcursionTable& table, std::int64_t x) {
    if (x < 0) x = 0;
    KahanSum certain;
    for (std::int64_t n = 0; n < table.rows(); ++n) {
        const auto row = table.row(n);
        const std::int64_t lo = table.row_lo(n);
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (lo + static_cast<std::int64_t>(i) >= x) certain.add(row[i]);
        }
    }
    // area overflow certainly ended above a_max >= x
    certain.add(table.overflow_area());
    TailBracket b;
    double uncertain = table.alive_mass_at_caps();
    if (table.height_overflow_is_tail_certain()) {
        certain.add(table.overflow_height());
    } else {
        uncertain += table.overflow_height();
    }
    b.lower = certain.value();
    b.upper = b.lower + uncertain;
    return b;
}

double ConditionalTau::mean() const {
    double m = 0.0;
    for (std::size_t i = 0; i < prob.size(); ++i) {
        m += static_cast<double>(k_min + static_cast<std::int64_t>(i)) * prob[i];
    }
    return m;
}

double ConditionalTau::variance() const {
    const double m = mean();
    double v = 0.0;
    for (std::size_t i = 0; i < prob.size(); ++i) {
        const double k = static_cast<double>(k_min + static_cast<std::int64_t>(i));
        v += (k - m) * (k - m) * prob[i];
    }
    return v;
}

ConditionalTau conditional_tau(const ExcursionTable& table, std::int64_t x) {
    KahanSum marg;
    std::int64_t n_first = -1, n_last = -1;
    for (std::int64_t n = 0; n < table.rows(); ++n) {
        const double v = table.stopped(n, x);
        if (v > 0.0) {
            if (n_first < 0) n_first = n;
            n_last = n;
        }
        marg.add(v);
    }
    if (n_first < 0 || marg.value() <= 0.0) {
        throw ZeroConditioningError("ZeroConditioningEvent: P(A_tau = " + std::to_string(x) +
                                    ") is zero in the table");
    }
    ConditionalTau out;
    out.k_min = n_first + 1; // tau = n + 1
    out.prob.resize(static_cast<std::size_t>(n_last - n_first + 1));
    const double total = marg.value();
    for (std::int64_t n = n_first; n <= n_last; ++n) {
        out.prob[static_cast<std::size_t>(n - n_first)] = table.stopped(n, x) / total;
    }
    return out;
}

TauLaw tau_law(const LatticePmf& pmf, int n_max, std::int64_t s_max) {
    if (n_max < 1 || s_max < 1) throw CapsError("CapsTooSmall: tau_law caps must be positive");
    TauLaw out;
    out.prob.resize(static_cast<std::size_t>(n_max), 0.0);
    out.prob[0] = pmf.cdf_leq(0);

    std::vector<double> cur(static_cast<std::size_t>(s_max + 1), 0.0);
    std::vector<double> next(static_cast<std::size_t>(s_max + 1), 0.0);
    KahanSum over;
    for (const auto& [k, p] : pmf.entries()) {
        if (k < 1) continue;
        if (k > s_max) {
            over.add(p);
        } else {
            cur[static_cast<std::size_t>(k)] = p;
        }
    }
    for (int m = 1; m < n_max; ++m) {
        KahanSum absorbed;
        std::fill(next.begin(), next.end(), 0.0);
        for (std::int64_t s = 1; s <= s_max; ++s) {
            const double v = cur[static_cast<std::size_t>(s)];
            if (v == 0.0) continue;
            absorbed.add(v * pmf.cdf_leq(-s));
            for (const auto& [k, p] : pmf.entries()) {
                const std::int64_t s2 = s + k;
                if (s2 < 1) continue;
                if (s2 > s_max) {
                    over.add(v * p);
                } else {
                    next[static_cast<std::size_t>(s2)] += v * p;
                }
            }
        }
        out.prob[static_cast<std::size_t>(m)] = absorbed.value();
        cur.swap(next);
    }
    KahanSum alive;
    for (double v : cur) alive.add(v);
    out.alive_mass = alive.value();
    out.overflow_height = over.value();
    return out;
}

SurvivalEstimate survival_dp(const LatticePmf& step, std::int64_t a, int K) {
    if (a < 0) throw ValidationError("survival_dp: barrier must be >= 0");
    if (K < 1) throw ValidationError("survival_dp: horizon must be >= 1");
    if (!(step.mean() > 0.0)) {
        throw ValidationError("survival_dp: step law must have positive mean");
    }
    const std::int64_t up = std::max<std::int64_t>(step.max_offset(), 1);
    const std::int64_t h_cap = static_cast<std::int64_t>(K) * up;
    const std::int64_t shift = a - 1; // index = h + shift, h in [-a+1, h_cap]
    const std::size_t size = static_cast<std::size_t>(h_cap + shift + 1);
    std::vector<double> cur(size, 0.0), next(size, 0.0);

    // step 1 from the origin
    for (const auto& [k, p] : step.entries()) {
        if (k > -a) cur[static_cast<std::size_t>(k + shift)] = p;
    }
    for (int m = 2; m <= K; ++m) {
        std::fill(next.begin(), next.end(), 0.0);
        for (std::int64_t h = -a + 1; h <= h_cap; ++h) {
            const double v = cur[static_cast<std::size_t>(h + shift)];
            if (v == 0.0) continue;
            for (const auto& [k, p] : step.entries()) {
                const std::int64_t h2 = h + k;
                if (h2 > -a && h2 <= h_cap) {
                    next[static_cast<std::size_t>(h2 + shift)] += v * p;
                }
            }
        }
        cur.swap(next);
    }
    KahanSum mass;
    for (double v : cur) mass.add(v);

    SurvivalEstimate out;
    out.value = mass.value();
    out.horizon = K;
    if (step.min_offset() >= 0) {
        out.tail_bias = 0.0; // the walk can never move down
        return out;
    }
    // Chernoff bound: P(walk_k <= -a) <= e^{-s a} rho(s)^k with rho(s) = E e^{-s X}
    auto rho = [&](double s) { return mgf(step, -s); };
    double lo = 0.0, hi = 1.0;
    while (rho(hi) < rho(hi * 0.999) && hi < 1e4) hi *= 2.0; // walk out past the minimum
    for (int it = 0; it < 200; ++it) {
        const double m1 = lo + (hi - lo) / 3.0;
        const double m2 = hi - (hi - lo) / 3.0;
        if (rho(m1) < rho(m2)) {
            hi = m2;
        } else {
            lo = m1;
        }
    }
    const double s_star = 0.5 * (lo + hi);
    const double r = rho(s_star);
    if (r < 1.0) {
        out.tail_bias = std::exp(-s_star * static_cast<double>(a)) * std::pow(r, K + 1) / (1.0 - r);
    } else {
        out.tail_bias = 1.0; // no useful bound; caller decides
    }
    return out;
}

// ---------------------------------------------------------------------------

TiltedCaps suggest_tilted_caps(const std::vector<LatticePmf>& steps,
                               std::optional<std::int64_t> barrier, double width_sigmas) {
    if (steps.empty()) throw ValidationError("suggest_tilted_caps: no steps");
    const auto m = static_cast<std::int64_t>(steps.size());
    double mean_s = 0.0, var_s = 0.0, mean_y = 0.0, var_y = 0.0;
    for (std::int64_t j = 1; j <= m; ++j) {
        const auto& law = steps[static_cast<std::size_t>(j - 1)];
        const double mu = law.mean();
        const double s2 = law.variance();
        const double wgt = static_cast<double>(m - j + 1); // A_m = sum (m-j+1) X_j
        mean_s += mu;
        var_s += s2;
        mean_y += wgt * mu;
        var_y += wgt * wgt * s2;
    }
    std::int64_t dmax = 0, umax = 0;
    for (const auto& law : steps) {
        dmax = std::max(dmax, -law.min_offset());
        umax = std::max(umax, law.max_offset());
    }
    const double slack = 4.0;
    TiltedCaps c;
    c.s_min = static_cast<std::int64_t>(std::floor(mean_s - width_sigmas * std::sqrt(var_s) - slack));
    c.s_max = static_cast<std::int64_t>(std::ceil(mean_s + width_sigmas * std::sqrt(var_s) + slack));
    c.y_min = static_cast<std::int64_t>(std::floor(mean_y - width_sigmas * std::sqrt(var_y) - slack));
    c.y_max = static_cast<std::int64_t>(std::ceil(mean_y + width_sigmas * std::sqrt(var_y) + slack));
    // clip to reachable states
    c.s_min = std::max(c.s_min, -m * dmax);
    c.s_max = std::min(c.s_max, m * umax);
    c.y_max = std::min(c.y_max, m * (m + 1) / 2 * umax);
    std::int64_t floor_s = -m * dmax;
    if (barrier) {
        floor_s = std::max(floor_s, -*barrier + 1);
        c.s_min = std::max(c.s_min, floor_s);
    }
    // the window is shared by every intermediate layer: after j steps the area
    // is at least j * floor_s, minimized at j = 1 when floor_s >= 0 and at
    // j = m otherwise
    c.y_min = std::max(c.y_min, floor_s >= 0 ? floor_s : m * floor_s);
    if (c.s_min > c.s_max || c.y_min > c.y_max) {
        throw CapsError("CapsTooSmall: suggested window is empty");
    }
    return c;
}

std::int64_t LayerTable::index(std::int64_t s, std::int64_t y) const {
    return (s - caps_.s_min) * width_ + (y - caps_.y_min);
}

double LayerTable::at(std::int64_t s, std::int64_t y) const {
    if (s < caps_.s_min || s > caps_.s_max || y < caps_.y_min || y > caps_.y_max) return 0.0;
    return table_[static_cast<std::size_t>(index(s, y))];
}

LayerTable layer_dp(const std::vector<LatticePmf>& steps, std::optional<std::int64_t> barrier,
                    const TiltedCaps& caps) {
    LayerTable out;
    out.caps_ = caps;
    out.m_ = static_cast<int>(steps.size());
    out.barrier_ = barrier;
    out.width_ = caps.y_max - caps.y_min + 1;
    const std::int64_t s_rows = caps.s_max - caps.s_min + 1;
    const std::size_t sz = static_cast<std::size_t>(s_rows * out.width_);
    out.table_.assign(sz, 0.0);
    std::vector<double> next(sz, 0.0);

    KahanSum killed, overflow;
    const std::int64_t kill_at = barrier ? -*barrier : std::numeric_limits<std::int64_t>::min();

    // first step from the origin
    for (const auto& [k, p] : steps.front().entries()) {
        if (barrier && k <= kill_at) {
            killed.add(p);
        } else if (k < caps.s_min || k > caps.s_max || k < caps.y_min || k > caps.y_max) {
            overflow.add(p);
        } else {
            out.table_[static_cast<std::size_t>(out.index(k, k))] = p;
        }
    }

    for (std::size_t j = 1; j < steps.size(); ++j) {
        std::fill(next.begin(), next.end(), 0.0);
        const auto& law = steps[j];
        for (std::int64_t s = caps.s_min; s <= caps.s_max; ++s) {
            const double* __restrict src =
                out.table_.data() + static_cast<std::size_t>((s - caps.s_min) * out.width_);
            for (const auto& [k, p] : law.entries()) {
                const std::int64_t s2 = s + k;
                if (barrier && s2 <= kill_at) {
                    KahanSum band;
                    for (std::int64_t i = 0; i < out.width_; ++i) band.add(src[i]);
                    killed.add(band.value() * p);
                    continue;
                }
                if (s2 < caps.s_min || s2 > caps.s_max) {
                    KahanSum band;
                    for (std::int64_t i = 0; i < out.width_; ++i) band.add(src[i]);
                    overflow.add(band.value() * p);
                    continue;
                }
                // y2 = y + s2: a shifted saxpy inside the window, spill outside
                const std::int64_t y_from = std::max(caps.y_min, caps.y_min - s2);
                const std::int64_t y_to = std::min(caps.y_max, caps.y_max - s2);
                double* __restrict dst =
                    next.data() + static_cast<std::size_t>((s2 - caps.s_min) * out.width_ + s2);
                KahanSum spill;
                for (std::int64_t y = caps.y_min; y < y_from; ++y) {
                    spill.add(src[y - caps.y_min]);
                }
                for (std::int64_t y = y_to + 1; y <= caps.y_max; ++y) {
                    spill.add(src[y - caps.y_min]);
                }
                overflow.add(spill.value() * p);
                for (std::int64_t y = y_from; y <= y_to; ++y) {
                    dst[y - caps.y_min] += src[y - caps.y_min] * p;
                }
            }
        }
        out.table_.swap(next);
    }
    out.killed_ = killed.value();
    out.overflow_ = overflow.value();
    KahanSum mass;
    for (double v : out.table_) mass.add(v);
    out.mass_ = mass.value();
    return out;
}

std::vector<LatticePmf> scheduled_steps(const LatticePmf& pmf, double lambda, int n, int m) {
    if (m < 1 || m > n) throw ValidationError("scheduled_steps: need 1 <= m <= n");
    const TiltSchedule sched = tilt_schedule(lambda, n);
    std::vector<LatticePmf> steps;
    steps.reserve(static_cast<std::size_t>(m));
    for (int j = 1; j <= m; ++j) {
        steps.push_back(tilt(pmf, sched.values[static_cast<std::size_t>(j - 1)]));
    }
    return steps;
}

LayerTable tilted_layer(const CramerProfile& profile, int n, double t,
                        std::optional<std::int64_t> barrier, std::optional<TiltedCaps> caps) {
    const int m = static_cast<int>(std::floor(n * t));
    if (m < 1) throw ValidationError("tilted_layer: floor(n t) must be >= 1");
    const auto steps = scheduled_steps(profile.pmf, profile.lambda, n, m);
    const TiltedCaps window = caps ? *caps : suggest_tilted_caps(steps, barrier);
    return layer_dp(steps, barrier, window);
}

LayerTable original_layer(const LatticePmf& pmf, int m, std::optional<std::int64_t> barrier,
                          std::optional<TiltedCaps> caps) {
    if (m < 1) throw ValidationError("original_layer: m must be >= 1");
    std::vector<LatticePmf> steps(static_cast<std::size_t>(m), pmf);
    const TiltedCaps window = caps ? *caps : suggest_tilted_caps(steps, barrier);
    return layer_dp(steps, barrier, window);
}

double log_phi_product(const LatticePmf& pmf, double lambda, int n) {
    const TiltSchedule sched = tilt_schedule(lambda, n);
    KahanSum s;
    for (double u : sched.values) s.add(std::log(mgf(pmf, u)));
    return s.value();
}

MeasureChangeCheck::MeasureChangeCheck(const CramerProfile& profile, int n)
    : n_(n),
      weight_log_(log_phi_product(profile.pmf, profile.lambda, n)),
      lambda_(profile.lambda),
      original_(original_layer(
          profile.pmf, n, 0,
          TiltedCaps{1, n * profile.pmf.max_offset(), 1,
                     static_cast<std::int64_t>(n) * (n + 1) / 2 * profile.pmf.max_offset()})),
      tilted_(tilted_layer(
          profile, n, 1.0, 0,
          TiltedCaps{1, n * profile.pmf.max_offset(), 1,
                     static_cast<std::int64_t>(n) * (n + 1) / 2 * profile.pmf.max_offset()})) {}

MeasureChangeCheck::Sample MeasureChangeCheck::at(std::int64_t x, std::int64_t y) const {
    Sample s;
    s.lhs = original_.at(y, x);
    const double raw = tilted_.at(y, x);
    s.rhs = std::exp(-lambda_ * static_cast<double>(x) / n_ + weight_log_) * raw;
    const double scale = std::max(std::fabs(s.lhs), std::fabs(s.rhs));
    s.relative_gap = scale > 0.0 ? std::fabs(s.lhs - s.rhs) / scale : 0.0;
    return s;
}

double MeasureChangeCheck::max_relative_gap(double mass_floor) const {
    double worst = 0.0;
    const auto& caps = original_.caps();
    for (std::int64_t y = caps.s_min; y <= caps.s_max; ++y) {
        for (std::int64_t x = caps.y_min; x <= caps.y_max; ++x) {
            const Sample s = at(x, y);
            if (s.lhs >= mass_floor || s.rhs >= mass_floor) {
                worst = std::max(worst, s.relative_gap);
            }
        }
    }
    return worst;
}

double MeasureChangeCheck::rhs_survival() const {
    const auto& caps = tilted_.caps();
    KahanSum total;
    for (std::int64_t y = caps.s_min; y <= caps.s_max; ++y) {
        for (std::int64_t x = caps.y_min; x <= caps.y_max; ++x) {
            const double raw = tilted_.at(y, x);
            if (raw > 0.0) {
                total.add(std::exp(-lambda_ * static_cast<double>(x) / n_ + weight_log_) * raw);
            }
        }
    }
    return total.value();
}

double MeasureChangeCheck::lhs_survival() const { return original_.mass(); }

MeasureChangeCheck::Sample change_of_measure_identity(const CramerProfile& profile, int n,
                                                      std::int64_t x, std::int64_t y) {
    return MeasureChangeCheck(profile, n).at(x, y);
}

} // namespace excursion
