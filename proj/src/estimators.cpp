#include "excursion/estimators.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <future>
#include <thread>

#include "excursion/gaussian.hpp"
#include "excursion/numeric.hpp"
#include "excursion/rng.hpp"

namespace excursion {

namespace {

// Deterministic replica fan-out: slot r is filled by fn(r) regardless of the
// execution order, so threading cannot change any result.
template <class Fn>
void for_each_replica(int replicas, Fn&& fn) {
    const unsigned hw = std::thread::hardware_concurrency();
    if (replicas < 4 || hw < 2) {
        for (int r = 0; r < replicas; ++r) fn(r);
        return;
    }
    std::vector<std::future<void>> futures;
    futures.reserve(hw);
    std::atomic<int> counter{0};
    for (unsigned t = 0; t < hw; ++t) {
        futures.push_back(std::async(std::launch::async, [&]() {
            for (;;) {
                const int r = counter.fetch_add(1);
                if (r >= replicas) return;
                fn(r);
            }
        }));
    }
    for (auto& f : futures) f.get();
}

double survival_dip_tail_bound(const LatticePmf& step, std::int64_t a, int K) {
    if (step.min_offset() >= 0) return 0.0;
    auto rho = [&](double s) { return mgf(step, -s); };
    double lo = 0.0, hi = 1.0;
    while (rho(hi) < rho(hi * 0.999) && hi < 1e4) hi *= 2.0;
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
    if (!(r < 1.0)) return 1.0;
    return std::exp(-s_star * static_cast<double>(a)) * std::pow(r, K + 1) / (1.0 - r);
}

} // namespace

EstimatorReport make_report(std::string method, std::uint64_t seed, std::int64_t stream_count,
                            std::vector<double> replica_means, double z) {
    EstimatorReport r;
    r.method = std::move(method);
    r.seed = seed;
    r.stream_count = stream_count;
    r.z = z;
    r.replica_means = std::move(replica_means);
    r.replicas = static_cast<std::int64_t>(r.replica_means.size());
    if (r.replicas == 0) return r;
    KahanSum sum;
    for (double m : r.replica_means) sum.add(m);
    r.estimate = sum.value() / static_cast<double>(r.replicas);
    if (r.replicas > 1) {
        KahanSum sq;
        for (double m : r.replica_means) sq.add((m - r.estimate) * (m - r.estimate));
        const double var = sq.value() / static_cast<double>(r.replicas - 1);
        r.std_error = std::sqrt(var / static_cast<double>(r.replicas));
    }
    return r;
}

EstimatorReport merge(const EstimatorReport& a, const EstimatorReport& b) {
    if (a.method != b.method) throw ValidationError("merge: method tags differ");
    std::vector<double> means = a.replica_means;
    means.insert(means.end(), b.replica_means.begin(), b.replica_means.end());
    EstimatorReport r = make_report(a.method, a.seed, a.stream_count + b.stream_count,
                                    std::move(means), a.z);
    r.truncation_bracket = std::max(a.truncation_bracket, b.truncation_bracket);
    return r;
}

// ---------------------------------------------------------------------------

PathSample sample_tilted_path(const CramerProfile& profile, int n, std::uint64_t seed,
                              std::uint64_t replica) {
    const auto steps = scheduled_steps(profile.pmf, profile.lambda, n, n);
    CounterRng rng(seed, 42, replica);
    PathSample path;
    path.increments.reserve(static_cast<std::size_t>(n));
    std::int64_t s = 0;
    for (int j = 0; j < n; ++j) {
        const PmfSampler sampler(steps[static_cast<std::size_t>(j)]);
        const std::int64_t x = sampler(rng);
        path.increments.push_back(x);
        s += x;
        if (s <= 0 && path.tau == 0) path.tau = j + 1;
        if (path.tau == 0) path.area += s;
    }
    path.endpoint = s;
    path.log_weight = -profile.lambda * static_cast<double>(path.area) / n +
                      log_phi_product(profile.pmf, profile.lambda, n);
    return path;
}

std::vector<EstimatorReport> naive_excursion(const LatticePmf& pmf,
                                             const std::vector<NaiveQuery>& queries,
                                             std::int64_t paths, std::uint64_t seed,
                                             int replicas) {
    if (!(pmf.mean() < 0.0)) {
        throw ValidationError("naive_excursion: drift must be negative for a.s. finite tau");
    }
    if (replicas < 2) throw ValidationError("naive_excursion: need >= 2 replicas");
    const std::int64_t per_replica = paths / replicas;
    if (per_replica < 1) throw ValidationError("naive_excursion: too few paths per replica");

    const PmfSampler sampler(pmf);
    const std::size_t nq = queries.size();
    std::vector<std::vector<double>> means(nq, std::vector<double>(static_cast<std::size_t>(replicas)));

    for_each_replica(replicas, [&](int r) {
        CounterRng rng(seed, /*stream=*/0, static_cast<std::uint64_t>(r));
        std::vector<KahanSum> acc(nq);
        for (std::int64_t i = 0; i < per_replica; ++i) {
            std::int64_t s = 0, area = 0, steps = 0;
            do {
                s += sampler(rng);
                ++steps;
                if (s > 0) area += s;
            } while (s > 0);
            for (std::size_t q = 0; q < nq; ++q) {
                switch (queries[q].kind) {
                    case NaiveQuery::Kind::PointMass:
                        acc[q].add(area == queries[q].x ? 1.0 : 0.0);
                        break;
                    case NaiveQuery::Kind::TailMass:
                        acc[q].add(area >= queries[q].x ? 1.0 : 0.0);
                        break;
                    case NaiveQuery::Kind::MeanTau:
                        acc[q].add(static_cast<double>(steps));
                        break;
                    case NaiveQuery::Kind::MeanArea:
                        acc[q].add(static_cast<double>(area));
                        break;
                }
            }
        }
        for (std::size_t q = 0; q < nq; ++q) {
            means[q][static_cast<std::size_t>(r)] = acc[q].value() / static_cast<double>(per_replica);
        }
    });

    std::vector<EstimatorReport> out;
    out.reserve(nq);
    for (std::size_t q = 0; q < nq; ++q) {
        out.push_back(make_report("naive_excursion", seed, 1, std::move(means[q])));
    }
    return out;
}

std::vector<int> default_window(const CramerProfile& profile, std::int64_t x, double sigmas) {
    const auto info = saddle(profile, static_cast<double>(x));
    const double spread =
        std::sqrt(profile.delta2 * std::sqrt(static_cast<double>(x)));
    const int lo = std::max(1, static_cast<int>(std::floor(info.t0 - sigmas * spread - 2.0)));
    const int hi = static_cast<int>(std::ceil(info.t0 + sigmas * spread + 2.0));
    std::vector<int> window;
    window.reserve(static_cast<std::size_t>(hi - lo + 1));
    for (int n = lo; n <= hi; ++n) window.push_back(n);
    return window;
}

double window_truncation_bound(const CramerProfile& profile, std::int64_t x,
                               const std::vector<int>& window) {
    if (window.empty()) return 1.0;
    const int lo = *std::min_element(window.begin(), window.end());
    const int hi = *std::max_element(window.begin(), window.end());
    const double lam = profile.lambda;
    const double rate = lam * profile.I;
    // local per-horizon envelope C / n^2 exp{-lambda x / n - lambda I n}: the
    // explicit constant takes the prefactor at its asymptotic caps (survival
    // constants <= 1, density peak at the origin, product gap at its sup) with
    // a factor 2 covering the vanishing corrections
    GaussianBridgeKernel kernel(profile);
    const double peak = kernel.bridge(1.0).peak();
    const double c = 2.0 * std::exp(euler_gap_sup(profile)) *
                     profile.pmf.mean_negative_part() * peak;
    KahanSum outside;
    for (int n = 1; n < lo; ++n) {
        outside.add(std::exp(-lam * static_cast<double>(x) / n - rate * n) /
                    (static_cast<double>(n) * n));
    }
    double head = 0.0;
    for (int n = hi + 1;; ++n) {
        const double term = std::exp(-lam * static_cast<double>(x) / n - rate * n) /
                            (static_cast<double>(n) * n);
        outside.add(term);
        head = std::max(head, term);
        if (term < 1e-18 * std::max(head, 1e-300)) break;
    }
    return c * outside.value();
}

namespace {

EstimatorReport is_estimate(const CramerProfile& profile, std::int64_t x,
                            const std::vector<int>& window, std::int64_t paths_per_n,
                            std::uint64_t seed, int replicas, bool tail) {
    if (window.empty()) throw ValidationError("is_estimate: empty window");
    if (replicas < 2) throw ValidationError("is_estimate: need >= 2 replicas");

    // degenerate horizon 0: tau = 1 and A = 0, deterministic
    if (window.size() == 1 && window.front() == 0) {
        const double p0 = profile.pmf.cdf_leq(0);
        const bool hit = tail ? (0 >= x) : (x == 0);
        std::vector<double> means(static_cast<std::size_t>(replicas), hit ? p0 : 0.0);
        return make_report(tail ? "is_tail" : "is_local", seed, 1, std::move(means));
    }

    // shared immutable per-horizon samplers and weights
    struct Horizon {
        int n = 0;
        std::vector<PmfSampler> samplers;
        double log_weight = 0.0; // log prod phi(u_{n,j})
    };
    std::vector<Horizon> horizons;
    horizons.reserve(window.size());
    for (int n : window) {
        if (n < 1) throw ValidationError("is_estimate: horizons must be >= 1");
        Horizon h;
        h.n = n;
        const auto steps = scheduled_steps(profile.pmf, profile.lambda, n, n);
        h.samplers.reserve(steps.size());
        for (const auto& law : steps) h.samplers.emplace_back(law);
        h.log_weight = log_phi_product(profile.pmf, profile.lambda, n);
        horizons.push_back(std::move(h));
    }

    std::vector<double> means(static_cast<std::size_t>(replicas), 0.0);
    const double lam = profile.lambda;
    const auto& pmf = profile.pmf;

    for_each_replica(replicas, [&](int r) {
        KahanSum total;
        for (std::size_t hi = 0; hi < horizons.size(); ++hi) {
            const auto& h = horizons[hi];
            CounterRng rng(seed, static_cast<std::uint64_t>(hi) + 1, static_cast<std::uint64_t>(r));
            KahanSum acc;
            for (std::int64_t i = 0; i < paths_per_n; ++i) {
                std::int64_t s = 0, area = 0;
                bool alive = true;
                for (int j = 0; j < h.n; ++j) {
                    s += h.samplers[static_cast<std::size_t>(j)](rng);
                    if (s <= 0) {
                        alive = false;
                        break;
                    }
                    area += s;
                    if (!tail && area > x) {
                        alive = false; // the local event A_n = x is already impossible
                        break;
                    }
                }
                if (!alive) continue;
                const bool hit = tail ? (area >= x) : (area == x);
                if (!hit) continue;
                const double logw =
                    -lam * static_cast<double>(area) / h.n + h.log_weight;
                acc.add(std::exp(logw) * pmf.cdf_leq(-s));
            }
            total.add(acc.value() / static_cast<double>(paths_per_n));
        }
        means[static_cast<std::size_t>(r)] = total.value();
    });

    EstimatorReport report = make_report(tail ? "is_tail" : "is_local", seed,
                                         static_cast<std::int64_t>(window.size()),
                                         std::move(means));
    report.truncation_bracket = window_truncation_bound(profile, x, window);
    if (report.truncation_bracket > 0.1 * report.estimate) {
        throw WindowError("WindowTooNarrow: truncation bracket " +
                          std::to_string(report.truncation_bracket) + " exceeds 10% of estimate " +
                          std::to_string(report.estimate));
    }
    return report;
}

} // namespace

EstimatorReport is_local(const CramerProfile& profile, std::int64_t x,
                         const std::vector<int>& window, std::int64_t paths_per_n,
                         std::uint64_t seed, int replicas) {
    return is_estimate(profile, x, window, paths_per_n, seed, replicas, /*tail=*/false);
}

EstimatorReport is_tail(const CramerProfile& profile, std::int64_t x,
                        const std::vector<int>& window, std::int64_t paths_per_n,
                        std::uint64_t seed, int replicas) {
    return is_estimate(profile, x, window, paths_per_n, seed, replicas, /*tail=*/true);
}

namespace {

EstimatorReport survival_mc(const LatticePmf& step, std::int64_t a, int K, std::int64_t paths,
                            std::uint64_t seed, int replicas, const char* method) {
    if (!(step.mean() > 0.0)) {
        throw ValidationError(std::string(method) + ": step law must have positive mean");
    }
    if (replicas < 2) throw ValidationError("survival: need >= 2 replicas");
    const std::int64_t per_replica = paths / replicas;
    if (per_replica < 1) throw ValidationError("survival: too few paths per replica");
    const PmfSampler sampler(step);

    std::vector<double> means(static_cast<std::size_t>(replicas), 0.0);
    for_each_replica(replicas, [&](int r) {
        CounterRng rng(seed, 0, static_cast<std::uint64_t>(r));
        std::int64_t hits = 0;
        for (std::int64_t i = 0; i < per_replica; ++i) {
            std::int64_t h = 0;
            bool ok = true;
            for (int k = 0; k < K; ++k) {
                h += sampler(rng);
                if (h <= -a) {
                    ok = false;
                    break;
                }
            }
            if (ok) ++hits;
        }
        means[static_cast<std::size_t>(r)] =
            static_cast<double>(hits) / static_cast<double>(per_replica);
    });

    EstimatorReport report = make_report(method, seed, 1, std::move(means));
    report.truncation_bracket = survival_dip_tail_bound(step, a, K);
    if (report.estimate > 0.0 && report.truncation_bracket > 0.01 * report.estimate) {
        throw HorizonError("HorizonTooShort: dip bracket " +
                           std::to_string(report.truncation_bracket) + " exceeds 1% of estimate");
    }
    return report;
}

} // namespace

EstimatorReport survival_q(const LatticePmf& step, std::int64_t a, int K, std::int64_t paths,
                           std::uint64_t seed, int replicas) {
    return survival_mc(step, a, K, paths, seed, replicas, "survival_q");
}

EstimatorReport survival_qhat(const LatticePmf& pmf, std::int64_t a, int K, std::int64_t paths,
                              std::uint64_t seed, int replicas) {
    return survival_mc(pmf.negated(), a, K, paths, seed, replicas, "survival_qhat");
}

// ---------------------------------------------------------------------------

double ConditionedAreaSample::gbar(double z) const {
    if (scaled_areas.empty()) return 0.0;
    std::int64_t above = 0;
    for (double v : scaled_areas) {
        if (v > z) ++above;
    }
    return static_cast<double>(above) / static_cast<double>(scaled_areas.size());
}

double ConditionedAreaSample::dkw_band(double alpha) const {
    if (scaled_areas.empty()) return 1.0;
    return std::sqrt(std::log(2.0 / alpha) / (2.0 * static_cast<double>(scaled_areas.size())));
}

ConditionedAreaSample conditioned_excursion_area(const LatticePmf& pmf_zero_mean, int n,
                                                 std::int64_t paths, std::uint64_t seed,
                                                 int replicas) {
    if (std::fabs(pmf_zero_mean.mean()) > 1e-9) {
        throw ValidationError("conditioned_excursion_area: pmf must have zero mean");
    }
    if (n < 2) throw ValidationError("conditioned_excursion_area: n must be >= 2");
    const std::int64_t per_replica = paths / replicas;
    if (per_replica < 1) throw ValidationError("conditioned_excursion_area: too few paths");

    const PmfSampler sampler(pmf_zero_mean);
    const double sigma = std::sqrt(pmf_zero_mean.variance());
    const double scale = sigma * std::pow(static_cast<double>(n), 1.5);

    std::vector<std::vector<double>> accepted(static_cast<std::size_t>(replicas));
    for_each_replica(replicas, [&](int r) {
        CounterRng rng(seed, 0, static_cast<std::uint64_t>(r));
        auto& out = accepted[static_cast<std::size_t>(r)];
        for (std::int64_t i = 0; i < per_replica; ++i) {
            std::int64_t s = 0, area = 0;
            bool hit = false;
            for (int j = 1; j <= n + 1; ++j) {
                s += sampler(rng);
                if (s <= 0) {
                    hit = (j == n + 1);
                    break;
                }
                if (j == n + 1) break; // survived past n + 1: tau too large
                area += s;
            }
            if (hit) out.push_back(static_cast<double>(area) / scale);
        }
    });

    ConditionedAreaSample result;
    std::vector<double> mean_means, third_means;
    mean_means.reserve(static_cast<std::size_t>(replicas));
    third_means.reserve(static_cast<std::size_t>(replicas));
    for (const auto& rep : accepted) {
        result.accepted += static_cast<std::int64_t>(rep.size());
        if (!rep.empty()) {
            KahanSum m1, m3;
            for (double z : rep) {
                m1.add(z);
                m3.add(std::cbrt(z));
            }
            mean_means.push_back(m1.value() / static_cast<double>(rep.size()));
            third_means.push_back(m3.value() / static_cast<double>(rep.size()));
        }
        result.scaled_areas.insert(result.scaled_areas.end(), rep.begin(), rep.end());
    }
    result.paths_tried = per_replica * replicas;
    result.acceptance_rate =
        static_cast<double>(result.accepted) / static_cast<double>(result.paths_tried);
    if (result.acceptance_rate < 1e-6) {
        throw RejectionError("RejectionTooSlow: acceptance below 1e-6, use a smaller n");
    }
    result.mean_scaled_area = make_report("conditioned_area_mean", seed, 1, std::move(mean_means));
    result.third_root_moment =
        make_report("conditioned_area_third_root", seed, 1, std::move(third_means));
    return result;
}

double tilted_lln_p95(const CramerProfile& profile, int n, std::int64_t paths,
                      std::uint64_t seed) {
    const auto steps = scheduled_steps(profile.pmf, profile.lambda, n, n);
    std::vector<PmfSampler> samplers;
    samplers.reserve(steps.size());
    for (const auto& law : steps) samplers.emplace_back(law);

    std::vector<double> sups(static_cast<std::size_t>(paths));
    CounterRng rng(seed, 7, 0);
    for (std::int64_t i = 0; i < paths; ++i) {
        std::int64_t s = 0;
        double worst = 0.0;
        for (int k = 1; k <= n; ++k) {
            s += samplers[static_cast<std::size_t>(k - 1)](rng);
            const double dev = std::fabs(static_cast<double>(s) / n -
                                         profile.psi(static_cast<double>(k) / n));
            worst = std::max(worst, dev);
        }
        sups[static_cast<std::size_t>(i)] = worst;
    }
    std::sort(sups.begin(), sups.end());
    const auto idx = static_cast<std::size_t>(0.95 * static_cast<double>(sups.size() - 1));
    return sups[idx];
}

} // namespace excursion
