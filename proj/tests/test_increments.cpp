#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "excursion/pmf.hpp"
#include "test_util.hpp"

using namespace excursion;
using excursion::test::example_pmf;
using excursion::test::random_valid_pmf;

TEST_CASE("construction validates structure") {
    CHECK_THROWS_AS(LatticePmf({}), ValidationError);
    CHECK_THROWS_AS(LatticePmf({{0, 0.5}, {1, 0.6}}), ValidationError);   // sum > 1
    CHECK_THROWS_AS(LatticePmf({{0, 0.5}, {0, 0.5}}), ValidationError);   // duplicate
    CHECK_THROWS_AS(LatticePmf({{0, 1.5}, {1, -0.5}}), ValidationError);  // bad probs
    CHECK_THROWS_AS(LatticePmf({{2'000'000, 1.0}}), ValidationError);     // offset cap
    const LatticePmf pmf = example_pmf();
    CHECK(pmf.mean() == doctest::Approx(-0.3).epsilon(1e-14));
    CHECK(pmf.second_moment() == doctest::Approx(0.7).epsilon(1e-14));
    CHECK(pmf.variance() == doctest::Approx(0.61).epsilon(1e-14));
    CHECK(pmf.mean_negative_part() == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("validate reports the standing assumptions") {
    const auto good = validate(example_pmf());
    CHECK(good.valid);
    CHECK(good.aperiodic);
    CHECK(good.mean == doctest::Approx(-0.3));
    CHECK(good.cramer_root_available);

    const auto periodic = validate(LatticePmf({{-1, 0.6}, {1, 0.4}}));
    CHECK_FALSE(periodic.aperiodic);
    CHECK_FALSE(periodic.valid);

    const auto degenerate = validate(LatticePmf({{-1, 1.0}}));
    CHECK_FALSE(degenerate.has_positive_offset);
    CHECK_FALSE(degenerate.cramer_root_available);
}

TEST_CASE("mgf values") {
    const LatticePmf pmf = example_pmf();
    CHECK(mgf(pmf, 0.0) == doctest::Approx(1.0).epsilon(1e-14));
    // nontrivial root of the quadratic p z^2 - (p + r) z + r = 0 in z = e^t
    CHECK(mgf(pmf, std::log(2.5)) == doctest::Approx(1.0).epsilon(1e-14));
    const double direct = 0.2 * std::exp(1.0) + 0.3 + 0.5 * std::exp(-1.0);
    CHECK(mgf(pmf, 1.0) == doctest::Approx(direct).epsilon(1e-15));
    CHECK(mgf(pmf, 1.0) == doctest::Approx(1.027596).epsilon(1e-5));
}

TEST_CASE("mgf derivatives") {
    const LatticePmf pmf = example_pmf();
    const auto [d1_0, d2_0] = mgf_derivatives(pmf, 0.0);
    CHECK(d1_0 == doctest::Approx(-0.3).epsilon(1e-14));
    CHECK(d2_0 == doctest::Approx(0.7).epsilon(1e-14));
    const auto [d1, d2] = mgf_derivatives(pmf, std::log(2.5));
    CHECK(d1 == doctest::Approx(0.3).epsilon(1e-13)); // tilted mean since phi(lambda) = 1
    CHECK(d2 == doctest::Approx(0.7).epsilon(1e-13));
}

TEST_CASE("tilt examples") {
    const LatticePmf pmf = example_pmf();
    const LatticePmf same = tilt(pmf, 0.0);
    for (std::size_t i = 0; i < pmf.support_size(); ++i) {
        CHECK(same.entries()[i].second ==
              doctest::Approx(pmf.entries()[i].second).epsilon(1e-14));
    }
    const LatticePmf at_root = tilt(pmf, std::log(2.5));
    CHECK(at_root.prob_at(-1) == doctest::Approx(0.2).epsilon(1e-13));
    CHECK(at_root.prob_at(0) == doctest::Approx(0.3).epsilon(1e-13));
    CHECK(at_root.prob_at(1) == doctest::Approx(0.5).epsilon(1e-13));
    CHECK(at_root.mean() == doctest::Approx(0.3).epsilon(1e-13));
    CHECK_THROWS_AS(tilt(pmf, -0.5), ValidationError);
}

TEST_CASE("tilt schedule") {
    const double lambda = 0.7;
    const TiltSchedule one = tilt_schedule(lambda, 1);
    REQUIRE(one.values.size() == 1);
    CHECK(one.values[0] == doctest::Approx(lambda).epsilon(1e-15));

    const TiltSchedule four = tilt_schedule(lambda, 4);
    REQUIRE(four.values.size() == 4);
    CHECK(four.values[0] == doctest::Approx(lambda));
    CHECK(four.values[1] == doctest::Approx(3.0 * lambda / 4.0));
    CHECK(four.values[2] == doctest::Approx(lambda / 2.0));
    CHECK(four.values[3] == doctest::Approx(lambda / 4.0));

    for (int n : {1, 7, 64}) {
        const TiltSchedule s = tilt_schedule(lambda, n);
        double sum = 0.0;
        bool decreasing = true;
        for (std::size_t j = 0; j < s.values.size(); ++j) {
            sum += s.values[j];
            if (j > 0) decreasing = decreasing && s.values[j] < s.values[j - 1];
        }
        CHECK(sum == doctest::Approx(lambda * (n + 1) / 2.0).epsilon(1e-12));
        CHECK(decreasing);
        CHECK(s.values.back() == doctest::Approx(lambda / n));
    }
    CHECK_THROWS_AS(tilt_schedule(lambda, 0), ValidationError);
    CHECK_THROWS_AS(tilt_schedule(-1.0, 3), ValidationError);
}

TEST_CASE("tilting properties over random pmfs") {
    CounterRng rng(2024, 1, 0);
    for (int trial = 0; trial < 20; ++trial) {
        const LatticePmf pmf = random_valid_pmf(rng);
        double prev_mean = -1e300;
        for (double u : {0.0, 0.1, 0.35, 0.8, 1.5}) {
            const LatticePmf tilted = tilt(pmf, u);
            double total = 0.0;
            for (const auto& [k, p] : tilted.entries()) total += p;
            CHECK(std::fabs(total - 1.0) <= 1e-12);
            CHECK(tilted.aperiodic() == pmf.aperiodic()); // support unchanged
            CHECK(tilted.mean() > prev_mean);             // strictly increasing in u
            prev_mean = tilted.mean();

            // semigroup: tilt(tilt(p,u),v) = tilt(p,u+v) entrywise
            const LatticePmf twice = tilt(tilted, 0.4);
            const LatticePmf once = tilt(pmf, u + 0.4);
            for (std::size_t i = 0; i < pmf.support_size(); ++i) {
                CHECK(std::fabs(twice.entries()[i].second - once.entries()[i].second) <= 1e-12);
            }
            // mgf of the tilted law
            for (double s : {0.2, 0.9}) {
                CHECK(std::fabs(mgf(tilted, s) - mgf(pmf, u + s) / mgf(pmf, u)) <=
                      1e-12 * mgf(tilted, s));
            }
        }
    }
}

TEST_CASE("tilted moments match the materialized law") {
    CounterRng rng(77, 2, 0);
    for (int trial = 0; trial < 5; ++trial) {
        const LatticePmf pmf = random_valid_pmf(rng);
        for (double u : {0.0, 0.3, 1.1}) {
            const LatticePmf tilted = tilt(pmf, u);
            CHECK(tilted_mean(pmf, u) == doctest::Approx(tilted.mean()).epsilon(1e-12));
            CHECK(tilted_variance(pmf, u) == doctest::Approx(tilted.variance()).epsilon(1e-11));
        }
    }
}
