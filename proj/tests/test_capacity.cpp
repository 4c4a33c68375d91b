#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cdom/capacity.hpp"

using namespace cdom;

TEST_CASE("interval capacity is a quarter of the length") {
    CHECK(interval_capacity(NumericValue::rational(0), NumericValue::rational(1)).rat() ==
          mpq_class(1, 4));
    CHECK(interval_capacity(NumericValue::rational(-2), NumericValue::rational(2)).rat() == 1);
    CHECK_THROWS_AS(interval_capacity(NumericValue::rational(1), NumericValue::rational(1)),
                    numeric_error);
}

TEST_CASE("gap census: three level-1 gaps, 79,959,996 level-2 gaps") {
    std::vector<LevelParams> params = {initial_params()};
    params.push_back(next_params(params.back()));
    params.push_back(next_params(params.back()));

    Census cen = removed_intervals(params, 2);
    REQUIRE(cen.levels.size() == 2);
    const CensusLevel& l1 = cen.levels[0];
    CHECK(l1.count == 3);
    REQUIRE(l1.intervals.size() == 3);
    for (const auto& iv : l1.intervals)
        CHECK(nv_sub(iv.hi, iv.lo).rat() == mpq_class(1, 4001));
    CHECK(l1.intervals[0].lo.rat() == mpq_class(1000, 4001) - mpq_class(1, 8002));
    CHECK(l1.count_bound_ok);

    const CensusLevel& l2 = cen.levels[1];
    CHECK(l2.count_exact);
    CHECK(l2.count == mpz_class("79959996"));  // 2 (N_2 - 1) N_1
    CHECK(l2.count_bound_ok);

    Census cen3 = removed_intervals(params, 3);
    const CensusLevel& l3 = cen3.levels[2];
    CHECK_FALSE(l3.count_exact);
    CHECK(l3.count_value.is_log());
    CHECK(l3.count_bound_ok);

    CHECK_THROWS_AS(removed_intervals(params, 4), numeric_error);
}

TEST_CASE("union bound reduces to the exact capacity for a single interval") {
    std::vector<Interval> one = {{NumericValue::rational(0), NumericValue::rational(1)}};
    NumericValue b = subadditive_capacity_bound(one, NumericValue::rational(2));
    CHECK_THAT(b.ln_abs(), Catch::Matchers::WithinAbs(std::log(0.25), 1e-12));
    CHECK_THROWS_AS(subadditive_capacity_bound({}, NumericValue::rational(2)), numeric_error);
    // a piece as large as delta has no positive log gap
    std::vector<Interval> big = {{NumericValue::rational(0), NumericValue::rational(8)}};
    CHECK_THROWS_AS(subadditive_capacity_bound(big, NumericValue::rational(2)), numeric_error);
}

TEST_CASE("three gaps of length 1/4001 produce the frozen union bound") {
    std::vector<Interval> gaps;
    for (long i = 0; i < 3; ++i) {
        NumericValue lo = NumericValue::rational(1 + 10 * i, 40);
        gaps.push_back({lo, nv_add(lo, NumericValue::rational(1, 4001))});
    }
    NumericValue b = subadditive_capacity_bound(gaps, NumericValue::rational(2));
    double expect_S = 3.0 / std::log(2.0 * 4.0 * 4001.0);
    CHECK_THAT(expect_S, Catch::Matchers::WithinAbs(0.289192, 1e-5));
    CHECK_THAT(std::exp(b.ln_abs()),
               Catch::Matchers::WithinAbs(2.0 * std::exp(-1.0 / expect_S), 1e-12));
    CHECK_THAT(std::exp(b.ln_abs()), Catch::Matchers::WithinAbs(0.062991, 1e-5));
}

TEST_CASE("series bound, formula mode: frozen first term, negligible second term") {
    std::vector<LevelParams> params = {initial_params()};
    params.push_back(next_params(params.back()));
    CapacitySeries cs = jinta_sum(params, 2, SeriesMode::formula);
    REQUIRE(cs.terms.size() == 2);
    CHECK_THAT(std::exp(cs.terms[0].ln_abs()),
               Catch::Matchers::WithinAbs(0.221245772, 1e-6));
    CHECK(cs.terms[1].ln_abs() < std::log(1e-15));
    CHECK(cs.verdict);
    // S + tail stays below the capacity of [0,1]
    double total = std::exp(cs.S.ln_abs()) + std::exp(cs.tail.ln_abs());
    CHECK(total < 0.25);
}

TEST_CASE("series bound, actual mode: frozen sum and bound, passes at every depth") {
    std::vector<LevelParams> params = {initial_params()};
    params.push_back(next_params(params.back()));
    params.push_back(next_params(params.back()));
    CapacitySeries c2 = jinta_sum(params, 2, SeriesMode::actual);
    CHECK_THAT(std::exp(c2.S.ln_abs()), Catch::Matchers::WithinAbs(0.289192, 1e-5));
    CHECK_THAT(std::exp(c2.bound.ln_abs()), Catch::Matchers::WithinAbs(0.062991, 1e-4));
    CHECK(c2.verdict);

    CapacitySeries c1 = jinta_sum(params, 1, SeriesMode::actual);
    CHECK(c1.verdict);
    CapacitySeries c3 = jinta_sum(params, 3, SeriesMode::actual);
    CHECK(c3.verdict);
    // deeper truncations change the sum only by relatively negligible terms
    CHECK_THAT(c3.S.ln_abs(), Catch::Matchers::WithinAbs(c2.S.ln_abs(), 1e-9));

    CHECK_THROWS_AS(jinta_sum(params, 4, SeriesMode::actual), numeric_error);
}

TEST_CASE("equilibrium estimate reproduces the unit-interval capacity") {
    std::vector<Interval> unit = {{NumericValue::rational(0), NumericValue::rational(1)}};
    double cap = equilibrium_capacity(unit, 128);
    CHECK_THAT(cap, Catch::Matchers::WithinRel(0.25, 0.005));
    CHECK_THROWS_AS(equilibrium_capacity(unit, 32), numeric_error);
    CHECK_THROWS_AS(equilibrium_capacity({}, 128), numeric_error);
}

TEST_CASE("equilibrium estimate: monotonicity, scaling, and the diameter bound") {
    std::mt19937 rng(20260823);
    std::uniform_real_distribution<double> pos(0.0, 1.0);
    auto iv = [](double lo, double hi) {
        return Interval{NumericValue::rational(std::lround(lo * 1e6), 1000000),
                        NumericValue::rational(std::lround(hi * 1e6), 1000000)};
    };
    for (int trial = 0; trial < 25; ++trial) {
        double a = pos(rng) * 0.4, b = a + 0.05 + pos(rng) * 0.3;
        double c = b + 0.02 + pos(rng) * 0.2, d = c + 0.05 + pos(rng) * 0.2;
        std::vector<Interval> small = {iv(a, b)};
        std::vector<Interval> large = {iv(a, b), iv(c, d)};
        double cap_small = equilibrium_capacity(small, 96);
        double cap_large = equilibrium_capacity(large, 96);
        // monotone in the set (small numerical slack)
        CHECK(cap_small <= cap_large * 1.01);
        // capacity never exceeds that of the convex hull
        double hull = (d - a) / 4.0;
        CHECK(cap_large <= hull * 1.01);
        // first-order homogeneous under scaling by 3
        std::vector<Interval> scaled = {iv(3 * a, 3 * b), iv(3 * c, 3 * d)};
        CHECK_THAT(equilibrium_capacity(scaled, 96),
                   Catch::Matchers::WithinRel(3.0 * cap_large, 0.02));
    }
}
