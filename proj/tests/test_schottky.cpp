#include <catch2/catch_amalgamated.hpp>

#include <random>
#include <set>

#include "cdom/schottky.hpp"

using namespace cdom;

TEST_CASE("point inversion: frozen examples and the center/infinity exchange") {
    SDisk unit{0, 0, 1};
    SPoint p = invert_point(unit, {2, 0, false});
    CHECK_THAT(p.x, Catch::Matchers::WithinAbs(0.5, 1e-15));
    CHECK_THAT(p.y, Catch::Matchers::WithinAbs(0.0, 1e-15));

    SDisk D{1, 0, 3};
    SPoint q = invert_point(D, {5, 0, false});
    CHECK_THAT(q.x, Catch::Matchers::WithinAbs(3.25, 1e-15));

    SPoint at_center = invert_point(unit, {0, 0, false});
    CHECK(at_center.infinite);
    SPoint at_infinity = invert_point(unit, {0, 0, true});
    CHECK_FALSE(at_infinity.infinite);
    CHECK(at_infinity.x == 0.0);
}

TEST_CASE("disk inversion: frozen example and the inside-center error") {
    SDisk unit{0, 0, 1};
    SDisk img = invert_disk(unit, {3, 0, 1});
    CHECK_THAT(img.x, Catch::Matchers::WithinAbs(3.0 / 8.0, 1e-15));
    CHECK_THAT(img.y, Catch::Matchers::WithinAbs(0.0, 1e-15));
    CHECK_THAT(img.r, Catch::Matchers::WithinAbs(1.0 / 8.0, 1e-15));
    // boundary point maps to boundary point
    SPoint b = invert_point(unit, {2, 0, false});
    CHECK_THAT(std::hypot(b.x - img.x, b.y - img.y), Catch::Matchers::WithinAbs(img.r, 1e-14));

    CHECK_THROWS_AS(invert_disk(unit, {0.2, 0, 1}), numeric_error);  // center inside
}

TEST_CASE("inversion is an involution on random inputs") {
    std::mt19937 rng(5150);
    std::uniform_real_distribution<double> coord(-5.0, 5.0), rad(0.1, 2.0);
    for (int i = 0; i < 500; ++i) {
        SDisk D{coord(rng), coord(rng), rad(rng)};
        SPoint p{coord(rng), coord(rng), false};
        if (std::hypot(p.x - D.x, p.y - D.y) < 1e-3) continue;
        SPoint pp = invert_point(D, invert_point(D, p));
        CHECK_THAT(pp.x, Catch::Matchers::WithinAbs(p.x, 1e-9));
        CHECK_THAT(pp.y, Catch::Matchers::WithinAbs(p.y, 1e-9));

        SDisk E{coord(rng), coord(rng), rad(rng)};
        double gap = std::hypot(E.x - D.x, E.y - D.y) - E.r;
        if (gap < 1e-3) continue;  // keep the inversion center outside E
        SDisk EE = invert_disk(D, invert_disk(D, E));
        CHECK_THAT(EE.x, Catch::Matchers::WithinAbs(E.x, 1e-8));
        CHECK_THAT(EE.y, Catch::Matchers::WithinAbs(E.y, 1e-8));
        CHECK_THAT(EE.r, Catch::Matchers::WithinAbs(E.r, 1e-8));
    }
}

TEST_CASE("reduced words: counts, uniqueness, validation") {
    std::vector<SDisk> gens;
    for (int i = 0; i < 8; ++i) gens.push_back({6.0 * i, 0, 1});
    auto words = enumerate_words(gens, 2);
    std::size_t len1 = 0, len2 = 0;
    std::set<std::string> seen;
    for (const auto& wi : words) {
        (wi.word.letters.size() == 1 ? len1 : len2)++;
        CHECK(seen.insert(wi.word.str()).second);
        CHECK(wi.images.size() == 7);  // all generators except the last letter
        CHECK_NOTHROW(validate_reduced(wi.word, gens.size()));
    }
    CHECK(len1 == 8);
    CHECK(len2 == 8 * 7);

    CHECK_THROWS_AS(enumerate_words({gens[0]}, 2), numeric_error);
    CHECK_THROWS_AS(enumerate_words(gens, 10, 1000), numeric_error);  // cap
    ReducedWord bad;
    bad.letters = {0, 0};
    CHECK_THROWS_AS(validate_reduced(bad, 8), numeric_error);
    bad.letters = {0, 9};
    CHECK_THROWS_AS(validate_reduced(bad, 8), numeric_error);
}

TEST_CASE("word images land inside the image of the first letter's disk") {
    std::vector<SDisk> gens = {{0, 0, 1}, {4, 0, 1}, {0, 4, 1}};
    for (const auto& wi : enumerate_words(gens, 3)) {
        const SDisk& outer = gens[wi.word.letters.front()];
        for (const auto& img : wi.images) {
            double d = std::hypot(img.x - outer.x, img.y - outer.y);
            CHECK(d + img.r <= outer.r * (1 + 1e-9));
        }
    }
}

TEST_CASE("disk nests shrink strictly and trap their limit point") {
    std::vector<SDisk> gens = {{0, 0, 1}, {4, 0, 1}};
    std::vector<int> seq = {0, 1, 0, 1, 0, 1};
    DiskNest nest = build_nest(gens, seq, 6);
    REQUIRE(nest.disks.size() == 6);
    for (std::size_t j = 1; j < nest.disks.size(); ++j) {
        CHECK(nest.disks[j].r < nest.disks[j - 1].r);
        double d = std::hypot(nest.disks[j].x - nest.disks[j - 1].x,
                              nest.disks[j].y - nest.disks[j - 1].y);
        CHECK(d + nest.disks[j].r <= nest.disks[j - 1].r * (1 + 1e-9));
    }
    // the limit estimate lies in every disk of the nest
    for (const auto& B : nest.disks)
        CHECK(std::hypot(nest.limit.x - B.x, nest.limit.y - B.y) <= B.r * (1 + 1e-12));
    CHECK(nest.err == nest.disks.back().r);

    DiskNest shallow = build_nest(gens, seq, 1);
    CHECK(shallow.disks.size() == 1);
    CHECK_THROWS_AS(build_nest(gens, {0, 0, 1}, 3), numeric_error);  // not reduced
    CHECK_THROWS_AS(build_nest(gens, seq, 0), numeric_error);
    CHECK_THROWS_AS(build_nest(gens, seq, 7), numeric_error);  // deeper than sequence
}

TEST_CASE("random nests over random generator pairs stay nested") {
    std::mt19937 rng(20260823);
    std::uniform_real_distribution<double> sep(3.0, 10.0), rad(0.5, 1.2);
    for (int trial = 0; trial < 100; ++trial) {
        std::vector<SDisk> gens = {{0, 0, rad(rng)}, {sep(rng), 0, rad(rng)}};
        std::vector<int> seq;
        for (int j = 0; j < 8; ++j) seq.push_back(j % 2);
        DiskNest nest = build_nest(gens, seq, 8);
        CHECK(nest.disks.back().r < nest.disks.front().r);
    }
}

TEST_CASE("eccentricity upper bounds") {
    CHECK(eccentricity_upper_bound({{0, 0, 1}}) == 1.0);
    CHECK(eccentricity_upper_bound({{2, 3, 0.5}}) == 1.0);
    // two externally tangent unit disks: best ratio 3 at either center
    double two = eccentricity_upper_bound({{0, 0, 1}, {2, 0, 1}});
    CHECK_THAT(two, Catch::Matchers::WithinRel(3.0, 1e-6));
    // a disk with an attached far point
    double spiked = eccentricity_upper_bound({{0, 0, 1}}, {{3, 0, false}});
    CHECK_THAT(spiked, Catch::Matchers::WithinRel(3.0, 1e-6));
    CHECK_THROWS_AS(eccentricity_upper_bound({}), numeric_error);
}
