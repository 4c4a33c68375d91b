#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cdom/modulus.hpp"

using namespace cdom;

namespace {

PathFamily rect_family(FamilyKind k, double w, double h) {
    PathFamily f;
    f.kind = k;
    f.lo = {NumericValue::rational(0), NumericValue::rational(0)};
    f.hi = {NumericValue::rational(static_cast<long>(w * 1000), 1000),
            NumericValue::rational(static_cast<long>(h * 1000), 1000)};
    return f;
}

}  // namespace

TEST_CASE("closed-form moduli of rectangles and annuli") {
    CHECK(closed_form_modulus(rect_family(FamilyKind::vertical_segments, 1, 1)).rat() == 1);
    CHECK(closed_form_modulus(rect_family(FamilyKind::vertical_segments, 2, 1)).rat() == 2);
    CHECK(closed_form_modulus(rect_family(FamilyKind::horizontal_segments, 2, 1)).rat() ==
          mpq_class(1, 2));

    PathFamily ann;
    ann.kind = FamilyKind::circle_family;
    ann.s1 = NumericValue::rational(1);
    ann.s2 = NumericValue::log_scale(Sign::plus, 1.0);  // radius e
    NumericValue sep = closed_form_modulus(ann);
    CHECK_THAT(std::exp(sep.ln_abs()), Catch::Matchers::WithinRel(1.0 / (2.0 * M_PI), 1e-12));
    ann.kind = FamilyKind::joining_annulus;
    NumericValue join = closed_form_modulus(ann);
    CHECK_THAT(std::exp(join.ln_abs()), Catch::Matchers::WithinRel(2.0 * M_PI, 1e-12));
    // the two families of one annulus are reciprocal
    CHECK_THAT(sep.ln_abs() + join.ln_abs(), Catch::Matchers::WithinAbs(0.0, 1e-12));

    PathFamily bad = rect_family(FamilyKind::vertical_segments, 0, 1);
    CHECK_THROWS_AS(closed_form_modulus(bad), numeric_error);
    PathFamily arc;
    arc.kind = FamilyKind::arc_family;
    CHECK_THROWS_AS(closed_form_modulus(arc), numeric_error);
}

TEST_CASE("grid estimates are exact on rectangles") {
    CHECK_THAT(discrete_rect_modulus(1, 1, 32), Catch::Matchers::WithinRel(1.0, 1e-10));
    CHECK_THAT(discrete_rect_modulus(2, 1, 32), Catch::Matchers::WithinRel(0.5, 1e-10));
    CHECK_THAT(discrete_rect_modulus(1, 2, 32), Catch::Matchers::WithinRel(2.0, 1e-10));
    CHECK_THROWS_AS(discrete_rect_modulus(1, 1, 8), numeric_error);
}

TEST_CASE("reciprocal duality of the rectangle estimates") {
    std::mt19937 rng(9001);
    std::uniform_real_distribution<double> side(0.5, 3.0);
    for (int i = 0; i < 5; ++i) {
        double w = side(rng), h = side(rng);
        double p = discrete_rect_modulus(w, h, 64);
        double q = discrete_rect_modulus(h, w, 64);
        CHECK_THAT(p * q, Catch::Matchers::WithinRel(1.0, 0.04));
    }
}

TEST_CASE("annulus estimate converges to the closed form") {
    double target = 2.0 * M_PI;  // joining modulus of 1 < |z| < e
    double prev_err = 1e9;
    for (int n : {32, 64, 128, 256}) {
        double est = discrete_annulus_modulus(1.0, M_E, n);
        double err = std::abs(est - target);
        CHECK(err < prev_err);
        prev_err = err;
    }
    CHECK_THAT(discrete_annulus_modulus(1.0, M_E, 256),
               Catch::Matchers::WithinRel(target, 0.02));
    CHECK_THROWS_AS(discrete_annulus_modulus(2.0, 1.0, 64), numeric_error);
}

TEST_CASE("region monotonicity: a wider conductor has larger joining modulus") {
    double narrow = discrete_rect_modulus(1.0, 0.5, 64);
    double wide = discrete_rect_modulus(1.0, 1.5, 64);
    CHECK(narrow < wide);
}

TEST_CASE("surrounding families exist for every depth-1 word") {
    SceneGraph sc = generation(1, SceneMode::exact);
    for (const auto& e : sc.level(1)) {
        SurroundingReport rep = surrounding_families(sc, e.word);
        INFO(e.word.str());
        CHECK(rep.checks.all_ok());
        REQUIRE(rep.families.size() == 4);  // bottoms/tops: four ring gaps
        int arcs = 0;
        for (const auto& f : rep.families) {
            CHECK_FALSE(nv_less(f.bound, NumericValue::rational(1, 10)));
            if (f.family.kind == FamilyKind::arc_family) ++arcs;
        }
        CHECK(arcs == 1);  // exactly one outer-edge arc family per bottom/top
    }
}

TEST_CASE("assembled chains separate the rectangle from infinity") {
    SceneGraph sc = generation(1, SceneMode::exact);
    for (const auto& e : sc.level(1)) {
        SurroundingReport rep = surrounding_families(sc, e.word);
        Chain ch = assemble_chain(rep);
        REQUIRE(ch.closed);
        std::pair<double, double> z{e.rect.center.x.to_double(), e.rect.center.y.to_double()};
        INFO(e.word.str());
        CHECK(separation_check(ch, z));
        // a point in the other column must not be enclosed
        std::pair<double, double> other{-z.first, z.second};
        CHECK(std::lround(winding_number(ch.polyline, other.first, other.second)) == 0);
    }
    Chain open_chain;
    open_chain.polyline = {{0, 0}, {1, 0}, {0, 1}};
    CHECK_THROWS_AS(separation_check(open_chain, {0.3, 0.3}), numeric_error);
}

TEST_CASE("winding numbers of a simple loop") {
    std::vector<std::pair<double, double>> sq = {{-1, -1}, {1, -1}, {1, 1}, {-1, 1}};
    CHECK(std::lround(winding_number(sq, 0, 0)) == 1);
    CHECK(std::lround(winding_number(sq, 5, 0)) == 0);
    std::reverse(sq.begin(), sq.end());
    CHECK(std::lround(winding_number(sq, 0, 0)) == -1);
}

TEST_CASE("overlap census of dilated disks") {
    auto mk = [](double x, double y) {
        Disk d;
        d.center = {NumericValue::rational(static_cast<long>(x * 1000), 1000),
                    NumericValue::rational(static_cast<long>(y * 1000), 1000)};
        d.radius = NumericValue::rational(1);
        return d;
    };
    CHECK(overlap_count({mk(0, 0), mk(10, 0)}, 1.0) == 1);
    CHECK(overlap_count({mk(0, 0), mk(1, 0)}, 1.0) == 2);
    // hexagonal cluster: the center point lies in all seven dilated disks
    std::vector<Disk> hex = {mk(0, 0)};
    for (int i = 0; i < 6; ++i)
        hex.push_back(mk(2 * std::cos(i * M_PI / 3), 2 * std::sin(i * M_PI / 3)));
    CHECK(overlap_count(hex, 3.0) >= 7);

    Disk odd = mk(0, 0);
    odd.radius = NumericValue::rational(2);
    CHECK_THROWS_AS(overlap_count({mk(0, 0), odd}, 1.0), numeric_error);
}

TEST_CASE("depth-1 disks dilated five-fold overlap at most 36 deep") {
    SceneGraph sc = generation(1, SceneMode::exact);
    std::vector<Disk> disks;
    for (const auto& e : sc.level(1)) {
        disks.push_back(e.disks[0]);
        disks.push_back(e.disks[1]);
    }
    int deep = overlap_count(disks, 5.0);
    CHECK(deep <= 36);
    CHECK(deep >= 2);
}

TEST_CASE("distortion constants verify in log scale") {
    VerificationReport rep = verify_distortion_constants();
    CHECK(rep.all_ok());
    CHECK(rep.checks.size() == 5);
}
