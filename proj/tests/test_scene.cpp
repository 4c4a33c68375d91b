#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "cdom/scene.hpp"

using namespace cdom;

TEST_CASE("basic block layout and its guard rails") {
    NumericValue a = NumericValue::rational(1, 4001);
    NumericValue s = NumericValue::rational(1000, 4001);
    NumericValue eps = NumericValue::rational(1, 400100);
    BlockLayout b = block(2, a, s, eps);
    REQUIRE(b.rows.size() == 2);
    CHECK(b.rows[0].i_lo.rat() == 0);
    CHECK(b.rows[0].i_hi.rat() == mpq_class(2000, 4001));
    CHECK(b.rows[0].y.rat() == mpq_class(1000, 4001));
    CHECK(b.rows[1].i_lo.rat() == mpq_class(2001, 4001));
    CHECK(b.rows[1].i_hi.rat() == 1);
    // gaps inside rows leave a/2 margins around the center line
    CHECK(b.rows[0].jdo_hi.rat() == s.rat() - a.rat() / 2);
    CHECK(b.rows[0].jup_lo.rat() == s.rat() + a.rat() / 2);

    CHECK_THROWS_AS(block(3, a, s, eps), numeric_error);
    CHECK_THROWS_AS(block(2, a, s, NumericValue::zero()), numeric_error);
    // violated length equation
    CHECK_THROWS_AS(block(2, a, NumericValue::rational(1, 4), eps), numeric_error);
}

TEST_CASE("depth-1 exact scene has four addressed rectangles") {
    SceneGraph sc = generation(1, SceneMode::exact);
    REQUIRE(sc.enumerated(1));
    const auto& lvl = sc.level(1);
    REQUIRE(lvl.size() == 4);
    for (const auto& e : lvl) {
        CHECK(e.rect.half_width.rat() == mpq_class(1, 400100));
        CHECK(e.rect.half_height.rat() == mpq_class(1000, 4001));
        CHECK(e.disks[0].radius.rat() == mpq_class(1000, 4001));
        // disks flank the rectangle at horizontal offset 2t + r
        mpq_class off = e.disks[1].center.x.rat() - e.rect.center.x.rat();
        CHECK(off == mpq_class(2) / 400100 + mpq_class(1000) / 4001);
        CHECK(e.rect.center.x.rat() - e.disks[0].center.x.rat() == off);
        // six boundary segments share the rectangle's vertical sides
        CHECK(e.segs[0].x.rat() == e.rect.center.x.rat() - e.rect.half_width.rat());
        CHECK(e.segs[3].x.rat() == e.rect.center.x.rat() + e.rect.half_width.rat());
        CHECK(e.segs[1].kind == SegKind::J_Do);
        CHECK(e.segs[2].kind == SegKind::J_Up);
    }
    // columns sit at x = -2 and x = +2
    CHECK(lvl[0].rect.center.x.rat() == -2);
    CHECK(lvl[2].rect.center.x.rat() == 2);
    CHECK(lvl[0].word.str() == "(Le,1)");
    CHECK(lvl[3].word.str() == "(Ri,2)");
}

TEST_CASE("exact-mode children are reachable individually, not by enumeration") {
    SceneGraph sc = generation(1, SceneMode::exact);
    Word w;
    w.letters.push_back({SideTag::Le, 1});
    CHECK_THROWS_AS(children(sc, w), numeric_error);  // 2 N_2 ~ 4e7

    const WordEntry& pe = sc.entry(w);
    WordEntry c = child_entry(sc, pe, SideTag::Ri, 1);
    // horizontal placement: half the parent half-width to the right
    mpq_class dx = c.rect.center.x.rat() - pe.rect.center.x.rat();
    CHECK(dx == mpq_class(1, 2 * 400100));
    // level-2 geometry lives far below rational range
    CHECK(c.rect.half_width.is_log());
    CHECK(c.rect.half_width.sign() == Sign::plus);
    CHECK(c.rect.half_width.ln_abs() < -1e29);

    // upper-half child n = N/2 + 1 starts above the parent's center line
    long N2 = static_cast<long>(sc.level_params(2).N.get_si());
    WordEntry cu = child_entry(sc, pe, SideTag::Le, N2 / 2 + 1);
    CHECK(nv_less(pe.rect.center.y, cu.rect.center.y));
    CHECK_THROWS_AS(child_entry(sc, pe, SideTag::Le, 0), numeric_error);
    CHECK_THROWS_AS(child_entry(sc, pe, SideTag::Le, N2 + 1), numeric_error);
}

TEST_CASE("presentation scene enumerates every level") {
    SceneGraph sc = generation(2, SceneMode::presentation);
    REQUIRE(sc.enumerated(2));
    CHECK(sc.level(1).size() == 4);
    CHECK(sc.level(2).size() == 4 * 2 * 4);  // per parent: two sides x N_2 = 4
    // every child rectangle stays inside its parent's horizontal slab
    for (const auto& c : sc.level(2)) {
        const WordEntry& p = sc.entry(c.word.parent());
        NumericValue lo = nv_sub(p.rect.center.x, p.rect.half_width);
        NumericValue hi = nv_add(p.rect.center.x, p.rect.half_width);
        CHECK(nv_less(lo, c.rect.center.x));
        CHECK(nv_less(c.rect.center.x, hi));
        CHECK(nv_less(nv_sub(p.rect.center.y, p.rect.half_height), c.rect.center.y));
        CHECK(nv_less(c.rect.center.y, nv_add(p.rect.center.y, p.rect.half_height)));
    }
    CHECK_THROWS_AS(generation(5, SceneMode::presentation), numeric_error);
    CHECK_THROWS_AS(generation(3, SceneMode::exact), numeric_error);
}

TEST_CASE("resolve_entry walks addresses and matches enumerated geometry") {
    SceneGraph sc = generation(2, SceneMode::presentation);
    for (const auto& e : sc.level(2)) {
        WordEntry r = resolve_entry(sc, e.word);
        CHECK(nv_compare(r.rect.center.x, e.rect.center.x) == 0);
        CHECK(nv_compare(r.rect.center.y, e.rect.center.y) == 0);
    }
    Word bad;
    bad.letters.push_back({SideTag::Le, 9});
    CHECK_THROWS_AS(resolve_entry(sc, bad), numeric_error);
    CHECK_THROWS_AS(resolve_entry(sc, Word{}), numeric_error);
}

TEST_CASE("finite covers of the two Cantor factors") {
    SceneGraph sc = generation(1, SceneMode::exact);
    CantorCover c1 = cantor_cover(sc.params, 1);
    REQUIRE(c1.e_cover.size() == 2);
    CHECK(c1.e_total_length.rat() == mpq_class(1, 100025));  // 4 t_1
    CHECK_FALSE(c1.e_ratio.has_value());
    CHECK(c1.f_count == 2);
    REQUIRE(c1.f_cover.size() == 2);
    CHECK(c1.f_cover[0].lo.rat() == 0);
    CHECK(c1.f_cover[0].hi.rat() == mpq_class(2000, 4001));

    CantorCover c2 = cantor_cover(sc.params, 2);
    CHECK(c2.e_cover.size() == 4);
    REQUIRE(c2.e_ratio.has_value());
    // each refinement shrinks horizontal scale by far more than 1/50
    CHECK(nv_less(*c2.e_ratio, NumericValue::rational(1, 50)));
    CHECK(c2.f_count == mpz_class(2) * mpz_class("19990000"));
    CHECK(c2.f_cover.empty());  // beyond the enumeration cap
    // covers nest: the first two level-2 intervals sit inside the first level-1 one
    CHECK(nv_leq(c1.e_cover[0].lo, c2.e_cover[0].lo));
    CHECK(nv_leq(c2.e_cover[1].hi, c1.e_cover[0].hi));
    CHECK_THROWS_AS(cantor_cover(sc.params, 3), numeric_error);
}

TEST_CASE("word ordering and address helpers") {
    Word w;
    w.letters = {{SideTag::Le, 2}, {SideTag::Ri, 3}};
    CHECK(w.str() == "(Le,2)(Ri,3)");
    CHECK(w.parent().str() == "(Le,2)");
    CHECK(w.child(SideTag::Le, 1).depth() == 3);
    CHECK(w.shifted(-1).back().n == 2);
    Word v;
    v.letters = {{SideTag::Le, 2}};
    CHECK(v < w);
    CHECK_FALSE(w < v);
}

TEST_CASE("point location reports the level resolution as error radius") {
    SceneGraph sc = generation(1, SceneMode::exact);
    Word w;
    w.letters = {{SideTag::Ri, 2}};
    LocatedPoint p = point_locate(sc, w);
    CHECK(p.point.x.rat() == 2);
    CHECK(p.err_x.rat() == mpq_class(1, 400100));
    CHECK(p.err_y.rat() == mpq_class(1000, 4001));

    Word w2 = w.child(SideTag::Le, 1);
    LocatedPoint p2 = point_locate(sc, w2);
    CHECK(p2.err_x.is_log());
    CHECK(nv_less(p2.err_x, p.err_x));
}
