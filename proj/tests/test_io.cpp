#include <catch2/catch_amalgamated.hpp>

#include <string>

#include "cdom/json_io.hpp"
#include "cdom/render.hpp"

using namespace cdom;

namespace {

std::size_t count_substr(const std::string& hay, const std::string& needle) {
    std::size_t n = 0, pos = 0;
    while ((pos = hay.find(needle, pos)) != std::string::npos) {
        ++n;
        pos += needle.size();
    }
    return n;
}

}  // namespace

TEST_CASE("scalar JSON round trips preserve exact and log values") {
    NumericValue q = NumericValue::rational(1000, 4001);
    NumericValue q2 = numeric_from_json(to_json(q));
    CHECK(q2.rat() == q.rat());

    NumericValue l = NumericValue::log_scale(Sign::minus, -2.554884e30, true);
    NumericValue l2 = numeric_from_json(to_json(l));
    CHECK(l2.is_log());
    CHECK(l2.sign() == Sign::minus);
    CHECK(l2.ln_abs() == l.ln_abs());
    CHECK(l2.absorbed());

    NumericValue z = numeric_from_json(to_json(NumericValue::zero()));
    CHECK(z.sign() == Sign::zero);

    CHECK_THROWS_AS(numeric_from_json(ojson{{"bogus", 1}}), numeric_error);
}

TEST_CASE("word strings parse back to the same address") {
    Word w;
    w.letters = {{SideTag::Le, 1}, {SideTag::Ri, 3}};
    CHECK(parse_word(word_to_string(w)) == w);
    CHECK(parse_word("(Ri,2)") == Word{{{SideTag::Ri, 2}}});
    CHECK_THROWS_AS(parse_word(""), numeric_error);
    CHECK_THROWS_AS(parse_word("(Up,1)"), numeric_error);
    CHECK_THROWS_AS(parse_word("(Le1)"), numeric_error);
}

TEST_CASE("scene JSON round trip keeps every object and exact value") {
    SceneGraph sc = generation(1, SceneMode::exact);
    ojson j = scene_to_json(sc);
    CHECK(j["mode"] == "exact");
    CHECK(j["depth"] == 1);
    CHECK(j["objects"].size() == 4 * (1 + 2 + 6));
    REQUIRE(j["params"].size() == 2);
    CHECK(j["params"][0].contains("N"));
    CHECK(j["params"][1]["N"] == "19990000");

    SceneObjects objs = scene_from_json(j);
    CHECK(objs.rects.size() == 4);
    CHECK(objs.disks.size() == 8);
    CHECK(objs.segments.size() == 24);
    for (const auto& d : objs.disks) CHECK(d.radius.rat() == mpq_class(1000, 4001));

    // serialization is canonical: a second pass is byte-identical
    CHECK(scene_to_json(sc).dump() == j.dump());
    CHECK_THROWS_AS(scene_from_json(ojson{{"mode", "exact"},
                                          {"depth", 1},
                                          {"objects", {{{"word", "(Le,1)"}, {"type", "blob"}}}}}),
                    numeric_error);
}

TEST_CASE("deep parameter tables serialize their log forms") {
    std::vector<LevelParams> ps = {initial_params()};
    ps.push_back(next_params(ps.back()));
    ps.push_back(next_params(ps.back()));
    ojson j = to_json(ps[2]);
    CHECK_FALSE(j.contains("N"));
    REQUIRE(j.contains("log_N"));
    CHECK(j["log_N"]["c2"] == 1.0);
    CHECK(j["a"]["ln"]["c3"] == -1.0);
    CHECK_FALSE(j["a"].contains("value"));
}

TEST_CASE("verification reports survive a JSON round trip") {
    VerificationReport rep;
    rep.suite = "demo";
    rep.add("one", "first rule", true, "fine");
    rep.add_status("two", "second rule", CheckStatus::documented_discrepancy, "noted");
    rep.add("three", "third rule", false);
    ojson j = report_to_json(rep);
    VerificationReport back = report_from_json(j);
    CHECK(back.suite == rep.suite);
    REQUIRE(back.checks.size() == 3);
    CHECK(back.checks[1].status == CheckStatus::documented_discrepancy);
    CHECK(back.checks[2].status == CheckStatus::fail);
    CHECK(report_to_json(back).dump() == j.dump());
    CHECK(j["fail_count"] == 1);
}

TEST_CASE("SVG rendering: depth-1 scene shows exactly eight circles") {
    SceneGraph sc = generation(1, SceneMode::exact);
    SceneObjects objs = scene_from_json(scene_to_json(sc));
    RenderWindow win;  // default covers both columns
    std::string svg = render_svg(objs, win);
    CHECK(count_substr(svg, "<circle") == 8);
    CHECK(count_substr(svg, "<rect") == 4);
    CHECK(count_substr(svg, "<line") == 24);
    CHECK(svg.find("viewBox=") != std::string::npos);
    // deterministic output
    CHECK(render_svg(objs, win) == svg);

    // chain overlay adds one dashed polyline
    std::string with_chain = render_svg(objs, win, {{0, 0}, {1, 0}, {1, 1}});
    CHECK(count_substr(with_chain, "<polyline") == 1);
    CHECK(with_chain.find("stroke-dasharray") != std::string::npos);

    RenderWindow empty{1, 1, 1, 2};
    CHECK_THROWS_AS(render_svg(objs, empty), numeric_error);
    RenderWindow offside{50, 50, 60, 60};
    CHECK_THROWS_AS(render_svg(objs, offside), numeric_error);
}
