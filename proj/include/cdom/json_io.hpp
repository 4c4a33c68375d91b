#pragma once

#include <string>

#include <json.hpp>

#include "cdom/capacity.hpp"
#include "cdom/numeric.hpp"
#include "cdom/params.hpp"
#include "cdom/report.hpp"
#include "cdom/scene.hpp"

namespace cdom {

using ojson = nlohmann::ordered_json;

// ---- NumericValue <-> {"rat": "p/q"} | {"log": {"sign", "ln", "absorbed"}} --

inline ojson to_json(const NumericValue& v) {
    ojson j;
    if (v.is_rational()) {
        j["rat"] = v.rat().get_str();
        if (v.absorbed()) j["absorbed"] = true;
    } else {
        ojson l;
        l["sign"] = sign_int(v.sign());
        l["ln"] = v.sign() == Sign::zero ? 0.0 : v.ln_abs();
        l["absorbed"] = v.absorbed();
        j["log"] = l;
    }
    return j;
}

inline NumericValue numeric_from_json(const ojson& j) {
    if (j.contains("rat")) {
        mpq_class q(j["rat"].get<std::string>());
        q.canonicalize();
        return NumericValue::rational(q);
    }
    if (j.contains("log")) {
        const auto& l = j["log"];
        int s = l["sign"].get<int>();
        return NumericValue::log_scale(sign_of(s), l["ln"].get<double>(),
                                       l.value("absorbed", false));
    }
    throw numeric_error("numeric_from_json: unknown scalar encoding");
}

// ---- words -----------------------------------------------------------------

inline std::string word_to_string(const Word& w) { return w.str(); }

inline Word parse_word(const std::string& s) {
    Word w;
    std::size_t i = 0;
    while (i < s.size()) {
        if (s[i] != '(') throw numeric_error("parse_word: expected '(' in " + s);
        std::size_t close = s.find(')', i);
        std::size_t comma = s.find(',', i);
        if (close == std::string::npos || comma == std::string::npos || comma > close)
            throw numeric_error("parse_word: malformed letter in " + s);
        std::string m = s.substr(i + 1, comma - i - 1);
        long n = std::stol(s.substr(comma + 1, close - comma - 1));
        if (m != "Le" && m != "Ri") throw numeric_error("parse_word: bad side tag " + m);
        w.letters.push_back({m == "Le" ? SideTag::Le : SideTag::Ri, n});
        i = close + 1;
    }
    if (w.letters.empty()) throw numeric_error("parse_word: empty word");
    return w;
}

// ---- parameter tables ------------------------------------------------------

inline ojson to_json(const LogForm& f) {
    ojson j;
    j["c0"] = f.c0;
    j["c2"] = f.c2;
    j["c3"] = f.c3;
    j["absorbed"] = f.absorbed;
    return j;
}

inline ojson to_json(const Scalar& s) {
    ojson j;
    if (s.has_value()) j["value"] = to_json(s.val());
    j["ln"] = to_json(s.ln);
    return j;
}

inline ojson to_json(const LevelParams& p) {
    ojson j;
    j["k"] = p.k;
    j["conforming"] = p.conforming;
    if (p.n_exact)
        j["N"] = p.N.get_str();
    else
        j["log_N"] = to_json(p.log_N);
    j["a"] = to_json(p.a);
    j["s"] = to_json(p.s);
    j["eps"] = to_json(p.eps);
    j["ehat"] = to_json(p.ehat);
    j["t"] = to_json(p.t);
    j["r"] = to_json(p.r);
    j["delta"] = to_json(p.delta);
    j["scale"] = to_json(p.scale);
    return j;
}

// ---- scene -----------------------------------------------------------------

inline ojson scene_to_json(const SceneGraph& sc) {
    ojson j;
    j["mode"] = to_string(sc.mode);
    j["depth"] = sc.depth;
    ojson params = ojson::array();
    for (const auto& p : sc.params) params.push_back(to_json(p));
    j["params"] = std::move(params);
    ojson objects = ojson::array();
    for (int k = 1; k <= static_cast<int>(sc.levels.size()); ++k) {
        if (!sc.enumerated(k)) continue;
        std::vector<WordEntry> lvl = sc.level(k);
        std::sort(lvl.begin(), lvl.end(),
                  [](const WordEntry& a, const WordEntry& b) { return a.word < b.word; });
        for (const auto& e : lvl) {
            ojson rect;
            rect["word"] = word_to_string(e.word);
            rect["type"] = "rect";
            rect["cx"] = to_json(e.rect.center.x);
            rect["cy"] = to_json(e.rect.center.y);
            rect["half_width"] = to_json(e.rect.half_width);
            rect["half_height"] = to_json(e.rect.half_height);
            objects.push_back(std::move(rect));
            for (const auto& d : e.disks) {
                ojson dj;
                dj["word"] = word_to_string(e.word);
                dj["type"] = "disk";
                dj["side"] = to_string(d.side);
                dj["cx"] = to_json(d.center.x);
                dj["cy"] = to_json(d.center.y);
                dj["r"] = to_json(d.radius);
                objects.push_back(std::move(dj));
            }
            for (const auto& s : e.segs) {
                ojson sj;
                sj["word"] = word_to_string(e.word);
                sj["type"] = "segment";
                sj["kind"] = to_string(s.kind);
                sj["side"] = to_string(s.side);
                sj["x"] = to_json(s.x);
                sj["y_lo"] = to_json(s.y_lo);
                sj["y_hi"] = to_json(s.y_hi);
                objects.push_back(std::move(sj));
            }
        }
    }
    j["objects"] = std::move(objects);
    return j;
}

// Geometry-only view of a scene file, sufficient for rendering.
struct SceneObjects {
    std::string mode;
    int depth = 1;
    std::vector<std::pair<Word, Rect>> rects;
    std::vector<Disk> disks;
    std::vector<VSegment> segments;
};

inline SceneObjects scene_from_json(const ojson& j) {
    SceneObjects out;
    out.mode = j["mode"].get<std::string>();
    out.depth = j["depth"].get<int>();
    for (const auto& o : j["objects"]) {
        Word w = parse_word(o["word"].get<std::string>());
        std::string type = o["type"].get<std::string>();
        if (type == "rect") {
            Rect r;
            r.center = {numeric_from_json(o["cx"]), numeric_from_json(o["cy"])};
            r.half_width = numeric_from_json(o["half_width"]);
            r.half_height = numeric_from_json(o["half_height"]);
            out.rects.emplace_back(w, std::move(r));
        } else if (type == "disk") {
            Disk d;
            d.owner = w;
            d.side = o["side"].get<std::string>() == "Le" ? SideTag::Le : SideTag::Ri;
            d.center = {numeric_from_json(o["cx"]), numeric_from_json(o["cy"])};
            d.radius = numeric_from_json(o["r"]);
            out.disks.push_back(std::move(d));
        } else if (type == "segment") {
            VSegment s;
            s.owner = w;
            std::string kind = o["kind"].get<std::string>();
            s.kind = kind == "I" ? SegKind::I : (kind == "J_Do" ? SegKind::J_Do : SegKind::J_Up);
            s.side = o["side"].get<std::string>() == "Le" ? SideTag::Le : SideTag::Ri;
            s.x = numeric_from_json(o["x"]);
            s.y_lo = numeric_from_json(o["y_lo"]);
            s.y_hi = numeric_from_json(o["y_hi"]);
            out.segments.push_back(std::move(s));
        } else {
            throw numeric_error("scene_from_json: unknown object type " + type);
        }
    }
    return out;
}

// ---- verification reports --------------------------------------------------

inline ojson report_to_json(const VerificationReport& rep) {
    ojson j;
    j["suite"] = rep.suite;
    ojson checks = ojson::array();
    for (const auto& c : rep.checks) {
        ojson cj;
        cj["id"] = c.id;
        cj["rule"] = c.rule;
        cj["status"] = to_string(c.status);
        if (!c.detail.empty()) cj["detail"] = c.detail;
        checks.push_back(std::move(cj));
    }
    j["checks"] = std::move(checks);
    j["fail_count"] = rep.fail_count();
    return j;
}

inline VerificationReport report_from_json(const ojson& j) {
    VerificationReport rep;
    rep.suite = j["suite"].get<std::string>();
    for (const auto& cj : j["checks"]) {
        CheckRecord c;
        c.id = cj["id"].get<std::string>();
        c.rule = cj["rule"].get<std::string>();
        std::string st = cj["status"].get<std::string>();
        c.status = st == "pass" ? CheckStatus::pass
                                : (st == "fail" ? CheckStatus::fail
                                                : CheckStatus::documented_discrepancy);
        c.detail = cj.value("detail", "");
        rep.checks.push_back(std::move(c));
    }
    return rep;
}

}  // namespace cdom
