#pragma once

#include <random>
#include <set>
#include <string>
#include <vector>

#include "cdom/capacity.hpp"
#include "cdom/modulus.hpp"
#include "cdom/neighbors.hpp"
#include "cdom/params.hpp"
#include "cdom/report.hpp"
#include "cdom/scene.hpp"
#include "cdom/schottky.hpp"

namespace cdom {

// Parameter recurrence: every level inequality plus child containment,
// through the deepest level in numeric range (3).
inline std::vector<VerificationReport> verify_params_suite() {
    std::vector<VerificationReport> out;
    LevelParams p1 = initial_params();
    LevelParams p2 = next_params(p1);
    LevelParams p3 = next_params(p2);
    out.push_back(verify_level_inequalities(p1));
    out.push_back(verify_level_inequalities(p2, &p1));
    out.push_back(verify_level_inequalities(p3, &p2));
    out.push_back(containment_margin(p2, p1).checks);
    out.push_back(containment_margin(p3, p2).checks);
    return out;
}

// Depth-1 exact geometry: pairwise disjointness and symmetry.
inline VerificationReport verify_scene_suite(const SceneGraph& sc) {
    VerificationReport rep;
    rep.suite = "scene.depth1";
    const auto& lvl = sc.level(1);

    auto disk_disk_disjoint = [](const Disk& a, const Disk& b) {
        NumericValue d2 = nv_add(detail::nv_sq(nv_sub(a.center.x, b.center.x)),
                                 detail::nv_sq(nv_sub(a.center.y, b.center.y)));
        return nv_less(detail::nv_sq(nv_add(a.radius, b.radius)), d2);
    };
    auto disk_rect_disjoint = [](const Disk& d, const WordEntry& e) {
        NumericValue px = detail::clamp_nv(d.center.x, nv_sub(e.rect.center.x, e.rect.half_width),
                                           nv_add(e.rect.center.x, e.rect.half_width));
        NumericValue py = detail::clamp_nv(d.center.y, nv_sub(e.rect.center.y, e.rect.half_height),
                                           nv_add(e.rect.center.y, e.rect.half_height));
        NumericValue d2 = nv_add(detail::nv_sq(nv_sub(px, d.center.x)),
                                 detail::nv_sq(nv_sub(py, d.center.y)));
        return nv_less(detail::nv_sq(d.radius), d2);
    };

    bool dd = true, dr = true;
    for (std::size_t i = 0; i < lvl.size(); ++i)
        for (const Disk& a : lvl[i].disks) {
            for (std::size_t j = 0; j < lvl.size(); ++j) {
                for (const Disk& b : lvl[j].disks)
                    if (!(i == j && a.side == b.side)) dd = dd && disk_disk_disjoint(a, b);
                dr = dr && disk_rect_disjoint(a, lvl[j]);
            }
        }
    rep.add("disks_pairwise_disjoint", "all depth-1 disks pairwise disjoint (exact)", dd);
    rep.add("disks_avoid_rects", "no disk meets any rectangle (exact)", dr);

    // Ri half-scene = Le half-scene translated by +4.
    bool sym = true;
    for (const auto& e : lvl) {
        if (e.word.letters[0].m != SideTag::Le) continue;
        Word mirror = e.word;
        mirror.letters[0].m = SideTag::Ri;
        const WordEntry& me = sc.entry(mirror);
        sym = sym &&
              nv_eq(nv_add(e.rect.center.x, NumericValue::rational(4)), me.rect.center.x) &&
              nv_eq(e.rect.center.y, me.rect.center.y);
    }
    rep.add("half_scene_symmetry", "Ri half equals Le half translated by +4", sym);

    rep.add("counts", "level 1 has 2 N_1 rectangles and twice as many disks",
            lvl.size() == 4);
    return rep;
}

inline VerificationReport verify_neighbors_suite(const SceneGraph& sc) {
    VerificationReport rep;
    rep.suite = "neighbors.depth1";
    for (const auto& e : sc.level(1)) {
        VerificationReport sub = check_containment(sc, e.word);
        bool all = sub.all_ok();
        rep.add("containment_" + e.word.str(),
                "every rectangle corner within 4 radii of every ring disk", all);
        NeighborRing ring = neighbor_ring(sc, e.word);
        std::set<std::pair<std::string, int>> seen;
        for (const auto& d : ring.disks) seen.insert({d.owner.str(), static_cast<int>(d.side)});
        rep.add("ring_distinct_" + e.word.str(), "ring disks pairwise distinct",
                seen.size() == ring.disks.size());
    }
    return rep;
}

inline VerificationReport verify_modulus_suite(const SceneGraph& sc) {
    VerificationReport rep;
    rep.suite = "modulus.depth1";
    for (const auto& e : sc.level(1)) {
        SurroundingReport sr = surrounding_families(sc, e.word);
        rep.add("families_" + e.word.str(), "surrounding family bounds and regions verified",
                sr.checks.all_ok());
        Chain ch = assemble_chain(sr);
        bool sep = separation_check(
            ch, {e.rect.center.x.to_double(), e.rect.center.y.to_double()});
        rep.add("separation_" + e.word.str(),
                "chain separates the rectangle center from the far point", sep);
    }
    std::vector<Disk> disks;
    for (const auto& e : sc.level(1)) {
        disks.push_back(e.disks[0]);
        disks.push_back(e.disks[1]);
    }
    int overlap = overlap_count(disks, 5.0);
    rep.add("overlap_bound", "max multiplicity of 5-dilated disks <= 36", overlap <= 36,
            "observed " + std::to_string(overlap));
    for (const auto& c : verify_distortion_constants().checks) rep.checks.push_back(c);
    return rep;
}

inline VerificationReport verify_capacity_suite(const SceneGraph&) {
    VerificationReport rep;
    rep.suite = "capacity";
    // independent of the scene: the capacity census follows the exact recurrence
    std::vector<LevelParams> params = {initial_params()};
    while (params.size() < 3) {
        try {
            params.push_back(next_params(params.back()));
        } catch (const numeric_error&) {
            break;
        }
    }
    for (int kmax = 1; kmax <= static_cast<int>(params.size()); ++kmax) {
        CapacitySeries actual = jinta_sum(params, kmax, SeriesMode::actual);
        rep.add("series_actual_k" + std::to_string(kmax),
                "union capacity bound below cap([0,1]) = 1/4 (true census)", actual.verdict,
                "bound ln = " + std::to_string(actual.bound.ln_abs()));
    }
    CapacitySeries formula = jinta_sum(params, std::min<int>(2, params.size()),
                                       SeriesMode::formula);
    rep.add("series_formula", "idealized series with tail stays below 1/4", formula.verdict);
    Census cen = removed_intervals(params, std::min<int>(2, params.size()));
    bool counts_ok = true;
    for (const auto& lev : cen.levels) counts_ok = counts_ok && lev.count_bound_ok;
    rep.add("census_count_bounds", "removed-gap counts within 2 N_k^k", counts_ok);
    return rep;
}

inline VerificationReport verify_schottky_suite(const SceneGraph& sc, int samples = 200) {
    VerificationReport rep;
    rep.suite = "schottky";
    std::vector<SDisk> gens;
    for (const auto& e : sc.level(1)) {
        gens.push_back(to_sdisk(e.disks[0]));
        gens.push_back(to_sdisk(e.disks[1]));
    }
    std::mt19937 rng(20260823);
    std::uniform_real_distribution<double> U(-3.0, 3.0);
    bool invol = true, on_boundary = true;
    for (int i = 0; i < samples; ++i) {
        const SDisk& D = gens[i % gens.size()];
        SPoint p{U(rng), U(rng)};
        if (std::hypot(p.x - D.x, p.y - D.y) < 1e-6) continue;
        SPoint q = invert_point(D, invert_point(D, p));
        invol = invol && std::hypot(q.x - p.x, q.y - p.y) <= 1e-12 * (1 + std::hypot(p.x, p.y));
        // image disk consistency on boundary samples
        const SDisk& E = gens[(i + 3) % gens.size()];
        if (&D != &E) {
            SDisk img = invert_disk(D, E);
            for (int a = 0; a < 16; ++a) {
                double th = 2 * M_PI * a / 16;
                SPoint b{E.x + E.r * std::cos(th), E.y + E.r * std::sin(th)};
                SPoint ib = invert_point(D, b);
                double dev = std::abs(std::hypot(ib.x - img.x, ib.y - img.y) - img.r);
                on_boundary = on_boundary && dev <= 1e-10 * (1 + img.r);
            }
        }
    }
    rep.add("inversion_involution", "reflecting twice returns the point (1e-12 rel)", invol);
    rep.add("disk_image_boundary", "boundary samples land on the image circle (1e-10 rel)",
            on_boundary);

    auto words = enumerate_words(gens, 2);
    std::size_t m = gens.size();
    rep.add("word_count", "reduced words to length 2 number m + m(m-1)",
            words.size() == m + m * (m - 1),
            std::to_string(words.size()));
    std::set<std::string> uniq;
    for (const auto& w : words) uniq.insert(w.word.str());
    rep.add("word_uniqueness", "no duplicate reduced words", uniq.size() == words.size());

    DiskNest nest = build_nest({{0, 0, 1}, {4, 0, 1}}, {0, 1, 0, 1, 0, 1}, 6);
    bool dec = true;
    for (std::size_t j = 1; j < nest.disks.size(); ++j)
        dec = dec && nest.disks[j].r < nest.disks[j - 1].r;
    rep.add("nest_decreasing", "nested image disks with strictly decreasing radii", dec,
            "final radius " + std::to_string(nest.err));
    rep.add("eccentricity_single_disk", "a single disk has eccentricity bound 1",
            eccentricity_upper_bound({{0, 0, 2}}) == 1.0);
    return rep;
}

// Aggregate the requested suites; known names: params, scene, neighbors,
// modulus, capacity, schottky, all.
inline std::vector<VerificationReport> run_suites(const std::vector<std::string>& names,
                                                  const SceneGraph& sc) {
    std::vector<VerificationReport> out;
    auto want = [&](const std::string& n) {
        for (const auto& s : names)
            if (s == n || s == "all") return true;
        return false;
    };
    for (const auto& s : names)
        if (s != "all" && s != "params" && s != "scene" && s != "neighbors" && s != "modulus" &&
            s != "capacity" && s != "schottky")
            throw numeric_error("unknown verification suite: " + s);
    if (want("params"))
        for (auto& r : verify_params_suite()) out.push_back(std::move(r));
    if (want("scene")) out.push_back(verify_scene_suite(sc));
    if (want("neighbors")) out.push_back(verify_neighbors_suite(sc));
    if (want("modulus")) out.push_back(verify_modulus_suite(sc));
    if (want("capacity")) out.push_back(verify_capacity_suite(sc));
    if (want("schottky")) out.push_back(verify_schottky_suite(sc));
    return out;
}

}  // namespace cdom
