#pragma once

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cdom/numeric.hpp"
#include "cdom/params.hpp"

namespace cdom {

enum class SideTag : int { Le = 0, Ri = 1 };
enum class HalfTag : int { Do = 0, Up = 1 };
enum class SegKind : int { I = 0, J_Do = 1, J_Up = 2 };

inline const char* to_string(SideTag s) { return s == SideTag::Le ? "Le" : "Ri"; }
inline const char* to_string(SegKind k) {
    switch (k) {
        case SegKind::I: return "I";
        case SegKind::J_Do: return "J_Do";
        case SegKind::J_Up: return "J_Up";
    }
    return "?";
}

struct Letter {
    SideTag m = SideTag::Le;
    long n = 1;
    friend bool operator==(const Letter&, const Letter&) = default;
};

// Address word w = (m~, n~): one (m_j, n_j) letter per level.
struct Word {
    std::vector<Letter> letters;

    int depth() const { return static_cast<int>(letters.size()); }
    Letter back() const { return letters.back(); }
    Word parent() const {
        Word p = *this;
        p.letters.pop_back();
        return p;
    }
    Word child(SideTag m, long n) const {
        Word c = *this;
        c.letters.push_back({m, n});
        return c;
    }
    // Sibling in the vertical direction: same m~, last n shifted.
    Word shifted(long dl) const {
        Word s = *this;
        s.letters.back().n += dl;
        return s;
    }
    std::string str() const {
        std::string out;
        for (const auto& l : letters)
            out += "(" + std::string(to_string(l.m)) + "," + std::to_string(l.n) + ")";
        return out;
    }
    friend bool operator==(const Word&, const Word&) = default;
    friend bool operator<(const Word& a, const Word& b) {
        std::size_t n = std::min(a.letters.size(), b.letters.size());
        for (std::size_t i = 0; i < n; ++i) {
            if (a.letters[i].m != b.letters[i].m) return a.letters[i].m < b.letters[i].m;
            if (a.letters[i].n != b.letters[i].n) return a.letters[i].n < b.letters[i].n;
        }
        return a.letters.size() < b.letters.size();
    }
};

struct NVPoint {
    NumericValue x, y;
};

struct Rect {
    NVPoint center;
    NumericValue half_width;   // t_k
    NumericValue half_height;  // r_k
};

struct Disk {
    NVPoint center;
    NumericValue radius;
    SideTag side = SideTag::Le;
    Word owner;
};

struct VSegment {
    NumericValue x, y_lo, y_hi;
    SegKind kind = SegKind::I;
    SideTag side = SideTag::Le;
    Word owner;
};

struct WordEntry {
    Word word;
    Rect rect;
    std::array<Disk, 2> disks;        // [Le, Ri]
    std::array<VSegment, 6> segs;     // I(Le), J(Le,Do), J(Le,Up), I(Ri), J(Ri,Do), J(Ri,Up)
};

// One row of the basic block in unit-interval coordinates.
struct BlockRow {
    long n = 1;
    NumericValue i_lo, i_hi;      // base interval I_*^n = [i_lo, i_hi]
    NumericValue y;               // center height y^n
    NumericValue jdo_hi, jup_lo;  // J_Do = [i_lo, jdo_hi], J_Up = [jup_lo, i_hi]
};

struct BlockLayout {
    long N = 2;
    NumericValue a, s, eps;
    std::vector<BlockRow> rows;
};

// Basic building block: N stacked rows of total height 1, gaps of length a
// between and inside rows, half-width eps.
inline BlockLayout block(long N, const NumericValue& a, const NumericValue& s,
                         const NumericValue& eps) {
    if (N < 2 || N % 2 != 0) throw numeric_error("block: N must be an even integer >= 2");
    if (eps.sign() != Sign::plus) throw numeric_error("block: eps must be positive");
    // Length equation N*2s + (N-1)*a = 1 within 1e-12 relative.
    NumericValue total = nv_add(nv_mul(NumericValue::rational(2 * N), s),
                                nv_mul(NumericValue::rational(N - 1), a));
    bool ok;
    if (total.is_rational()) {
        mpq_class resid = total.rat() - 1;
        ok = abs(resid) <= mpq_class(1, 1000000000000L);
    } else {
        ok = std::abs(total.ln_abs()) <= 1e-12;
    }
    if (!ok) throw numeric_error("block: length equation N*2s + (N-1)*a = 1 violated");

    BlockLayout b;
    b.N = N;
    b.a = a;
    b.s = s;
    b.eps = eps;
    NumericValue pitch = nv_add(nv_mul(NumericValue::rational(2), s), a);
    NumericValue half_a = nv_div(a, NumericValue::rational(2));
    for (long n = 1; n <= N; ++n) {
        BlockRow row;
        row.n = n;
        NumericValue base = nv_mul(NumericValue::rational(n - 1), pitch);
        row.i_lo = base;
        row.i_hi = nv_add(base, nv_mul(NumericValue::rational(2), s));
        row.y = nv_add(base, s);
        // s - a/2 >= s/2, no cancellation hazard
        row.jdo_hi = nv_add(base, nv_sub(s, half_a));
        row.jup_lo = nv_add(row.y, half_a);
        b.rows.push_back(std::move(row));
    }
    return b;
}

enum class SceneMode { exact, presentation };

inline const char* to_string(SceneMode m) {
    return m == SceneMode::exact ? "exact" : "presentation";
}

class SceneGraph {
public:
    SceneMode mode = SceneMode::exact;
    int depth = 1;
    std::vector<LevelParams> params;               // index 0 = level 1
    std::vector<std::vector<WordEntry>> levels;    // enumerated levels only

    const LevelParams& level_params(int k) const {
        if (k < 1 || k > static_cast<int>(params.size()))
            throw numeric_error("level parameters unavailable at depth " + std::to_string(k));
        return params[k - 1];
    }
    bool enumerated(int k) const {
        return k >= 1 && k <= static_cast<int>(levels.size()) && !levels[k - 1].empty();
    }
    const std::vector<WordEntry>& level(int k) const {
        if (!enumerated(k)) throw numeric_error("level " + std::to_string(k) + " not enumerated");
        return levels[k - 1];
    }
    const WordEntry& entry(const Word& w) const {
        int k = w.depth();
        for (const auto& e : level(k))
            if (e.word == w) return e;
        throw numeric_error("unknown word " + w.str());
    }
};

namespace detail {

inline WordEntry make_entry(const Word& w, const NumericValue& xc, const NumericValue& y_lo,
                            const LevelParams& lp) {
    // Geometry from the rectangle's bottom edge up: all sums of positive terms.
    const NumericValue t = lp.t.val();
    const NumericValue r = lp.r.val();
    const NumericValue d = lp.delta.val();
    WordEntry e;
    e.word = w;
    NumericValue yc = nv_add(y_lo, r);
    NumericValue y_hi = nv_add(yc, r);
    e.rect.center = {xc, yc};
    e.rect.half_width = t;
    e.rect.half_height = r;
    NumericValue off = nv_add(nv_mul(NumericValue::rational(2), t), r);
    e.disks[0] = {{nv_sub(xc, off), yc}, r, SideTag::Le, w};
    e.disks[1] = {{nv_add(xc, off), yc}, r, SideTag::Ri, w};
    NumericValue x_le = nv_sub(xc, t);
    NumericValue x_ri = nv_add(xc, t);
    NumericValue half_d = nv_div(d, NumericValue::rational(2));
    NumericValue jdo_hi = nv_add(y_lo, nv_sub(r, half_d));
    NumericValue jup_lo = nv_add(yc, half_d);
    e.segs[0] = {x_le, y_lo, y_hi, SegKind::I, SideTag::Le, w};
    e.segs[1] = {x_le, y_lo, jdo_hi, SegKind::J_Do, SideTag::Le, w};
    e.segs[2] = {x_le, jup_lo, y_hi, SegKind::J_Up, SideTag::Le, w};
    e.segs[3] = {x_ri, y_lo, y_hi, SegKind::I, SideTag::Ri, w};
    e.segs[4] = {x_ri, y_lo, jdo_hi, SegKind::J_Do, SideTag::Ri, w};
    e.segs[5] = {x_ri, jup_lo, y_hi, SegKind::J_Up, SideTag::Ri, w};
    return e;
}

}  // namespace detail

// Single child (m_k, n_k) of an enumerated entry; used directly in exact mode
// where full enumeration of a level-2 slice (2 N_2 children per parent) is
// infeasible.
inline WordEntry child_entry(const SceneGraph& sc, const WordEntry& parent, SideTag m, long n) {
    int kc = parent.word.depth() + 1;
    const LevelParams& pp = sc.level_params(kc - 1);
    const LevelParams& cp = sc.level_params(kc);
    if (!cp.n_exact) throw numeric_error("child level count not representable");
    long N = static_cast<long>(cp.N.get_si());
    if (n < 1 || n > N) throw numeric_error("child index out of range");
    long M = N / 2;
    HalfTag kappa = n <= M ? HalfTag::Do : HalfTag::Up;
    long nb = kappa == HalfTag::Do ? n : n - M;

    const NumericValue t_p = pp.t.val();
    const NumericValue r_p = pp.r.val();
    const NumericValue d_p = pp.delta.val();
    const NumericValue scale = cp.scale.val();

    NumericValue xc = m == SideTag::Le
                          ? nv_sub(parent.rect.center.x, nv_div(t_p, NumericValue::rational(2)))
                          : nv_add(parent.rect.center.x, nv_div(t_p, NumericValue::rational(2)));
    NumericValue base_y = kappa == HalfTag::Do
                              ? nv_sub(parent.rect.center.y, r_p)
                              : nv_add(parent.rect.center.y, nv_div(d_p, NumericValue::rational(2)));
    // Row base height in block coordinates: (nb-1)(2s+a).
    NumericValue pitch = nv_add(nv_mul(NumericValue::rational(2), cp.s.val()),
                                cp.a.has_value() ? cp.a.val()
                                                 : NumericValue::log_scale(Sign::zero, 0.0, true));
    NumericValue row_base = nv_mul(NumericValue::rational(nb - 1), pitch);
    NumericValue y_lo = nv_add(base_y, nv_mul(scale, row_base));
    return detail::make_entry(parent.word.child(m, n), xc, y_lo, cp);
}

// Build the scene. Exact mode: level 1 enumerated; level 2 reachable via
// child_entry only. Presentation mode: all levels enumerated up to depth 4.
inline SceneGraph generation(int k_max, SceneMode mode,
                             const std::vector<long>& presentation_table = {2, 4, 4, 4}) {
    SceneGraph sc;
    sc.mode = mode;
    sc.depth = k_max;
    if (mode == SceneMode::exact) {
        if (k_max < 1 || k_max > 2)
            throw numeric_error("generation: exact mode supports depth 1 "
                                "(depth 2 via per-word children only)");
        sc.params.push_back(initial_params());
        sc.params.push_back(next_params(sc.params[0]));
    } else {
        if (k_max < 1 || k_max > 4)
            throw numeric_error("generation: presentation mode supports depth <= 4");
        std::vector<long> table = presentation_table;
        while (static_cast<int>(table.size()) < k_max) table.push_back(table.back());
        table.resize(k_max);
        sc.params = presentation_schedule(table);
    }

    // Level 1: the block duplicated at x = -2 and x = +2.
    const LevelParams& p1 = sc.params[0];
    long N1 = static_cast<long>(p1.N.get_si());
    BlockLayout b1 = block(N1, p1.a.val(), p1.s.val(), p1.eps.val());
    std::vector<WordEntry> lvl1;
    for (SideTag m : {SideTag::Le, SideTag::Ri}) {
        NumericValue x0 = NumericValue::rational(m == SideTag::Le ? -2 : 2);
        for (const BlockRow& row : b1.rows) {
            Word w;
            w.letters.push_back({m, row.n});
            lvl1.push_back(detail::make_entry(w, x0, row.i_lo, p1));
        }
    }
    sc.levels.push_back(std::move(lvl1));

    if (mode == SceneMode::presentation) {
        for (int k = 2; k <= k_max; ++k) {
            const std::vector<WordEntry>& prev = sc.levels[k - 2];
            long Nk = static_cast<long>(sc.params[k - 1].N.get_si());
            std::vector<WordEntry> lvl;
            for (const WordEntry& pe : prev)
                for (SideTag m : {SideTag::Le, SideTag::Ri})
                    for (long n = 1; n <= Nk; ++n) lvl.push_back(child_entry(sc, pe, m, n));
            sc.levels.push_back(std::move(lvl));
        }
    }
    return sc;
}

// All children of one word. Fails fast with a size estimate when enumeration
// would be infeasible (exact-mode level 2 has 2 N_2 ~ 4e7 children per word).
inline std::vector<WordEntry> children(const SceneGraph& sc, const Word& w,
                                       long enumeration_cap = 100000) {
    const WordEntry& pe = sc.entry(w);
    int kc = w.depth() + 1;
    const LevelParams& cp = sc.level_params(kc);
    if (!cp.n_exact) throw numeric_error("children: child count not representable as an integer");
    mpz_class count = 2 * cp.N;
    if (count > enumeration_cap)
        throw numeric_error("children: enumeration of " + count.get_str() +
                            " children exceeds cap " + std::to_string(enumeration_cap) +
                            "; use child_entry per index");
    long Nk = static_cast<long>(cp.N.get_si());
    std::vector<WordEntry> out;
    for (SideTag m : {SideTag::Le, SideTag::Ri})
        for (long n = 1; n <= Nk; ++n) out.push_back(child_entry(sc, pe, m, n));
    return out;
}

struct Interval {
    NumericValue lo, hi;
};

struct CantorCover {
    std::vector<Interval> e_cover;                // 2^k intervals, length 2 t_k
    NumericValue e_total_length;                  // 2^{k+1} t_k
    std::optional<NumericValue> e_ratio;          // vs level k-1: 2 t_k / t_{k-1}
    mpz_class f_count;                            // prod_{j<=k} N_j
    NumericValue f_interval_length;               // 2 r_k
    std::vector<Interval> f_cover;                // enumerated when count is small
};

// Finite-level covers of the Cantor factors E (real axis) and F ([0,1]).
inline CantorCover cantor_cover(const std::vector<LevelParams>& params, int k,
                                long f_enumeration_cap = 4096) {
    if (k < 1 || k > static_cast<int>(params.size()))
        throw numeric_error("cantor_cover: level out of range");
    CantorCover cov;
    const LevelParams& pk = params[k - 1];
    NumericValue t_k = pk.t.val();

    // E: centers evolve by x -> x -+ t_j/2.
    std::vector<NumericValue> xs = {NumericValue::rational(-2), NumericValue::rational(2)};
    for (int j = 1; j < k; ++j) {
        NumericValue half_t = nv_div(params[j - 1].t.val(), NumericValue::rational(2));
        std::vector<NumericValue> nxt;
        for (const auto& x : xs) {
            nxt.push_back(nv_sub(x, half_t));
            nxt.push_back(nv_add(x, half_t));
        }
        xs = std::move(nxt);
    }
    for (const auto& x : xs) cov.e_cover.push_back({nv_sub(x, t_k), nv_add(x, t_k)});
    cov.e_total_length = nv_mul(NumericValue::rational(2L << k), t_k);
    if (k >= 2) cov.e_ratio = nv_div(nv_mul(NumericValue::rational(2), t_k),
                                     params[k - 2].t.val());

    cov.f_count = 1;
    for (int j = 1; j <= k; ++j) cov.f_count *= params[j - 1].N;
    cov.f_interval_length = nv_mul(NumericValue::rational(2), pk.r.val());
    if (cov.f_count <= f_enumeration_cap) {
        // Enumerate row bottoms level by level.
        std::vector<NumericValue> lows;
        {
            const LevelParams& p1 = params[0];
            BlockLayout b1 = block(static_cast<long>(p1.N.get_si()), p1.a.val(), p1.s.val(),
                                   p1.eps.val());
            for (const auto& row : b1.rows) lows.push_back(row.i_lo);
        }
        for (int j = 2; j <= k; ++j) {
            const LevelParams& pj = params[j - 1];
            const LevelParams& pp = params[j - 2];
            long Nj = static_cast<long>(pj.N.get_si());
            long M = Nj / 2;
            NumericValue scale = pj.scale.val();
            NumericValue pitch = nv_add(nv_mul(NumericValue::rational(2), pj.s.val()),
                                        pj.a.val());
            std::vector<NumericValue> nxt;
            for (const auto& lo : lows) {
                // parent center y = lo + r_{j-1}
                NumericValue yc = nv_add(lo, pp.r.val());
                for (long n = 1; n <= Nj; ++n) {
                    HalfTag kappa = n <= M ? HalfTag::Do : HalfTag::Up;
                    long nb = kappa == HalfTag::Do ? n : n - M;
                    NumericValue base = kappa == HalfTag::Do
                                            ? lo
                                            : nv_add(yc, nv_div(pp.delta.val(),
                                                                NumericValue::rational(2)));
                    nxt.push_back(nv_add(
                        base, nv_mul(scale, nv_mul(NumericValue::rational(nb - 1), pitch))));
                }
            }
            lows = std::move(nxt);
        }
        for (const auto& lo : lows)
            cov.f_cover.push_back({lo, nv_add(lo, cov.f_interval_length)});
    }
    return cov;
}

// Canonical representative of the bundle of E x F points addressed by a word:
// the center of its rectangle, with error radius (t_k, r_k).
struct LocatedPoint {
    NVPoint point;
    NumericValue err_x, err_y;
};

// Geometry of any addressed word, enumerated or not, by walking the address.
inline WordEntry resolve_entry(const SceneGraph& sc, const Word& w) {
    if (w.depth() < 1) throw numeric_error("resolve_entry: empty address");
    if (w.depth() > static_cast<int>(sc.params.size()))
        throw numeric_error("resolve_entry: address deeper than available parameters");
    const Letter l1 = w.letters[0];
    const LevelParams& p1 = sc.level_params(1);
    if (l1.n < 1 || l1.n > p1.N) throw numeric_error("resolve_entry: invalid level-1 index");
    BlockLayout b1 = block(static_cast<long>(p1.N.get_si()), p1.a.val(), p1.s.val(), p1.eps.val());
    WordEntry e = detail::make_entry(Word{{l1}},
                                     NumericValue::rational(l1.m == SideTag::Le ? -2 : 2),
                                     b1.rows[l1.n - 1].i_lo, p1);
    for (int j = 2; j <= w.depth(); ++j) {
        const Letter lj = w.letters[j - 1];
        if (lj.n < 1 || !sc.level_params(j).n_exact || lj.n > sc.level_params(j).N)
            throw numeric_error("resolve_entry: invalid index at level " + std::to_string(j));
        e = child_entry(sc, e, lj.m, lj.n);
    }
    return e;
}

inline LocatedPoint point_locate(const SceneGraph& sc, const Word& w) {
    WordEntry e = resolve_entry(sc, w);
    const LevelParams& pk = sc.level_params(w.depth());
    return {e.rect.center, pk.t.val(), pk.r.val()};
}

}  // namespace cdom
