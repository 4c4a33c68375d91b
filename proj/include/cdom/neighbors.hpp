#pragma once

#include <string>
#include <vector>

#include "cdom/numeric.hpp"
#include "cdom/report.hpp"
#include "cdom/scene.hpp"

namespace cdom {

enum class RingClass { middle, bottom, top };

inline const char* to_string(RingClass c) {
    switch (c) {
        case RingClass::middle: return "middle";
        case RingClass::bottom: return "bottom";
        case RingClass::top: return "top";
    }
    return "?";
}

// A word is a bottom if n = 1 or N/2 + 1 and a top if n = N/2 or N.
// For N = 2 both definitions match both indices; the tie resolves to
// n = 1 -> bottom, n = 2 -> top, the only reading under which the shifted
// indices n -+ 1 used by the ring displays stay in range.
inline RingClass classify(long n, long N) {
    if (N < 2 || N % 2 != 0) throw numeric_error("classify: N must be even >= 2");
    if (n < 1 || n > N) throw numeric_error("classify: index out of range");
    if (n == 1) return RingClass::bottom;
    if (n == N) return RingClass::top;
    if (n == N / 2 + 1) return RingClass::bottom;
    if (n == N / 2) return RingClass::top;
    return RingClass::middle;
}

struct NeighborRing {
    Word center;
    RingClass cls = RingClass::middle;
    std::vector<Disk> disks;  // cyclic order
};

// The ordered ring of level-k neighbor disks around the rectangle of w:
// middles get six disks
//   D^{w-1}(Ri), D^w(Ri), D^{w+1}(Ri), D^{w+1}(Le), D^w(Le), D^{w-1}(Le),
// bottoms drop the w-1 pair, tops drop the w+1 pair.
inline NeighborRing neighbor_ring(const SceneGraph& sc, const Word& w) {
    int k = w.depth();
    const LevelParams& pk = sc.level_params(k);
    if (!pk.n_exact) throw numeric_error("neighbor_ring: level index range not representable");
    long N = static_cast<long>(pk.N.get_si());
    long n = w.back().n;
    NeighborRing ring;
    ring.center = w;
    ring.cls = classify(n, N);

    auto disk_of = [&](long dl, SideTag side) {
        WordEntry e = resolve_entry(sc, w.shifted(dl));
        return e.disks[side == SideTag::Le ? 0 : 1];
    };
    switch (ring.cls) {
        case RingClass::middle:
            ring.disks = {disk_of(-1, SideTag::Ri), disk_of(0, SideTag::Ri),
                          disk_of(+1, SideTag::Ri), disk_of(+1, SideTag::Le),
                          disk_of(0, SideTag::Le), disk_of(-1, SideTag::Le)};
            break;
        case RingClass::bottom:
            ring.disks = {disk_of(0, SideTag::Ri), disk_of(+1, SideTag::Ri),
                          disk_of(+1, SideTag::Le), disk_of(0, SideTag::Le)};
            break;
        case RingClass::top:
            ring.disks = {disk_of(-1, SideTag::Ri), disk_of(0, SideTag::Ri),
                          disk_of(0, SideTag::Le), disk_of(-1, SideTag::Le)};
            break;
    }
    return ring;
}

namespace detail {

inline NumericValue nv_sq(const NumericValue& v) { return nv_mul(v, v); }

}  // namespace detail

// dist(p, q)^2 < (4 rho)^2, without square roots.
inline bool within_four_radii(const NVPoint& p, const NVPoint& q, const NumericValue& rho) {
    NumericValue d2 = nv_add(detail::nv_sq(nv_sub(p.x, q.x)), detail::nv_sq(nv_sub(p.y, q.y)));
    NumericValue bound = nv_mul(NumericValue::rational(16), detail::nv_sq(rho));
    return nv_less(d2, bound);
}

// Every point of the rectangle lies within 4 radii of every ring disk.
// Distance to a fixed center is convex, so checking the four corners suffices.
inline VerificationReport check_containment(const SceneGraph& sc, const Word& w) {
    VerificationReport rep;
    rep.suite = "neighbors.containment." + w.str();
    WordEntry e = resolve_entry(sc, w);
    NumericValue t = e.rect.half_width, r = e.rect.half_height;
    std::vector<NVPoint> corners = {
        {nv_sub(e.rect.center.x, t), nv_sub(e.rect.center.y, r)},
        {nv_sub(e.rect.center.x, t), nv_add(e.rect.center.y, r)},
        {nv_add(e.rect.center.x, t), nv_sub(e.rect.center.y, r)},
        {nv_add(e.rect.center.x, t), nv_add(e.rect.center.y, r)}};
    NeighborRing ring = neighbor_ring(sc, w);
    for (std::size_t d = 0; d < ring.disks.size(); ++d) {
        const Disk& D = ring.disks[d];
        for (std::size_t c = 0; c < corners.size(); ++c) {
            bool ok = within_four_radii(D.center, corners[c], D.radius);
            rep.add("disk" + std::to_string(d) + "_corner" + std::to_string(c),
                    "|center - corner| < 4 radius", ok,
                    "disk " + D.owner.str() + "(" + to_string(D.side) + ")");
        }
    }
    return rep;
}

// Synthetic form of the same bound: under t <= delta/100 and delta <= r/100,
// the far corner satisfies (r + 3t)^2 + (3r + delta/2)^2 < (4r)^2.
inline bool corner_bound_holds(const NumericValue& t, const NumericValue& r,
                               const NumericValue& delta) {
    NumericValue dx = nv_add(r, nv_mul(NumericValue::rational(3), t));
    NumericValue dy = nv_add(nv_mul(NumericValue::rational(3), r),
                             nv_div(delta, NumericValue::rational(2)));
    NumericValue lhs = nv_add(detail::nv_sq(dx), detail::nv_sq(dy));
    return nv_less(lhs, nv_mul(NumericValue::rational(16), detail::nv_sq(r)));
}

}  // namespace cdom
