#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "cdom/numeric.hpp"
#include "cdom/scene.hpp"

namespace cdom {

struct SPoint {
    double x = 0, y = 0;
    bool infinite = false;
};

struct SDisk {
    double x = 0, y = 0, r = 1;
};

inline SDisk to_sdisk(const Disk& d) {
    return {d.center.x.to_double(), d.center.y.to_double(), d.radius.to_double()};
}

// Reflection across the circle bounding D.
inline SPoint invert_point(const SDisk& D, const SPoint& p) {
    if (p.infinite) return {D.x, D.y, false};
    double dx = p.x - D.x, dy = p.y - D.y;
    double d2 = dx * dx + dy * dy;
    if (d2 == 0.0) return {0, 0, true};  // the center maps to infinity
    double f = D.r * D.r / d2;
    return {D.x + f * dx, D.y + f * dy, false};
}

// Image of a disk not containing the inversion center.
inline SDisk invert_disk(const SDisk& D, const SDisk& E) {
    double dx = E.x - D.x, dy = E.y - D.y;
    double d2 = dx * dx + dy * dy - E.r * E.r;
    if (d2 <= 0)
        throw numeric_error("invert_disk: inversion center inside the disk (image not a disk)");
    double f = D.r * D.r / d2;
    return {D.x + f * dx, D.y + f * dy, f * E.r};
}

struct ReducedWord {
    std::vector<int> letters;  // generator indices, no two consecutive equal
    std::string str() const {
        std::string s;
        for (std::size_t i = 0; i < letters.size(); ++i)
            s += (i ? "." : "") + std::to_string(letters[i]);
        return s.empty() ? "id" : s;
    }
};

inline void validate_reduced(const ReducedWord& w, std::size_t m) {
    for (std::size_t i = 0; i < w.letters.size(); ++i) {
        if (w.letters[i] < 0 || w.letters[i] >= static_cast<int>(m))
            throw numeric_error("reduced word: letter out of range");
        if (i > 0 && w.letters[i] == w.letters[i - 1])
            throw numeric_error("reduced word: consecutive letters must differ");
    }
}

// g = R_{D_1} o ... o R_{D_l} applied to a disk or point.
inline SDisk apply_word(const std::vector<SDisk>& gens, const ReducedWord& w, SDisk target) {
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
        target = invert_disk(gens[*it], target);
    return target;
}

inline SPoint apply_word(const std::vector<SDisk>& gens, const ReducedWord& w, SPoint target) {
    for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it)
        target = invert_point(gens[*it], target);
    return target;
}

struct WordImage {
    ReducedWord word;
    std::vector<int> image_of;   // generator indices != last letter
    std::vector<SDisk> images;   // g(D_i) for those indices
};

// All reduced words of length 1..L over the generators, with the images of
// the other generator disks under each word. Count: sum of m (m-1)^{l-1}.
inline std::vector<WordImage> enumerate_words(const std::vector<SDisk>& gens, int L,
                                              long cap = 100000) {
    const int m = static_cast<int>(gens.size());
    if (m < 2) throw numeric_error("enumerate_words: need at least two generators");
    if (L < 1) throw numeric_error("enumerate_words: need L >= 1");
    long total = 0, layer = m;
    for (int l = 1; l <= L; ++l) {
        total += layer;
        layer *= (m - 1);
        if (total > cap) break;
    }
    if (total > cap)
        throw numeric_error("enumerate_words: " + std::to_string(total) +
                            " words exceed cap " + std::to_string(cap));
    std::vector<WordImage> out;
    std::vector<ReducedWord> frontier;
    for (int l = 1; l <= L; ++l) {
        std::vector<ReducedWord> next;
        if (l == 1) {
            for (int i = 0; i < m; ++i) next.push_back({{i}});
        } else {
            for (const auto& w : frontier)
                for (int i = 0; i < m; ++i) {
                    if (i == w.letters.back()) continue;
                    ReducedWord c = w;
                    c.letters.push_back(i);
                    next.push_back(std::move(c));
                }
        }
        for (const auto& w : next) {
            WordImage wi;
            wi.word = w;
            for (int i = 0; i < m; ++i) {
                if (i == w.letters.back()) continue;
                wi.image_of.push_back(i);
                wi.images.push_back(apply_word(gens, w, gens[i]));
            }
            out.push_back(std::move(wi));
        }
        frontier = std::move(next);
    }
    return out;
}

struct DiskNest {
    std::vector<int> sequence;  // generator indices, reduced
    std::vector<SDisk> disks;   // B_1 supseteq B_2 supseteq ...
    SPoint limit;               // center of the last disk
    double err = 0;             // its radius
};

// B_{j+1} = R_{D_1} o ... o R_{D_j}(D_{j+1}), strict containment verified.
inline DiskNest build_nest(const std::vector<SDisk>& gens, const std::vector<int>& seq, int J) {
    if (J < 1) throw numeric_error("build_nest: need J >= 1");
    if (static_cast<int>(seq.size()) < J)
        throw numeric_error("build_nest: sequence shorter than requested depth");
    ReducedWord rw;
    rw.letters.assign(seq.begin(), seq.begin() + J);
    validate_reduced(rw, gens.size());
    DiskNest nest;
    nest.sequence = rw.letters;
    for (int j = 0; j < J; ++j) {
        ReducedWord prefix;
        prefix.letters.assign(seq.begin(), seq.begin() + j);
        SDisk B = apply_word(gens, prefix, gens[seq[j]]);
        if (!nest.disks.empty()) {
            const SDisk& prev = nest.disks.back();
            double d = std::hypot(B.x - prev.x, B.y - prev.y);
            if (!(d + B.r < prev.r * (1 + 1e-12)))
                throw numeric_error("build_nest: containment violated at step " +
                                    std::to_string(j + 1));
            if (!(B.r < prev.r))
                throw numeric_error("build_nest: radii not strictly decreasing at step " +
                                    std::to_string(j + 1));
        }
        nest.disks.push_back(B);
    }
    nest.limit = {nest.disks.back().x, nest.disks.back().y, false};
    nest.err = nest.disks.back().r;
    return nest;
}

// Upper bound on the eccentricity E(A) = inf{M >= 1 : B subset A subset MB for
// some disk B}: minimize over candidate centers (component centers plus a grid
// of pitch min-radius/8) the ratio (farthest point of A)/(inscribed radius).
inline double eccentricity_upper_bound(const std::vector<SDisk>& disks,
                                       const std::vector<SPoint>& points = {}) {
    if (disks.empty()) throw numeric_error("eccentricity_upper_bound: empty interior");
    if (disks.size() == 1) {
        // a single disk attains M = 1 unless an attached point sticks out
        const SDisk& d = disks[0];
        double far = d.r;
        for (const auto& p : points)
            far = std::max(far, std::hypot(p.x - d.x, p.y - d.y) + 0.0);
        if (far <= d.r * (1 + 1e-12)) return 1.0;
    }
    double rmin = disks[0].r, x0, x1, y0, y1;
    x0 = disks[0].x - disks[0].r;
    x1 = disks[0].x + disks[0].r;
    y0 = disks[0].y - disks[0].r;
    y1 = disks[0].y + disks[0].r;
    for (const auto& d : disks) {
        rmin = std::min(rmin, d.r);
        x0 = std::min(x0, d.x - d.r);
        x1 = std::max(x1, d.x + d.r);
        y0 = std::min(y0, d.y - d.r);
        y1 = std::max(y1, d.y + d.r);
    }
    auto ratio_at = [&](double cx, double cy) {
        double rho = 0.0;
        for (const auto& d : disks)
            rho = std::max(rho, d.r - std::hypot(cx - d.x, cy - d.y));
        if (rho <= 0) return std::numeric_limits<double>::infinity();
        double far = 0.0;
        for (const auto& d : disks) far = std::max(far, std::hypot(cx - d.x, cy - d.y) + d.r);
        for (const auto& p : points) far = std::max(far, std::hypot(cx - p.x, cy - p.y));
        return far / rho;
    };
    double best = std::numeric_limits<double>::infinity();
    for (const auto& d : disks) best = std::min(best, ratio_at(d.x, d.y));
    double pitch = rmin / 8.0;
    int nx = static_cast<int>((x1 - x0) / pitch) + 1;
    int ny = static_cast<int>((y1 - y0) / pitch) + 1;
    nx = std::min(nx, 400);
    ny = std::min(ny, 400);
    for (int i = 0; i <= nx; ++i)
        for (int j = 0; j <= ny; ++j)
            best = std::min(best, ratio_at(x0 + (x1 - x0) * i / nx, y0 + (y1 - y0) * j / ny));
    return std::max(best, 1.0);
}

}  // namespace cdom
