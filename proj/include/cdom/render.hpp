#pragma once

#include <cstdio>
#include <string>
#include <vector>

#include "cdom/json_io.hpp"
#include "cdom/numeric.hpp"
#include "cdom/scene.hpp"

namespace cdom {

struct RenderWindow {
    double x0 = -4, y0 = -1, x1 = 4, y1 = 2;
};

namespace detail {

inline std::string fmt12(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace detail

// Deterministic SVG: disks as circles, rectangles as outlines, vertical
// segments as lines, optional dashed chain overlay. World y points up; the
// SVG transform flips it.
inline std::string render_svg(const SceneObjects& scene, const RenderWindow& win,
                              const std::vector<std::pair<double, double>>& chain = {}) {
    using detail::fmt12;
    const double w = win.x1 - win.x0, h = win.y1 - win.y0;
    if (w <= 0 || h <= 0) throw numeric_error("render_svg: empty window");
    auto tx = [&](double x) { return x; };
    auto ty = [&](double y) { return -y; };
    const double stroke = w / 1000.0;

    bool any_visible = false;
    auto visible = [&](double x, double y, double pad) {
        return x + pad >= win.x0 && x - pad <= win.x1 && y + pad >= win.y0 && y - pad <= win.y1;
    };

    std::string svg;
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"" + fmt12(win.x0) + " " +
           fmt12(-win.y1) + " " + fmt12(w) + " " + fmt12(h) + "\">\n";
    svg += "<g fill=\"none\" stroke=\"black\" stroke-width=\"" + fmt12(stroke) + "\">\n";

    for (const auto& [word, r] : scene.rects) {
        double cx = r.center.x.to_double(), cy = r.center.y.to_double();
        double hw = r.half_width.to_double(), hh = r.half_height.to_double();
        if (!visible(cx, cy, std::max(hw, hh))) continue;
        any_visible = true;
        svg += "<rect x=\"" + fmt12(tx(cx - hw)) + "\" y=\"" + fmt12(ty(cy + hh)) +
               "\" width=\"" + fmt12(2 * hw) + "\" height=\"" + fmt12(2 * hh) + "\"/>\n";
    }
    for (const auto& d : scene.disks) {
        double cx = d.center.x.to_double(), cy = d.center.y.to_double();
        double r = d.radius.to_double();
        if (!visible(cx, cy, r)) continue;
        any_visible = true;
        svg += "<circle cx=\"" + fmt12(tx(cx)) + "\" cy=\"" + fmt12(ty(cy)) + "\" r=\"" +
               fmt12(r) + "\"/>\n";
    }
    for (const auto& s : scene.segments) {
        double x = s.x.to_double();
        double lo = s.y_lo.to_double(), hi = s.y_hi.to_double();
        if (!visible(x, 0.5 * (lo + hi), 0.5 * (hi - lo))) continue;
        any_visible = true;
        svg += "<line x1=\"" + fmt12(tx(x)) + "\" y1=\"" + fmt12(ty(lo)) + "\" x2=\"" +
               fmt12(tx(x)) + "\" y2=\"" + fmt12(ty(hi)) + "\"/>\n";
    }
    if (!chain.empty()) {
        svg += "<polyline stroke-dasharray=\"" + fmt12(4 * stroke) + " " + fmt12(4 * stroke) +
               "\" points=\"";
        for (std::size_t i = 0; i < chain.size(); ++i) {
            if (i) svg += " ";
            svg += fmt12(tx(chain[i].first)) + "," + fmt12(ty(chain[i].second));
        }
        // close the loop
        svg += " " + fmt12(tx(chain[0].first)) + "," + fmt12(ty(chain[0].second));
        svg += "\"/>\n";
    }
    svg += "</g>\n</svg>\n";
    if (!any_visible) throw numeric_error("render_svg: window does not meet the scene");
    return svg;
}

}  // namespace cdom
