#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

#include "io.hpp"

namespace modcyl {

// Minimal deterministic SVG emission: fixed canvas, fixed ordering, shortest
// round-trip numbers. No external plotting dependency.

namespace svg {

inline std::string header(int w, int h) {
    return "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) +
           "\" height=\"" + std::to_string(h) + "\" viewBox=\"0 0 " + std::to_string(w) + " " +
           std::to_string(h) + "\">\n";
}

inline std::string rect(double x, double y, double w, double h, const std::string& fill) {
    return "<rect x=\"" + format_double(x) + "\" y=\"" + format_double(y) + "\" width=\"" +
           format_double(w) + "\" height=\"" + format_double(h) + "\" fill=\"" + fill + "\"/>\n";
}

inline std::string text(double x, double y, const std::string& s, int size = 12) {
    return "<text x=\"" + format_double(x) + "\" y=\"" + format_double(y) + "\" font-size=\"" +
           std::to_string(size) + "\" font-family=\"monospace\">" + s + "</text>\n";
}

inline std::string polyline(const std::vector<std::pair<double, double>>& pts,
                            const std::string& stroke) {
    std::string out = "<polyline fill=\"none\" stroke=\"" + stroke + "\" points=\"";
    for (auto& [x, y] : pts) out += format_double(x) + "," + format_double(y) + " ";
    out += "\"/>\n";
    return out;
}

/// Blue-white-red map for signed data in [-1, 1].
inline std::string diverging_color(double v) {
    v = std::clamp(v, -1.0, 1.0);
    int r = static_cast<int>(std::lround(255.0 * (v > 0 ? 1.0 : 1.0 + v)));
    int b = static_cast<int>(std::lround(255.0 * (v < 0 ? 1.0 : 1.0 - v)));
    int g = static_cast<int>(std::lround(255.0 * (1.0 - std::abs(v))));
    char buf[8];
    std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
    return buf;
}

}  // namespace svg

/// Heatmap of kernel rows for one part tag: cells colored by Re value scaled
/// to the part's max magnitude.
inline std::string kernel_heatmap_svg(const std::vector<KernelRow>& rows,
                                      const std::string& part, const std::string& title) {
    std::vector<const KernelRow*> sel;
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300, vmax = 0.0;
    for (const auto& r : rows)
        if (r.part == part) {
            sel.push_back(&r);
            xmin = std::min(xmin, r.x);
            xmax = std::max(xmax, r.x);
            ymin = std::min(ymin, r.y);
            ymax = std::max(ymax, r.y);
            vmax = std::max(vmax, std::abs(r.value));
        }
    const int W = 560, H = 560, m = 40;
    std::string out = svg::header(W, H);
    out += svg::text(m, 20, title + " [" + part + "]");
    if (sel.empty() || vmax == 0.0) {
        out += svg::text(m, H / 2, "(empty layer)");
        out += "</svg>\n";
        return out;
    }
    // infer the cell size from the number of distinct coordinates
    std::map<double, int> xs, ys;
    for (auto* r : sel) {
        xs.emplace(r->x, 0);
        ys.emplace(r->y, 0);
    }
    int i = 0;
    for (auto& [k, v] : xs) v = i++;
    i = 0;
    for (auto& [k, v] : ys) v = i++;
    const double cw = (W - 2.0 * m) / xs.size(), ch = (H - 2.0 * m) / ys.size();
    for (auto* r : sel) {
        const double px = m + xs[r->x] * cw;
        const double py = H - m - (ys[r->y] + 1) * ch;
        out += svg::rect(px, py, cw, ch, svg::diverging_color(r->value.real() / vmax));
    }
    out += svg::text(m, H - 10, "max|value| = " + format_double(vmax));
    out += "</svg>\n";
    return out;
}

/// Log-log error-vs-N line with the fitted slope annotated.
inline std::string convergence_svg(const std::vector<int>& ns, const std::vector<double>& errs,
                                   const std::string& title) {
    const int W = 480, H = 360, m = 48;
    std::string out = svg::header(W, H);
    out += svg::text(m, 20, title);
    if (ns.size() >= 2 && ns.size() == errs.size()) {
        double lo = 1e300, hi = -1e300;
        for (double e : errs) {
            lo = std::min(lo, std::log10(std::max(e, 1e-300)));
            hi = std::max(hi, std::log10(std::max(e, 1e-300)));
        }
        if (hi - lo < 1e-6) hi = lo + 1.0;
        std::vector<std::pair<double, double>> pts;
        for (std::size_t k = 0; k < ns.size(); ++k) {
            const double fx = (std::log2(double(ns[k])) - std::log2(double(ns.front()))) /
                              std::max(1e-12, std::log2(double(ns.back())) - std::log2(double(ns.front())));
            const double fy = (std::log10(std::max(errs[k], 1e-300)) - lo) / (hi - lo);
            pts.emplace_back(m + fx * (W - 2 * m), H - m - fy * (H - 2 * m));
        }
        out += svg::polyline(pts, "#1f77b4");
        // least-squares slope in log-log
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t k = 0; k < ns.size(); ++k) {
            const double x = -std::log(double(ns[k]));
            const double y = std::log(std::max(errs[k], 1e-300));
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double n = double(ns.size());
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        out += svg::text(m, H - 16, "fitted order = " + format_double(slope));
    }
    out += "</svg>\n";
    return out;
}

}  // namespace modcyl
