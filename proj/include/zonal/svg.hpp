#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "zonal/errors.hpp"

namespace zonal::svg {

struct PlotPoint {
    double x = 0.0;
    double y = 0.0;
    bool municipality = false;  // square marker instead of circle
};

struct AxisRange {
    double min = 0.0;
    double max = 1.0;
};

namespace detail {

inline std::string fmt(double v, const char* spec = "%.6g") {
    char buf[64];
    std::snprintf(buf, sizeof(buf), spec, v);
    return buf;
}

inline AxisRange padded_range(double lo, double hi) {
    if (lo == hi) {
        lo -= 1.0;
        hi += 1.0;
    }
    const double pad = 0.05 * (hi - lo);
    return {lo - pad, hi + pad};
}

}  // namespace detail

// Standalone SVG 1.1 scatter plot. Regencies draw as circles, municipalities
// as squares; both carry class="pt" so point elements are countable.
inline void write_scatter(std::ostream& out, const std::string& title,
                          const std::string& x_label, const std::string& y_label,
                          const std::vector<PlotPoint>& points,
                          const AxisRange& x_range, const AxisRange& y_range) {
    constexpr double width = 640, height = 480;
    constexpr double ml = 78, mr = 24, mt = 46, mb = 64;
    const double plot_w = width - ml - mr;
    const double plot_h = height - mt - mb;
    auto px = [&](double x) {
        return ml + (x - x_range.min) / (x_range.max - x_range.min) * plot_w;
    };
    auto py = [&](double y) {
        return mt + plot_h - (y - y_range.min) / (y_range.max - y_range.min) * plot_h;
    };
    using detail::fmt;

    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << width
        << "\" height=\"" << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "<style>text{font-family:sans-serif;font-size:12px}.title{font-size:15px}"
        << ".pt,.key{fill:#1b6ca8;fill-opacity:0.75;stroke:#0d3b57;stroke-width:0.8}"
        << ".mun{fill:#c8542c;fill-opacity:0.8;stroke:#6e2a12}</style>\n"
        << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
        << "\" fill=\"white\"/>\n"
        << "<text class=\"title\" x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\">"
        << title << "</text>\n"
        << "<rect x=\"" << ml << "\" y=\"" << mt << "\" width=\"" << plot_w << "\" height=\""
        << plot_h << "\" fill=\"none\" stroke=\"#444\"/>\n";

    constexpr int kTicks = 5;
    for (int i = 0; i <= kTicks; ++i) {
        const double fx = x_range.min + (x_range.max - x_range.min) * i / kTicks;
        const double gx = px(fx);
        out << "<line x1=\"" << fmt(gx, "%.2f") << "\" y1=\"" << mt + plot_h << "\" x2=\""
            << fmt(gx, "%.2f") << "\" y2=\"" << mt + plot_h + 5 << "\" stroke=\"#444\"/>\n"
            << "<text x=\"" << fmt(gx, "%.2f") << "\" y=\"" << mt + plot_h + 20
            << "\" text-anchor=\"middle\">" << fmt(fx, "%.5g") << "</text>\n";
        const double fy = y_range.min + (y_range.max - y_range.min) * i / kTicks;
        const double gy = py(fy);
        out << "<line x1=\"" << ml - 5 << "\" y1=\"" << fmt(gy, "%.2f") << "\" x2=\"" << ml
            << "\" y2=\"" << fmt(gy, "%.2f") << "\" stroke=\"#444\"/>\n"
            << "<text x=\"" << ml - 8 << "\" y=\"" << fmt(gy + 4, "%.2f")
            << "\" text-anchor=\"end\">" << fmt(fy, "%.5g") << "</text>\n";
    }
    out << "<text x=\"" << ml + plot_w / 2 << "\" y=\"" << height - 14
        << "\" text-anchor=\"middle\">" << x_label << "</text>\n"
        << "<text x=\"20\" y=\"" << mt + plot_h / 2
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 20 " << mt + plot_h / 2 << ")\">"
        << y_label << "</text>\n";

    for (const auto& p : points) {
        const double gx = px(p.x);
        const double gy = py(p.y);
        if (p.municipality) {
            out << "<rect class=\"pt mun\" x=\"" << fmt(gx - 3.5, "%.2f") << "\" y=\""
                << fmt(gy - 3.5, "%.2f") << "\" width=\"7\" height=\"7\"/>\n";
        } else {
            out << "<circle class=\"pt\" cx=\"" << fmt(gx, "%.2f") << "\" cy=\"" << fmt(gy, "%.2f")
                << "\" r=\"4\"/>\n";
        }
    }

    // legend markers use their own class so point elements stay countable
    const double lx = ml + plot_w - 130, ly = mt + 12;
    out << "<circle class=\"key\" cx=\"" << lx << "\" cy=\"" << ly << "\" r=\"4\"/>\n"
        << "<text x=\"" << lx + 10 << "\" y=\"" << ly + 4 << "\">regency</text>\n"
        << "<rect class=\"key mun\" x=\"" << lx - 3.5 << "\" y=\"" << ly + 12.5
        << "\" width=\"7\" height=\"7\"/>\n"
        << "<text x=\"" << lx + 10 << "\" y=\"" << ly + 20 << "\">municipality</text>\n"
        << "</svg>\n";
}

inline void write_scatter_file(const std::string& path, const std::string& title,
                               const std::string& x_label, const std::string& y_label,
                               const std::vector<PlotPoint>& points) {
    if (points.empty()) throw ValidationError("scatter plot needs at least one point");
    double xmin = points[0].x, xmax = points[0].x, ymin = points[0].y, ymax = points[0].y;
    for (const auto& p : points) {
        xmin = std::min(xmin, p.x);
        xmax = std::max(xmax, p.x);
        ymin = std::min(ymin, p.y);
        ymax = std::max(ymax, p.y);
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write SVG file: " + path);
    write_scatter(out, title, x_label, y_label, points, detail::padded_range(xmin, xmax),
                  detail::padded_range(ymin, ymax));
}

// Rank scatter: both axes span [1, n] exactly.
inline void write_rank_scatter_file(const std::string& path, const std::string& title,
                                    const std::string& x_label, const std::string& y_label,
                                    const std::vector<PlotPoint>& points) {
    if (points.empty()) throw ValidationError("rank plot needs at least one point");
    const double n = static_cast<double>(points.size());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot write SVG file: " + path);
    write_scatter(out, title, x_label, y_label, points, {1.0, n}, {1.0, n});
}

}  // namespace zonal::svg
