#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <string>
#include <vector>

#include "burstrec/csv.hpp"

namespace burstrec {

/// One plotted curve; points with nonpositive coordinates are dropped on
/// logarithmic axes.
struct SvgSeries {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    std::string color = "#1f5fbf";
    bool dashed = false;
    bool markers_only = false;
};

namespace detail {

struct SvgAxis {
    double lo = 0.0;
    double hi = 1.0;
    bool log = true;
    double pos(double v, double a, double b) const {
        const double t = log ? (std::log10(v) - lo) / (hi - lo) : (v - lo) / (hi - lo);
        return a + t * (b - a);
    }
};

inline bool svg_point_ok(double v, bool log_axis) {
    return std::isfinite(v) && (!log_axis || v > 0.0);
}

}  // namespace detail

/// Minimal self-contained chart writer: decade-ticked axes, polylines or
/// marker clouds, legend in the top right corner.
inline void emit_svg_plot(const std::vector<SvgSeries>& series, const std::string& title,
                          const std::string& x_label, const std::string& y_label,
                          const std::string& path, bool log_x = true, bool log_y = true) {
    const double width = 720.0;
    const double height = 540.0;
    const double ml = 80.0;
    const double mr = 24.0;
    const double mt = 48.0;
    const double mb = 64.0;
    const double px0 = ml;
    const double px1 = width - mr;
    const double py0 = height - mb;
    const double py1 = mt;

    double x_min = 0.0, x_max = 0.0, y_min = 0.0, y_max = 0.0;
    bool any = false;
    for (const auto& s : series)
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!detail::svg_point_ok(s.x[i], log_x) || !detail::svg_point_ok(s.y[i], log_y))
                continue;
            const double xv = log_x ? std::log10(s.x[i]) : s.x[i];
            const double yv = log_y ? std::log10(s.y[i]) : s.y[i];
            if (!any) {
                x_min = x_max = xv;
                y_min = y_max = yv;
                any = true;
            } else {
                x_min = std::min(x_min, xv);
                x_max = std::max(x_max, xv);
                y_min = std::min(y_min, yv);
                y_max = std::max(y_max, yv);
            }
        }
    if (!any) {
        x_min = log_x ? -1.0 : 0.0;
        x_max = log_x ? 1.0 : 1.0;
        y_min = log_y ? -1.0 : 0.0;
        y_max = log_y ? 1.0 : 1.0;
    }
    auto widen = [](double& lo, double& hi) {
        if (hi - lo < 1e-12) {
            lo -= 0.5;
            hi += 0.5;
        } else {
            const double pad = 0.05 * (hi - lo);
            lo -= pad;
            hi += pad;
        }
    };
    widen(x_min, x_max);
    widen(y_min, y_max);

    detail::SvgAxis ax{x_min, x_max, log_x};
    detail::SvgAxis ay{y_min, y_max, log_y};

    std::ofstream out(path);
    if (!out) throw config_error("cannot write " + path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << width << ' ' << height
        << "\" font-family=\"sans-serif\">\n";
    out << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << width / 2 << "\" y=\"28\" text-anchor=\"middle\" font-size=\"17\">"
        << title << "</text>\n";
    out << "<rect x=\"" << px0 << "\" y=\"" << py1 << "\" width=\"" << (px1 - px0)
        << "\" height=\"" << (py0 - py1)
        << "\" fill=\"none\" stroke=\"#444\" stroke-width=\"1\"/>\n";

    auto decade_ticks = [](double lo, double hi) {
        std::vector<double> ticks;
        for (int d = static_cast<int>(std::ceil(lo)); d <= static_cast<int>(std::floor(hi)); ++d)
            ticks.push_back(static_cast<double>(d));
        return ticks;
    };
    auto linear_ticks = [](double lo, double hi) {
        std::vector<double> ticks;
        const double step = (hi - lo) / 5.0;
        for (int i = 0; i <= 5; ++i) ticks.push_back(lo + i * step);
        return ticks;
    };
    auto tick_label = [](double v, bool log_axis) {
        char buf[48];
        if (log_axis)
            std::snprintf(buf, sizeof buf, "1e%d", static_cast<int>(std::lround(v)));
        else
            std::snprintf(buf, sizeof buf, "%.3g", v);
        return std::string(buf);
    };

    for (double t : log_x ? decade_ticks(x_min, x_max) : linear_ticks(x_min, x_max)) {
        const double sx = px0 + (t - x_min) / (x_max - x_min) * (px1 - px0);
        out << "<line x1=\"" << sx << "\" y1=\"" << py1 << "\" x2=\"" << sx << "\" y2=\"" << py0
            << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << sx << "\" y=\"" << py0 + 20
            << "\" text-anchor=\"middle\" font-size=\"12\">" << tick_label(t, log_x)
            << "</text>\n";
    }
    for (double t : log_y ? decade_ticks(y_min, y_max) : linear_ticks(y_min, y_max)) {
        const double sy = py0 - (t - y_min) / (y_max - y_min) * (py0 - py1);
        out << "<line x1=\"" << px0 << "\" y1=\"" << sy << "\" x2=\"" << px1 << "\" y2=\"" << sy
            << "\" stroke=\"#ddd\" stroke-width=\"1\"/>\n";
        out << "<text x=\"" << px0 - 8 << "\" y=\"" << sy + 4
            << "\" text-anchor=\"end\" font-size=\"12\">" << tick_label(t, log_y) << "</text>\n";
    }
    out << "<text x=\"" << (px0 + px1) / 2 << "\" y=\"" << height - 16
        << "\" text-anchor=\"middle\" font-size=\"14\">" << x_label << "</text>\n";
    out << "<text x=\"20\" y=\"" << (py0 + py1) / 2
        << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 20 "
        << (py0 + py1) / 2 << ")\">" << y_label << "</text>\n";

    for (const auto& s : series) {
        std::vector<std::pair<double, double>> pts;
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (!detail::svg_point_ok(s.x[i], log_x) || !detail::svg_point_ok(s.y[i], log_y))
                continue;
            pts.emplace_back(ax.pos(s.x[i], px0, px1), ay.pos(s.y[i], py0, py1));
        }
        if (pts.empty()) continue;
        if (!s.markers_only) {
            out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\"";
            if (s.dashed) out << " stroke-dasharray=\"7 5\"";
            out << " points=\"";
            for (const auto& [x, y] : pts) out << x << ',' << y << ' ';
            out << "\"/>\n";
        }
        for (const auto& [x, y] : pts)
            out << "<circle cx=\"" << x << "\" cy=\"" << y << "\" r=\"3.5\" fill=\"" << s.color
                << "\"/>\n";
    }

    double ly = py1 + 18.0;
    for (const auto& s : series) {
        const double lx = px1 - 180.0;
        out << "<line x1=\"" << lx << "\" y1=\"" << ly - 4 << "\" x2=\"" << lx + 32 << "\" y2=\""
            << ly - 4 << "\" stroke=\"" << s.color << "\" stroke-width=\"2\"";
        if (s.dashed) out << " stroke-dasharray=\"7 5\"";
        out << "/>\n";
        out << "<text x=\"" << lx + 40 << "\" y=\"" << ly
            << "\" font-size=\"13\">" << s.label << "</text>\n";
        ly += 18.0;
    }
    out << "</svg>\n";
    if (!out) throw config_error("failed while writing " + path);
}

}  // namespace burstrec
