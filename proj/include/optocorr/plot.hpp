#pragma once

// Minimal static SVG line plots of sweep tables. Output is byte-deterministic:
// fixed layout, fixed palette, fixed-precision number formatting.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "optocorr/error.hpp"
#include "optocorr/sweep.hpp"

namespace optocorr {

struct PlotStyle {
    std::string measure = "e2_m"; ///< CSV column on the y axis
    std::string title;
    std::string x_label = "axis";
    std::string series_label = "series";
    bool log_x = false;
    int width = 640;
    int height = 420;
};

namespace detail {

inline std::string fmt(const char *f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

inline std::string xml_escape(const std::string &s) {
    std::string out;
    for (char ch : s) {
        switch (ch) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += ch;
        }
    }
    return out;
}

inline constexpr const char *palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                          "#ff7f0e", "#8c564b", "#e377c2", "#17becf"};

} // namespace detail

/// One panel: style.measure versus the axis column, one polyline per series.
inline std::string emit_plot(const std::vector<SweepRow> &rows, const PlotStyle &style) {
    if (rows.empty())
        throw InvalidInputError("emit_plot: empty table");
    if (!column_value(rows.front(), style.measure) || style.measure == "axis" ||
        style.measure == "series")
        throw InvalidInputError("emit_plot: unknown measure '" + style.measure + "'");

    // Series in order of first appearance.
    std::vector<double> order;
    std::map<double, std::vector<std::pair<double, double>>> lines;
    for (const auto &row : rows) {
        if (!lines.count(row.series))
            order.push_back(row.series);
        lines[row.series].emplace_back(row.axis, *column_value(row, style.measure));
    }
    for (const auto &[s, pts] : lines)
        if (pts.size() < 2)
            throw InvalidInputError("emit_plot: series " + detail::fmt("%g", s) +
                                    " has fewer than two points");

    auto xt = [&](double x) {
        if (style.log_x) {
            if (!(x > 0.0))
                throw InvalidInputError("emit_plot: log x axis needs positive values");
            return std::log10(x);
        }
        return x;
    };
    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto &[s, pts] : lines)
        for (const auto &[x, y] : pts) {
            xmin = std::min(xmin, xt(x));
            xmax = std::max(xmax, xt(x));
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (!(xmax > xmin))
        xmax = xmin + 1.0;
    if (!(ymax > ymin)) {
        ymax = ymin + 1.0;
    }
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    const double left = 70, right = 150, top = 40, bottom = 50;
    const double pw = style.width - left - right;
    const double ph = style.height - top - bottom;
    auto px = [&](double x) { return left + (xt(x) - xmin) / (xmax - xmin) * pw; };
    auto py = [&](double y) { return top + (ymax - y) / (ymax - ymin) * ph; };

    std::string svg;
    svg += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    svg += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(style.width) +
           "\" height=\"" + std::to_string(style.height) + "\" viewBox=\"0 0 " +
           std::to_string(style.width) + " " + std::to_string(style.height) +
           "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    svg += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    const std::string title = style.title.empty() ? style.measure : style.title;
    svg += "<text x=\"" + detail::fmt("%.2f", left + pw / 2) +
           "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">" + detail::xml_escape(title) +
           "</text>\n";
    svg += "<rect x=\"" + detail::fmt("%.2f", left) + "\" y=\"" + detail::fmt("%.2f", top) +
           "\" width=\"" + detail::fmt("%.2f", pw) + "\" height=\"" + detail::fmt("%.2f", ph) +
           "\" fill=\"none\" stroke=\"black\"/>\n";

    constexpr int kTicks = 5;
    for (int i = 0; i <= kTicks; ++i) {
        const double fx = xmin + (xmax - xmin) * i / kTicks;
        const double label = style.log_x ? std::pow(10.0, fx) : fx;
        const double sx = left + pw * i / kTicks;
        svg += "<line x1=\"" + detail::fmt("%.2f", sx) + "\" y1=\"" + detail::fmt("%.2f", top + ph) +
               "\" x2=\"" + detail::fmt("%.2f", sx) + "\" y2=\"" + detail::fmt("%.2f", top + ph + 5) +
               "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + detail::fmt("%.2f", sx) + "\" y=\"" + detail::fmt("%.2f", top + ph + 18) +
               "\" text-anchor=\"middle\">" + detail::fmt("%.3g", label) + "</text>\n";
        const double fy = ymin + (ymax - ymin) * i / kTicks;
        const double sy = top + ph - ph * i / kTicks;
        svg += "<line x1=\"" + detail::fmt("%.2f", left - 5) + "\" y1=\"" + detail::fmt("%.2f", sy) +
               "\" x2=\"" + detail::fmt("%.2f", left) + "\" y2=\"" + detail::fmt("%.2f", sy) +
               "\" stroke=\"black\"/>\n";
        svg += "<text x=\"" + detail::fmt("%.2f", left - 8) + "\" y=\"" + detail::fmt("%.2f", sy + 4) +
               "\" text-anchor=\"end\">" + detail::fmt("%.3g", fy) + "</text>\n";
    }
    svg += "<text x=\"" + detail::fmt("%.2f", left + pw / 2) + "\" y=\"" +
           detail::fmt("%.2f", static_cast<double>(style.height) - 10) +
           "\" text-anchor=\"middle\">" + detail::xml_escape(style.x_label) + "</text>\n";
    svg += "<text x=\"16\" y=\"" + detail::fmt("%.2f", top + ph / 2) +
           "\" text-anchor=\"middle\" transform=\"rotate(-90 16 " + detail::fmt("%.2f", top + ph / 2) +
           ")\">" + detail::xml_escape(style.measure) + "</text>\n";

    std::size_t k = 0;
    for (double s : order) {
        const char *color = detail::palette[k % std::size(detail::palette)];
        svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) +
               "\" stroke-width=\"1.5\" points=\"";
        bool first = true;
        for (const auto &[x, y] : lines[s]) {
            svg += (first ? "" : " ") + detail::fmt("%.2f", px(x)) + "," + detail::fmt("%.2f", py(y));
            first = false;
        }
        svg += "\"/>\n";
        const double ly = top + 14 + 18.0 * static_cast<double>(k);
        const double lx = left + pw + 12;
        svg += "<line x1=\"" + detail::fmt("%.2f", lx) + "\" y1=\"" + detail::fmt("%.2f", ly) +
               "\" x2=\"" + detail::fmt("%.2f", lx + 20) + "\" y2=\"" + detail::fmt("%.2f", ly) +
               "\" stroke=\"" + color + "\" stroke-width=\"1.5\"/>\n";
        svg += "<text x=\"" + detail::fmt("%.2f", lx + 26) + "\" y=\"" + detail::fmt("%.2f", ly + 4) +
               "\">" + detail::xml_escape(style.series_label) + " = " + detail::fmt("%g", s) +
               "</text>\n";
        ++k;
    }
    svg += "</svg>\n";
    return svg;
}

} // namespace optocorr
