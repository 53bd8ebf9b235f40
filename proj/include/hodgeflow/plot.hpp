#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <string>
#include <vector>

#include "hodgeflow/errors.hpp"
#include "hodgeflow/io.hpp"

namespace hodgeflow {
namespace plot {

// All rendering below is deliberately primitive: fixed canvas, fixed decimal
// formatting, no timestamps or random ids, so identical inputs produce
// byte-identical SVG documents.

constexpr int kWidth = 720;
constexpr int kHeight = 520;
constexpr double kLeft = 80, kRight = 640, kTop = 60, kBottom = 460;

inline std::string fixed3(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

inline std::string label6(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

inline std::string escape_text(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (c == '&') out += "&amp;";
        else if (c == '<') out += "&lt;";
        else if (c == '>') out += "&gt;";
        else out += c;
    }
    return out;
}

struct Rgb {
    int r = 0, g = 0, b = 0;
    std::string hex() const {
        char buf[8];
        std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
        return buf;
    }
};

/** Perceptually ordered dark-to-bright color map (fixed 9-stop table). */
inline Rgb colormap(double t) {
    static const int stops[9][3] = {{68, 1, 84},    {72, 40, 120},  {62, 74, 137},
                                    {49, 104, 142}, {38, 130, 142}, {31, 158, 137},
                                    {53, 183, 121}, {109, 205, 89}, {253, 231, 37}};
    if (!std::isfinite(t)) t = 0.0;
    t = std::clamp(t, 0.0, 1.0) * 8.0;
    int lo = std::min(8, static_cast<int>(t));
    int hi = std::min(8, lo + 1);
    double f = t - lo;
    Rgb c;
    c.r = static_cast<int>(std::lround(stops[lo][0] * (1 - f) + stops[hi][0] * f));
    c.g = static_cast<int>(std::lround(stops[lo][1] * (1 - f) + stops[hi][1] * f));
    c.b = static_cast<int>(std::lround(stops[lo][2] * (1 - f) + stops[hi][2] * f));
    return c;
}

inline void begin_svg(std::ostream& out, const std::string& title) {
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n";
    out << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";
    out << "<text x=\"" << kWidth / 2 << "\" y=\"30\" text-anchor=\"middle\" "
           "font-family=\"monospace\" font-size=\"16\">"
        << escape_text(title) << "</text>\n";
}

inline void axis_labels(std::ostream& out, const std::string& x_label,
                        const std::string& y_label) {
    out << "<text x=\"" << (kLeft + kRight) / 2 << "\" y=\"" << kHeight - 15
        << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"13\">"
        << escape_text(x_label) << "</text>\n";
    out << "<text x=\"20\" y=\"" << (kTop + kBottom) / 2
        << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"13\" "
           "transform=\"rotate(-90 20 "
        << (kTop + kBottom) / 2 << ")\">" << escape_text(y_label) << "</text>\n";
}

inline void end_svg(std::ostream& out) { out << "</svg>\n"; }

inline void frame_with_ticks(std::ostream& out, double x_min, double x_max, double y_min,
                             double y_max) {
    out << "<rect x=\"" << kLeft << "\" y=\"" << kTop << "\" width=\"" << kRight - kLeft
        << "\" height=\"" << kBottom - kTop << "\" fill=\"none\" stroke=\"black\"/>\n";
    out << "<text x=\"" << kLeft << "\" y=\"" << kBottom + 20
        << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\">"
        << label6(x_min) << "</text>\n";
    out << "<text x=\"" << kRight << "\" y=\"" << kBottom + 20
        << "\" text-anchor=\"middle\" font-family=\"monospace\" font-size=\"11\">"
        << label6(x_max) << "</text>\n";
    out << "<text x=\"" << kLeft - 8 << "\" y=\"" << kBottom + 4
        << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\">" << label6(y_min)
        << "</text>\n";
    out << "<text x=\"" << kLeft - 8 << "\" y=\"" << kTop + 4
        << "\" text-anchor=\"end\" font-family=\"monospace\" font-size=\"11\">" << label6(y_max)
        << "</text>\n";
}

/**
 * Heatmap of values over an (x, y) grid. values[i][j] belongs to
 * (xs[i], ys[j]); non-finite cells render grey. Higher y sits higher on the
 * canvas.
 */
inline void heatmap(std::ostream& out, const std::vector<double>& xs,
                    const std::vector<double>& ys,
                    const std::vector<std::vector<double>>& values, const std::string& title,
                    const std::string& x_label, const std::string& y_label) {
    if (xs.empty() || ys.empty() || values.size() != xs.size())
        throw ConfigError("heatmap grid is inconsistent");
    for (const auto& col : values)
        if (col.size() != ys.size()) throw ConfigError("heatmap grid is inconsistent");

    double vmin = std::numeric_limits<double>::infinity(), vmax = -vmin;
    for (const auto& col : values)
        for (double v : col)
            if (std::isfinite(v)) {
                vmin = std::min(vmin, v);
                vmax = std::max(vmax, v);
            }
    if (!(vmin <= vmax)) {
        vmin = 0.0;
        vmax = 1.0;
    }
    const double span = vmax > vmin ? vmax - vmin : 1.0;

    begin_svg(out, title);
    const double cw = (kRight - kLeft) / static_cast<double>(xs.size());
    const double ch = (kBottom - kTop) / static_cast<double>(ys.size());
    for (std::size_t i = 0; i < xs.size(); ++i) {
        for (std::size_t j = 0; j < ys.size(); ++j) {
            double v = values[i][j];
            std::string fill =
                std::isfinite(v) ? colormap((v - vmin) / span).hex() : std::string("#cccccc");
            double x = kLeft + cw * static_cast<double>(i);
            double y = kBottom - ch * static_cast<double>(j + 1);
            out << "<rect x=\"" << fixed3(x) << "\" y=\"" << fixed3(y) << "\" width=\""
                << fixed3(cw + 0.5) << "\" height=\"" << fixed3(ch + 0.5) << "\" fill=\"" << fill
                << "\"/>\n";
        }
    }
    frame_with_ticks(out, xs.front(), xs.back(), ys.front(), ys.back());
    // Color bar: ten fixed swatches plus range labels.
    for (int s = 0; s < 10; ++s) {
        double y = kBottom - (kBottom - kTop) * (s + 1) / 10.0;
        out << "<rect x=\"" << kRight + 20 << "\" y=\"" << fixed3(y) << "\" width=\"18\" height=\""
            << fixed3((kBottom - kTop) / 10.0 + 0.5) << "\" fill=\""
            << colormap((s + 0.5) / 10.0).hex() << "\"/>\n";
    }
    out << "<text x=\"" << kRight + 44 << "\" y=\"" << kBottom + 4
        << "\" font-family=\"monospace\" font-size=\"11\">" << label6(vmin) << "</text>\n";
    out << "<text x=\"" << kRight + 44 << "\" y=\"" << kTop + 4
        << "\" font-family=\"monospace\" font-size=\"11\">" << label6(vmax) << "</text>\n";
    axis_labels(out, x_label, y_label);
    end_svg(out);
}

struct Series {
    std::string name;
    std::vector<double> x;
    std::vector<double> y;
};

inline const char* series_color(std::size_t i) {
    static const char* palette[6] = {"#1f77b4", "#d62728", "#2ca02c",
                                     "#9467bd", "#ff7f0e", "#17becf"};
    return palette[i % 6];
}

/** Line chart of one or more (x, y) series with a shared frame and legend. */
inline void line_chart(std::ostream& out, const std::vector<Series>& series,
                       const std::string& title, const std::string& x_label,
                       const std::string& y_label) {
    if (series.empty()) throw ConfigError("line chart needs at least one series");
    double x_min = std::numeric_limits<double>::infinity(), x_max = -x_min;
    double y_min = x_min, y_max = -x_min;
    for (const auto& s : series) {
        if (s.x.size() != s.y.size() || s.x.empty())
            throw ConfigError("line chart series is empty or ragged");
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            x_min = std::min(x_min, s.x[i]);
            x_max = std::max(x_max, s.x[i]);
            y_min = std::min(y_min, s.y[i]);
            y_max = std::max(y_max, s.y[i]);
        }
    }
    if (!(x_min <= x_max)) throw ConfigError("line chart has no finite points");
    if (x_max == x_min) x_max = x_min + 1.0;
    if (y_max == y_min) {
        y_max += 0.5;
        y_min -= 0.5;
    }
    auto px = [&](double x) { return kLeft + (kRight - kLeft) * (x - x_min) / (x_max - x_min); };
    auto py = [&](double y) {
        return kBottom - (kBottom - kTop) * (y - y_min) / (y_max - y_min);
    };

    begin_svg(out, title);
    frame_with_ticks(out, x_min, x_max, y_min, y_max);
    for (std::size_t si = 0; si < series.size(); ++si) {
        const auto& s = series[si];
        out << "<polyline fill=\"none\" stroke=\"" << series_color(si)
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
            if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
            out << fixed3(px(s.x[i])) << ',' << fixed3(py(s.y[i])) << ' ';
        }
        out << "\"/>\n";
        out << "<text x=\"" << kRight - 150 << "\" y=\"" << kTop + 18 + 16 * si
            << "\" font-family=\"monospace\" font-size=\"12\" fill=\"" << series_color(si) << "\">"
            << escape_text(s.name) << "</text>\n";
    }
    axis_labels(out, x_label, y_label);
    end_svg(out);
}

/** Parametric trajectory projection, e.g. sin(theta_i) against sin(theta_j). */
inline void trajectory_projection(std::ostream& out, const std::vector<double>& x,
                                  const std::vector<double>& y, const std::string& title,
                                  const std::string& x_label, const std::string& y_label) {
    Series s;
    s.name = "trajectory";
    s.x = x;
    s.y = y;
    line_chart(out, {s}, title, x_label, y_label);
}

}  // namespace plot
}  // namespace hodgeflow
