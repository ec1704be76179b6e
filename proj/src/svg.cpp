#include "pblockade/svg.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace pblockade {

namespace {

constexpr double width = 640.0;
constexpr double height = 480.0;
constexpr double left = 70.0;
constexpr double right = 30.0;
constexpr double top = 40.0;
constexpr double bottom = 60.0;

std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '&': out += "&amp;"; break;
        default: out += c;
        }
    }
    return out;
}

struct Frame {
    double x0, x1, y0, y1;

    double px(double x) const { return left + (x - x0) / (x1 - x0) * (width - left - right); }
    double py(double y) const { return height - bottom - (y - y0) / (y1 - y0) * (height - top - bottom); }
};

void open(std::ostream& os)
{
    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
       << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

void axes(std::ostream& os, const Frame& f, const PlotLabels& labels)
{
    os << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << width - left - right << "\" height=\""
       << height - top - bottom << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double x = f.x0 + (f.x1 - f.x0) * k / 4.0;
        const double y = f.y0 + (f.y1 - f.y0) * k / 4.0;
        os << "<text x=\"" << num(f.px(x)) << "\" y=\"" << height - bottom + 16
           << "\" text-anchor=\"middle\">" << num(x) << "</text>\n";
        os << "<text x=\"" << left - 6 << "\" y=\"" << num(f.py(y) + 4) << "\" text-anchor=\"end\">" << num(y)
           << "</text>\n";
    }
    os << "<text x=\"" << width / 2 << "\" y=\"" << top - 14 << "\" text-anchor=\"middle\" font-size=\"14\">"
       << escape(labels.title) << "</text>\n";
    os << "<text x=\"" << width / 2 << "\" y=\"" << height - 16 << "\" text-anchor=\"middle\">" << escape(labels.x)
       << "</text>\n";
    os << "<text x=\"16\" y=\"" << height / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
       << height / 2 << ")\">" << escape(labels.y) << "</text>\n";
}

std::optional<double> transform(const std::optional<double>& v, bool log)
{
    if (!v || !std::isfinite(*v)) {
        return std::nullopt;
    }
    if (log) {
        if (!(*v > 0.0)) {
            return std::nullopt;
        }
        return std::log10(*v);
    }
    return *v;
}

// Blue -> white -> red ramp.
std::string colour(double t)
{
    t = std::clamp(t, 0.0, 1.0);
    int r, g, b;
    if (t < 0.5) {
        const double s = t / 0.5;
        r = static_cast<int>(40 + 215 * s);
        g = static_cast<int>(60 + 195 * s);
        b = 200 + static_cast<int>(55 * s);
    } else {
        const double s = (t - 0.5) / 0.5;
        r = 255;
        g = static_cast<int>(255 - 205 * s);
        b = static_cast<int>(255 - 215 * s);
    }
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

constexpr std::array<const char*, 6> palette = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

} // namespace

void write_line_svg(std::ostream& os, const PlotLabels& labels, const std::vector<Series>& series, bool log_y)
{
    double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            if (const auto y = transform(s.y[i], log_y)) {
                x0 = std::min(x0, s.x[i]);
                x1 = std::max(x1, s.x[i]);
                y0 = std::min(y0, *y);
                y1 = std::max(y1, *y);
            }
        }
    }
    if (!(x0 < x1)) {
        x0 = 0.0;
        x1 = 1.0;
    }
    if (!(y0 < y1)) {
        y0 = std::isfinite(y0) ? y0 - 1.0 : 0.0;
        y1 = y0 + 2.0;
    }
    const Frame f{x0, x1, y0, y1};
    open(os);
    PlotLabels l = labels;
    if (log_y) {
        l.y = "log10 " + l.y;
    }
    axes(os, f, l);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* c = palette[k % palette.size()];
        std::string path;
        bool pen = false;
        for (std::size_t i = 0; i < s.x.size() && i < s.y.size(); ++i) {
            const auto y = transform(s.y[i], log_y);
            if (!y) {
                pen = false;
                continue;
            }
            path += (pen ? " L" : " M") + num(f.px(s.x[i])) + ' ' + num(f.py(*y));
            pen = true;
        }
        os << "<path d=\"" << path << "\" fill=\"none\" stroke=\"" << c << "\" stroke-width=\"1.5\"/>\n";
        os << "<text x=\"" << width - right - 8 << "\" y=\"" << top + 16 + 16 * k << "\" text-anchor=\"end\" fill=\""
           << c << "\">" << escape(s.label) << "</text>\n";
    }
    os << "</svg>\n";
}

void write_heatmap_svg(std::ostream& os, const PlotLabels& labels, const Grid2D& grid, bool log_scale,
                       const std::optional<Series>& overlay)
{
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (const auto& v : grid.values) {
        if (const auto t = transform(v, log_scale)) {
            lo = std::min(lo, *t);
            hi = std::max(hi, *t);
        }
    }
    if (!(lo < hi)) {
        lo = std::isfinite(lo) ? lo - 1.0 : 0.0;
        hi = lo + 2.0;
    }
    const double dx = grid.axis1.n > 1 ? grid.axis1.step() : 1.0;
    const double dy = grid.axis2.n > 1 ? grid.axis2.step() : 1.0;
    const Frame f{grid.axis1.min - dx / 2, grid.axis1.max + dx / 2, grid.axis2.min - dy / 2, grid.axis2.max + dy / 2};
    open(os);
    const double cw = std::abs(f.px(dx) - f.px(0.0));
    const double ch = std::abs(f.py(dy) - f.py(0.0));
    for (std::size_t i = 0; i < grid.axis1.n; ++i) {
        for (std::size_t j = 0; j < grid.axis2.n; ++j) {
            const auto t = transform(grid.at(i, j), log_scale);
            if (!t) {
                continue;
            }
            os << "<rect x=\"" << num(f.px(grid.axis1.value(i) - dx / 2)) << "\" y=\""
               << num(f.py(grid.axis2.value(j) + dy / 2)) << "\" width=\"" << num(cw + 0.3) << "\" height=\""
               << num(ch + 0.3) << "\" fill=\"" << colour((*t - lo) / (hi - lo)) << "\"/>\n";
        }
    }
    axes(os, f, labels);
    if (overlay) {
        std::string path;
        bool pen = false;
        for (std::size_t i = 0; i < overlay->x.size() && i < overlay->y.size(); ++i) {
            const auto& y = overlay->y[i];
            if (!y || *y < f.y0 || *y > f.y1) {
                pen = false;
                continue;
            }
            path += (pen ? " L" : " M") + num(f.px(overlay->x[i])) + ' ' + num(f.py(*y));
            pen = true;
        }
        os << "<path d=\"" << path << "\" fill=\"none\" stroke=\"white\" stroke-width=\"1.5\" "
           << "stroke-dasharray=\"6 4\"/>\n";
    }
    os << "<text x=\"" << width - right << "\" y=\"" << top - 4 << "\" text-anchor=\"end\" font-size=\"10\">"
       << (log_scale ? "log10 " : "") << "range " << num(lo) << " .. " << num(hi) << "</text>\n";
    os << "</svg>\n";
}

} // namespace pblockade
