#include "parasplit/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace parasplit::svg {

namespace {

constexpr double width = 640.0;
constexpr double height = 440.0;
constexpr double left = 70.0;
constexpr double right = 150.0;
constexpr double top = 40.0;
constexpr double bottom = 50.0;

const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#17becf"};

std::string escape(const std::string& text) {
    std::string out;
    for (char c : text) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            default: out += c;
        }
    }
    return out;
}

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    return buf;
}

std::string tick(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

struct Axis {
    double lo = 0.0, hi = 1.0;
    bool log = false;
    double pixel_lo = 0.0, pixel_hi = 1.0;

    double map(double v) const {
        const double a = log ? std::log10(v) : v;
        const double l = log ? std::log10(lo) : lo;
        const double h = log ? std::log10(hi) : hi;
        return pixel_lo + (a - l) / (h - l) * (pixel_hi - pixel_lo);
    }
};

std::string header(const std::string& title) {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<text x=\"" << width / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
        << escape(title) << "</text>\n";
    return out.str();
}

void frame(std::ostringstream& out, const Axis& ax, const Axis& ay, const std::string& xl,
           const std::string& yl) {
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << width - left - right
        << "\" height=\"" << height - top - bottom << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int k = 0; k <= 4; ++k) {
        const double f = k / 4.0;
        const double vx = ax.log ? std::pow(10.0, std::log10(ax.lo) + f * (std::log10(ax.hi) - std::log10(ax.lo)))
                                 : ax.lo + f * (ax.hi - ax.lo);
        const double vy = ay.log ? std::pow(10.0, std::log10(ay.lo) + f * (std::log10(ay.hi) - std::log10(ay.lo)))
                                 : ay.lo + f * (ay.hi - ay.lo);
        out << "<text x=\"" << num(ax.map(vx)) << "\" y=\"" << height - bottom + 16
            << "\" text-anchor=\"middle\">" << tick(vx) << "</text>\n";
        out << "<text x=\"" << left - 6 << "\" y=\"" << num(ay.map(vy) + 4)
            << "\" text-anchor=\"end\">" << tick(vy) << "</text>\n";
    }
    out << "<text x=\"" << (left + width - right) / 2 << "\" y=\"" << height - 12
        << "\" text-anchor=\"middle\">" << escape(xl) << "</text>\n";
    out << "<text x=\"16\" y=\"" << (top + height - bottom) / 2 << "\" text-anchor=\"middle\" transform=\"rotate(-90 16 "
        << (top + height - bottom) / 2 << ")\">" << escape(yl) << "</text>\n";
}

bool usable(double x, double y, const PlotOptions& o) {
    if (!std::isfinite(x) || !std::isfinite(y)) return false;
    if (o.log_x && x <= 0.0) return false;
    if (o.log_y && y <= 0.0) return false;
    return true;
}

// Blue (K = 0) to yellow (K -> 1).
std::string colour(double k) {
    if (!(k < 1.0)) return "#b0b0b0";
    const double t = std::clamp(k, 0.0, 1.0);
    const int r = static_cast<int>(std::lround(40 + t * 215));
    const int g = static_cast<int>(std::lround(60 + t * 170));
    const int b = static_cast<int>(std::lround(160 - t * 130));
    char buf[16];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
}

}  // namespace

std::string line_plot(const std::vector<Series>& series, const PlotOptions& options) {
    double xlo = std::numeric_limits<double>::infinity(), xhi = -xlo;
    double ylo = xlo, yhi = -xlo;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!usable(s.x[i], s.y[i], options)) continue;
            xlo = std::min(xlo, s.x[i]);
            xhi = std::max(xhi, s.x[i]);
            ylo = std::min(ylo, s.y[i]);
            yhi = std::max(yhi, s.y[i]);
        }
    }
    if (!std::isfinite(xlo)) {
        xlo = ylo = 1.0;
        xhi = yhi = 10.0;
    }
    if (xhi == xlo) xhi = options.log_x ? xlo * 10.0 : xlo + 1.0;
    if (yhi == ylo) yhi = options.log_y ? ylo * 10.0 : ylo + 1.0;

    const Axis ax{xlo, xhi, options.log_x, left, width - right};
    const Axis ay{ylo, yhi, options.log_y, height - bottom, top};

    std::ostringstream out;
    out << header(options.title);
    frame(out, ax, ay, options.x_label, options.y_label);
    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* colour = palette[k % (sizeof palette / sizeof *palette)];
        out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"1.5\"";
        if (s.dashed) out << " stroke-dasharray=\"6 4\"";
        out << " points=\"";
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!usable(s.x[i], s.y[i], options)) continue;
            out << num(ax.map(s.x[i])) << ',' << num(ay.map(s.y[i])) << ' ';
        }
        out << "\"/>\n";
        const double ly = top + 14 + 18.0 * k;
        out << "<line x1=\"" << width - right + 10 << "\" y1=\"" << ly - 4 << "\" x2=\""
            << width - right + 30 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << colour << "\"/>\n";
        out << "<text x=\"" << width - right + 34 << "\" y=\"" << ly << "\">" << escape(s.label)
            << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string heatmap(const RegionScan& scan, const std::string& title,
                    const std::vector<Segment>* dashed_overlay) {
    const Axis ax{scan.rect.re_min, scan.rect.re_max, false, left, width - right};
    const Axis ay{scan.rect.im_min, scan.rect.im_max, false, height - bottom, top};
    const double cw = (width - left - right) / scan.re_cells;
    const double ch = (height - top - bottom) / scan.im_cells;

    std::ostringstream out;
    out << header(title);
    out << "<g shape-rendering=\"crispEdges\">\n";
    for (int j = 0; j < scan.im_cells; ++j) {
        for (int i = 0; i < scan.re_cells; ++i) {
            out << "<rect x=\"" << num(left + i * cw) << "\" y=\"" << num(height - bottom - (j + 1) * ch)
                << "\" width=\"" << num(cw + 0.05) << "\" height=\"" << num(ch + 0.05) << "\" fill=\""
                << colour(scan.at(i, j)) << "\"/>\n";
        }
    }
    out << "</g>\n";
    auto draw = [&](const std::vector<Segment>& segs, bool dashed) {
        out << "<g stroke=\"black\" stroke-width=\"1.2\"" << (dashed ? " stroke-dasharray=\"4 3\"" : "")
            << ">\n";
        for (const auto& s : segs) {
            out << "<line x1=\"" << num(ax.map(s.x0)) << "\" y1=\"" << num(ay.map(s.y0)) << "\" x2=\""
                << num(ax.map(s.x1)) << "\" y2=\"" << num(ay.map(s.y1)) << "\"/>\n";
        }
        out << "</g>\n";
    };
    draw(scan.contour, false);
    if (dashed_overlay) draw(*dashed_overlay, true);
    frame(out, ax, ay, "Re z", "Im z");

    // Colour bar.
    for (int k = 0; k < 20; ++k) {
        out << "<rect x=\"" << width - right + 20 << "\" y=\"" << num(top + (19 - k) * 12.0)
            << "\" width=\"16\" height=\"12.2\" fill=\"" << colour((k + 0.5) / 20.0) << "\"/>\n";
    }
    out << "<text x=\"" << width - right + 42 << "\" y=\"" << top + 10 << "\">K = 1</text>\n";
    out << "<text x=\"" << width - right + 42 << "\" y=\"" << top + 240 << "\">K = 0</text>\n";
    out << "<rect x=\"" << width - right + 20 << "\" y=\"" << top + 260
        << "\" width=\"16\" height=\"12\" fill=\"#b0b0b0\"/>\n";
    out << "<text x=\"" << width - right + 42 << "\" y=\"" << top + 270 << "\">K &#8805; 1</text>\n";
    out << "</svg>\n";
    return out.str();
}

}  // namespace parasplit::svg
