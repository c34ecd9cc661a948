#include "parasplit/region_scan.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace parasplit {

Rectangle small_region() { return {-1.0, 0.0, -20.0, 20.0}; }
Rectangle large_region() { return {-2.5e7, 0.0, -1e7, 1e7}; }

RegionScan scan_region(PropagatorPair pair, const Rectangle& rect, int re_cells, int im_cells,
                       int s, int terms, Execution exec) {
    if (re_cells < 2 || im_cells < 2) throw std::invalid_argument("region scan needs >= 2 cells per axis");
    if (!(rect.re_max > rect.re_min) || !(rect.im_max > rect.im_min)) {
        throw std::invalid_argument("region scan rectangle is empty");
    }
    if (s < 1) throw std::invalid_argument("fine step ratio s must be at least 1");
    if (terms < 1) throw std::invalid_argument("region scan needs at least one term");

    RegionScan scan;
    scan.pair = pair;
    scan.s = s;
    scan.terms = terms;
    scan.rect = rect;
    scan.re_cells = re_cells;
    scan.im_cells = im_cells;
    scan.factor.assign(static_cast<std::size_t>(re_cells) * im_cells, 0.0);

#pragma omp parallel for schedule(static) if (exec == Execution::parallel)
    for (int j = 0; j < im_cells; ++j) {
        std::vector<std::complex<double>> z(static_cast<std::size_t>(terms));
        for (int i = 0; i < re_cells; ++i) {
            std::fill(z.begin(), z.end(), std::complex<double>(scan.re(i), scan.im(j)));
            scan.factor[static_cast<std::size_t>(j) * re_cells + i] = conv_factor(pair, z, s).factor;
        }
    }
    scan.contour = level_contour(scan, 1.0);
    return scan;
}

namespace {

// Divergent cells get a finite stand-in so interpolation stays defined; the
// crossing then lands next to the finite neighbour.
double contour_value(double k) { return std::isfinite(k) ? k : 1e6; }

}  // namespace

std::vector<Segment> level_contour(const RegionScan& scan, double level) {
    std::vector<Segment> out;
    const int nx = scan.re_cells;
    const int ny = scan.im_cells;
    for (int j = 0; j + 1 < ny; ++j) {
        for (int i = 0; i + 1 < nx; ++i) {
            // Corners counter-clockwise from bottom-left.
            const double x[4] = {scan.re(i), scan.re(i + 1), scan.re(i + 1), scan.re(i)};
            const double y[4] = {scan.im(j), scan.im(j), scan.im(j + 1), scan.im(j + 1)};
            const double v[4] = {contour_value(scan.at(i, j)), contour_value(scan.at(i + 1, j)),
                                 contour_value(scan.at(i + 1, j + 1)),
                                 contour_value(scan.at(i, j + 1))};
            int mask = 0;
            for (int c = 0; c < 4; ++c) {
                if (v[c] < level) mask |= 1 << c;
            }
            if (mask == 0 || mask == 15) continue;

            auto crossing = [&](int e) {
                const int a = e;
                const int b = (e + 1) % 4;
                const double t = (level - v[a]) / (v[b] - v[a]);
                return std::pair<double, double>{x[a] + t * (x[b] - x[a]), y[a] + t * (y[b] - y[a])};
            };
            auto emit = [&](int e0, int e1) {
                const auto p = crossing(e0);
                const auto q = crossing(e1);
                out.push_back({p.first, p.second, q.first, q.second});
            };
            // Edge e joins corner e and corner e+1; it is crossed when their sides differ.
            std::vector<int> edges;
            for (int e = 0; e < 4; ++e) {
                if (((mask >> e) & 1) != ((mask >> ((e + 1) % 4)) & 1)) edges.push_back(e);
            }
            if (edges.size() == 2) {
                emit(edges[0], edges[1]);
            } else {
                // Saddle: decide by the centre average.
                const bool centre_inside = (v[0] + v[1] + v[2] + v[3]) / 4.0 < level;
                const bool corner0_inside = mask & 1;
                if (centre_inside == corner0_inside) {
                    emit(0, 1);
                    emit(2, 3);
                } else {
                    emit(3, 0);
                    emit(1, 2);
                }
            }
        }
    }
    return out;
}

std::vector<SliceRow> real_axis_slice(PropagatorPair pair, double min_magnitude,
                                      double max_magnitude, int points,
                                      std::span<const int> s_values, int terms) {
    if (points < 2 || !(min_magnitude > 0.0) || !(max_magnitude > min_magnitude)) {
        throw std::invalid_argument("real-axis slice needs >= 2 points and 0 < min < max");
    }
    std::vector<SliceRow> rows;
    const double lo = std::log(min_magnitude);
    const double hi = std::log(max_magnitude);
    std::vector<double> z(static_cast<std::size_t>(terms));
    for (int s : s_values) {
        for (int p = 0; p < points; ++p) {
            const double m = std::exp(lo + (hi - lo) * p / (points - 1));
            std::fill(z.begin(), z.end(), -m);
            rows.push_back({-m, s, conv_factor_real(pair, z, s)});
        }
    }
    return rows;
}

MagnitudeInterval near_zero_interval(const std::vector<SliceRow>& rows, int s, double threshold) {
    std::vector<SliceRow> mine;
    for (const auto& r : rows) {
        if (r.s == s) mine.push_back(r);
    }
    std::sort(mine.begin(), mine.end(),
              [](const SliceRow& a, const SliceRow& b) { return std::abs(a.z) < std::abs(b.z); });
    if (mine.empty()) return {};
    std::size_t best = 0;
    for (std::size_t i = 1; i < mine.size(); ++i) {
        if (mine[i].factor < mine[best].factor) best = i;
    }
    if (!(mine[best].factor < threshold)) return {};
    std::size_t lo = best, hi = best;
    while (lo > 0 && mine[lo - 1].factor < threshold) --lo;
    while (hi + 1 < mine.size() && mine[hi + 1].factor < threshold) ++hi;
    return {std::abs(mine[lo].z), std::abs(mine[hi].z)};
}

void write_scan_csv(std::ostream& out, const RegionScan& scan) {
    out << "re,im,K\n";
    char line[128];
    for (int j = 0; j < scan.im_cells; ++j) {
        for (int i = 0; i < scan.re_cells; ++i) {
            std::snprintf(line, sizeof line, "%.10g,%.10g,%.12g\n", scan.re(i), scan.im(j), scan.at(i, j));
            out << line;
        }
    }
}

void write_slice_csv(std::ostream& out, const std::vector<SliceRow>& rows) {
    out << "z,s,K\n";
    char line[128];
    for (const auto& r : rows) {
        std::snprintf(line, sizeof line, "%.10g,%d,%.12g\n", r.z, r.s, r.factor);
        out << line;
    }
}

}  // namespace parasplit
