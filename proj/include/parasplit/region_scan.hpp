#pragma once

#include <cmath>
#include <iosfwd>
#include <span>
#include <vector>

#include "parasplit/analysis.hpp"
#include "parasplit/execution.hpp"

namespace parasplit {

struct Rectangle {
    double re_min = -1.0;
    double re_max = 0.0;
    double im_min = -20.0;
    double im_max = 20.0;
};

/// (-1, 0) x (-20, 20): the neighbourhood of the origin.
Rectangle small_region();
/// (-2.5e7, 0) x (-1e7, 1e7): the stiff regime.
Rectangle large_region();

struct Segment {
    double x0, y0, x1, y1;
};

/// K on a cell grid covering a rectangle, with z_1 = ... = z_M = cell centre.
struct RegionScan {
    PropagatorPair pair = PropagatorPair::fie_fie;
    int s = 1;
    int terms = 2;
    Rectangle rect;
    int re_cells = 0;
    int im_cells = 0;
    /// Row-major by imaginary index: factor[j * re_cells + i]. +inf = divergent.
    std::vector<double> factor;
    /// K = 1 level line through the cell centres.
    std::vector<Segment> contour;

    double re(int i) const { return rect.re_min + (i + 0.5) * (rect.re_max - rect.re_min) / re_cells; }
    double im(int j) const { return rect.im_min + (j + 0.5) * (rect.im_max - rect.im_min) / im_cells; }
    double at(int i, int j) const { return factor[static_cast<std::size_t>(j) * re_cells + i]; }
    bool convergent(int i, int j) const { return at(i, j) < 1.0; }
};

RegionScan scan_region(PropagatorPair pair, const Rectangle& rect, int re_cells, int im_cells,
                       int s, int terms = 2, Execution exec = Execution::parallel);

/// Marching squares on the cell-centre grid. Divergent cells count as outside.
std::vector<Segment> level_contour(const RegionScan& scan, double level = 1.0);

struct SliceRow {
    double z = 0.0;
    int s = 1;
    double factor = 0.0;
};

/// K at z_1 = ... = z_M = -m for log-spaced m in [min, max], for each s.
std::vector<SliceRow> real_axis_slice(PropagatorPair pair, double min_magnitude,
                                      double max_magnitude, int points,
                                      std::span<const int> s_values, int terms = 2);

struct MagnitudeInterval {
    double lo = 0.0;
    double hi = 0.0;
    /// Length in decades; 0 when empty.
    double decades() const { return hi > 0.0 ? std::log10(hi / lo) : 0.0; }
};

/// Magnitudes |z| of the connected run of rows with ratio s, around the
/// minimum of K, on which K stays below `threshold`. Empty if none is.
MagnitudeInterval near_zero_interval(const std::vector<SliceRow>& rows, int s, double threshold);

/// re,im,K rows; divergent cells are written as inf.
void write_scan_csv(std::ostream& out, const RegionScan& scan);
/// z,s,K rows.
void write_slice_csv(std::ostream& out, const std::vector<SliceRow>& rows);

}  // namespace parasplit
