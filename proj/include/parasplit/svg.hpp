#pragma once

#include <string>
#include <vector>

#include "parasplit/region_scan.hpp"

namespace parasplit::svg {

struct Series {
    std::string label;
    std::vector<double> x;
    std::vector<double> y;
    bool dashed = false;
};

struct PlotOptions {
    std::string title;
    std::string x_label;
    std::string y_label;
    bool log_x = false;
    bool log_y = false;
};

/// Standalone SVG document. Non-finite or (on log axes) non-positive points are skipped.
std::string line_plot(const std::vector<Series>& series, const PlotOptions& options);

/// K heatmap of a scan, coloured on [0, 1]; K >= 1 and divergent cells are grey.
/// The scan's own K = 1 contour is drawn solid, `dashed_overlay` dashed.
std::string heatmap(const RegionScan& scan, const std::string& title,
                    const std::vector<Segment>* dashed_overlay = nullptr);

}  // namespace parasplit::svg
