#include <cmath>
#include <numbers>
#include <string>

#include "parasplit/errors.hpp"
#include "parasplit/splitting.hpp"

namespace parasplit {

double cosine_ramp(double x, double start, double width) {
    if (x <= start) return 1.0;
    if (x >= start + width) return 0.0;
    return 0.5 * (1.0 + std::cos(std::numbers::pi * (x - start) / width));
}

PartitionOfUnity PartitionOfUnity::vertical_strips(const Mesh2D& mesh,
                                                   const StripGeometry& geometry) {
    if (geometry.terms < 2) throw ConfigError("strip decomposition needs at least two subdomains");
    if (geometry.strips < 1) throw ConfigError("strips per subdomain q must be at least 1");
    if (!(geometry.overlap > 0.0)) throw ConfigError("overlap beta must be positive");
    const int count = geometry.terms * geometry.strips;
    const double width = geometry.strip_width();
    if (geometry.overlap > 2.0 * width * (1.0 + 1e-12)) {
        throw ConfigError("overlap beta = " + std::to_string(geometry.overlap) +
                          " is too large for strip width " + std::to_string(width));
    }

    // Strip k has weight H_k - H_{k+1}, where H_k rises from 0 to 1 across the
    // overlap around interface k (H_0 = 1, H_count = 0). When the overlap does
    // not exceed the strip width this is the usual ramp / complementary ramp.
    const double half = 0.5 * geometry.overlap;
    auto rising = [&](int k, double x) {
        if (k <= 0) return 1.0;
        if (k >= count) return 0.0;
        return 1.0 - cosine_ramp(x, k * width - half, geometry.overlap);
    };

    PartitionOfUnity pou(mesh);
    pou.geometry_ = geometry;
    const int extent = mesh.lattice_extent();
    for (int term = 0; term + 1 < geometry.terms; ++term) {
        LatticeField field(extent, 0.0);
        for (int a = 0; a < extent; ++a) {
            const double x = mesh.lattice_coord(a);
            double value = 0.0;
            for (int k = term; k < count; k += geometry.terms) value += rising(k, x) - rising(k + 1, x);
            value = std::min(1.0, std::max(0.0, value));
            for (int b = 0; b < extent; ++b) field(a, b) = value;
        }
        pou.weights_.push_back(std::move(field));
    }
    LatticeField last(extent, 0.0);
    for (int b = 0; b < extent; ++b) {
        for (int a = 0; a < extent; ++a) {
            double rest = 1.0;
            for (const auto& w : pou.weights_) rest -= w(a, b);
            last(a, b) = std::max(0.0, rest);
        }
    }
    pou.weights_.push_back(std::move(last));
    return pou;
}

PartitionOfUnity PartitionOfUnity::from_functions(const Mesh2D& mesh,
                                                  const std::vector<ScalarField>& leading) {
    if (leading.empty()) throw ConfigError("partition of unity needs at least one weight function");
    PartitionOfUnity pou(mesh);
    for (const auto& f : leading) pou.weights_.emplace_back(mesh, f);
    const int extent = mesh.lattice_extent();
    LatticeField last(extent, 0.0);
    for (int b = 0; b < extent; ++b) {
        for (int a = 0; a < extent; ++a) {
            double rest = 1.0;
            for (const auto& w : pou.weights_) {
                if (w(a, b) < 0.0 || w(a, b) > 1.0) {
                    throw ConfigError("partition weights must lie in [0, 1]");
                }
                rest -= w(a, b);
            }
            if (rest < -1e-14) throw ConfigError("partition weights sum to more than one");
            last(a, b) = std::max(0.0, rest);
        }
    }
    pou.weights_.push_back(std::move(last));
    return pou;
}

}  // namespace parasplit
