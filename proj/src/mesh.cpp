#include "parasplit/mesh.hpp"

#include <cmath>
#include <string>

#include "parasplit/errors.hpp"

namespace parasplit {

Mesh2D::Mesh2D(int n) : n_(n) {
    if (n < 1) {
        throw UnsupportedMeshError("mesh needs at least one interior node per axis");
    }
}

Mesh2D::Mesh2D(int nx, int ny) : Mesh2D(nx) {
    if (nx != ny) {
        throw UnsupportedMeshError("only square meshes with nx == ny are supported (got " +
                                   std::to_string(nx) + " x " + std::to_string(ny) + ")");
    }
}

Mesh2D Mesh2D::with_spacing(double h) {
    if (!(h > 0.0) || h >= 1.0) {
        throw UnsupportedMeshError("mesh spacing must lie in (0, 1)");
    }
    const double cells = 1.0 / h;
    const double rounded = std::round(cells);
    if (std::abs(cells - rounded) > 1e-9 * rounded) {
        throw UnsupportedMeshError("mesh spacing " + std::to_string(h) +
                                   " does not divide the unit interval");
    }
    return Mesh2D(static_cast<int>(rounded) - 1);
}

LatticeField::LatticeField(const Mesh2D& mesh, const ScalarField& f)
    : extent_(mesh.lattice_extent()),
      values_(static_cast<std::size_t>(extent_) * extent_) {
    for (int b = 0; b < extent_; ++b) {
        const double y = mesh.lattice_coord(b);
        for (int a = 0; a < extent_; ++a) {
            values_[b * extent_ + a] = f(mesh.lattice_coord(a), y);
        }
    }
}

LatticeField::LatticeField(int extent, double value)
    : extent_(extent), values_(static_cast<std::size_t>(extent) * extent, value) {}

}  // namespace parasplit
