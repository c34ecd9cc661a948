#pragma once

#include <cstddef>
#include <functional>
#include <vector>

namespace parasplit {

using ScalarField = std::function<double(double x, double y)>;

/// Uniform mesh of the unit square with homogeneous node spacing h = 1/(n+1).
/// Only interior nodes carry unknowns; node (i, j) sits at ((i+1)h, (j+1)h) and
/// is numbered j*n + i (x fastest).
///
/// Coefficients of the discrete operator live on the half-lattice of points
/// (a*h/2, b*h/2), a, b = 0 .. 2n+2: even/even are nodes, odd/even and even/odd
/// are flux faces, odd/odd are cell corners.
class Mesh2D {
public:
    explicit Mesh2D(int n);
    /// Throws UnsupportedMeshError unless nx == ny.
    Mesh2D(int nx, int ny);

    /// Mesh whose spacing is h; h must equal 1/(n+1) for an integer n.
    static Mesh2D with_spacing(double h);

    int n() const noexcept { return n_; }
    std::size_t size() const noexcept { return static_cast<std::size_t>(n_) * n_; }
    double h() const noexcept { return 1.0 / (n_ + 1); }

    double coord(int i) const noexcept { return (i + 1) / static_cast<double>(n_ + 1); }
    std::size_t index(int i, int j) const noexcept {
        return static_cast<std::size_t>(j) * n_ + i;
    }
    int column_of(std::size_t idx) const noexcept { return static_cast<int>(idx % n_); }
    int row_of(std::size_t idx) const noexcept { return static_cast<int>(idx / n_); }

    int lattice_extent() const noexcept { return 2 * n_ + 3; }
    double lattice_coord(int a) const noexcept { return a / (2.0 * (n_ + 1)); }
    static int node_lattice(int i) noexcept { return 2 * i + 2; }

    bool operator==(const Mesh2D& other) const noexcept { return n_ == other.n_; }

private:
    int n_;
};

/// Dense samples of a scalar field on the half-lattice of a mesh.
class LatticeField {
public:
    LatticeField() = default;
    LatticeField(const Mesh2D& mesh, const ScalarField& f);
    LatticeField(int extent, double value);

    double operator()(int a, int b) const noexcept { return values_[b * extent_ + a]; }
    double& operator()(int a, int b) noexcept { return values_[b * extent_ + a]; }
    int extent() const noexcept { return extent_; }

private:
    int extent_ = 0;
    std::vector<double> values_;
};

}  // namespace parasplit
