#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "parasplit/execution.hpp"

namespace parasplit {

/// Square sparse matrix stored by diagonals ("bands").
///
/// Band b holds A(r, r + offsets[b]) at position r. Only declared bands may
/// hold nonzeros; entries whose column falls outside [0, n) are kept at zero.
class DiscreteOperator {
public:
    DiscreteOperator() = default;
    DiscreteOperator(std::size_t n, std::vector<int> offsets);

    /// Nine-point stencil layout for an n_axis x n_axis grid.
    static DiscreteOperator nine_point(int n_axis);
    static DiscreteOperator diagonal(std::span<const double> values);

    std::size_t dimension() const noexcept { return n_; }
    const std::vector<int>& offsets() const noexcept { return offsets_; }

    double at(std::size_t row, std::size_t col) const;
    /// Adds to an entry; throws std::out_of_range for undeclared bands.
    void add(std::size_t row, std::size_t col, double value);

    std::span<const double> band(std::size_t b) const { return bands_[b]; }

    /// y = A x
    void apply(std::span<const double> x, std::span<double> y,
               Execution exec = Execution::serial) const;

    bool row_is_zero(std::size_t row) const;
    double max_abs() const;
    /// max |A(r,c) - A(c,r)|
    double asymmetry() const;

    DiscreteOperator& operator+=(const DiscreteOperator& other);
    friend DiscreteOperator operator+(DiscreteOperator a, const DiscreteOperator& b) {
        a += b;
        return a;
    }
    friend DiscreteOperator operator-(DiscreteOperator a, const DiscreteOperator& b);

    /// Dense product, used for commutator checks on small operators.
    std::vector<double> dense() const;

private:
    int band_of(long offset) const noexcept;

    std::size_t n_ = 0;
    std::vector<int> offsets_;
    std::vector<std::vector<double>> bands_;
};

/// Disjoint index sets of the nonzero rows of an operator that are connected
/// through its off-diagonal entries. Rows with no entries belong to no block.
using Block = std::vector<std::size_t>;
std::vector<Block> decoupling_blocks(const DiscreteOperator& op);

}  // namespace parasplit
