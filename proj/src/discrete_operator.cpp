#include "parasplit/discrete_operator.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

#include <omp.h>

namespace parasplit {

DiscreteOperator::DiscreteOperator(std::size_t n, std::vector<int> offsets)
    : n_(n), offsets_(std::move(offsets)), bands_(offsets_.size(), std::vector<double>(n, 0.0)) {}

DiscreteOperator DiscreteOperator::nine_point(int n_axis) {
    const int n = n_axis;
    return DiscreteOperator(static_cast<std::size_t>(n) * n,
                            {-n - 1, -n, -n + 1, -1, 0, 1, n - 1, n, n + 1});
}

DiscreteOperator DiscreteOperator::diagonal(std::span<const double> values) {
    DiscreteOperator op(values.size(), {0});
    std::copy(values.begin(), values.end(), op.bands_[0].begin());
    return op;
}

int DiscreteOperator::band_of(long offset) const noexcept {
    for (std::size_t b = 0; b < offsets_.size(); ++b) {
        if (offsets_[b] == offset) return static_cast<int>(b);
    }
    return -1;
}

double DiscreteOperator::at(std::size_t row, std::size_t col) const {
    const int b = band_of(static_cast<long>(col) - static_cast<long>(row));
    return b < 0 ? 0.0 : bands_[b][row];
}

void DiscreteOperator::add(std::size_t row, std::size_t col, double value) {
    if (row >= n_ || col >= n_) throw std::out_of_range("operator entry outside matrix");
    const int b = band_of(static_cast<long>(col) - static_cast<long>(row));
    if (b < 0) {
        throw std::out_of_range("offset " +
                                std::to_string(static_cast<long>(col) - static_cast<long>(row)) +
                                " is not a declared band");
    }
    bands_[b][row] += value;
}

void DiscreteOperator::apply(std::span<const double> x, std::span<double> y,
                             Execution exec) const {
    const long n = static_cast<long>(n_);
    const std::size_t nb = offsets_.size();
#pragma omp parallel for schedule(static) if (exec == Execution::parallel && !omp_in_parallel())
    for (long r = 0; r < n; ++r) {
        double sum = 0.0;
        for (std::size_t b = 0; b < nb; ++b) {
            const long c = r + offsets_[b];
            if (c >= 0 && c < n) sum += bands_[b][r] * x[c];
        }
        y[r] = sum;
    }
}

bool DiscreteOperator::row_is_zero(std::size_t row) const {
    return std::all_of(bands_.begin(), bands_.end(),
                       [row](const std::vector<double>& band) { return band[row] == 0.0; });
}

double DiscreteOperator::max_abs() const {
    double m = 0.0;
    for (const auto& band : bands_) {
        for (double v : band) m = std::max(m, std::abs(v));
    }
    return m;
}

double DiscreteOperator::asymmetry() const {
    double m = 0.0;
    for (std::size_t b = 0; b < offsets_.size(); ++b) {
        for (std::size_t r = 0; r < n_; ++r) {
            const long c = static_cast<long>(r) + offsets_[b];
            if (c < 0 || c >= static_cast<long>(n_)) continue;
            m = std::max(m, std::abs(bands_[b][r] - at(static_cast<std::size_t>(c), r)));
        }
    }
    return m;
}

DiscreteOperator& DiscreteOperator::operator+=(const DiscreteOperator& other) {
    if (other.n_ != n_) throw std::invalid_argument("operator dimension mismatch");
    for (std::size_t b = 0; b < other.offsets_.size(); ++b) {
        int mine = band_of(other.offsets_[b]);
        if (mine < 0) {
            offsets_.push_back(other.offsets_[b]);
            bands_.emplace_back(n_, 0.0);
            mine = static_cast<int>(offsets_.size()) - 1;
        }
        for (std::size_t r = 0; r < n_; ++r) bands_[mine][r] += other.bands_[b][r];
    }
    return *this;
}

DiscreteOperator operator-(DiscreteOperator a, const DiscreteOperator& b) {
    DiscreteOperator neg = b;
    for (auto& band : neg.bands_) {
        for (double& v : band) v = -v;
    }
    a += neg;
    return a;
}

std::vector<double> DiscreteOperator::dense() const {
    std::vector<double> m(n_ * n_, 0.0);
    for (std::size_t b = 0; b < offsets_.size(); ++b) {
        for (std::size_t r = 0; r < n_; ++r) {
            const long c = static_cast<long>(r) + offsets_[b];
            if (c >= 0 && c < static_cast<long>(n_)) m[r * n_ + c] += bands_[b][r];
        }
    }
    return m;
}

namespace {

std::size_t find_root(std::vector<std::size_t>& parent, std::size_t i) {
    while (parent[i] != i) {
        parent[i] = parent[parent[i]];
        i = parent[i];
    }
    return i;
}

}  // namespace

std::vector<Block> decoupling_blocks(const DiscreteOperator& op) {
    const std::size_t n = op.dimension();
    std::vector<std::size_t> parent(n);
    std::iota(parent.begin(), parent.end(), std::size_t{0});
    std::vector<bool> active(n, false);

    const auto& offsets = op.offsets();
    for (std::size_t b = 0; b < offsets.size(); ++b) {
        const auto band = op.band(b);
        for (std::size_t r = 0; r < n; ++r) {
            if (band[r] == 0.0) continue;
            active[r] = true;
            if (offsets[b] == 0) continue;
            const long c = static_cast<long>(r) + offsets[b];
            if (c < 0 || c >= static_cast<long>(n)) continue;
            active[static_cast<std::size_t>(c)] = true;
            const std::size_t a = find_root(parent, r);
            const std::size_t z = find_root(parent, static_cast<std::size_t>(c));
            if (a != z) parent[std::max(a, z)] = std::min(a, z);
        }
    }

    // Roots are the smallest member, so blocks come out ordered by first index.
    std::vector<long> block_of(n, -1);
    std::vector<Block> blocks;
    for (std::size_t r = 0; r < n; ++r) {
        if (!active[r]) continue;
        const std::size_t root = find_root(parent, r);
        if (block_of[root] < 0) {
            block_of[root] = static_cast<long>(blocks.size());
            blocks.emplace_back();
        }
        blocks[block_of[root]].push_back(r);
    }
    return blocks;
}

}  // namespace parasplit
