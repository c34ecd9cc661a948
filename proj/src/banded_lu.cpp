#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <omp.h>

#include "parasplit/errors.hpp"
#include "parasplit/integrators.hpp"

namespace parasplit {

BandedLU::BandedLU(const DiscreteOperator& op, double tau, std::span<const std::size_t> indices)
    : m_(indices.size()) {
    if (!(tau > 0.0)) throw std::invalid_argument("step size must be positive");
    const long n = static_cast<long>(op.dimension());
    std::vector<long> local(static_cast<std::size_t>(n), -1);
    for (std::size_t k = 0; k < m_; ++k) local[indices[k]] = static_cast<long>(k);

    const auto& offsets = op.offsets();
    for (std::size_t k = 0; k < m_; ++k) {
        const long r = static_cast<long>(indices[k]);
        for (std::size_t b = 0; b < offsets.size(); ++b) {
            const long c = r + offsets[b];
            if (c < 0 || c >= n || op.band(b)[r] == 0.0) continue;
            if (local[c] < 0) {
                throw std::invalid_argument("decoupling block is not closed under the operator");
            }
            const long d = local[c] - static_cast<long>(k);
            kl_ = std::max(kl_, static_cast<int>(-d));
            ku_ = std::max(ku_, static_cast<int>(d));
        }
    }
    width_ = static_cast<std::size_t>(kl_ + ku_ + 1);
    band_.assign(m_ * width_, 0.0);

    for (std::size_t k = 0; k < m_; ++k) {
        const long r = static_cast<long>(indices[k]);
        entry(k, k) = 1.0;
        for (std::size_t b = 0; b < offsets.size(); ++b) {
            const long c = r + offsets[b];
            if (c < 0 || c >= n) continue;
            const double a = op.band(b)[r];
            if (a != 0.0) entry(k, static_cast<std::size_t>(local[c])) -= tau * a;
        }
    }

    for (std::size_t k = 0; k < m_; ++k) {
        const double pivot = entry(k, k);
        if (!(std::abs(pivot) > std::numeric_limits<double>::min()) || !std::isfinite(pivot)) {
            throw SingularMatrixError("zero pivot in stage matrix at local row " + std::to_string(k));
        }
        const std::size_t last_row = std::min(m_ - 1, k + static_cast<std::size_t>(kl_));
        const std::size_t last_col = std::min(m_ - 1, k + static_cast<std::size_t>(ku_));
        for (std::size_t i = k + 1; i <= last_row; ++i) {
            double& lik = entry(i, k);
            if (lik == 0.0) continue;
            lik /= pivot;
            for (std::size_t j = k + 1; j <= last_col; ++j) entry(i, j) -= lik * entry(k, j);
        }
    }
}

void BandedLU::solve(std::span<double> x) const {
    for (std::size_t i = 1; i < m_; ++i) {
        const std::size_t first = i > static_cast<std::size_t>(kl_) ? i - kl_ : 0;
        double sum = x[i];
        for (std::size_t j = first; j < i; ++j) sum -= entry(i, j) * x[j];
        x[i] = sum;
    }
    for (std::size_t ii = m_; ii-- > 0;) {
        const std::size_t last = std::min(m_ - 1, ii + static_cast<std::size_t>(ku_));
        double sum = x[ii];
        for (std::size_t j = ii + 1; j <= last; ++j) sum -= entry(ii, j) * x[j];
        x[ii] = sum / entry(ii, ii);
    }
}

StageSolver::StageSolver(const DiscreteOperator& term, const std::vector<Block>& blocks, double tau)
    : blocks_(blocks) {
    factors_.reserve(blocks_.size());
    for (const auto& block : blocks_) factors_.emplace_back(term, tau, block);
}

void StageSolver::solve(std::span<double> x, Execution exec) const {
    const long count = static_cast<long>(blocks_.size());
#pragma omp parallel for schedule(dynamic) if (exec == Execution::parallel && count > 1 && !omp_in_parallel())
    for (long b = 0; b < count; ++b) {
        const Block& block = blocks_[b];
        std::vector<double> local(block.size());
        for (std::size_t k = 0; k < block.size(); ++k) local[k] = x[block[k]];
        factors_[b].solve(local);
        for (std::size_t k = 0; k < block.size(); ++k) x[block[k]] = local[k];
    }
}

}  // namespace parasplit
