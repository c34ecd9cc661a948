#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "parasplit/discrete_operator.hpp"
#include "parasplit/execution.hpp"
#include "parasplit/splitting.hpp"

namespace parasplit {

/// LU factors of (I - tau A) restricted to one decoupling block, stored in
/// band form in the block's local (ascending global index) numbering.
/// No pivoting: the stage matrices are diagonally dominant or SPD for tau > 0.
class BandedLU {
public:
    BandedLU(const DiscreteOperator& op, double tau, std::span<const std::size_t> indices);

    /// In-place solve on a vector in local numbering.
    void solve(std::span<double> x) const;

    std::size_t size() const noexcept { return m_; }
    int lower_bandwidth() const noexcept { return kl_; }
    int upper_bandwidth() const noexcept { return ku_; }

private:
    double& entry(std::size_t r, std::size_t c) { return band_[r * width_ + (c + kl_ - r)]; }
    double entry(std::size_t r, std::size_t c) const { return band_[r * width_ + (c + kl_ - r)]; }

    std::size_t m_ = 0;
    int kl_ = 0;
    int ku_ = 0;
    std::size_t width_ = 1;
    std::vector<double> band_;
};

/// Solves (I - tau A_j) x = b for one split term, block by block.
class StageSolver {
public:
    StageSolver(const DiscreteOperator& term, const std::vector<Block>& blocks, double tau);

    /// In place; rows outside every block are left untouched.
    void solve(std::span<double> x, Execution exec) const;

    std::size_t block_count() const noexcept { return blocks_.size(); }

private:
    std::vector<Block> blocks_;
    std::vector<BandedLU> factors_;
};

/// F(t) evaluated into `out`; an empty function means F = 0.
using SourceFunction = std::function<void(double t, std::span<double> out)>;

/// One-step integrator u(t) -> u(t + tau).
class Propagator {
public:
    virtual ~Propagator() = default;

    virtual std::size_t dimension() const = 0;
    virtual double step_size() const = 0;
    virtual std::string name() const = 0;
    virtual void step(std::span<const double> u, double t, std::span<double> out,
                      Execution exec = Execution::serial) const = 0;
};

enum class SplittingScheme { fractional_implicit_euler, douglas_rachford };

/// FIE:  (I - tau A_1) U_1 = U_n + tau F(t + tau),  (I - tau A_j) U_j = U_{j-1}.
/// DR:   U_0 = (I + tau A) U_n + tau F(t + tau),
///       (I - tau A_j) U_j = U_{j-1} - tau A_j U_n.
/// Each stage solves its decoupling blocks independently.
class SplittingPropagator final : public Propagator {
public:
    SplittingPropagator(SplittingScheme scheme, std::shared_ptr<const SplitOperator> split,
                        double tau, SourceFunction source = {});

    std::size_t dimension() const override { return split_->dimension(); }
    double step_size() const override { return tau_; }
    std::string name() const override;
    void step(std::span<const double> u, double t, std::span<double> out,
              Execution exec = Execution::serial) const override;

    SplittingScheme scheme() const noexcept { return scheme_; }
    const SplitOperator& split() const noexcept { return *split_; }
    std::vector<std::size_t> blocks_per_stage() const;

private:
    SplittingScheme scheme_;
    std::shared_ptr<const SplitOperator> split_;
    double tau_;
    SourceFunction source_;
    std::vector<StageSolver> stages_;
};

/// Unsplit backward Euler: (I - tau A) U_{n+1} = U_n + tau F(t + tau).
class ImplicitEulerPropagator final : public Propagator {
public:
    ImplicitEulerPropagator(std::shared_ptr<const DiscreteOperator> op, double tau,
                            SourceFunction source = {});

    std::size_t dimension() const override { return op_->dimension(); }
    double step_size() const override { return tau_; }
    std::string name() const override { return "IE"; }
    void step(std::span<const double> u, double t, std::span<double> out,
              Execution exec = Execution::serial) const override;

private:
    std::shared_ptr<const DiscreteOperator> op_;
    double tau_;
    SourceFunction source_;
    StageSolver solver_;
};

/// `count` successive steps from (u, t); the fine sweep F^s of parareal.
std::vector<double> sweep(const Propagator& propagator, std::span<const double> u, double t,
                          int count, Execution exec = Execution::serial);

/// Like sweep(), also recording every intermediate state (including u).
std::vector<std::vector<double>> sweep_trajectory(const Propagator& propagator,
                                                  std::span<const double> u, double t, int count,
                                                  Execution exec = Execution::serial);

}  // namespace parasplit
