#include <algorithm>
#include <stdexcept>

#include "parasplit/integrators.hpp"

namespace parasplit {

namespace {

void add_source(const SourceFunction& source, double t, double tau, std::span<double> rhs) {
    if (!source) return;
    std::vector<double> f(rhs.size());
    source(t, f);
    for (std::size_t i = 0; i < rhs.size(); ++i) rhs[i] += tau * f[i];
}

}  // namespace

SplittingPropagator::SplittingPropagator(SplittingScheme scheme,
                                         std::shared_ptr<const SplitOperator> split, double tau,
                                         SourceFunction source)
    : scheme_(scheme), split_(std::move(split)), tau_(tau), source_(std::move(source)) {
    if (!split_ || split_->size() == 0) throw std::invalid_argument("splitting propagator needs terms");
    if (!(tau > 0.0)) throw std::invalid_argument("step size must be positive");
    stages_.reserve(split_->size());
    for (std::size_t j = 0; j < split_->size(); ++j) {
        stages_.emplace_back(split_->terms[j], split_->blocks[j], tau);
    }
}

std::string SplittingPropagator::name() const {
    return scheme_ == SplittingScheme::fractional_implicit_euler ? "FIE" : "DR";
}

std::vector<std::size_t> SplittingPropagator::blocks_per_stage() const {
    std::vector<std::size_t> out;
    for (const auto& stage : stages_) out.push_back(stage.block_count());
    return out;
}

void SplittingPropagator::step(std::span<const double> u, double t, std::span<double> out,
                               Execution exec) const {
    const std::size_t n = dimension();
    if (u.size() != n || out.size() != n) throw std::invalid_argument("state size mismatch");
    const double t_next = t + tau_;

    if (scheme_ == SplittingScheme::fractional_implicit_euler) {
        std::vector<double> x(u.begin(), u.end());
        add_source(source_, t_next, tau_, x);
        for (const auto& stage : stages_) stage.solve(x, exec);
        std::copy(x.begin(), x.end(), out.begin());
        return;
    }

    // Douglas-Rachford: A_j U_n are needed both for the predictor and the correctors.
    const std::size_t m = stages_.size();
    std::vector<std::vector<double>> applied(m, std::vector<double>(n));
    for (std::size_t j = 0; j < m; ++j) split_->terms[j].apply(u, applied[j], exec);
    std::vector<double> x(u.begin(), u.end());
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < n; ++i) x[i] += tau_ * applied[j][i];
    }
    add_source(source_, t_next, tau_, x);
    for (std::size_t j = 0; j < m; ++j) {
        for (std::size_t i = 0; i < n; ++i) x[i] -= tau_ * applied[j][i];
        stages_[j].solve(x, exec);
    }
    std::copy(x.begin(), x.end(), out.begin());
}

ImplicitEulerPropagator::ImplicitEulerPropagator(std::shared_ptr<const DiscreteOperator> op,
                                                 double tau, SourceFunction source)
    : op_(std::move(op)), tau_(tau), source_(std::move(source)),
      solver_(*op_, decoupling_blocks(*op_), tau) {}

void ImplicitEulerPropagator::step(std::span<const double> u, double t, std::span<double> out,
                                   Execution exec) const {
    if (u.size() != dimension() || out.size() != dimension()) {
        throw std::invalid_argument("state size mismatch");
    }
    std::vector<double> x(u.begin(), u.end());
    add_source(source_, t + tau_, tau_, x);
    solver_.solve(x, exec);
    std::copy(x.begin(), x.end(), out.begin());
}

std::vector<double> sweep(const Propagator& propagator, std::span<const double> u, double t,
                          int count, Execution exec) {
    if (count < 1) throw std::invalid_argument("sweep needs at least one step");
    const double tau = propagator.step_size();
    std::vector<double> current(u.begin(), u.end());
    std::vector<double> next(current.size());
    for (int j = 0; j < count; ++j) {
        propagator.step(current, t + j * tau, next, exec);
        current.swap(next);
    }
    return current;
}

std::vector<std::vector<double>> sweep_trajectory(const Propagator& propagator,
                                                  std::span<const double> u, double t, int count,
                                                  Execution exec) {
    if (count < 1) throw std::invalid_argument("sweep needs at least one step");
    const double tau = propagator.step_size();
    std::vector<std::vector<double>> states;
    states.reserve(static_cast<std::size_t>(count) + 1);
    states.emplace_back(u.begin(), u.end());
    for (int j = 0; j < count; ++j) {
        std::vector<double> next(u.size());
        propagator.step(states.back(), t + j * tau, next, exec);
        states.push_back(std::move(next));
    }
    return states;
}

}  // namespace parasplit
