#include "parasplit/parareal.hpp"

#include <omp.h>

#include <algorithm>
#include <cstdio>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>
#include <string>

#include "parasplit/errors.hpp"

namespace parasplit {

void TimeGrid::validate() const {
    if (!(final_time > 0.0)) throw ConfigError("final time T must be positive");
    if (coarse_slabs < 1) throw ConfigError("coarse slab count N_c must be at least 1");
    if (fine_steps < 1) throw ConfigError("fine steps per slab s must be at least 1");
}

void StoppingRule::validate() const {
    if (kind == Kind::fixed_iterations) {
        if (max_iterations < 0) throw ConfigError("fixed iteration count must be non-negative");
        return;
    }
    if (!(tolerance > 0.0)) throw ConfigError("stopping tolerance must be positive");
}

namespace {

double now() { return omp_get_wtime(); }

double trajectory_norm(const Trajectory& a, const Trajectory& b, double weight) {
    return error_norm(a, b, weight);
}

void require_finite(const Trajectory& U, int iteration) {
    for (const auto& v : U) {
        for (double x : v) {
            if (!std::isfinite(x)) {
                throw DivergenceError("non-finite value in parareal iterate " +
                                      std::to_string(iteration));
            }
        }
    }
}

}  // namespace

Parareal::Parareal(const Propagator& coarse, const Propagator& fine, TimeGrid grid,
                   PararealOptions options)
    : coarse_(coarse), fine_(fine), grid_(grid), options_(options) {
    grid_.validate();
    if (coarse.dimension() != fine.dimension()) {
        throw std::invalid_argument("coarse and fine propagators act on different spaces");
    }
    const double dT = grid_.coarse_step();
    const double dt = grid_.fine_step();
    if (std::abs(coarse.step_size() - dT) > 1e-12 * dT) {
        throw std::invalid_argument("coarse propagator step does not match dT = T/N_c");
    }
    if (std::abs(fine.step_size() - dt) > 1e-12 * dt) {
        throw std::invalid_argument("fine propagator step does not match dt = dT/s");
    }
}

PararealState Parareal::initial_guess(std::span<const double> u0) const {
    if (u0.size() != coarse_.dimension()) throw std::invalid_argument("initial value size mismatch");
    PararealState state;
    const int nc = grid_.coarse_slabs;
    state.U.assign(static_cast<std::size_t>(nc) + 1, std::vector<double>(u0.size()));
    state.coarse_values.assign(static_cast<std::size_t>(nc), std::vector<double>(u0.size()));
    std::copy(u0.begin(), u0.end(), state.U[0].begin());
    for (int n = 0; n < nc; ++n) {
        coarse_.step(state.U[n], grid_.coarse_time(n), state.coarse_values[n], options_.execution);
        state.U[n + 1] = state.coarse_values[n];
    }
    require_finite(state.U, 0);
    return state;
}

void Parareal::iterate(PararealState& state, const Trajectory* reference,
                       double clock_start) const {
    const int nc = grid_.coarse_slabs;
    const int s = grid_.fine_steps;
    const Execution exec = options_.execution;

    // Fine sweeps only read iteration-k data, so slabs are independent.
    Trajectory fine_end(static_cast<std::size_t>(nc));
#pragma omp parallel for schedule(dynamic) if (exec == Execution::parallel && nc > 1)
    for (int n = 0; n < nc; ++n) {
        fine_end[n] = sweep(fine_, state.U[n], grid_.coarse_time(n), s, exec);
    }

    Trajectory previous = state.U;
    std::vector<double> g_new(state.U[0].size());
    for (int n = 0; n < nc; ++n) {
        coarse_.step(state.U[n], grid_.coarse_time(n), g_new, exec);
        auto& next = state.U[n + 1];
        const auto& g_old = state.coarse_values[n];
        for (std::size_t i = 0; i < next.size(); ++i) next[i] = g_new[i] + fine_end[n][i] - g_old[i];
        state.coarse_values[n] = g_new;
    }
    ++state.iteration;
    require_finite(state.U, state.iteration);

    IterationRecord record;
    record.iteration = state.iteration;
    record.error_vs_fine = reference ? trajectory_norm(state.U, *reference, options_.norm_weight)
                                     : std::numeric_limits<double>::quiet_NaN();
    record.increment_norm = trajectory_norm(state.U, previous, options_.norm_weight);
    record.wall_seconds = clock_start >= 0.0 ? now() - clock_start : 0.0;
    state.history.push_back(record);
}

Trajectory Parareal::fine_trajectory(std::span<const double> u0) const {
    const int nc = grid_.coarse_slabs;
    Trajectory out;
    out.reserve(static_cast<std::size_t>(nc) + 1);
    out.emplace_back(u0.begin(), u0.end());
    for (int n = 0; n < nc; ++n) {
        out.push_back(sweep(fine_, out.back(), grid_.coarse_time(n), grid_.fine_steps,
                            options_.execution));
    }
    require_finite(out, 0);
    return out;
}

PararealResult Parareal::solve(std::span<const double> u0, const StoppingRule& rule) const {
    rule.validate();
    const double start = now();
    PararealResult result;
    const int cap = rule.max_iterations < 0 ? grid_.coarse_slabs
                                            : std::min(rule.max_iterations, grid_.coarse_slabs);

    if (rule.kind == StoppingRule::Kind::reference_error) result.fine_reference = fine_trajectory(u0);
    const Trajectory* reference = result.fine_reference ? &*result.fine_reference : nullptr;

    PararealState state = initial_guess(u0);
    IterationRecord first;
    first.iteration = 0;
    first.error_vs_fine = reference ? trajectory_norm(state.U, *reference, options_.norm_weight)
                                    : std::numeric_limits<double>::quiet_NaN();
    first.increment_norm = std::numeric_limits<double>::quiet_NaN();
    first.wall_seconds = now() - start;
    state.history.push_back(first);

    auto satisfied = [&](const IterationRecord& rec) {
        switch (rule.kind) {
            case StoppingRule::Kind::fixed_iterations: return rec.iteration >= rule.max_iterations;
            case StoppingRule::Kind::increment:
                return rec.iteration > 0 && rec.increment_norm <= rule.tolerance;
            case StoppingRule::Kind::reference_error: return rec.error_vs_fine <= rule.tolerance;
        }
        return false;
    };

    bool done = satisfied(state.history.back());
    while (!done && state.iteration < cap) {
        iterate(state, reference, start);
        done = satisfied(state.history.back());
    }
    // After N_c iterations parareal reproduces the fine solution exactly.
    result.converged = done || state.iteration >= grid_.coarse_slabs;
    result.iterations = state.iteration;
    result.trajectory = std::move(state.U);
    result.history = std::move(state.history);
    return result;
}

int iterations_to_tolerance(const std::vector<IterationRecord>& history, double tolerance) {
    for (const auto& rec : history) {
        if (rec.error_vs_fine <= tolerance) return rec.iteration;
    }
    return -1;
}

void write_history_csv(std::ostream& out, const std::vector<IterationRecord>& history) {
    out << "iteration,error_vs_fine,increment_norm,wall_seconds\n";
    char line[160];
    for (const auto& rec : history) {
        std::snprintf(line, sizeof line, "%d,%.17g,%.17g,%.6f\n", rec.iteration, rec.error_vs_fine,
                      rec.increment_norm, rec.wall_seconds);
        out << line;
    }
}

}  // namespace parasplit
