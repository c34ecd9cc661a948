#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

#include "parasplit/execution.hpp"
#include "parasplit/grid.hpp"
#include "parasplit/integrators.hpp"

namespace parasplit {

/// Coarse slabs [T_n, T_{n+1}] of width dT = T / N_c, each split into s fine
/// steps of width dt = dT / s.
struct TimeGrid {
    double final_time = 1.0;
    int coarse_slabs = 1;
    int fine_steps = 1;

    double coarse_step() const { return final_time / coarse_slabs; }
    double fine_step() const { return final_time / (static_cast<double>(coarse_slabs) * fine_steps); }
    double coarse_time(int n) const {
        return n == coarse_slabs ? final_time : n * coarse_step();
    }
    void validate() const;
};

struct IterationRecord {
    int iteration = 0;
    /// Space-time error against the sequential fine trajectory; NaN when no
    /// reference was supplied.
    double error_vs_fine = 0.0;
    /// Space-time norm of U^k - U^{k-1}; NaN for the initial guess.
    double increment_norm = 0.0;
    /// Seconds since the start of the solve.
    double wall_seconds = 0.0;
};

struct PararealState {
    int iteration = 0;
    /// U_n^k at the coarse time points, n = 0 .. N_c.
    Trajectory U;
    /// G(T_n, T_{n+1}, U_n^k), reused by the next correction.
    Trajectory coarse_values;
    std::vector<IterationRecord> history;
};

struct StoppingRule {
    enum class Kind { fixed_iterations, increment, reference_error };

    Kind kind = Kind::reference_error;
    double tolerance = 1e-6;
    /// Upper bound on iterations; capped at N_c, after which parareal is exact.
    int max_iterations = -1;

    static StoppingRule fixed(int iterations) { return {Kind::fixed_iterations, 0.0, iterations}; }
    static StoppingRule increment(double eps, int max_it = -1) { return {Kind::increment, eps, max_it}; }
    static StoppingRule reference(double eps, int max_it = -1) {
        return {Kind::reference_error, eps, max_it};
    }
    void validate() const;
};

struct PararealOptions {
    Execution execution = Execution::parallel;
    /// Weight of the discrete space norm, sqrt(weight * sum d_i^2); h^2 on a mesh.
    double norm_weight = 1.0;
};

struct PararealResult {
    Trajectory trajectory;
    int iterations = 0;
    bool converged = false;
    std::vector<IterationRecord> history;
    /// Sequential fine trajectory at the coarse points, when it was computed.
    std::optional<Trajectory> fine_reference;
};

/// Parareal with coarse propagator G (step dT) and fine propagator F (step dt):
///   U_0^{k+1} = U_0,
///   U_{n+1}^{k+1} = G(U_n^{k+1}) + F^s(U_n^k) - G(U_n^k).
/// All fine sweeps of an iteration run concurrently; the correction is
/// sequential in n. Results do not depend on the execution mode or thread count.
class Parareal {
public:
    Parareal(const Propagator& coarse, const Propagator& fine, TimeGrid grid,
             PararealOptions options = {});

    const TimeGrid& grid() const noexcept { return grid_; }

    /// U_{n+1}^0 = G(U_n^0).
    PararealState initial_guess(std::span<const double> u0) const;

    /// One iteration k -> k+1. `reference` (the fine trajectory) feeds the
    /// history; `clock_start` anchors wall_seconds.
    void iterate(PararealState& state, const Trajectory* reference = nullptr,
                 double clock_start = -1.0) const;

    PararealResult solve(std::span<const double> u0, const StoppingRule& rule) const;

    /// Sequential fine propagation across all slabs, sampled at the coarse points.
    Trajectory fine_trajectory(std::span<const double> u0) const;

private:
    const Propagator& coarse_;
    const Propagator& fine_;
    TimeGrid grid_;
    PararealOptions options_;
};

/// First iteration whose recorded error against the fine reference is at most
/// `tolerance`, or -1 if none is.
int iterations_to_tolerance(const std::vector<IterationRecord>& history, double tolerance);

/// CSV rows: iteration,error_vs_fine,increment_norm,wall_seconds
void write_history_csv(std::ostream& out, const std::vector<IterationRecord>& history);

}  // namespace parasplit
