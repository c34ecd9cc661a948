#pragma once

#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "parasplit/config.hpp"
#include "parasplit/integrators.hpp"
#include "parasplit/manufactured.hpp"

namespace parasplit {

/// A parareal method: propagator pair plus (for split pairs) the splitting.
struct MethodSpec {
    PropagatorPair pair = PropagatorPair::fie_fie;
    SplittingKind splitting = SplittingKind::dimensional;

    /// "IE-IE", "FIE-FIE/dimensional", "FIE-DR/domain_decomposition", ...
    std::string label() const;
};

/// Discretized manufactured problem for one config.
struct ProblemInstance {
    Mesh2D mesh;
    ManufacturedProblem manufactured;
    std::shared_ptr<const SemidiscreteProblem> semidiscrete;
    SourceFunction source;
    double norm_weight = 1.0;  // h^2

    /// Exact solution sampled at the interior nodes.
    std::vector<double> exact(double t) const;
};

ProblemInstance make_instance(const ExperimentConfig& config);

/// Coarse and fine propagators of a method on an instance.
struct PropagatorSet {
    std::shared_ptr<const SplitOperator> split;       // coarse; null for IE-IE
    std::shared_ptr<const SplitOperator> fine_split;  // same object unless the fine partition differs
    std::unique_ptr<Propagator> coarse;
    std::unique_ptr<Propagator> fine;
};

PropagatorSet make_propagators(const ExperimentConfig& config, const ProblemInstance& instance,
                               const MethodSpec& method);

struct CurvePoint {
    int iteration = 0;
    double error_vs_fine = 0.0;
    double error_vs_exact = 0.0;
    double increment = 0.0;
};

struct MethodRun {
    MethodSpec method;
    int fine_steps = 0;
    int coarse_slabs = 0;
    std::vector<CurvePoint> curve;
    /// First k with error_vs_fine <= tolerance; -1 if the run stopped earlier.
    int iterations = -1;
    bool converged = false;
    double fine_error_vs_exact = 0.0;
    std::vector<std::vector<double>> final_trajectory;
};

/// Parareal for one method under the config's grid and stopping rule.
/// Errors are in the max-in-time, h-weighted discrete l2 norm at the coarse points.
MethodRun run_method(const ExperimentConfig& config, const MethodSpec& method);

/// Methods compared in error curves: IE-IE, then FIE-FIE and FIE-DR for each
/// admissible splitting (dimensional only when d12 = 0).
std::vector<MethodSpec> comparison_methods(const ExperimentConfig& config);

std::vector<MethodRun> run_error_curve(const ExperimentConfig& config);

/// FIE-FIE and FIE-DR on the configured splitting for every s in config.s_values.
std::vector<MethodRun> run_s_sensitivity(const ExperimentConfig& config);

struct RobustnessRow {
    std::string axis;
    double value = 0.0;
    MethodSpec method;
    int iterations = -1;
};

/// Iterations-to-tolerance while one of dT, h, q, beta varies. dT keeps the
/// fine step fixed (s = dT / dt); the other axes keep the time grid.
std::vector<RobustnessRow> run_robustness(const ExperimentConfig& config);

struct SpeedupRecord {
    int threads = 1;
    double seconds = 0.0;   // median over repetitions
    double speedup = 1.0;   // T(1 thread) / T(threads)
    int repetitions = 0;
    std::vector<double> samples;
};

struct SpeedupReport {
    std::vector<SpeedupRecord> records;
    /// Serial reference path (no OpenMP regions entered), median seconds.
    double serial_seconds = 0.0;
    std::vector<std::size_t> coarse_blocks_per_stage;
    std::vector<std::size_t> fine_blocks_per_stage;
    std::vector<std::string> warnings;
};

/// Fixed-iteration parareal timed per thread budget; the 1-thread run is the
/// sequential baseline.
SpeedupReport run_speedup(const ExperimentConfig& config);

struct FineAccuracy {
    double error = 0.0;
    int steps = 0;
    double seconds = 0.0;
};

/// Sequential fine solve over [0, T] with the configured fine scheme, error
/// against the exact solution at every fine step.
FineAccuracy run_fine_accuracy(const ExperimentConfig& config);

/// Fine propagator scheme of a pair (FIE for FIE-FIE, DR for FIE-DR, IE for IE-IE).
std::string fine_scheme_name(PropagatorPair pair);

void write_curves_csv(std::ostream& out, const std::vector<MethodRun>& runs);
void write_iterations_csv(std::ostream& out, const std::vector<MethodRun>& runs);
void write_robustness_csv(std::ostream& out, const std::vector<RobustnessRow>& rows);
void write_speedup_csv(std::ostream& out, const SpeedupReport& report);

std::string curves_svg(const std::vector<MethodRun>& runs, const std::string& title);
std::string robustness_svg(const std::vector<RobustnessRow>& rows, const std::string& title);
std::string speedup_svg(const SpeedupReport& report);

}  // namespace parasplit
