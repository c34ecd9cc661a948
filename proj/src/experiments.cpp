#include "parasplit/experiments.hpp"

#include <omp.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>

#include "parasplit/parareal.hpp"
#include "parasplit/svg.hpp"

namespace parasplit {

std::string MethodSpec::label() const {
    if (pair == PropagatorPair::ie_ie) return to_string(pair);
    return std::string(to_string(pair)) + "/" + to_string(splitting);
}

std::vector<double> ProblemInstance::exact(double t) const {
    std::vector<double> u(mesh.size());
    for (int j = 0; j < mesh.n(); ++j) {
        for (int i = 0; i < mesh.n(); ++i) {
            u[mesh.index(i, j)] = manufactured.exact(mesh.coord(i), mesh.coord(j), t);
        }
    }
    return u;
}

ProblemInstance make_instance(const ExperimentConfig& config) {
    const Mesh2D mesh = Mesh2D::with_spacing(config.h);
    ProblemInstance inst{mesh, manufactured_problem(config.preset, config.reaction, config.final_time),
                         nullptr, {}, mesh.h() * mesh.h()};
    auto sd = std::make_shared<const SemidiscreteProblem>(inst.manufactured.problem, mesh);
    inst.semidiscrete = sd;
    inst.source = [sd](double t, std::span<double> out) { sd->source(t, out); };
    return inst;
}

namespace {

std::shared_ptr<const SplitOperator> make_split(const ProblemInstance& inst, SplittingKind kind,
                                                const StripGeometry& geometry) {
    const auto& tensor = inst.manufactured.problem.tensor;
    if (kind == SplittingKind::dimensional) {
        return std::make_shared<const SplitOperator>(build_dimensional(tensor, inst.mesh));
    }
    const auto pou = PartitionOfUnity::vertical_strips(inst.mesh, geometry);
    return std::make_shared<const SplitOperator>(build_domain_decomposition(tensor, pou));
}

}  // namespace

PropagatorSet make_propagators(const ExperimentConfig& config, const ProblemInstance& inst,
                               const MethodSpec& method) {
    PropagatorSet set;
    const double dT = config.coarse_step();
    const double dt = config.fine_step();
    if (method.pair == PropagatorPair::ie_ie) {
        std::shared_ptr<const DiscreteOperator> op(inst.semidiscrete, &inst.semidiscrete->op());
        set.coarse = std::make_unique<ImplicitEulerPropagator>(op, dT, inst.source);
        set.fine = std::make_unique<ImplicitEulerPropagator>(op, dt, inst.source);
        return set;
    }
    const StripGeometry coarse_geometry = config.strip_geometry();
    const StripGeometry fine_geometry = config.fine_strip_geometry();
    set.split = make_split(inst, method.splitting, coarse_geometry);
    set.fine_split = method.splitting == SplittingKind::domain_decomposition &&
                             (fine_geometry.strips != coarse_geometry.strips ||
                              fine_geometry.overlap != coarse_geometry.overlap)
                         ? make_split(inst, method.splitting, fine_geometry)
                         : set.split;
    set.coarse = std::make_unique<SplittingPropagator>(SplittingScheme::fractional_implicit_euler,
                                                       set.split, dT, inst.source);
    const auto fine = method.pair == PropagatorPair::fie_dr ? SplittingScheme::douglas_rachford
                                                            : SplittingScheme::fractional_implicit_euler;
    set.fine = std::make_unique<SplittingPropagator>(fine, set.fine_split, dt, inst.source);
    return set;
}

std::string fine_scheme_name(PropagatorPair pair) {
    switch (pair) {
        case PropagatorPair::fie_fie: return "FIE";
        case PropagatorPair::fie_dr: return "DR";
        case PropagatorPair::ie_ie: return "IE";
    }
    return "FIE";
}

MethodRun run_method(const ExperimentConfig& config, const MethodSpec& method) {
    const ProblemInstance inst = make_instance(config);
    const PropagatorSet props = make_propagators(config, inst, method);
    const TimeGrid grid = config.time_grid();
    const Parareal parareal(*props.coarse, *props.fine, grid, {config.execution, inst.norm_weight});

    const auto u0 = inst.semidiscrete->initial_vector();
    const Trajectory reference = parareal.fine_trajectory(u0);
    Trajectory exact;
    for (int n = 0; n <= grid.coarse_slabs; ++n) exact.push_back(inst.exact(grid.coarse_time(n)));

    MethodRun run;
    run.method = method;
    run.fine_steps = grid.fine_steps;
    run.coarse_slabs = grid.coarse_slabs;
    run.fine_error_vs_exact = error_norm(reference, exact, inst.norm_weight);

    const StoppingRule rule = config.stopping_rule();
    const int cap = rule.max_iterations < 0 ? grid.coarse_slabs
                                            : std::min(rule.max_iterations, grid.coarse_slabs);
    auto satisfied = [&](const CurvePoint& p) {
        switch (rule.kind) {
            case StoppingRule::Kind::fixed_iterations: return p.iteration >= rule.max_iterations;
            case StoppingRule::Kind::increment: return p.iteration > 0 && p.increment <= rule.tolerance;
            case StoppingRule::Kind::reference_error: return p.error_vs_fine <= rule.tolerance;
        }
        return false;
    };

    PararealState state = parareal.initial_guess(u0);
    Trajectory previous = state.U;
    auto record = [&](double increment) {
        CurvePoint p;
        p.iteration = state.iteration;
        p.error_vs_fine = error_norm(state.U, reference, inst.norm_weight);
        p.error_vs_exact = error_norm(state.U, exact, inst.norm_weight);
        p.increment = increment;
        run.curve.push_back(p);
        if (run.iterations < 0 && p.error_vs_fine <= config.tolerance) run.iterations = p.iteration;
        return p;
    };
    bool done = satisfied(record(std::numeric_limits<double>::quiet_NaN()));
    while (!done && state.iteration < cap) {
        previous = state.U;
        parareal.iterate(state);
        done = satisfied(record(error_norm(state.U, previous, inst.norm_weight)));
    }
    run.converged = done || state.iteration >= grid.coarse_slabs;
    run.final_trajectory = std::move(state.U);
    return run;
}

std::vector<MethodSpec> comparison_methods(const ExperimentConfig& config) {
    std::vector<MethodSpec> methods{{PropagatorPair::ie_ie, config.splitting}};
    std::vector<SplittingKind> kinds;
    if (config.preset == Preset::A) kinds.push_back(SplittingKind::dimensional);
    kinds.push_back(SplittingKind::domain_decomposition);
    for (auto pair : {PropagatorPair::fie_fie, PropagatorPair::fie_dr}) {
        for (auto kind : kinds) methods.push_back({pair, kind});
    }
    return methods;
}

std::vector<MethodRun> run_error_curve(const ExperimentConfig& config) {
    std::vector<MethodRun> runs;
    for (const auto& m : comparison_methods(config)) {
        runs.push_back(run_method(config, m));
        runs.back().final_trajectory.clear();
    }
    return runs;
}

std::vector<MethodRun> run_s_sensitivity(const ExperimentConfig& config) {
    std::vector<MethodRun> runs;
    for (auto pair : {PropagatorPair::fie_fie, PropagatorPair::fie_dr}) {
        for (int s : config.s_values) {
            ExperimentConfig c = config;
            c.fine_steps = s;
            runs.push_back(run_method(c, {pair, config.splitting}));
            runs.back().final_trajectory.clear();
        }
    }
    return runs;
}

std::vector<RobustnessRow> run_robustness(const ExperimentConfig& config) {
    std::vector<RobustnessRow> rows;
    const std::string& axis = config.robustness_axis;
    const double dt = config.fine_step();
    for (auto pair : {PropagatorPair::ie_ie, PropagatorPair::fie_fie, PropagatorPair::fie_dr}) {
        for (double v : config.robustness_values) {
            ExperimentConfig c = config;
            if (axis == "dT") {
                c.coarse_slabs = static_cast<int>(std::lround(config.final_time / v));
                c.fine_steps = static_cast<int>(std::lround(v / dt));
            } else if (axis == "h") {
                c.h = v;
            } else if (axis == "q") {
                c.strips = static_cast<int>(std::lround(v));
            } else {
                c.overlap = v;
            }
            const MethodSpec method{pair, config.splitting};
            const MethodRun run = run_method(c, method);
            rows.push_back({axis, v, method, run.iterations});
        }
    }
    return rows;
}

namespace {

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

std::vector<std::size_t> blocks_of(const Propagator& p) {
    if (const auto* sp = dynamic_cast<const SplittingPropagator*>(&p)) return sp->blocks_per_stage();
    return {1};
}

}  // namespace

SpeedupReport run_speedup(const ExperimentConfig& config) {
    const ProblemInstance inst = make_instance(config);
    const PropagatorSet props = make_propagators(config, inst, {config.pair, config.splitting});
    const auto u0 = inst.semidiscrete->initial_vector();
    const StoppingRule rule = StoppingRule::fixed(config.timing_iterations);

    SpeedupReport report;
    report.coarse_blocks_per_stage = blocks_of(*props.coarse);
    report.fine_blocks_per_stage = blocks_of(*props.fine);

    auto time_runs = [&](Execution exec, int reps) {
        const Parareal parareal(*props.coarse, *props.fine, config.time_grid(), {exec, inst.norm_weight});
        std::vector<double> samples;
        for (int r = 0; r < reps; ++r) {
            const double start = omp_get_wtime();
            parareal.solve(u0, rule);
            samples.push_back(omp_get_wtime() - start);
        }
        return samples;
    };
    auto timed = [&](Execution exec, int label_threads) {
        int reps = config.repetitions;
        auto samples = time_runs(exec, reps);
        // Below timer resolution: repeat more often so the median means something.
        while (median(samples) < 1e-3 && reps < 1000) {
            report.warnings.push_back("run with " + std::to_string(label_threads) +
                                      " thread(s) took under 1 ms; repeating " +
                                      std::to_string(reps * 10) + " times");
            reps *= 10;
            samples = time_runs(exec, reps);
        }
        return samples;
    };

    std::vector<int> counts = config.thread_counts;
    if (std::find(counts.begin(), counts.end(), 1) == counts.end()) counts.insert(counts.begin(), 1);
    std::sort(counts.begin(), counts.end());
    counts.erase(std::unique(counts.begin(), counts.end()), counts.end());

    for (int threads : counts) {
        const ScopedThreadBudget budget(threads);
        SpeedupRecord rec;
        rec.threads = threads;
        rec.samples = timed(Execution::parallel, threads);
        rec.repetitions = static_cast<int>(rec.samples.size());
        rec.seconds = median(rec.samples);
        report.records.push_back(rec);
    }
    const double baseline = report.records.front().seconds;
    for (auto& rec : report.records) rec.speedup = rec.threads == 1 ? 1.0 : baseline / rec.seconds;
    report.serial_seconds = median(timed(Execution::serial, 1));
    return report;
}

FineAccuracy run_fine_accuracy(const ExperimentConfig& config) {
    const ProblemInstance inst = make_instance(config);
    const PropagatorSet props = make_propagators(config, inst, {config.pair, config.splitting});
    const Propagator& fine = *props.fine;
    const int steps = config.coarse_slabs * config.fine_steps;
    const double dt = config.fine_step();

    FineAccuracy out;
    out.steps = steps;
    const double start = omp_get_wtime();
    std::vector<double> u = inst.semidiscrete->initial_vector();
    std::vector<double> next(u.size());
    std::vector<double> diff(u.size());
    auto error_at = [&](double t) {
        const auto ex = inst.exact(t);
        for (std::size_t i = 0; i < u.size(); ++i) diff[i] = u[i] - ex[i];
        return space_norm(diff, inst.norm_weight);
    };
    out.error = error_at(0.0);
    for (int k = 0; k < steps; ++k) {
        const double t = k * dt;
        fine.step(u, t, next, config.execution);
        u.swap(next);
        const double t_next = k + 1 == steps ? config.final_time : (k + 1) * dt;
        out.error = std::max(out.error, error_at(t_next));
    }
    out.seconds = omp_get_wtime() - start;
    return out;
}

namespace {

std::string g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_curves_csv(std::ostream& out, const std::vector<MethodRun>& runs) {
    out << "method,pair,splitting,coarse_slabs,fine_steps,iteration,error_vs_fine,error_vs_exact,increment\n";
    for (const auto& r : runs) {
        for (const auto& p : r.curve) {
            out << r.method.label() << ',' << to_string(r.method.pair) << ','
                << (r.method.pair == PropagatorPair::ie_ie ? "none" : to_string(r.method.splitting)) << ','
                << r.coarse_slabs << ',' << r.fine_steps << ',' << p.iteration << ',' << g17(p.error_vs_fine)
                << ',' << g17(p.error_vs_exact) << ',' << g17(p.increment) << '\n';
        }
    }
}

void write_iterations_csv(std::ostream& out, const std::vector<MethodRun>& runs) {
    out << "method,pair,splitting,coarse_slabs,fine_steps,iterations,converged,fine_error_vs_exact\n";
    for (const auto& r : runs) {
        out << r.method.label() << ',' << to_string(r.method.pair) << ','
            << (r.method.pair == PropagatorPair::ie_ie ? "none" : to_string(r.method.splitting)) << ','
            << r.coarse_slabs << ',' << r.fine_steps << ',' << r.iterations << ','
            << (r.converged ? 1 : 0) << ',' << g17(r.fine_error_vs_exact) << '\n';
    }
}

void write_robustness_csv(std::ostream& out, const std::vector<RobustnessRow>& rows) {
    out << "axis,value,method,iterations\n";
    for (const auto& r : rows) {
        out << r.axis << ',' << g17(r.value) << ',' << r.method.label() << ',' << r.iterations << '\n';
    }
}

void write_speedup_csv(std::ostream& out, const SpeedupReport& report) {
    out << "threads,seconds,speedup,repetitions\n";
    for (const auto& r : report.records) {
        out << r.threads << ',' << g17(r.seconds) << ',' << g17(r.speedup) << ',' << r.repetitions << '\n';
    }
}

std::string curves_svg(const std::vector<MethodRun>& runs, const std::string& title) {
    std::vector<svg::Series> series;
    for (const auto& r : runs) {
        svg::Series s;
        s.label = r.method.label();
        if (r.fine_steps) s.label += " s=" + std::to_string(r.fine_steps);
        for (const auto& p : r.curve) {
            s.x.push_back(p.iteration);
            s.y.push_back(p.error_vs_fine);
        }
        s.dashed = r.method.splitting == SplittingKind::domain_decomposition &&
                   r.method.pair != PropagatorPair::ie_ie;
        series.push_back(std::move(s));
    }
    return svg::line_plot(series, {title, "iteration k", "error vs fine solution", false, true});
}

std::string robustness_svg(const std::vector<RobustnessRow>& rows, const std::string& title) {
    std::map<std::string, svg::Series> by_method;
    std::vector<std::string> order;
    std::string axis;
    for (const auto& r : rows) {
        const std::string key = r.method.label();
        if (!by_method.count(key)) {
            order.push_back(key);
            by_method[key].label = key;
        }
        if (r.iterations >= 0) {
            by_method[key].x.push_back(r.value);
            by_method[key].y.push_back(r.iterations);
        }
        axis = r.axis;
    }
    std::vector<svg::Series> series;
    for (const auto& k : order) series.push_back(by_method[k]);
    const bool log_x = axis != "q";
    return svg::line_plot(series, {title, axis, "iterations to tolerance", log_x, false});
}

std::string speedup_svg(const SpeedupReport& report) {
    svg::Series measured{"measured", {}, {}, false};
    svg::Series ideal{"ideal", {}, {}, true};
    for (const auto& r : report.records) {
        measured.x.push_back(r.threads);
        measured.y.push_back(r.speedup);
        ideal.x.push_back(r.threads);
        ideal.y.push_back(r.threads);
    }
    return svg::line_plot({measured, ideal}, {"Parareal speedup", "threads", "speedup", false, false});
}

}  // namespace parasplit
