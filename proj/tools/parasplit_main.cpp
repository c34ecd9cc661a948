// parasplit: parareal with splitting propagators, from the command line.

#include <omp.h>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "parasplit/analysis.hpp"
#include "parasplit/config.hpp"
#include "parasplit/errors.hpp"
#include "parasplit/execution.hpp"
#include "parasplit/experiments.hpp"
#include "parasplit/region_scan.hpp"
#include "parasplit/svg.hpp"

namespace fs = std::filesystem;
using namespace parasplit;

namespace {

constexpr const char* version = "1.0.0";

enum ExitCode { ok = 0, failure = 1, config_error = 2, divergence = 3 };

struct Session {
    std::string command;
    ExperimentConfig config;
    fs::path out;
    std::vector<std::string> outputs;
    double start = 0.0;

    std::vector<std::unique_ptr<std::ofstream>> files;

    std::ofstream& open(const std::string& name) {
        outputs.push_back(name);
        files.push_back(std::make_unique<std::ofstream>(out / name));
        if (!*files.back()) throw std::runtime_error("cannot write " + (out / name).string());
        return *files.back();
    }

    void write(const std::string& name, const std::string& text) { open(name) << text; }

    void manifest(std::map<std::string, std::string> extra = {}) {
        for (auto& f : files) f->close();
        extra["command"] = command;
        extra["version"] = version;
        extra["thread_budget"] = std::to_string(thread_budget());
        char secs[32];
        std::snprintf(secs, sizeof secs, "%.3f", omp_get_wtime() - start);
        extra["wall_seconds"] = secs;
        std::string list;
        for (const auto& o : outputs) list += (list.empty() ? "" : ",") + o;
        extra["outputs"] = list;
        extra["compiler"] = __VERSION__;
        std::ofstream f(out / "manifest.ini");
        save_config(f, config, extra);
    }
};

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

int cmd_solve(Session& s) {
    const auto& c = s.config;
    const MethodRun run = run_method(c, {c.pair, c.splitting});
    write_curves_csv(s.open("history.csv"), {run});
    {
        auto& f = s.open("solution.csv");
        const Mesh2D mesh = Mesh2D::with_spacing(c.h);
        f << "x,y,u\n";
        const auto& u = run.final_trajectory.back();
        for (int j = 0; j < mesh.n(); ++j) {
            for (int i = 0; i < mesh.n(); ++i) {
                f << fmt("%.17g", mesh.coord(i)) << ',' << fmt("%.17g", mesh.coord(j)) << ','
                  << fmt("%.17g", u[mesh.index(i, j)]) << '\n';
            }
        }
    }
    std::cout << run.method.label() << ": " << (run.curve.size() - 1) << " iterations, "
              << (run.converged ? "converged" : "not converged") << "; error vs fine "
              << fmt("%.3e", run.curve.back().error_vs_fine) << ", vs exact "
              << fmt("%.3e", run.curve.back().error_vs_exact) << "\n";
    s.manifest({{"iterations", std::to_string(run.curve.size() - 1)}});
    return ok;
}

void print_iterations(const std::vector<MethodRun>& runs) {
    for (const auto& r : runs) {
        std::printf("  %-32s s=%-5d iterations to tol: %d\n", r.method.label().c_str(), r.fine_steps,
                    r.iterations);
    }
}

int cmd_error_curve(Session& s) {
    const auto runs = run_error_curve(s.config);
    write_curves_csv(s.open("error_curve.csv"), runs);
    write_iterations_csv(s.open("error_curve_iterations.csv"), runs);
    s.write("error_curve.svg", curves_svg(runs, std::string("Error vs fine solution, preset ") +
                                                    to_string(s.config.preset)));
    print_iterations(runs);
    s.manifest();
    return ok;
}

int cmd_s_sweep(Session& s) {
    const auto runs = run_s_sensitivity(s.config);
    write_curves_csv(s.open("s_sweep.csv"), runs);
    write_iterations_csv(s.open("s_sweep_iterations.csv"), runs);
    s.write("s_sweep.svg", curves_svg(runs, "Error vs fine solution for changing s"));
    print_iterations(runs);
    s.manifest();
    return ok;
}

int cmd_robustness(Session& s) {
    const auto rows = run_robustness(s.config);
    write_robustness_csv(s.open("robustness.csv"), rows);
    s.write("robustness.svg", robustness_svg(rows, "Iterations to tolerance vs " + s.config.robustness_axis));
    for (const auto& r : rows) {
        std::printf("  %s = %-10.6g %-32s %d\n", r.axis.c_str(), r.value, r.method.label().c_str(),
                    r.iterations);
    }
    s.manifest();
    return ok;
}

std::string join_sizes(const std::vector<std::size_t>& v) {
    std::string out;
    for (auto x : v) out += (out.empty() ? "" : ",") + std::to_string(x);
    return out;
}

int cmd_speedup(Session& s) {
    const SpeedupReport report = run_speedup(s.config);
    write_speedup_csv(s.open("speedup.csv"), report);
    s.write("speedup.svg", speedup_svg(report));
    for (const auto& w : report.warnings) std::cerr << "warning: " << w << "\n";
    for (const auto& r : report.records) {
        std::printf("  threads %-3d median %.4f s  speedup %.3f\n", r.threads, r.seconds, r.speedup);
    }
    std::printf("  serial reference path: %.4f s\n", report.serial_seconds);
    std::printf("  independent subsystems per stage: coarse [%s], fine [%s]\n",
                join_sizes(report.coarse_blocks_per_stage).c_str(),
                join_sizes(report.fine_blocks_per_stage).c_str());
    s.manifest({{"coarse_blocks_per_stage", join_sizes(report.coarse_blocks_per_stage)},
                {"fine_blocks_per_stage", join_sizes(report.fine_blocks_per_stage)}});
    return ok;
}

int cmd_certify(Session& s) {
    const auto& c = s.config;
    bool all = true;
    std::map<std::string, std::string> timings;
    auto& f = s.open("certify.csv");
    f << "pair,terms,points_per_axis,max_K,argmax_z,argmax_s,samples,pass\n";
    for (auto pair : {PropagatorPair::fie_fie, PropagatorPair::fie_dr}) {
        for (int terms : {2, 3}) {
            CertificationGrid grid;
            grid.terms = terms;
            grid.points_per_axis = terms == 2 ? c.certify_points_m2 : c.certify_points_m3;
            const auto r = certify_bound(pair, grid, c.certify_s, c.execution);
            std::string z;
            for (double v : r.argmax) z += (z.empty() ? "" : " ") + fmt("%.6g", v);
            std::printf("%-8s M=%d  max K = %.15f  at z = (%s), s = %d  [%.1f s]  %s\n", to_string(pair),
                        terms, r.max_factor, z.c_str(), r.argmax_s, r.seconds, r.pass ? "PASS" : "FAIL");
            f << to_string(pair) << ',' << terms << ',' << grid.points_per_axis << ','
              << fmt("%.17g", r.max_factor) << ',' << z << ',' << r.argmax_s << ',' << r.samples << ','
              << (r.pass ? "PASS" : "FAIL") << '\n';
            timings[std::string("seconds_") + to_string(pair) + "_M" + std::to_string(terms)] =
                fmt("%.3f", r.seconds);
            all = all && r.pass;
        }
    }
    const auto hf = sweep_h_fie(2, 301);
    const auto hd = sweep_h_dr(2, 101);
    std::printf("h_fie min over [-3,0]^2 = %.15g (>= 4: %s)\n", hf.minimum, hf.bound_respected ? "PASS" : "FAIL");
    std::printf("h_dr  min over [-1,0]^2 = %.15g (> 2 off the origin: %s)\n", hd.minimum,
                hd.bound_respected ? "PASS" : "FAIL");
    all = all && hf.bound_respected && hd.bound_respected;
    timings["result"] = all ? "PASS" : "FAIL";
    s.manifest(timings);
    return all ? ok : failure;
}

int cmd_scan_region(Session& s, const std::string& which) {
    const auto& c = s.config;
    std::vector<std::pair<std::string, Rectangle>> rects;
    if (which == "small" || which == "both") rects.push_back({"small", small_region()});
    if (which == "large" || which == "both") rects.push_back({"large", large_region()});
    if (rects.empty()) throw ConfigError("--rect: expected small, large or both");

    for (auto pair : {PropagatorPair::fie_fie, PropagatorPair::fie_dr}) {
        const std::string tag = pair == PropagatorPair::fie_fie ? "fie_fie" : "fie_dr";
        for (const auto& [name, rect] : rects) {
            const auto scan = scan_region(pair, rect, c.scan_cells, c.scan_cells, c.scan_s, 2, c.execution);
            const auto overlay = scan_region(pair, rect, c.scan_cells, c.scan_cells, c.scan_overlay_s, 2,
                                             c.execution);
            const std::string base = "scan_" + tag + "_" + name;
            write_scan_csv(s.open(base + "_s" + std::to_string(c.scan_s) + ".csv"), scan);
            write_scan_csv(s.open(base + "_s" + std::to_string(c.scan_overlay_s) + ".csv"), overlay);
            s.write(base + ".svg",
                    svg::heatmap(scan,
                                 std::string(to_string(pair)) + ", s = " + std::to_string(c.scan_s) +
                                     " (dashed: s = " + std::to_string(c.scan_overlay_s) + ")",
                                 &overlay.contour));
            std::size_t convergent = 0;
            for (double k : scan.factor) convergent += k < 1.0;
            std::printf("%-8s %-5s rectangle: %zu of %zu cells with K < 1 (s = %d)\n", to_string(pair),
                        name.c_str(), convergent, scan.factor.size(), c.scan_s);
        }
        const auto slice = real_axis_slice(pair, 1e-3, 1e8, 400, c.certify_s);
        write_slice_csv(s.open("slice_" + tag + ".csv"), slice);
        std::vector<svg::Series> series;
        for (int sv : c.certify_s) {
            svg::Series ser{"s = " + std::to_string(sv), {}, {}, false};
            for (const auto& r : slice) {
                if (r.s == sv) {
                    ser.x.push_back(-r.z);
                    ser.y.push_back(r.factor);
                }
            }
            series.push_back(ser);
            const auto valley = near_zero_interval(slice, sv, 0.01);
            std::printf("%-8s s = %-5d K < 0.01 for |z| in [%.3g, %.3g] (%.2f decades)\n", to_string(pair), sv,
                        valley.lo, valley.hi, valley.decades());
        }
        s.write("slice_" + tag + ".svg",
                svg::line_plot(series, {std::string(to_string(pair)) + " on the negative real axis (z1 = z2 = -|z|)",
                                        "|z|", "K", true, false}));
    }
    s.manifest({{"rect", which}});
    return ok;
}

int cmd_fine_accuracy(Session& s) {
    const FineAccuracy r = run_fine_accuracy(s.config);
    auto& f = s.open("fine_accuracy.csv");
    f << "h,dt,steps,fine_scheme,error\n";
    f << fmt("%.17g", s.config.h) << ',' << fmt("%.17g", s.config.fine_step()) << ',' << r.steps << ','
      << fine_scheme_name(s.config.pair) << ',' << fmt("%.17g", r.error) << '\n';
    std::printf("fine %s, h = %g, dt = %g, %d steps: error vs exact = %.6e  [%.1f s]\n",
                fine_scheme_name(s.config.pair).c_str(), s.config.h, s.config.fine_step(), r.steps, r.error,
                r.seconds);
    s.manifest();
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Parareal with splitting time integrators for 2D reaction-diffusion"};
    app.set_version_flag("--version", version);
    app.require_subcommand(1);

    std::string config_path;
    std::vector<std::string> overrides;
    std::optional<int> threads;
    std::string out;
    app.add_option("-c,--config", config_path, "INI config file (a run manifest also works)");
    app.add_option("-s,--set", overrides, "Override a config key: section.key=value (repeatable)");
    app.add_option("-t,--threads", threads, "Thread budget (overrides PARASPLIT_THREADS and run.threads)");
    app.add_option("-o,--out", out, "Output directory (overrides run.output)");

    std::string rect = "both";
    auto* solve = app.add_subcommand("solve", "Parareal for the configured method");
    auto* curve = app.add_subcommand("error-curve", "Error vs iteration for all methods");
    auto* ssweep = app.add_subcommand("s-sweep", "Iterations for changing s");
    auto* robust = app.add_subcommand("robustness", "Iterations while dT, h, q or beta varies");
    auto* speed = app.add_subcommand("speedup", "Thread-scaling study with a fixed iteration count");
    auto* cert = app.add_subcommand("certify", "Numerical check of the convergence-factor bounds");
    auto* scan = app.add_subcommand("scan-region", "Convergence regions in the complex plane");
    scan->add_option("--rect", rect, "small, large or both")->check(CLI::IsMember({"small", "large", "both"}));
    auto* fine = app.add_subcommand("fine-accuracy", "Sequential fine solve vs the exact solution");
    for (auto* sub : {solve, curve, ssweep, robust, speed, cert, scan, fine}) {
        sub->fallthrough();
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return config_error;
    }

    Session session;
    session.start = omp_get_wtime();
    session.command = app.get_subcommands().front()->get_name();
    try {
        ExperimentConfig config = config_path.empty() ? ExperimentConfig{} : load_config(config_path);
        for (const auto& o : overrides) apply_override(config, o);
        if (threads) config.threads = *threads;
        if (!out.empty()) config.output = out;
        validate(config);
        session.config = config;
        set_thread_budget(config.threads > 0 ? config.threads : default_thread_budget());
        session.out = config.output;
        fs::create_directories(session.out);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return failure;
    }

    try {
        const std::string& c = session.command;
        if (c == "solve") return cmd_solve(session);
        if (c == "error-curve") return cmd_error_curve(session);
        if (c == "s-sweep") return cmd_s_sweep(session);
        if (c == "robustness") return cmd_robustness(session);
        if (c == "speedup") return cmd_speedup(session);
        if (c == "certify") return cmd_certify(session);
        if (c == "scan-region") return cmd_scan_region(session, rect);
        if (c == "fine-accuracy") return cmd_fine_accuracy(session);
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return config_error;
    } catch (const DivergenceError& e) {
        std::cerr << "divergence: " << e.what() << "\n";
        return divergence;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return failure;
    }
    return failure;
}
