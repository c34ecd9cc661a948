#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "parasplit/analysis.hpp"
#include "parasplit/execution.hpp"
#include "parasplit/manufactured.hpp"
#include "parasplit/parareal.hpp"
#include "parasplit/splitting.hpp"

namespace parasplit {

/// Everything an experiment needs. Serialized as INI; keys are
/// "section.name" (see key_names()). Numbers accept fractions such as 1/64.
struct ExperimentConfig {
    // [problem]
    Preset preset = Preset::A;
    double reaction = 0.0;
    double final_time = 1.0;

    // [mesh]
    double h = 1.0 / 64;
    /// Meshes finer than 1/128 are refused unless set.
    bool allow_large_mesh = false;

    // [splitting]
    SplittingKind splitting = SplittingKind::dimensional;
    int strips = 2;              // q
    double overlap = 1.0 / 16;   // beta
    /// Partition of the fine propagator; 0 reuses strips / overlap.
    int fine_strips = 0;
    double fine_overlap = 0.0;

    // [parareal]
    PropagatorPair pair = PropagatorPair::fie_fie;
    int coarse_slabs = 20;
    int fine_steps = 20;

    // [stopping]
    StoppingRule::Kind stopping = StoppingRule::Kind::reference_error;
    double tolerance = 1e-6;
    int max_iterations = -1;     // -1: up to N_c; the count for fixed_iterations

    // [run]
    int threads = 0;             // 0: PARASPLIT_THREADS or the OpenMP default
    Execution execution = Execution::parallel;
    std::string output = "out";
    std::uint64_t seed = 1;

    // [sweep]
    std::vector<int> s_values = {2, 4, 10, 20};
    std::string robustness_axis = "h";
    std::vector<double> robustness_values = {1.0 / 32, 1.0 / 64, 1.0 / 128};

    // [speedup]
    std::vector<int> thread_counts = {1, 2, 4, 8};
    int repetitions = 3;
    int timing_iterations = 5;

    // [analysis]
    std::vector<int> certify_s = {1, 2, 10, 20, 1000};
    int certify_points_m2 = 10000;
    int certify_points_m3 = 1000;
    int scan_cells = 200;
    int scan_s = 1000;
    int scan_overlay_s = 20;

    double coarse_step() const { return final_time / coarse_slabs; }
    double fine_step() const { return coarse_step() / fine_steps; }
    TimeGrid time_grid() const { return {final_time, coarse_slabs, fine_steps}; }
    StoppingRule stopping_rule() const { return {stopping, tolerance, max_iterations}; }
    StripGeometry strip_geometry() const { return {2, strips, overlap}; }
    StripGeometry fine_strip_geometry() const {
        return {2, fine_strips > 0 ? fine_strips : strips, fine_overlap > 0.0 ? fine_overlap : overlap};
    }
};

/// Every recognised "section.name" key, in file order.
std::vector<std::string> key_names();

/// Parses INI text. Unknown keys and malformed values throw ConfigError naming
/// the key. A [manifest] section is ignored so manifests load as configs.
ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

/// "section.name=value".
void apply_override(ExperimentConfig& config, const std::string& assignment);
void set_value(ExperimentConfig& config, const std::string& key, const std::string& value);
std::string get_value(const ExperimentConfig& config, const std::string& key);

/// Throws ConfigError on the first field that no module would accept.
void validate(const ExperimentConfig& config);

/// Lossless: parse_config(save_config(c)) == c field by field.
void save_config(std::ostream& out, const ExperimentConfig& config,
                 const std::map<std::string, std::string>& manifest = {});

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b);

/// Parses "3", "0.25", "1e-6" or "1/64"; throws ConfigError mentioning `key`.
double parse_number(const std::string& text, const std::string& key);

StoppingRule::Kind parse_stopping(const std::string& name);
const char* to_string(StoppingRule::Kind kind);

}  // namespace parasplit
