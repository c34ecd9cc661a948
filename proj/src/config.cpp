#include "parasplit/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "parasplit/errors.hpp"

namespace parasplit {

namespace pt = boost::property_tree;

StoppingRule::Kind parse_stopping(const std::string& name) {
    if (name == "reference_error" || name == "reference") return StoppingRule::Kind::reference_error;
    if (name == "increment") return StoppingRule::Kind::increment;
    if (name == "fixed_iterations" || name == "fixed") return StoppingRule::Kind::fixed_iterations;
    throw ConfigError("unknown stopping rule '" + name +
                      "' (expected reference_error, increment or fixed_iterations)");
}

const char* to_string(StoppingRule::Kind kind) {
    switch (kind) {
        case StoppingRule::Kind::reference_error: return "reference_error";
        case StoppingRule::Kind::increment: return "increment";
        case StoppingRule::Kind::fixed_iterations: return "fixed_iterations";
    }
    return "reference_error";
}

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_plain(const std::string& text, const std::string& key) {
    const std::string t = trim(text);
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(t, &used);
    } catch (const std::exception&) {
        throw ConfigError(key + ": '" + text + "' is not a number");
    }
    if (used != t.size()) throw ConfigError(key + ": '" + text + "' is not a number");
    return v;
}

int parse_int(const std::string& text, const std::string& key) {
    const double v = parse_number(text, key);
    if (v != std::floor(v) || std::abs(v) > 2e9) throw ConfigError(key + ": '" + text + "' is not an integer");
    return static_cast<int>(v);
}

bool parse_bool(const std::string& text, const std::string& key) {
    const std::string t = trim(text);
    if (t == "true" || t == "1" || t == "yes" || t == "on") return true;
    if (t == "false" || t == "0" || t == "no" || t == "off") return false;
    throw ConfigError(key + ": '" + text + "' is not a boolean");
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> items;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item = trim(item);
        if (!item.empty()) items.push_back(item);
    }
    return items;
}

std::string format(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

template <class T, class F>
std::string join(const std::vector<T>& values, F&& fmt) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += fmt(values[i]);
    }
    return out;
}

struct Key {
    std::string name;
    std::function<std::string(const ExperimentConfig&)> get;
    std::function<void(ExperimentConfig&, const std::string&, const std::string&)> set;
};

#define NUMBER_KEY(key, field)                                                                  \
    Key{key, [](const ExperimentConfig& c) { return format(c.field); },                         \
        [](ExperimentConfig& c, const std::string& v, const std::string& k) { c.field = parse_number(v, k); }}
#define INT_KEY(key, field)                                                                     \
    Key{key, [](const ExperimentConfig& c) { return std::to_string(c.field); },                 \
        [](ExperimentConfig& c, const std::string& v, const std::string& k) { c.field = parse_int(v, k); }}

const std::vector<Key>& keys() {
    static const std::vector<Key> table = {
        Key{"problem.preset", [](const ExperimentConfig& c) { return std::string(to_string(c.preset)); },
            [](ExperimentConfig& c, const std::string& v, const std::string&) { c.preset = parse_preset(trim(v)); }},
        NUMBER_KEY("problem.reaction", reaction),
        NUMBER_KEY("problem.final_time", final_time),
        NUMBER_KEY("mesh.h", h),
        Key{"mesh.allow_large_mesh",
            [](const ExperimentConfig& c) { return std::string(c.allow_large_mesh ? "true" : "false"); },
            [](ExperimentConfig& c, const std::string& v, const std::string& k) {
                c.allow_large_mesh = parse_bool(v, k);
            }},
        Key{"splitting.kind", [](const ExperimentConfig& c) { return std::string(to_string(c.splitting)); },
            [](ExperimentConfig& c, const std::string& v, const std::string&) {
                c.splitting = parse_splitting_kind(trim(v));
            }},
        INT_KEY("splitting.strips", strips),
        NUMBER_KEY("splitting.overlap", overlap),
        INT_KEY("splitting.fine_strips", fine_strips),
        NUMBER_KEY("splitting.fine_overlap", fine_overlap),
        Key{"parareal.pair", [](const ExperimentConfig& c) { return std::string(to_string(c.pair)); },
            [](ExperimentConfig& c, const std::string& v, const std::string&) { c.pair = parse_pair(trim(v)); }},
        INT_KEY("parareal.coarse_slabs", coarse_slabs),
        INT_KEY("parareal.fine_steps", fine_steps),
        Key{"stopping.rule", [](const ExperimentConfig& c) { return std::string(to_string(c.stopping)); },
            [](ExperimentConfig& c, const std::string& v, const std::string&) {
                c.stopping = parse_stopping(trim(v));
            }},
        NUMBER_KEY("stopping.tolerance", tolerance),
        INT_KEY("stopping.max_iterations", max_iterations),
        INT_KEY("run.threads", threads),
        Key{"run.execution",
            [](const ExperimentConfig& c) {
                return std::string(c.execution == Execution::serial ? "serial" : "parallel");
            },
            [](ExperimentConfig& c, const std::string& v, const std::string& k) {
                const std::string t = trim(v);
                if (t == "serial") c.execution = Execution::serial;
                else if (t == "parallel") c.execution = Execution::parallel;
                else throw ConfigError(k + ": expected serial or parallel, got '" + v + "'");
            }},
        Key{"run.output", [](const ExperimentConfig& c) { return c.output; },
            [](ExperimentConfig& c, const std::string& v, const std::string&) { c.output = trim(v); }},
        Key{"run.seed", [](const ExperimentConfig& c) { return std::to_string(c.seed); },
            [](ExperimentConfig& c, const std::string& v, const std::string& k) {
                try {
                    std::size_t used = 0;
                    const std::string t = trim(v);
                    c.seed = std::stoull(t, &used);
                    if (used != t.size()) throw std::invalid_argument(t);
                } catch (const std::exception&) {
                    throw ConfigError(k + ": '" + v + "' is not an unsigned integer");
                }
            }},
        Key{"sweep.s_values",
            [](const ExperimentConfig& c) { return join(c.s_values, [](int v) { return std::to_string(v); }); },
            [](ExperimentConfig& c, const std::string& v, const std::string& k) {
                c.s_values.clear();
                for (const auto& item : split_list(v)) c.s_values.push_back(parse_int(item, k));
            }},
        Key{"sweep.robustness_axis", [](const ExperimentConfig& c) { return c.robustness_axis; },
            [](ExperimentConfig& c, const std::string& v, const std::string&) { c.robustness_axis = trim(v); }},
        Key{"sweep.robustness_values", [](const ExperimentConfig& c) { return join(c.robustness_values, format); },
            [](ExperimentConfig& c, const std::string& v, const std::string& k) {
                c.robustness_values.clear();
                for (const auto& item : split_list(v)) c.robustness_values.push_back(parse_number(item, k));
            }},
        Key{"speedup.threads",
            [](const ExperimentConfig& c) { return join(c.thread_counts, [](int v) { return std::to_string(v); }); },
            [](ExperimentConfig& c, const std::string& v, const std::string& k) {
                c.thread_counts.clear();
                for (const auto& item : split_list(v)) c.thread_counts.push_back(parse_int(item, k));
            }},
        INT_KEY("speedup.repetitions", repetitions),
        INT_KEY("speedup.iterations", timing_iterations),
        Key{"analysis.s_values",
            [](const ExperimentConfig& c) { return join(c.certify_s, [](int v) { return std::to_string(v); }); },
            [](ExperimentConfig& c, const std::string& v, const std::string& k) {
                c.certify_s.clear();
                for (const auto& item : split_list(v)) c.certify_s.push_back(parse_int(item, k));
            }},
        INT_KEY("analysis.points_m2", certify_points_m2),
        INT_KEY("analysis.points_m3", certify_points_m3),
        INT_KEY("analysis.scan_cells", scan_cells),
        INT_KEY("analysis.scan_s", scan_s),
        INT_KEY("analysis.scan_overlay_s", scan_overlay_s),
    };
    return table;
}

#undef NUMBER_KEY
#undef INT_KEY

const Key& find_key(const std::string& name) {
    for (const auto& k : keys()) {
        if (k.name == name) return k;
    }
    throw ConfigError("unknown config key '" + name + "'");
}

}  // namespace

double parse_number(const std::string& text, const std::string& key) {
    const std::string t = trim(text);
    const auto slash = t.find('/');
    if (slash == std::string::npos) return parse_plain(t, key);
    const double num = parse_plain(t.substr(0, slash), key);
    const double den = parse_plain(t.substr(slash + 1), key);
    if (den == 0.0) throw ConfigError(key + ": division by zero in '" + text + "'");
    return num / den;
}

std::vector<std::string> key_names() {
    std::vector<std::string> names;
    for (const auto& k : keys()) names.push_back(k.name);
    return names;
}

void set_value(ExperimentConfig& config, const std::string& key, const std::string& value) {
    find_key(key).set(config, value, key);
}

std::string get_value(const ExperimentConfig& config, const std::string& key) {
    return find_key(key).get(config);
}

void apply_override(ExperimentConfig& config, const std::string& assignment) {
    const auto eq = assignment.find('=');
    if (eq == std::string::npos) throw ConfigError("override '" + assignment + "' is not key=value");
    set_value(config, trim(assignment.substr(0, eq)), assignment.substr(eq + 1));
}

ExperimentConfig parse_config(std::istream& in) {
    pt::ptree tree;
    try {
        pt::read_ini(in, tree);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    ExperimentConfig config;
    for (const auto& [section, body] : tree) {
        if (section == "manifest") continue;
        if (body.empty() && !body.data().empty()) {
            throw ConfigError("config key '" + section + "' must live in a section");
        }
        for (const auto& [name, value] : body) set_value(config, section + "." + name, value.data());
    }
    return config;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'");
    return parse_config(in);
}

void save_config(std::ostream& out, const ExperimentConfig& config,
                 const std::map<std::string, std::string>& manifest) {
    pt::ptree tree;
    for (const auto& k : keys()) tree.put(pt::ptree::path_type(k.name, '.'), k.get(config));
    for (const auto& [key, value] : manifest) {
        tree.put(pt::ptree::path_type("manifest|" + key, '|'), value);
    }
    pt::write_ini(out, tree);
}

bool operator==(const ExperimentConfig& a, const ExperimentConfig& b) {
    for (const auto& k : keys()) {
        if (k.get(a) != k.get(b)) return false;
    }
    return true;
}

void validate(const ExperimentConfig& c) {
    auto fail = [](const std::string& key, const std::string& why) { throw ConfigError(key + ": " + why); };

    if (!(c.reaction >= 0.0) || !std::isfinite(c.reaction)) fail("problem.reaction", "must be >= 0");
    if (!(c.final_time > 0.0) || !std::isfinite(c.final_time)) fail("problem.final_time", "must be positive");

    if (!(c.h > 0.0 && c.h < 1.0)) fail("mesh.h", "must lie in (0, 1)");
    const double cells = 1.0 / c.h;
    if (std::abs(cells - std::round(cells)) > 1e-9 * cells) {
        fail("mesh.h", "must be 1/m for an integer m (uniform mesh of the unit square)");
    }
    if (std::round(cells) < 3) fail("mesh.h", "must be at most 1/3");
    if (std::round(cells) > 128 && !c.allow_large_mesh) {
        fail("mesh.h", "meshes finer than 1/128 need mesh.allow_large_mesh = true");
    }

    if (c.splitting == SplittingKind::custom) fail("splitting.kind", "custom splittings have no config form");
    if (c.splitting == SplittingKind::dimensional && c.preset == Preset::B && c.pair != PropagatorPair::ie_ie) {
        fail("splitting.kind", "dimensional splitting needs d12 = 0; preset B has a mixed term");
    }
    if (c.strips < 1) fail("splitting.strips", "must be >= 1");
    const double strip_width = 1.0 / (2.0 * c.strips);
    if (!(c.overlap > 0.0) || c.overlap > 2.0 * strip_width * (1 + 1e-12)) {
        fail("splitting.overlap", "must satisfy 0 < beta <= 2 / (2 q)");
    }
    if (c.fine_strips < 0) fail("splitting.fine_strips", "must be >= 0 (0 reuses splitting.strips)");
    if (c.fine_overlap < 0.0) fail("splitting.fine_overlap", "must be >= 0 (0 reuses splitting.overlap)");
    {
        const StripGeometry fine = c.fine_strip_geometry();
        if (fine.overlap > 2.0 * fine.strip_width() * (1 + 1e-12)) {
            fail("splitting.fine_overlap", "must satisfy beta <= 2 / (2 q) for the fine partition");
        }
    }

    if (c.coarse_slabs < 1) fail("parareal.coarse_slabs", "must be >= 1");
    if (c.fine_steps < 1) fail("parareal.fine_steps", "must be >= 1");

    if (c.stopping != StoppingRule::Kind::fixed_iterations && !(c.tolerance > 0.0)) {
        fail("stopping.tolerance", "must be positive");
    }
    if (c.stopping == StoppingRule::Kind::fixed_iterations && c.max_iterations < 0) {
        fail("stopping.max_iterations", "fixed_iterations needs a non-negative count");
    }
    if (c.max_iterations < -1) fail("stopping.max_iterations", "must be -1 or >= 0");

    if (c.threads < 0) fail("run.threads", "must be >= 0");
    if (c.output.empty()) fail("run.output", "must not be empty");

    if (c.s_values.empty()) fail("sweep.s_values", "must not be empty");
    for (int s : c.s_values) {
        if (s < 1) fail("sweep.s_values", "entries must be >= 1");
    }
    const std::string& axis = c.robustness_axis;
    if (axis != "dT" && axis != "h" && axis != "q" && axis != "beta") {
        fail("sweep.robustness_axis", "expected one of dT, h, q, beta");
    }
    if (c.robustness_values.empty()) fail("sweep.robustness_values", "must not be empty");
    for (double v : c.robustness_values) {
        if (!(v > 0.0)) fail("sweep.robustness_values", "entries must be positive");
        if (axis == "q" && v != std::floor(v)) fail("sweep.robustness_values", "q values must be integers");
        if (axis == "dT") {
            const double slabs = c.final_time / v;
            if (std::abs(slabs - std::round(slabs)) > 1e-9 * slabs) {
                fail("sweep.robustness_values", "dT values must divide the final time");
            }
            const double ratio = v / c.fine_step();
            if (std::abs(ratio - std::round(ratio)) > 1e-9 * ratio || std::round(ratio) < 1) {
                fail("sweep.robustness_values", "dT values must be multiples of the fine step");
            }
        }
        if (axis == "h") {
            const double m = 1.0 / v;
            if (std::abs(m - std::round(m)) > 1e-9 * m) fail("sweep.robustness_values", "h values must be 1/m");
            if (std::round(m) > 128 && !c.allow_large_mesh) {
                fail("sweep.robustness_values", "h finer than 1/128 needs mesh.allow_large_mesh = true");
            }
        }
        if (axis == "beta" && v > 2.0 * strip_width * (1 + 1e-12)) {
            fail("sweep.robustness_values", "beta values must satisfy beta <= 2 / (2 q)");
        }
    }
    if (axis == "q" || axis == "beta") {
        if (c.splitting != SplittingKind::domain_decomposition) {
            fail("sweep.robustness_axis", "q and beta sweeps need splitting.kind = domain_decomposition");
        }
        if (axis == "q") {
            for (double v : c.robustness_values) {
                if (c.overlap > 2.0 / (2.0 * v) * (1 + 1e-12)) {
                    fail("sweep.robustness_values", "beta exceeds 2 / (2 q) for q = " + format(v));
                }
            }
        }
    }

    if (c.thread_counts.empty()) fail("speedup.threads", "must not be empty");
    for (int t : c.thread_counts) {
        if (t < 1) fail("speedup.threads", "entries must be >= 1");
    }
    if (c.repetitions < 3) fail("speedup.repetitions", "must be >= 3 (the median needs three runs)");
    if (c.timing_iterations < 0) fail("speedup.iterations", "must be >= 0");

    if (c.certify_s.empty()) fail("analysis.s_values", "must not be empty");
    for (int s : c.certify_s) {
        if (s < 1) fail("analysis.s_values", "entries must be >= 1");
    }
    if (c.certify_points_m2 < 2) fail("analysis.points_m2", "must be >= 2");
    if (c.certify_points_m3 < 2) fail("analysis.points_m3", "must be >= 2");
    if (c.scan_cells < 2) fail("analysis.scan_cells", "must be >= 2");
    if (c.scan_s < 1) fail("analysis.scan_s", "must be >= 1");
    if (c.scan_overlay_s < 1) fail("analysis.scan_overlay_s", "must be >= 1");
}

}  // namespace parasplit
