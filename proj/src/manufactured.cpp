#include "parasplit/manufactured.hpp"

#include <cmath>
#include <numbers>

#include "parasplit/errors.hpp"

namespace parasplit {

namespace {

constexpr double pi = std::numbers::pi;

double phi(double x, double y) { return std::sin(2 * pi * x) * std::sin(2 * pi * y); }

/// div(D grad phi) - c phi for phi = sin(2 pi x) sin(2 pi y).
double preset_operator(Preset preset, double reaction, double x, double y) {
    const double sx = std::sin(2 * pi * x), cx = std::cos(2 * pi * x);
    const double sy = std::sin(2 * pi * y), cy = std::cos(2 * pi * y);
    const double p = sx * sy;
    if (preset == Preset::A) return -8 * pi * pi * p - reaction * p;

    const double w = 2.0 + std::cos(3 * pi * x) * cy;
    const double d = 1.0 / w;
    const double dx = 3 * pi * std::sin(3 * pi * x) * cy / (w * w);
    const double dy = 2 * pi * std::cos(3 * pi * x) * sy / (w * w);
    const double px = 2 * pi * cx * sy;
    const double py = 2 * pi * sx * cy;
    const double pxy = 4 * pi * pi * cx * cy;
    const double lap = -8 * pi * pi * p;
    return dx * px + dy * py + d * lap + 2.0 * 0.25 * pxy - reaction * p;
}

}  // namespace

Preset parse_preset(const std::string& name) {
    if (name == "A" || name == "a") return Preset::A;
    if (name == "B" || name == "b") return Preset::B;
    throw ConfigError("unknown problem preset '" + name + "' (expected A or B)");
}

const char* to_string(Preset preset) { return preset == Preset::A ? "A" : "B"; }

DiffusionTensor preset_tensor(Preset preset, double reaction) {
    if (preset == Preset::A) return DiffusionTensor::identity(reaction);
    auto diag = [](double x, double y) {
        return 1.0 / (2.0 + std::cos(3 * pi * x) * std::cos(2 * pi * y));
    };
    return DiffusionTensor{diag, [](double, double) { return 0.25; }, diag, reaction};
}

ManufacturedProblem manufactured_problem(Preset preset, double reaction, double final_time) {
    ManufacturedProblem out;
    out.preset = preset;
    out.problem.tensor = preset_tensor(preset, reaction);
    out.problem.final_time = final_time;
    out.problem.initial = [](double, double) { return 0.0; };
    // f = u_t - L u = 2 pi cos(2 pi t) phi - sin(2 pi t) L phi
    out.problem.source = {
        {[](double t) { return 2 * pi * std::cos(2 * pi * t); }, phi},
        {[](double t) { return std::sin(2 * pi * t); },
         [preset, reaction](double x, double y) { return -preset_operator(preset, reaction, x, y); }},
    };
    out.exact = [](double x, double y, double t) { return std::sin(2 * pi * t) * phi(x, y); };
    return out;
}

}  // namespace parasplit
