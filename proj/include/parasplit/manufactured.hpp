#pragma once

#include <functional>
#include <string>

#include "parasplit/grid.hpp"

namespace parasplit {

/// A: d11 = d22 = 1, d12 = 0.
/// B: d11 = d22 = 1 / (2 + cos(3 pi x) cos(2 pi y)), d12 = 1/4.
enum class Preset { A, B };

Preset parse_preset(const std::string& name);
const char* to_string(Preset preset);

/// Heat problem with exact solution u = sin(2 pi t) sin(2 pi x) sin(2 pi y),
/// homogeneous Dirichlet data and zero initial value. The source is built
/// from the closed-form L u so that u is exact.
struct ManufacturedProblem {
    Preset preset;
    ContinuousProblem problem;
    std::function<double(double x, double y, double t)> exact;
};

ManufacturedProblem manufactured_problem(Preset preset, double reaction = 0.0,
                                         double final_time = 1.0);

DiffusionTensor preset_tensor(Preset preset, double reaction = 0.0);

}  // namespace parasplit
