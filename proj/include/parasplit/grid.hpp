#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "parasplit/discrete_operator.hpp"
#include "parasplit/mesh.hpp"

namespace parasplit {

/// Symmetric diffusion tensor [[d11, d12], [d12, d22]] plus a constant linear
/// reaction coefficient c >= 0, for L u = div(D grad u) - c u.
struct DiffusionTensor {
    ScalarField d11;
    ScalarField d12;
    ScalarField d22;
    double reaction = 0.0;

    static DiffusionTensor identity(double reaction = 0.0);
};

/// f(x, y, t) written as a sum of products time(t) * space(x, y).
struct SeparableTerm {
    std::function<double(double t)> time;
    ScalarField space;
};
using SeparableFunction = std::vector<SeparableTerm>;

double evaluate(const SeparableFunction& f, double x, double y, double t);

/// u_t = L u + f in the unit square, u = g on the boundary, u = u0 at t = 0.
struct ContinuousProblem {
    DiffusionTensor tensor;
    SeparableFunction source;
    SeparableFunction boundary;
    ScalarField initial;
    double final_time = 1.0;
};

/// Which parts of L an assembled operator contains. Every coefficient is
/// multiplied by `weight` sampled at the point where the coefficient is
/// evaluated (faces for d11/d22, cell corners for d12, nodes for c).
struct AssemblyParts {
    bool x_diffusion = true;
    bool y_diffusion = true;
    bool mixed = true;
    double reaction_share = 1.0;
    const LatticeField* weight = nullptr;
};

/// Boundary node eliminated from row `row`; contributes coeff * g(x, y, t).
struct LiftingEntry {
    std::size_t row;
    double coeff;
    double x;
    double y;
};

/// Throws EllipticityError unless D is SPD at every half-lattice point.
void check_ellipticity(const DiffusionTensor& tensor, const Mesh2D& mesh);

/// Second-order conservative finite differences on the nine-point stencil.
/// Face-centered coefficients for (d11 u_x)_x and (d22 u_y)_y; corner-centered
/// cross differences for (d12 u_y)_x + (d12 u_x)_y.
DiscreteOperator assemble(const DiffusionTensor& tensor, const Mesh2D& mesh,
                          const AssemblyParts& parts = {},
                          std::vector<LiftingEntry>* lifting = nullptr);

/// Discretizes the full operator L after checking ellipticity.
DiscreteOperator discretize(const DiffusionTensor& tensor, const Mesh2D& mesh);

/// U'(t) = A U(t) + F(t), U(0) = P u0.
class SemidiscreteProblem {
public:
    SemidiscreteProblem(const ContinuousProblem& problem, const Mesh2D& mesh);

    const Mesh2D& mesh() const noexcept { return mesh_; }
    const DiscreteOperator& op() const noexcept { return op_; }
    double final_time() const noexcept { return final_time_; }
    std::size_t dimension() const noexcept { return op_.dimension(); }

    std::vector<double> initial_vector() const { return initial_; }

    /// F(t): node samples of f plus boundary lifting. Throws std::domain_error
    /// for t outside [0, T].
    void source(double t, std::span<double> out) const;
    std::vector<double> source(double t) const;

private:
    Mesh2D mesh_;
    DiscreteOperator op_;
    double final_time_;
    std::vector<double> initial_;
    std::vector<std::function<double(double)>> source_time_;
    std::vector<std::vector<double>> source_space_;
    std::vector<std::function<double(double)>> lift_time_;
    std::vector<std::vector<double>> lift_space_;  // coeff * g_space per entry
    std::vector<std::size_t> lift_rows_;
};

std::vector<double> assemble_source(const SemidiscreteProblem& problem, double t);

/// Node values of a field.
std::vector<double> sample(const Mesh2D& mesh, const ScalarField& f);

using Trajectory = std::vector<std::vector<double>>;

/// max over time points of sqrt(weight * sum_i diff_i^2); weight = h^2 gives
/// the maximum-in-time, discrete-2-norm-in-space error.
double error_norm(const Trajectory& numeric, const Trajectory& reference, double weight);
double space_norm(std::span<const double> diff, double weight);

}  // namespace parasplit
