#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "parasplit/errors.hpp"
#include "parasplit/grid.hpp"

namespace parasplit {

DiffusionTensor DiffusionTensor::identity(double reaction) {
    return DiffusionTensor{[](double, double) { return 1.0; }, [](double, double) { return 0.0; },
                           [](double, double) { return 1.0; }, reaction};
}

double evaluate(const SeparableFunction& f, double x, double y, double t) {
    double sum = 0.0;
    for (const auto& term : f) sum += term.time(t) * term.space(x, y);
    return sum;
}

void check_ellipticity(const DiffusionTensor& tensor, const Mesh2D& mesh) {
    if (tensor.reaction < 0.0) {
        throw EllipticityError("reaction coefficient must be non-negative");
    }
    const int extent = mesh.lattice_extent();
    for (int b = 0; b < extent; ++b) {
        const double y = mesh.lattice_coord(b);
        for (int a = 0; a < extent; ++a) {
            const double x = mesh.lattice_coord(a);
            const double d11 = tensor.d11(x, y);
            const double d12 = tensor.d12(x, y);
            const double d22 = tensor.d22(x, y);
            if (!(d11 > 0.0) || !(d22 > 0.0) || !(d11 * d22 - d12 * d12 > 0.0)) {
                std::ostringstream msg;
                msg << "diffusion tensor is not positive definite at (" << x << ", " << y
                    << "): d11=" << d11 << " d12=" << d12 << " d22=" << d22;
                throw EllipticityError(msg.str());
            }
        }
    }
}

DiscreteOperator assemble(const DiffusionTensor& tensor, const Mesh2D& mesh,
                          const AssemblyParts& parts, std::vector<LiftingEntry>* lifting) {
    const int n = mesh.n();
    const double h = mesh.h();
    const double h2 = h * h;
    DiscreteOperator op = DiscreteOperator::nine_point(n);

    auto weight = [&](int a, int b) { return parts.weight ? (*parts.weight)(a, b) : 1.0; };
    auto at = [&](const ScalarField& f, int a, int b) {
        return f(mesh.lattice_coord(a), mesh.lattice_coord(b));
    };

    for (int j = 0; j < n; ++j) {
        for (int i = 0; i < n; ++i) {
            const std::size_t row = mesh.index(i, j);
            const int a = Mesh2D::node_lattice(i);
            const int b = Mesh2D::node_lattice(j);
            double diag = 0.0;

            auto couple = [&](int di, int dj, double coeff) {
                diag -= coeff;
                if (coeff == 0.0) return;
                const int ni = i + di;
                const int nj = j + dj;
                if (ni >= 0 && ni < n && nj >= 0 && nj < n) {
                    op.add(row, mesh.index(ni, nj), coeff);
                } else if (lifting) {
                    lifting->push_back({row, coeff, (ni + 1) * h, (nj + 1) * h});
                }
            };

            for (int side : {-1, 1}) {
                if (parts.x_diffusion) {
                    const double w = weight(a + side, b);
                    if (w != 0.0) couple(side, 0, at(tensor.d11, a + side, b) * w / h2);
                }
                if (parts.y_diffusion) {
                    const double w = weight(a, b + side);
                    if (w != 0.0) couple(0, side, at(tensor.d22, a, b + side) * w / h2);
                }
            }
            if (parts.mixed) {
                // Corner c = (x + sx h/2, y + sy h/2) couples P with P + (sx, sy).
                for (int sx : {-1, 1}) {
                    for (int sy : {-1, 1}) {
                        const double w = weight(a + sx, b + sy);
                        if (w == 0.0) continue;
                        const double m = at(tensor.d12, a + sx, b + sy) * w;
                        couple(sx, sy, sx * sy * m / (2.0 * h2));
                    }
                }
            }
            if (parts.reaction_share != 0.0) {
                diag -= tensor.reaction * parts.reaction_share * weight(a, b);
            }
            if (diag != 0.0) op.add(row, row, diag);
        }
    }
    return op;
}

DiscreteOperator discretize(const DiffusionTensor& tensor, const Mesh2D& mesh) {
    check_ellipticity(tensor, mesh);
    return assemble(tensor, mesh);
}

std::vector<double> sample(const Mesh2D& mesh, const ScalarField& f) {
    std::vector<double> out(mesh.size());
    for (int j = 0; j < mesh.n(); ++j) {
        for (int i = 0; i < mesh.n(); ++i) out[mesh.index(i, j)] = f(mesh.coord(i), mesh.coord(j));
    }
    return out;
}

SemidiscreteProblem::SemidiscreteProblem(const ContinuousProblem& problem, const Mesh2D& mesh)
    : mesh_(mesh), final_time_(problem.final_time) {
    if (!(problem.final_time > 0.0)) throw std::invalid_argument("final time must be positive");
    check_ellipticity(problem.tensor, mesh);
    std::vector<LiftingEntry> lifting;
    op_ = assemble(problem.tensor, mesh, {}, &lifting);

    initial_ = problem.initial ? sample(mesh, problem.initial) : std::vector<double>(mesh.size(), 0.0);
    for (const auto& term : problem.source) {
        source_time_.push_back(term.time);
        source_space_.push_back(sample(mesh, term.space));
    }
    for (const auto& entry : lifting) lift_rows_.push_back(entry.row);
    for (const auto& term : problem.boundary) {
        lift_time_.push_back(term.time);
        std::vector<double> values;
        values.reserve(lifting.size());
        for (const auto& entry : lifting) values.push_back(entry.coeff * term.space(entry.x, entry.y));
        lift_space_.push_back(std::move(values));
    }
}

void SemidiscreteProblem::source(double t, std::span<double> out) const {
    const double slack = 1e-10 * std::max(1.0, final_time_);
    if (!(t >= -slack && t <= final_time_ + slack)) {
        throw std::domain_error("source requested at t = " + std::to_string(t) +
                                " outside [0, T]");
    }
    if (out.size() != dimension()) throw std::invalid_argument("source vector size mismatch");
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t m = 0; m < source_time_.size(); ++m) {
        const double factor = source_time_[m](t);
        const auto& space = source_space_[m];
        for (std::size_t r = 0; r < out.size(); ++r) out[r] += factor * space[r];
    }
    for (std::size_t m = 0; m < lift_time_.size(); ++m) {
        const double factor = lift_time_[m](t);
        for (std::size_t e = 0; e < lift_rows_.size(); ++e) {
            out[lift_rows_[e]] += factor * lift_space_[m][e];
        }
    }
}

std::vector<double> SemidiscreteProblem::source(double t) const {
    std::vector<double> out(dimension());
    source(t, out);
    return out;
}

std::vector<double> assemble_source(const SemidiscreteProblem& problem, double t) {
    return problem.source(t);
}

double space_norm(std::span<const double> diff, double weight) {
    double sum = 0.0;
    for (double d : diff) sum += d * d;
    return std::sqrt(weight * sum);
}

double error_norm(const Trajectory& numeric, const Trajectory& reference, double weight) {
    if (numeric.size() != reference.size()) {
        throw std::invalid_argument("trajectories have different numbers of time points");
    }
    double worst = 0.0;
    std::vector<double> diff;
    for (std::size_t k = 0; k < numeric.size(); ++k) {
        if (numeric[k].size() != reference[k].size()) {
            throw std::invalid_argument("trajectories have different space dimensions");
        }
        diff.resize(numeric[k].size());
        for (std::size_t i = 0; i < diff.size(); ++i) diff[i] = numeric[k][i] - reference[k][i];
        worst = std::max(worst, space_norm(diff, weight));
    }
    return worst;
}

}  // namespace parasplit
