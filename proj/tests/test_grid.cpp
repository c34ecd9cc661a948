#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "parasplit/errors.hpp"
#include "parasplit/grid.hpp"
#include "parasplit/manufactured.hpp"

using namespace parasplit;

namespace {

constexpr double pi = std::numbers::pi;

std::size_t node_at(const Mesh2D& mesh, double x, double y) {
    const int i = static_cast<int>(std::lround(x / mesh.h())) - 1;
    const int j = static_cast<int>(std::lround(y / mesh.h())) - 1;
    return mesh.index(i, j);
}

// L phi for phi = sin(2 pi x) sin(2 pi y), preset B, computed symbolically offline.
struct OperatorSample {
    double x, y, value;
};
const OperatorSample preset_b_operator[] = {
    {1.0 / 8, 3.0 / 8, -40.950708593976795312},
    {5.0 / 8, 1.0 / 4, 27.915456798555518137},
    {3.0 / 4, 7.0 / 8, -20.099128894959973058},
    {1.0 / 2, 1.0 / 8, -6.5555250984607401042},
};

// f = u_t - L u at t = 0.3, computed symbolically offline.
struct SourceSample {
    double x, y, preset_a, preset_b;
};
const SourceSample source_at_03[] = {
    {1.0 / 8, 3.0 / 8, 36.575400796282710740, 37.975632735842844168},
    {5.0 / 8, 1.0 / 4, -51.725427855334709659, -25.176250761712637956},
    {3.0 / 4, 7.0 / 8, 51.725427855334709659, 17.742481175498457879},
    {1.0 / 2, 1.0 / 8, 0.0, 6.2346748626275150962},
};

double truncation_error(int n) {
    const Mesh2D mesh(n);
    const auto op = discretize(preset_tensor(Preset::B), mesh);
    const auto phi = sample(mesh, [](double x, double y) {
        return std::sin(2 * pi * x) * std::sin(2 * pi * y);
    });
    std::vector<double> lphi(mesh.size());
    op.apply(phi, lphi);
    double worst = 0.0;
    for (const auto& p : preset_b_operator) {
        worst = std::max(worst, std::abs(lphi[node_at(mesh, p.x, p.y)] - p.value));
    }
    return worst;
}

}  // namespace

TEST(Mesh, IndexIsBijective) {
    const Mesh2D mesh(7);
    std::vector<int> hits(mesh.size(), 0);
    for (int j = 0; j < mesh.n(); ++j) {
        for (int i = 0; i < mesh.n(); ++i) {
            const auto idx = mesh.index(i, j);
            ASSERT_LT(idx, mesh.size());
            EXPECT_EQ(mesh.column_of(idx), i);
            EXPECT_EQ(mesh.row_of(idx), j);
            ++hits[idx];
        }
    }
    for (int h : hits) EXPECT_EQ(h, 1);
}

TEST(Mesh, SpacingAndCoordinates) {
    const auto mesh = Mesh2D::with_spacing(1.0 / 64);
    EXPECT_EQ(mesh.n(), 63);
    EXPECT_EQ(mesh.size(), 63u * 63u);
    EXPECT_DOUBLE_EQ(mesh.coord(0), 1.0 / 64);
    EXPECT_DOUBLE_EQ(mesh.coord(62), 63.0 / 64);
    EXPECT_DOUBLE_EQ(mesh.lattice_coord(Mesh2D::node_lattice(3)), mesh.coord(3));
}

TEST(Mesh, NonSquareMeshRejected) {
    EXPECT_THROW(Mesh2D(3, 4), UnsupportedMeshError);
    EXPECT_NO_THROW(Mesh2D(4, 4));
}

TEST(Discretize, FivePointLaplacianRow) {
    const Mesh2D mesh(5);
    const double h2 = mesh.h() * mesh.h();
    const auto op = discretize(DiffusionTensor::identity(), mesh);
    const auto r = mesh.index(2, 2);
    EXPECT_DOUBLE_EQ(op.at(r, r), -4.0 / h2);
    EXPECT_DOUBLE_EQ(op.at(r, mesh.index(1, 2)), 1.0 / h2);
    EXPECT_DOUBLE_EQ(op.at(r, mesh.index(3, 2)), 1.0 / h2);
    EXPECT_DOUBLE_EQ(op.at(r, mesh.index(2, 1)), 1.0 / h2);
    EXPECT_DOUBLE_EQ(op.at(r, mesh.index(2, 3)), 1.0 / h2);
    EXPECT_EQ(op.at(r, mesh.index(1, 1)), 0.0);
    EXPECT_EQ(op.at(r, mesh.index(3, 3)), 0.0);
}

TEST(Discretize, ReactionShiftsDiagonal) {
    const Mesh2D mesh(5);
    const auto plain = discretize(DiffusionTensor::identity(), mesh);
    const auto shifted = discretize(DiffusionTensor::identity(1.0), mesh);
    for (std::size_t r = 0; r < mesh.size(); ++r) {
        EXPECT_DOUBLE_EQ(shifted.at(r, r), plain.at(r, r) - 1.0);
    }
    EXPECT_EQ((shifted - plain).max_abs(), 1.0);
}

TEST(Manufactured, PresetCoefficients) {
    const auto b = preset_tensor(Preset::B);
    EXPECT_DOUBLE_EQ(b.d11(0, 0), 1.0 / 3);
    EXPECT_DOUBLE_EQ(b.d22(0, 0), 1.0 / 3);
    EXPECT_DOUBLE_EQ(b.d12(0.3, 0.7), 0.25);
    const auto a = preset_tensor(Preset::A);
    EXPECT_EQ(a.d11(0.2, 0.4), 1.0);
    EXPECT_EQ(a.d12(0.2, 0.4), 0.0);
}

TEST(Manufactured, ExactSolutionValues) {
    const auto m = manufactured_problem(Preset::A);
    EXPECT_NEAR(m.exact(0.25, 0.25, 0.25), 1.0, 1e-15);
    EXPECT_NEAR(m.exact(0.75, 0.25, 0.25), -1.0, 1e-15);
    EXPECT_NEAR(m.exact(0.3, 0.6, 0.0), 0.0, 1e-15);
    EXPECT_NEAR(m.exact(0.5, 0.3, 0.7), 0.0, 1e-15);
}

TEST(Discretize, SecondOrderOnVariableCoefficients) {
    const double e32 = truncation_error(31);
    const double e64 = truncation_error(63);
    const double e128 = truncation_error(127);
    const double slope = std::log(e32 / e128) / std::log(4.0);
    EXPECT_GE(slope, 1.8);
    EXPECT_LE(slope, 2.2);
    EXPECT_LT(e128, e64);
}

TEST(Discretize, SymmetricForBothPresets) {
    const Mesh2D mesh(15);
    for (auto preset : {Preset::A, Preset::B}) {
        const auto op = discretize(preset_tensor(preset), mesh);
        EXPECT_LE(op.asymmetry(), 1e-12 * op.max_abs());
    }
}

TEST(Discretize, DiagonallyDominantWithReaction) {
    const Mesh2D mesh(9);
    const double c = 1.0;
    const auto op = discretize(DiffusionTensor::identity(c), mesh);
    const auto dense = op.dense();
    const std::size_t n = mesh.size();
    for (std::size_t r = 0; r < n; ++r) {
        double off = 0.0;
        for (std::size_t col = 0; col < n; ++col) {
            if (col != r) off += std::abs(dense[r * n + col]);
        }
        // Gershgorin disc lies strictly in the left half-plane.
        EXPECT_LT(dense[r * n + r] + off, 0.0);
        EXPECT_LE(dense[r * n + r] + off, -c + 1e-9);
    }
}

TEST(Discretize, NegativeDefiniteForPresetB) {
    const Mesh2D mesh(15);
    const auto op = discretize(preset_tensor(Preset::B), mesh);
    std::mt19937_64 rng(7);
    std::normal_distribution<double> normal;
    std::vector<double> x(mesh.size()), y(mesh.size());
    for (int trial = 0; trial < 20; ++trial) {
        for (auto& v : x) v = normal(rng);
        op.apply(x, y);
        double q = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) q += x[i] * y[i];
        EXPECT_LT(q, 0.0);
    }
}

TEST(Discretize, EllipticityViolationReported) {
    const Mesh2D mesh(7);
    DiffusionTensor bad = DiffusionTensor::identity();
    bad.d12 = [](double, double) { return 2.0; };
    EXPECT_THROW(discretize(bad, mesh), EllipticityError);
    EXPECT_THROW(discretize(DiffusionTensor::identity(-1.0), mesh), EllipticityError);
}

TEST(Source, MatchesSymbolicValues) {
    const Mesh2D mesh(63);
    for (auto preset : {Preset::A, Preset::B}) {
        const auto m = manufactured_problem(preset);
        const SemidiscreteProblem sd(m.problem, mesh);
        const auto f = sd.source(0.3);
        for (const auto& p : source_at_03) {
            const double expected = preset == Preset::A ? p.preset_a : p.preset_b;
            EXPECT_NEAR(f[node_at(mesh, p.x, p.y)], expected, 1e-11 * (1.0 + std::abs(expected)));
        }
    }
}

TEST(Source, OutsideTimeIntervalThrows) {
    const auto m = manufactured_problem(Preset::A, 0.0, 1.0);
    const SemidiscreteProblem sd(m.problem, Mesh2D(7));
    EXPECT_THROW(sd.source(-0.1), std::domain_error);
    EXPECT_THROW(sd.source(1.5), std::domain_error);
    EXPECT_NO_THROW(sd.source(0.0));
    EXPECT_NO_THROW(sd.source(1.0));
}

TEST(Source, ZeroDataGivesZeroSource) {
    ContinuousProblem p;
    p.tensor = DiffusionTensor::identity();
    const SemidiscreteProblem sd(p, Mesh2D(7));
    for (double v : sd.source(0.5)) EXPECT_EQ(v, 0.0);
    for (double v : sd.initial_vector()) EXPECT_EQ(v, 0.0);
}

TEST(Source, HarmonicBoundaryLiftingIsExact) {
    ContinuousProblem p;
    p.tensor = DiffusionTensor::identity();
    p.boundary = {{[](double) { return 1.0; }, [](double x, double y) { return x * x - y * y; }}};
    const Mesh2D mesh(9);
    const SemidiscreteProblem sd(p, mesh);
    const auto u = sample(mesh, [](double x, double y) { return x * x - y * y; });
    std::vector<double> au(mesh.size());
    sd.op().apply(u, au);
    const auto f = sd.source(0.0);
    for (std::size_t r = 0; r < mesh.size(); ++r) EXPECT_NEAR(au[r] + f[r], 0.0, 1e-9);
}

TEST(Source, MixedStencilExactOnBilinear) {
    ContinuousProblem p;
    p.tensor = DiffusionTensor::identity();
    p.tensor.d12 = [](double, double) { return 0.25; };
    p.boundary = {{[](double) { return 1.0; }, [](double x, double y) { return x * y; }}};
    const Mesh2D mesh(9);
    const SemidiscreteProblem sd(p, mesh);
    const auto u = sample(mesh, [](double x, double y) { return x * y; });
    std::vector<double> au(mesh.size());
    sd.op().apply(u, au);
    const auto f = sd.source(0.0);
    for (std::size_t r = 0; r < mesh.size(); ++r) EXPECT_NEAR(au[r] + f[r], 0.5, 1e-9);
}

TEST(ErrorNorm, ConstantDifference) {
    const Mesh2D mesh(15);
    const double h = mesh.h();
    Trajectory ones(3, std::vector<double>(mesh.size(), 1.0));
    Trajectory zeros(3, std::vector<double>(mesh.size(), 0.0));
    EXPECT_NEAR(error_norm(ones, zeros, h * h), h * std::sqrt(double(mesh.size())), 1e-14);
    EXPECT_EQ(error_norm(zeros, zeros, h * h), 0.0);
}

TEST(ErrorNorm, MatchesNaiveLoop) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-1, 1);
    Trajectory a(5, std::vector<double>(40)), b(5, std::vector<double>(40));
    for (auto& v : a) for (auto& x : v) x = u(rng);
    for (auto& v : b) for (auto& x : v) x = u(rng);
    const double w = 0.01;
    double worst = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < a[k].size(); ++i) s += (a[k][i] - b[k][i]) * (a[k][i] - b[k][i]);
        worst = std::max(worst, std::sqrt(w * s));
    }
    EXPECT_NEAR(error_norm(a, b, w), worst, 1e-14);
}

TEST(ErrorNorm, ShapeMismatchThrows) {
    Trajectory a(2, std::vector<double>(4)), b(3, std::vector<double>(4));
    EXPECT_THROW(error_norm(a, b, 1.0), std::invalid_argument);
}
