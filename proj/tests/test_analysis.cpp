#include <cmath>
#include <complex>
#include <random>
#include <sstream>
#include <vector>

#include <gtest/gtest.h>

#include "parasplit/analysis.hpp"
#include "parasplit/errors.hpp"
#include "parasplit/region_scan.hpp"

using namespace parasplit;
using cd = std::complex<double>;

TEST(StabilityFunction, FieValues) {
    const std::vector<double> zero{0, 0}, minus_one{-1, -1};
    EXPECT_EQ(r_fie<double>(zero), 1.0);
    EXPECT_DOUBLE_EQ(r_fie<double>(minus_one), 0.25);
    const std::vector<cd> complex_z{{0, 1}, {0, 1}};
    EXPECT_NEAR(std::abs(r_fie<cd>(complex_z)), 0.5, 1e-15);
}

TEST(StabilityFunction, DrValues) {
    const std::vector<double> minus_one{-1, -1};
    EXPECT_DOUBLE_EQ(r_dr<double>(minus_one), 0.5);
    for (double z : {-0.3, -7.0, -1e4}) {
        const std::vector<double> pair{z, 0.0};
        EXPECT_NEAR(r_dr<double>(pair), 1.0 / (1.0 - z), 1e-15);
    }
}

TEST(StabilityFunction, DrNotLStable) {
    // 1 + 2z/(1-z)^2 at z = -1e8 in extended precision.
    const long double z = -1e8L;
    const long double oracle = 1.0L + 2.0L * z / ((1.0L - z) * (1.0L - z));
    const std::vector<double> big{-1e8, -1e8};
    const double value = r_dr<double>(big);
    EXPECT_NEAR(value, static_cast<double>(oracle), 1e-15);
    EXPECT_GT(std::abs(value), 1.0 - 3e-8);
    EXPECT_LT(std::abs(value), 1.0 - 1e-8);
}

TEST(StabilityFunction, IeValue) {
    const std::vector<double> z{-0.5, -0.5};
    EXPECT_DOUBLE_EQ(r_ie<double>(z), 0.5);
}

TEST(StabilityFunction, PolesRejected) {
    const std::vector<double> pole{1.0, -1.0};
    EXPECT_THROW(r_fie<double>(pole), std::domain_error);
    EXPECT_THROW(r_dr<double>(pole), std::domain_error);
}

TEST(StabilityFunction, FieStrictlyBetweenZeroAndOne) {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> u(-12, 12);
    for (int k = 0; k < 5000; ++k) {
        const std::vector<double> z{-std::pow(10.0, u(rng)), -std::pow(10.0, u(rng))};
        const double r = r_fie<double>(z);
        ASSERT_GT(r, 0.0);
        ASSERT_LT(r, 1.0);
    }
}

TEST(IntegerPower, MatchesPow) {
    EXPECT_EQ(integer_power(2.0, 10), 1024.0);
    EXPECT_EQ(integer_power(0.8, 0), 1.0);
    EXPECT_NEAR(integer_power(0.99, 1000), std::pow(0.99, 1000), 1e-15);
}

TEST(ConvFactor, IdenticalPropagatorsGiveZero) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-100, 0);
    for (int k = 0; k < 100; ++k) {
        const std::vector<double> z{u(rng), u(rng)};
        EXPECT_EQ(conv_factor_real(PropagatorPair::fie_fie, z, 1), 0.0);
        EXPECT_EQ(conv_factor_real(PropagatorPair::ie_ie, z, 1), 0.0);
    }
}

TEST(ConvFactor, ReferenceValues) {
    const std::vector<double> a{-1, -1};
    EXPECT_LE(conv_factor_real(PropagatorPair::fie_fie, a, 1000), 1.0 / 3);
    const std::vector<double> b{-1e4, -1e4};
    const double k = conv_factor_real(PropagatorPair::fie_dr, b, 20);
    EXPECT_GT(k, 0.9);
    EXPECT_LT(k, 1.0);
}

TEST(ConvFactor, MatchesDirectFormula) {
    // |R_F(z/s)^s - R_G(z)| / (1 - |R_G(z)|) written out for two terms.
    const double z1 = -2.5, z2 = -0.75;
    const int s = 7;
    const double rg = 1.0 / ((1 - z1) * (1 - z2));
    const double a = z1 / s, b = z2 / s;
    const double rf = 1.0 + (a + b) / ((1 - a) * (1 - b));
    const double expected = std::abs(std::pow(rf, s) - rg) / (1 - rg);
    const std::vector<double> z{z1, z2};
    EXPECT_NEAR(conv_factor_real(PropagatorPair::fie_dr, z, s), expected, 1e-14);
    const std::vector<cd> zc{z1, z2};
    const auto sample = conv_factor(PropagatorPair::fie_dr, zc, s);
    EXPECT_NEAR(sample.factor, expected, 1e-14);
    EXPECT_FALSE(sample.divergent);
}

TEST(ConvFactor, DivergentWhenCoarseNotContractive) {
    const std::vector<cd> z{{0.5, 0}, {0.5, 0}};
    const auto sample = conv_factor(PropagatorPair::fie_fie, z, 2);
    EXPECT_TRUE(sample.divergent);
    EXPECT_TRUE(std::isinf(sample.factor));
    const std::vector<double> origin{0.0, 0.0};
    EXPECT_TRUE(std::isinf(conv_factor_real(PropagatorPair::fie_dr, origin, 4)));
}

TEST(ConvFactor, ExtendedPrecisionPathAgrees) {
    // Just below and above the switch to extended precision.
    const std::vector<double> lo{-0.99e6, -0.99e6}, hi{-1.01e6, -1.01e6};
    const double klo = conv_factor_real(PropagatorPair::fie_dr, lo, 1);
    const double khi = conv_factor_real(PropagatorPair::fie_dr, hi, 1);
    EXPECT_LT(klo, 1.0);
    EXPECT_LT(khi, 1.0);
    EXPECT_NEAR(klo, khi, 1e-7);
}

TEST(Certification, SmallGridsPass) {
    const std::vector<int> s{1, 2, 10, 20, 1000};
    for (auto pair : {PropagatorPair::fie_fie, PropagatorPair::fie_dr}) {
        const auto m2 = certify_bound(pair, {2, 200, 1e-6, 1e6}, s);
        EXPECT_TRUE(m2.pass) << to_string(pair) << " max " << m2.max_factor;
        EXPECT_EQ(m2.samples, s.size() * 200u * 201u / 2u);
        const auto m3 = certify_bound(pair, {3, 40, 1e-6, 1e6}, s);
        EXPECT_TRUE(m3.pass) << to_string(pair) << " max " << m3.max_factor;
    }
}

TEST(Certification, FieFieBoundIsNearlyAttained) {
    const std::vector<int> s{1000};
    const auto report = certify_bound(PropagatorPair::fie_fie, {2, 400, 1e-3, 1e3}, s);
    EXPECT_LE(report.max_factor, 1.0 / 3 + 1e-12);
    EXPECT_GT(report.max_factor, 0.25);
    ASSERT_EQ(report.argmax.size(), 2u);
    EXPECT_EQ(report.argmax_s, 1000);
}

TEST(Certification, SerialAndParallelAgree) {
    const std::vector<int> s{2, 20};
    const auto a = certify_bound(PropagatorPair::fie_dr, {2, 150, 1e-6, 1e6}, s, Execution::serial);
    const auto b = certify_bound(PropagatorPair::fie_dr, {2, 150, 1e-6, 1e6}, s, Execution::parallel);
    EXPECT_EQ(a.max_factor, b.max_factor);
    EXPECT_EQ(a.argmax, b.argmax);
}

TEST(Certification, PositiveArgumentRejected) {
    const std::vector<int> s{2};
    EXPECT_THROW(certify_points(PropagatorPair::fie_fie, {{-1.0, -2.0}, {0.5, -1.0}}, s),
                 std::domain_error);
    EXPECT_THROW(certify_points(PropagatorPair::fie_fie, {{0.0, -1.0}}, s), std::domain_error);
    const auto ok = certify_points(PropagatorPair::fie_fie, {{-1.0, -2.0}}, s);
    EXPECT_TRUE(ok.pass);
    EXPECT_EQ(ok.samples, 1u);
}

TEST(ProofFunctions, SpotValues) {
    const std::vector<double> origin{0, 0}, fie_corner{-3, -3}, dr_corner{-1, -1};
    EXPECT_EQ(h_fie(origin), 4.0);
    EXPECT_NEAR(h_fie(fie_corner) / (16 * (1 + 3 / std::exp(6.0))), 1.0, 1e-12);
    EXPECT_EQ(h_dr(origin), 2.0);
    EXPECT_NEAR(h_dr(dr_corner) / (4 * (1 + 1 / std::exp(2.0))), 1.0, 1e-12);
}

TEST(ProofFunctions, SweepsRespectBounds) {
    const auto fie = sweep_h_fie(2, 301);
    EXPECT_TRUE(fie.bound_respected);
    EXPECT_NEAR(fie.minimum, 4.0, 1e-9);
    EXPECT_EQ(fie.argmin, (std::vector<double>{0.0, 0.0}));
    EXPECT_EQ(fie.samples, 301u * 301u);
    const auto dr = sweep_h_dr(2, 101);
    EXPECT_TRUE(dr.bound_respected);
    EXPECT_EQ(dr.minimum, 2.0);
    EXPECT_TRUE(sweep_h_fie(3, 31).bound_respected);
    EXPECT_TRUE(sweep_h_dr(3, 31).bound_respected);
}

TEST(ExpLimit, FieAndDrApproachExponential) {
    std::vector<int> ladder;
    for (int p = 0; p <= 15; ++p) ladder.push_back(1 << p);
    const std::vector<double> z{-1, -1};
    for (auto scheme : {StabilityScheme::fie, StabilityScheme::dr}) {
        const auto report = exp_limit_check(scheme, z, ladder);
        EXPECT_TRUE(report.strictly_decreasing);
        EXPECT_TRUE(report.pass);
        EXPECT_NEAR(report.exp_sum, 0.135335283236613, 1e-14);
        EXPECT_NEAR(report.limit_value, std::exp(-2.0), 1e-6);
    }
}

TEST(ExpLimit, SmallArgumentSingleStep) {
    const std::vector<int> ladder{1};
    const std::vector<double> z{-0.01, -0.01};
    const auto report = exp_limit_check(StabilityScheme::fie, z, ladder);
    ASSERT_EQ(report.values.size(), 1u);
    EXPECT_NEAR(report.values[0], std::exp(-0.02), 2e-4);
}

TEST(RegionScan, CellsCoverRectangle) {
    const Rectangle rect = small_region();
    EXPECT_EQ(rect.re_min, -1.0);
    EXPECT_EQ(rect.re_max, 0.0);
    EXPECT_EQ(rect.im_min, -20.0);
    EXPECT_EQ(rect.im_max, 20.0);
    const auto large = large_region();
    EXPECT_EQ(large.re_min, -2.5e7);
    EXPECT_EQ(large.im_max, 1e7);
    const auto scan = scan_region(PropagatorPair::fie_dr, rect, 40, 80, 20);
    ASSERT_EQ(scan.factor.size(), 40u * 80u);
    const double dx = 1.0 / 40, dy = 40.0 / 80;
    EXPECT_NEAR(scan.re(0) - dx / 2, rect.re_min, 1e-15);
    EXPECT_NEAR(scan.re(39) + dx / 2, rect.re_max, 1e-15);
    EXPECT_NEAR(scan.im(0) - dy / 2, rect.im_min, 1e-13);
    EXPECT_NEAR(scan.im(79) + dy / 2, rect.im_max, 1e-13);
    const std::vector<cd> z{{scan.re(3), scan.im(5)}, {scan.re(3), scan.im(5)}};
    EXPECT_EQ(scan.at(3, 5), conv_factor(PropagatorPair::fie_dr, z, 20).factor);
}

TEST(RegionScan, FactorVanishesNearOrigin) {
    for (auto pair : {PropagatorPair::fie_fie, PropagatorPair::fie_dr}) {
        const auto scan = scan_region(pair, {-1e-3, 0, -1e-3, 1e-3}, 10, 10, 20);
        EXPECT_LT(scan.at(9, 5), 1e-2);
        EXPECT_LT(scan.at(9, 4), 1e-2);
    }
}

TEST(RegionScan, ContourSeparatesRegions) {
    const auto scan = scan_region(PropagatorPair::fie_dr, small_region(), 60, 60, 1000);
    bool inside = false, outside = false;
    for (double k : scan.factor) (k < 1.0 ? inside : outside) = true;
    EXPECT_TRUE(inside);
    EXPECT_TRUE(outside);
    EXPECT_FALSE(scan.contour.empty());
    for (const auto& seg : scan.contour) {
        EXPECT_GE(seg.x0, small_region().re_min);
        EXPECT_LE(seg.x0, small_region().re_max);
    }
}

TEST(RegionScan, SerialAndParallelAgree) {
    const auto a = scan_region(PropagatorPair::fie_fie, small_region(), 30, 30, 20, 2, Execution::serial);
    const auto b = scan_region(PropagatorPair::fie_fie, small_region(), 30, 30, 20, 2, Execution::parallel);
    EXPECT_EQ(a.factor, b.factor);
}

TEST(RealAxisSlice, ShapesOfBothPairs) {
    const std::vector<int> s{20, 1000};
    const auto fie = real_axis_slice(PropagatorPair::fie_fie, 1e-3, 1e7, 200, s);
    for (const auto& row : fie) EXPECT_LE(row.factor, 1.0 / 3 + 1e-12);
    const auto dr = real_axis_slice(PropagatorPair::fie_dr, 1e-3, 1e7, 200, s);
    double tail = 0.0;
    for (const auto& row : dr) {
        EXPECT_LT(row.factor, 1.0);
        if (row.z <= -1e6) tail = std::max(tail, row.factor);
    }
    EXPECT_GT(tail, 0.99);
}

TEST(RealAxisSlice, NearZeroIntervalGrowsWithS) {
    const std::vector<int> s{20, 1000};
    const auto rows = real_axis_slice(PropagatorPair::fie_dr, 1e-3, 1e6, 400, s);
    const auto fine = near_zero_interval(rows, 1000, 0.01);
    const auto coarse = near_zero_interval(rows, 20, 0.01);
    EXPECT_GT(fine.decades(), coarse.decades());
    EXPECT_GT(fine.hi, 100 * coarse.hi);
    EXPECT_LT(near_zero_interval(rows, 20, 1e-9).decades(), coarse.decades());
}

TEST(RegionScan, CsvLayout) {
    const auto scan = scan_region(PropagatorPair::fie_fie, small_region(), 3, 2, 20);
    std::ostringstream out;
    write_scan_csv(out, scan);
    std::istringstream in(out.str());
    std::string line;
    std::getline(in, line);
    EXPECT_EQ(line, "re,im,K");
    int rows = 0;
    while (std::getline(in, line)) ++rows;
    EXPECT_EQ(rows, 6);
}

TEST(PairNames, RoundTrip) {
    for (auto pair : {PropagatorPair::fie_fie, PropagatorPair::fie_dr, PropagatorPair::ie_ie}) {
        EXPECT_EQ(parse_pair(to_string(pair)), pair);
    }
    EXPECT_THROW(parse_pair("DR-DR"), ConfigError);
    EXPECT_EQ(proved_bound(PropagatorPair::fie_fie), 1.0 / 3);
    EXPECT_FALSE(bound_is_strict(PropagatorPair::fie_fie));
    EXPECT_TRUE(bound_is_strict(PropagatorPair::fie_dr));
}
