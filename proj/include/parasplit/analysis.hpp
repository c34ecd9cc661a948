#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "parasplit/execution.hpp"

namespace parasplit {

/// Coarse/fine propagator combination of a parareal method.
enum class PropagatorPair { fie_fie, fie_dr, ie_ie };

const char* to_string(PropagatorPair pair);
PropagatorPair parse_pair(const std::string& name);

namespace detail {

template <class T>
void check_poles(std::span<const T> z) {
    for (const T& zj : z) {
        if (zj == T(1)) throw std::domain_error("stability function has a pole at z_j = 1");
    }
}

template <class T>
T inverse_product(std::span<const T> z) {
    T p(1);
    for (const T& zj : z) p /= T(1) - zj;
    return p;
}

}  // namespace detail

/// Fractional implicit Euler: prod_j 1 / (1 - z_j).
template <class T>
T r_fie(std::span<const T> z) {
    detail::check_poles(z);
    return detail::inverse_product(z);
}

/// Douglas-Rachford: 1 + (prod_j 1 / (1 - z_j)) * sum_j z_j.
template <class T>
T r_dr(std::span<const T> z) {
    detail::check_poles(z);
    T sum(0);
    for (const T& zj : z) sum += zj;
    return T(1) + detail::inverse_product(z) * sum;
}

/// Unsplit implicit Euler applied to the summed eigenvalue: 1 / (1 - sum_j z_j).
template <class T>
T r_ie(std::span<const T> z) {
    T sum(0);
    for (const T& zj : z) sum += zj;
    if (sum == T(1)) throw std::domain_error("stability function has a pole at sum z_j = 1");
    return T(1) / (T(1) - sum);
}

/// base^s by repeated squaring.
template <class T>
T integer_power(T base, int s) {
    T result(1);
    while (s > 0) {
        if (s & 1) result *= base;
        base *= base;
        s >>= 1;
    }
    return result;
}

/// Partitioned-Dahlquist sample of the parareal convergence factor
///   K = |R_F(z/s)^s - R_G(z)| / (1 - |R_G(z)|).
struct ConvergenceFactorSample {
    std::vector<std::complex<double>> z;
    int s = 1;
    PropagatorPair pair = PropagatorPair::fie_fie;
    /// +inf when the coarse propagator is not contractive (|R_G| >= 1).
    double factor = 0.0;
    bool divergent = false;
};

/// Evaluated in extended precision when max |z_j| / s > 1e6.
ConvergenceFactorSample conv_factor(PropagatorPair pair, std::span<const std::complex<double>> z,
                                    int s);

/// Real-argument fast path; returns +inf where the sample is divergent.
double conv_factor_real(PropagatorPair pair, std::span<const double> z, int s);

/// Largest K allowed by the bound proved for a pair: 1/3 (FIE-FIE, attained
/// inclusive) or 1 (FIE-DR and IE-IE, strict).
double proved_bound(PropagatorPair pair);
bool bound_is_strict(PropagatorPair pair);

struct CertificationGrid {
    int terms = 2;
    int points_per_axis = 10000;
    double min_magnitude = 1e-6;
    double max_magnitude = 1e6;
};

struct CertificationReport {
    PropagatorPair pair = PropagatorPair::fie_fie;
    int terms = 2;
    double max_factor = 0.0;
    std::vector<double> argmax;
    int argmax_s = 0;
    std::size_t samples = 0;
    bool pass = false;
    double seconds = 0.0;
};

/// Evaluates K on every point of a log-spaced grid over [-max, -min]^M for each
/// s. K is symmetric in z, so only ordered tuples z_1 <= ... <= z_M are visited.
/// Passes iff max K <= 1/3 + 1e-12 (FIE-FIE) or max K < 1 - 1e-12 (otherwise).
CertificationReport certify_bound(PropagatorPair pair, const CertificationGrid& grid,
                                  std::span<const int> s_values,
                                  Execution exec = Execution::parallel);

/// Same check on explicit points. Throws std::domain_error unless every
/// coordinate is strictly negative.
CertificationReport certify_points(PropagatorPair pair,
                                   const std::vector<std::vector<double>>& points,
                                   std::span<const int> s_values);

/// (prod_j (1 - z_j)) (3 e^{sum z} + 1); >= 4 on [-3, 0]^M.
double h_fie(std::span<const double> z);
/// (prod_j (1 - z_j)) (e^{sum z} + 1); > 2 on [-1, 0]^M without the origin.
double h_dr(std::span<const double> z);

struct ProofFunctionSweep {
    double minimum = 0.0;
    std::vector<double> argmin;
    double maximum = 0.0;
    std::vector<double> argmax;
    std::size_t samples = 0;
    /// h_fie >= 4 everywhere, or h_dr > 2 away from the origin and == 2 at it.
    bool bound_respected = false;
};

/// Uniform grid with `points_per_axis` points per axis over [-3, 0]^M (FIE)
/// or [-1, 0]^M (DR), endpoints included.
ProofFunctionSweep sweep_h_fie(int terms, int points_per_axis);
ProofFunctionSweep sweep_h_dr(int terms, int points_per_axis);

enum class StabilityScheme { fie, dr };

struct ExpLimitReport {
    std::vector<int> s_values;
    std::vector<double> values;  // R(z/s)^s
    bool strictly_decreasing = false;
    double limit_value = 0.0;    // at s = 10^6
    double exp_sum = 0.0;        // e^{sum z}
    bool pass = false;
};

/// Checks R(z/s)^s decreases along the ladder and reaches e^{sum z} within
/// 1e-6 at s = 10^6. Requires z in the open negative orthant.
ExpLimitReport exp_limit_check(StabilityScheme scheme, std::span<const double> z,
                               std::span<const int> s_ladder);

}  // namespace parasplit
