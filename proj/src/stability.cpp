#include <algorithm>
#include <cmath>
#include <limits>

#include "parasplit/analysis.hpp"
#include "parasplit/errors.hpp"

namespace parasplit {

const char* to_string(PropagatorPair pair) {
    switch (pair) {
        case PropagatorPair::fie_fie: return "FIE-FIE";
        case PropagatorPair::fie_dr: return "FIE-DR";
        case PropagatorPair::ie_ie: return "IE-IE";
    }
    return "FIE-FIE";
}

PropagatorPair parse_pair(const std::string& name) {
    if (name == "FIE-FIE" || name == "fie-fie") return PropagatorPair::fie_fie;
    if (name == "FIE-DR" || name == "fie-dr") return PropagatorPair::fie_dr;
    if (name == "IE-IE" || name == "ie-ie") return PropagatorPair::ie_ie;
    throw ConfigError("unknown propagator pair '" + name + "' (expected FIE-FIE, FIE-DR or IE-IE)");
}

double proved_bound(PropagatorPair pair) {
    return pair == PropagatorPair::fie_fie ? 1.0 / 3.0 : 1.0;
}

bool bound_is_strict(PropagatorPair pair) { return pair != PropagatorPair::fie_fie; }

namespace {

template <class T>
bool has_pole(std::span<const T> z, PropagatorPair pair) {
    if (pair == PropagatorPair::ie_ie) {
        T sum(0);
        for (const T& zj : z) sum += zj;
        return sum == T(1);
    }
    return std::any_of(z.begin(), z.end(), [](const T& zj) { return zj == T(1); });
}

/// K for scalar type T (real or complex); +inf when divergent.
template <class T>
double factor_impl(PropagatorPair pair, std::span<const T> z, int s) {
    using std::abs;
    std::vector<T> scaled(z.begin(), z.end());
    for (T& v : scaled) v /= T(s);
    if (has_pole(z, pair) || has_pole(std::span<const T>(scaled), pair)) {
        return std::numeric_limits<double>::infinity();
    }
    T coarse(0);
    T fine(0);
    switch (pair) {
        case PropagatorPair::fie_fie:
            coarse = r_fie<T>(z);
            fine = integer_power(r_fie<T>(scaled), s);
            break;
        case PropagatorPair::fie_dr:
            coarse = r_fie<T>(z);
            fine = integer_power(r_dr<T>(scaled), s);
            break;
        case PropagatorPair::ie_ie:
            coarse = r_ie<T>(z);
            fine = integer_power(r_ie<T>(scaled), s);
            break;
    }
    const auto denominator = 1 - abs(coarse);
    if (!(denominator > 0)) return std::numeric_limits<double>::infinity();
    return static_cast<double>(abs(fine - coarse) / denominator);
}

}  // namespace

ConvergenceFactorSample conv_factor(PropagatorPair pair, std::span<const std::complex<double>> z,
                                    int s) {
    if (s < 1) throw std::invalid_argument("fine step ratio s must be at least 1");
    ConvergenceFactorSample sample;
    sample.z.assign(z.begin(), z.end());
    sample.s = s;
    sample.pair = pair;

    double largest = 0.0;
    for (const auto& zj : z) largest = std::max(largest, std::abs(zj));
    if (largest / s > 1e6) {
        std::vector<std::complex<long double>> wide(z.begin(), z.end());
        sample.factor = factor_impl<std::complex<long double>>(pair, wide, s);
    } else {
        sample.factor = factor_impl<std::complex<double>>(pair, z, s);
    }
    sample.divergent = std::isinf(sample.factor);
    return sample;
}

double conv_factor_real(PropagatorPair pair, std::span<const double> z, int s) {
    if (s < 1) throw std::invalid_argument("fine step ratio s must be at least 1");
    double largest = 0.0;
    for (double zj : z) largest = std::max(largest, std::abs(zj));
    if (largest / s > 1e6) {
        std::vector<long double> wide(z.begin(), z.end());
        return factor_impl<long double>(pair, wide, s);
    }
    return factor_impl<double>(pair, z, s);
}

double h_fie(std::span<const double> z) {
    double product = 1.0;
    double sum = 0.0;
    for (double zj : z) {
        product *= 1.0 - zj;
        sum += zj;
    }
    return product * (3.0 * std::exp(sum) + 1.0);
}

double h_dr(std::span<const double> z) {
    double product = 1.0;
    double sum = 0.0;
    for (double zj : z) {
        product *= 1.0 - zj;
        sum += zj;
    }
    return product * (std::exp(sum) + 1.0);
}

ExpLimitReport exp_limit_check(StabilityScheme scheme, std::span<const double> z,
                               std::span<const int> s_ladder) {
    double sum = 0.0;
    for (double zj : z) {
        if (!(zj < 0.0)) throw std::domain_error("exp limit check needs z in the negative orthant");
        sum += zj;
    }
    auto power = [&](int s) {
        std::vector<double> scaled(z.begin(), z.end());
        for (double& v : scaled) v /= s;
        const double r = scheme == StabilityScheme::fie ? r_fie<double>(scaled) : r_dr<double>(scaled);
        return integer_power(r, s);
    };

    ExpLimitReport report;
    report.s_values.assign(s_ladder.begin(), s_ladder.end());
    report.strictly_decreasing = true;
    for (std::size_t k = 0; k < s_ladder.size(); ++k) {
        report.values.push_back(power(s_ladder[k]));
        if (k > 0 && !(report.values[k] < report.values[k - 1])) report.strictly_decreasing = false;
    }
    report.limit_value = power(1000000);
    report.exp_sum = std::exp(sum);
    report.pass = report.strictly_decreasing &&
                  std::abs(report.limit_value - report.exp_sum) <= 1e-6;
    return report;
}

}  // namespace parasplit
