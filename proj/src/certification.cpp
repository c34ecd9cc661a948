#include <omp.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "parasplit/analysis.hpp"

namespace parasplit {

namespace {

constexpr double fie_fie_slack = 1e-12;
constexpr int max_terms = 8;

bool passes(PropagatorPair pair, double max_factor) {
    if (pair == PropagatorPair::fie_fie) return max_factor <= 1.0 / 3.0 + fie_fie_slack;
    return max_factor < 1.0 - fie_fie_slack;
}

std::vector<double> log_magnitudes(const CertificationGrid& grid) {
    if (grid.points_per_axis < 2) throw std::invalid_argument("certification grid needs >= 2 points per axis");
    if (!(grid.min_magnitude > 0.0) || !(grid.max_magnitude > grid.min_magnitude)) {
        throw std::invalid_argument("certification grid needs 0 < min magnitude < max magnitude");
    }
    const int n = grid.points_per_axis;
    const double lo = std::log(grid.min_magnitude);
    const double hi = std::log(grid.max_magnitude);
    std::vector<double> m(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) m[i] = std::exp(lo + (hi - lo) * i / (n - 1));
    m.front() = grid.min_magnitude;
    m.back() = grid.max_magnitude;
    return m;
}

// Per-s lookup tables over the magnitudes m (z = -m):
//   coarse[i] = 1 / (1 + m_i),  fine[i] = 1 / (1 + m_i / s).
struct Tables {
    int s = 1;
    bool extended = false;
    std::vector<double> coarse;
    std::vector<double> fine;
    std::vector<double> scaled;  // m_i / s
};

Tables make_tables(const std::vector<double>& m, int s) {
    Tables t;
    t.s = s;
    t.extended = m.back() / s > 1e6;
    t.coarse.resize(m.size());
    t.fine.resize(m.size());
    t.scaled.resize(m.size());
    for (std::size_t i = 0; i < m.size(); ++i) {
        t.coarse[i] = 1.0 / (1.0 + m[i]);
        t.scaled[i] = m[i] / s;
        t.fine[i] = 1.0 / (1.0 + t.scaled[i]);
    }
    return t;
}

double table_factor(PropagatorPair pair, const Tables& t, const std::vector<double>& m,
                    const int* idx, int terms) {
    if (t.extended) {
        std::array<double, max_terms> z{};
        for (int j = 0; j < terms; ++j) z[j] = -m[idx[j]];
        return conv_factor_real(pair, std::span<const double>(z.data(), terms), t.s);
    }
    double coarse = 1.0;
    double fine = 1.0;
    double scaled_sum = 0.0;
    for (int j = 0; j < terms; ++j) {
        coarse *= t.coarse[idx[j]];
        fine *= t.fine[idx[j]];
        scaled_sum += t.scaled[idx[j]];
    }
    double sum = 0.0;
    for (int j = 0; j < terms; ++j) sum += m[idx[j]];
    if (pair == PropagatorPair::ie_ie) {
        coarse = 1.0 / (1.0 + sum);
        fine = 1.0 / (1.0 + scaled_sum);
    } else if (pair == PropagatorPair::fie_dr) {
        fine = 1.0 - fine * scaled_sum;
    }
    const double power = integer_power(fine, t.s);
    return std::abs(power - coarse) / (1.0 - std::abs(coarse));
}

struct Best {
    double factor = -1.0;
    std::array<int, max_terms> idx{};
    int s = 0;
};

void consider(Best& best, double k, const int* idx, int terms, int s) {
    // NaN is treated as a violation so that it can never hide behind a max.
    if (std::isnan(k)) k = std::numeric_limits<double>::infinity();
    if (k > best.factor) {
        best.factor = k;
        std::copy(idx, idx + terms, best.idx.begin());
        best.s = s;
    }
}

// Visits ordered tuples i_0 <= i_1 <= ... with the leading index fixed.
template <class Visit>
void ordered_tuples(int leading, int terms, int n, Visit&& visit) {
    std::array<int, max_terms> idx{};
    idx[0] = leading;
    if (terms == 1) {
        visit(idx.data());
        return;
    }
    for (int j = 1; j < terms; ++j) idx[j] = leading;
    while (true) {
        visit(idx.data());
        int pos = terms - 1;
        while (pos >= 1 && idx[pos] == n - 1) --pos;
        if (pos < 1) return;
        ++idx[pos];
        for (int j = pos + 1; j < terms; ++j) idx[j] = idx[pos];
    }
}

}  // namespace

CertificationReport certify_bound(PropagatorPair pair, const CertificationGrid& grid,
                                  std::span<const int> s_values, Execution exec) {
    if (grid.terms < 1 || grid.terms > max_terms) {
        throw std::invalid_argument("certification supports 1 to 8 splitting terms");
    }
    for (int s : s_values) {
        if (s < 1) throw std::invalid_argument("fine step ratio s must be at least 1");
    }
    const double start = omp_get_wtime();
    const auto m = log_magnitudes(grid);
    const int n = grid.points_per_axis;
    const int terms = grid.terms;

    std::vector<Tables> tables;
    for (int s : s_values) tables.push_back(make_tables(m, s));

    // One slot per leading index keeps the reduction order fixed.
    std::vector<Best> per_leading(static_cast<std::size_t>(n));
    std::vector<std::size_t> counts(static_cast<std::size_t>(n), 0);
#pragma omp parallel for schedule(dynamic, 4) if (exec == Execution::parallel)
    for (int i = 0; i < n; ++i) {
        Best best;
        std::size_t count = 0;
        ordered_tuples(i, terms, n, [&](const int* idx) {
            for (const auto& t : tables) {
                consider(best, table_factor(pair, t, m, idx, terms), idx, terms, t.s);
                ++count;
            }
        });
        per_leading[i] = best;
        counts[i] = count;
    }

    Best overall;
    std::size_t samples = 0;
    for (int i = 0; i < n; ++i) {
        if (per_leading[i].factor > overall.factor) overall = per_leading[i];
        samples += counts[i];
    }

    CertificationReport report;
    report.pair = pair;
    report.terms = terms;
    report.max_factor = overall.factor;
    report.argmax_s = overall.s;
    for (int j = 0; j < terms; ++j) report.argmax.push_back(-m[overall.idx[j]]);
    report.samples = samples;
    report.pass = passes(pair, overall.factor);
    report.seconds = omp_get_wtime() - start;
    return report;
}

CertificationReport certify_points(PropagatorPair pair,
                                   const std::vector<std::vector<double>>& points,
                                   std::span<const int> s_values) {
    for (const auto& z : points) {
        for (double zj : z) {
            if (!(zj < 0.0)) {
                throw std::domain_error("certification samples must lie in the open negative orthant");
            }
        }
    }
    const double start = omp_get_wtime();
    CertificationReport report;
    report.pair = pair;
    report.terms = points.empty() ? 0 : static_cast<int>(points.front().size());
    report.max_factor = -1.0;
    for (const auto& z : points) {
        for (int s : s_values) {
            double k = conv_factor_real(pair, z, s);
            if (std::isnan(k)) k = std::numeric_limits<double>::infinity();
            ++report.samples;
            if (k > report.max_factor) {
                report.max_factor = k;
                report.argmax = z;
                report.argmax_s = s;
            }
        }
    }
    report.pass = passes(pair, report.max_factor);
    report.seconds = omp_get_wtime() - start;
    return report;
}

namespace {

template <class H, class Check>
ProofFunctionSweep sweep_box(int terms, int points_per_axis, double lower, H&& h, Check&& ok) {
    if (terms < 1 || terms > max_terms) throw std::invalid_argument("sweep supports 1 to 8 terms");
    if (points_per_axis < 2) throw std::invalid_argument("sweep needs >= 2 points per axis");
    const int n = points_per_axis;
    std::vector<double> axis(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) axis[i] = lower + (0.0 - lower) * i / (n - 1);
    axis.back() = 0.0;

    ProofFunctionSweep out;
    out.minimum = std::numeric_limits<double>::infinity();
    out.maximum = -std::numeric_limits<double>::infinity();
    out.bound_respected = true;
    std::vector<int> idx(static_cast<std::size_t>(terms), 0);
    std::vector<double> z(static_cast<std::size_t>(terms));
    while (true) {
        for (int j = 0; j < terms; ++j) z[j] = axis[idx[j]];
        const double v = h(std::span<const double>(z));
        ++out.samples;
        if (v < out.minimum) {
            out.minimum = v;
            out.argmin = z;
        }
        if (v > out.maximum) {
            out.maximum = v;
            out.argmax = z;
        }
        if (!ok(z, v)) out.bound_respected = false;
        int pos = terms - 1;
        while (pos >= 0 && idx[pos] == n - 1) idx[pos--] = 0;
        if (pos < 0) break;
        ++idx[pos];
    }
    return out;
}

}  // namespace

ProofFunctionSweep sweep_h_fie(int terms, int points_per_axis) {
    return sweep_box(terms, points_per_axis, -3.0, h_fie,
                     [](const std::vector<double>&, double v) { return v >= 4.0; });
}

ProofFunctionSweep sweep_h_dr(int terms, int points_per_axis) {
    return sweep_box(terms, points_per_axis, -1.0, h_dr, [](const std::vector<double>& z, double v) {
        const bool origin = std::all_of(z.begin(), z.end(), [](double x) { return x == 0.0; });
        return origin ? v == 2.0 : v > 2.0;
    });
}

}  // namespace parasplit
