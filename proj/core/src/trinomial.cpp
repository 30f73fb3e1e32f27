#include "anticorr/trinomial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace anticorr {

namespace {

bool is_probability(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

// m * log(prob) with the convention 0 * log(0) = 0
double count_log_weight(std::int64_t m, double prob) {
    if (m == 0) {
        return 0.0;
    }
    if (prob == 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    return static_cast<double>(m) * std::log(prob);
}

double log_factorial(std::int64_t n) { return std::lgamma(static_cast<double>(n) + 1.0); }

} // namespace

DetectorModel::DetectorModel(double p, double q, double r) : p_(p), q_(q), r_(r) {
    if (!is_probability(p) || !is_probability(q) || !is_probability(r)) {
        throw InvariantError("DetectorModel: p, q, r must each lie in [0, 1] (got p=" +
                             std::to_string(p) + ", q=" + std::to_string(q) +
                             ", r=" + std::to_string(r) + ")");
    }
    if (std::abs(p + q + r - 1.0) > kSumTolerance) {
        throw InvariantError("DetectorModel: p + q + r must equal 1 (got " +
                             std::to_string(p + q + r) + ")");
    }
}

DetectorModel DetectorModel::from_pq(double p, double q) {
    double r = 1.0 - p - q;
    // absorb last-ulp noise such as 1 - 0.7 - 0.3 = 5.6e-17
    if (std::abs(r) < kSumTolerance) {
        r = 0.0;
    }
    return DetectorModel(p, q, r);
}

MomentSummary make_summary(double mean_a, double mean_b, double var_a, double var_b,
                           double cov, std::optional<double> g2) {
    MomentSummary s;
    s.mean_a = mean_a;
    s.mean_b = mean_b;
    s.var_a = std::max(var_a, 0.0);
    s.var_b = std::max(var_b, 0.0);
    s.cov = cov;
    if (s.var_a > 0.0 && s.var_b > 0.0) {
        s.corr = std::clamp(cov / std::sqrt(s.var_a * s.var_b), -1.0, 1.0);
    }
    s.g2 = g2;
    return s;
}

namespace {

double scaled_gap(double a, double b, double scale) {
    double const gap = std::abs(a - b);
    if (gap == 0.0) {
        return 0.0;
    }
    return scale > 0.0 ? gap / scale : std::numeric_limits<double>::infinity();
}

double optional_gap(std::optional<double> const& a, std::optional<double> const& b,
                    double floor) {
    if (a.has_value() != b.has_value()) {
        return std::numeric_limits<double>::infinity();
    }
    if (!a) {
        return 0.0;
    }
    return scaled_gap(*a, *b, std::max({floor, std::abs(*a), std::abs(*b)}));
}

} // namespace

double max_relative_discrepancy(MomentSummary const& a, MomentSummary const& b) {
    auto rel = [](double x, double y) { return scaled_gap(x, y, std::max(std::abs(x), std::abs(y))); };
    double const cov_scale = std::max({std::abs(a.cov), std::abs(b.cov),
                                       std::sqrt(std::max(a.var_a * a.var_b, 0.0))});
    return std::max({rel(a.mean_a, b.mean_a), rel(a.mean_b, b.mean_b), rel(a.var_a, b.var_a),
                     rel(a.var_b, b.var_b), scaled_gap(a.cov, b.cov, cov_scale),
                     optional_gap(a.corr, b.corr, 1.0), optional_gap(a.g2, b.g2, 1.0)});
}

double trinomial_log_pmf(DetectorModel const& det, std::int64_t n, std::int64_t m,
                         std::int64_t k) {
    if (n < 0 || m < 0 || k < 0) {
        throw InvariantError("trinomial_pmf: n, m, k must be non-negative");
    }
    if (m + k > n) {
        return -std::numeric_limits<double>::infinity();
    }
    std::int64_t const rest = n - m - k;
    return log_factorial(n) - log_factorial(m) - log_factorial(k) - log_factorial(rest) +
           count_log_weight(m, det.p()) + count_log_weight(k, det.q()) +
           count_log_weight(rest, det.r());
}

double trinomial_pmf(DetectorModel const& det, std::int64_t n, std::int64_t m, std::int64_t k) {
    return std::exp(trinomial_log_pmf(det, n, m, k));
}

MomentSummary fixed_n_moments(DetectorModel const& det, std::int64_t n) {
    if (n < 1) {
        throw InvariantError("fixed_n_moments: n must be >= 1");
    }
    double const nn = static_cast<double>(n);
    double const p = det.p();
    double const q = det.q();

    MomentSummary s;
    s.mean_a = nn * p;
    s.mean_b = nn * q;
    s.var_a = nn * p * (1.0 - p);
    s.var_b = nn * q * (1.0 - q);
    s.cov = -nn * p * q;
    if (s.var_a > 0.0 && s.var_b > 0.0) {
        // independent of n
        s.corr = -std::sqrt(p * q / ((1.0 - p) * (1.0 - q)));
    }
    if (p * q > 0.0) {
        s.g2 = 1.0 - 1.0 / nn;
    }
    return s;
}

MomentSummary enumerate_exact_moments(DetectorModel const& det, std::int64_t n) {
    if (n < 0 || n > kEnumerationLimit) {
        throw InvariantError("enumerate_exact_moments: n must lie in [0, " +
                             std::to_string(kEnumerationLimit) + "]");
    }
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>((n + 1) * (n + 2) / 2));
    double mean_a = 0.0;
    double mean_b = 0.0;
    for (std::int64_t m = 0; m <= n; ++m) {
        for (std::int64_t k = 0; m + k <= n; ++k) {
            double const w = trinomial_pmf(det, n, m, k);
            grid.push_back(w);
            mean_a += w * static_cast<double>(m);
            mean_b += w * static_cast<double>(k);
        }
    }

    double var_a = 0.0;
    double var_b = 0.0;
    double cov = 0.0;
    std::size_t idx = 0;
    for (std::int64_t m = 0; m <= n; ++m) {
        for (std::int64_t k = 0; m + k <= n; ++k) {
            double const w = grid[idx++];
            double const da = static_cast<double>(m) - mean_a;
            double const db = static_cast<double>(k) - mean_b;
            var_a += w * da * da;
            var_b += w * db * db;
            cov += w * da * db;
        }
    }

    std::optional<double> g2;
    if (mean_a * mean_b > 0.0) {
        g2 = (cov + mean_a * mean_b) / (mean_a * mean_b);
    }
    return make_summary(mean_a, mean_b, var_a, var_b, cov, g2);
}

} // namespace anticorr
