#pragma once

#include <complex>
#include <cstdint>
#include <optional>

#include "anticorr/errors.hpp"

namespace anticorr {

/// Outcome probabilities of one elementary experiment: detector A fires (p),
/// detector B fires (q), or nothing is detected (r).
///
/// The three outcomes are mutually exclusive; a single photon never triggers
/// both detectors. r = 0 is accepted.
class DetectorModel {
  public:
    static constexpr double kSumTolerance = 1e-12;

    /// Validates 0 <= p, q, r <= 1 and |p + q + r - 1| <= 1e-12.
    DetectorModel(double p, double q, double r);

    /// r is taken as 1 - p - q, with |r| < 1e-12 snapped to 0.
    static DetectorModel from_pq(double p, double q);

    double p() const noexcept { return p_; }
    double q() const noexcept { return q_; }
    double r() const noexcept { return r_; }

    friend bool operator==(DetectorModel const&, DetectorModel const&) = default;

  private:
    double p_;
    double q_;
    double r_;
};

/// Realized detector counts: m A-detections and k B-detections.
struct CountPair {
    std::int64_t m = 0;
    std::int64_t k = 0;

    friend bool operator==(CountPair const&, CountPair const&) = default;
};

/// First and second order statistics of the count pair (xi, eta).
///
/// corr is absent whenever either variance vanishes; g2 is absent whenever
/// the product of the means vanishes.
struct MomentSummary {
    double mean_a = 0;
    double mean_b = 0;
    double var_a = 0;
    double var_b = 0;
    double cov = 0;
    std::optional<double> corr;
    std::optional<double> g2;
};

/// Builds a summary, deriving corr = cov / sqrt(var_a var_b) (clamped to
/// [-1, 1]) when both variances are positive.
MomentSummary make_summary(double mean_a, double mean_b, double var_a, double var_b,
                           double cov, std::optional<double> g2);

/// Largest field-wise discrepancy between two summaries, each field measured
/// on its natural scale: means and variances relative to their magnitude,
/// g2 relative to max(1, |g2|), cov relative to max(|cov|, sqrt(var_a var_b)),
/// corr absolutely. A field present in one summary and absent in the
/// other counts as an infinite discrepancy.
double max_relative_discrepancy(MomentSummary const& a, MomentSummary const& b);

/// Probability of m A-counts and k B-counts in n elementary experiments.
/// Evaluated in log space; zero when m + k > n.
double trinomial_pmf(DetectorModel const& det, std::int64_t n, std::int64_t m, std::int64_t k);

/// Same as trinomial_pmf but returns the natural log (-inf for impossible cells).
double trinomial_log_pmf(DetectorModel const& det, std::int64_t n, std::int64_t m,
                         std::int64_t k);

/// |x|, |y| may exceed 1 by at most this margin in generating-function calls.
inline constexpr double kGfArgumentMargin = 0.02;

/// (p x + q y + r)^n, the two-variable generating function of a length-n
/// sequence. Works for real and complex arguments.
template <class T>
T sequence_gf(DetectorModel const& det, std::int64_t n, T x, T y) {
    using std::abs;
    if (n < 0) {
        throw InvariantError("sequence_gf: n must be non-negative");
    }
    if (abs(x) > 1.0 + kGfArgumentMargin || abs(y) > 1.0 + kGfArgumentMargin) {
        throw InvariantError("sequence_gf: |x| and |y| must not exceed 1 + margin");
    }
    T z = det.p() * x + det.q() * y + T(det.r());
    T result(1.0);
    // binary powering keeps the result exact for small n
    for (std::int64_t e = n; e > 0; e >>= 1) {
        if (e & 1) {
            result *= z;
        }
        z *= z;
    }
    return result;
}

/// Closed-form statistics of a fixed-length sequence (n >= 1).
MomentSummary fixed_n_moments(DetectorModel const& det, std::int64_t n);

/// Brute-force summation over the full {(m, k) : m + k <= n} grid.
/// Guarded to n <= kEnumerationLimit.
inline constexpr std::int64_t kEnumerationLimit = 200;
MomentSummary enumerate_exact_moments(DetectorModel const& det, std::int64_t n);

} // namespace anticorr
