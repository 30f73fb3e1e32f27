#pragma once

#include <cstdint>

namespace anticorr {

/// log|H_n(x)| together with the sign of H_n(x) (physicists' Hermite
/// polynomials). sign == 0 means H_n(x) == 0 and log_magnitude == -inf.
struct HermiteLog {
    double log_magnitude;
    int sign;
};

/// Walks H_0(x), H_1(x), ... through the three-term recurrence
/// H_{n+1} = 2x H_n - 2n H_{n-1}, carrying a running log scale so that
/// degrees in the thousands neither overflow nor underflow.
class HermiteRecurrence {
  public:
    explicit HermiteRecurrence(double x) noexcept;

    std::int64_t degree() const noexcept { return degree_; }
    HermiteLog value() const noexcept;

    /// Moves to degree() + 1.
    void advance() noexcept;

  private:
    double x_;
    double prev_;  // H_{degree-1} / exp(log_scale_)
    double cur_;   // H_{degree} / exp(log_scale_)
    double log_scale_ = 0.0;
    std::int64_t degree_ = 0;
};

HermiteLog hermite_log(std::int64_t n, double x);

struct MehlerResult {
    double partial_sum;
    double closed_form;
    std::int64_t terms_used;
};

/// Sums t^n H_n(alpha)^2 / (2^n n!) and compares it with the closed form
/// (1 - t^2)^{-1/2} exp(2 alpha^2 t / (1 + t)).
///
/// Summation stops once the remaining tail, bounded through Cramer's
/// inequality |H_n(x)| <= 1.086435 sqrt(2^n n!) exp(x^2/2), drops below
/// tol * |closed_form| / 10. Requires |t| <= 0.95; throws NumericError after
/// kMehlerMaxTerms terms.
inline constexpr std::int64_t kMehlerMaxTerms = 100000;
MehlerResult mehler_check(double alpha, double t, double tol);

} // namespace anticorr
