#include "anticorr/hermite.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "anticorr/errors.hpp"

namespace anticorr {

namespace {

constexpr double kRescaleHigh = 1e150;
constexpr double kRescaleLow = 1e-150;
constexpr double kCramerConstant = 1.086435;

} // namespace

HermiteRecurrence::HermiteRecurrence(double x) noexcept : x_(x), prev_(0.0), cur_(1.0) {}

HermiteLog HermiteRecurrence::value() const noexcept {
    if (cur_ == 0.0) {
        return {-std::numeric_limits<double>::infinity(), 0};
    }
    return {std::log(std::abs(cur_)) + log_scale_, cur_ > 0.0 ? 1 : -1};
}

void HermiteRecurrence::advance() noexcept {
    double const next =
        2.0 * x_ * cur_ - 2.0 * static_cast<double>(degree_) * prev_;
    prev_ = cur_;
    cur_ = next;
    ++degree_;

    double const big = std::max(std::abs(prev_), std::abs(cur_));
    if (big > kRescaleHigh || (big < kRescaleLow && big > 0.0)) {
        prev_ /= big;
        cur_ /= big;
        log_scale_ += std::log(big);
    }
}

HermiteLog hermite_log(std::int64_t n, double x) {
    if (n < 0) {
        throw InvariantError("hermite_log: degree must be non-negative");
    }
    HermiteRecurrence rec(x);
    while (rec.degree() < n) {
        rec.advance();
    }
    return rec.value();
}

MehlerResult mehler_check(double alpha, double t, double tol) {
    if (!(std::abs(t) <= 0.95)) {
        throw InvariantError("mehler_check: |t| must not exceed 0.95");
    }
    if (!(tol > 0.0)) {
        throw InvariantError("mehler_check: tolerance must be positive");
    }

    double const closed =
        std::exp(2.0 * alpha * alpha * t / (1.0 + t)) / std::sqrt(1.0 - t * t);
    double const abs_t = std::abs(t);
    double const log_envelope =
        2.0 * std::log(kCramerConstant) + alpha * alpha - std::log1p(-abs_t);
    double const target = tol * std::abs(closed) / 10.0;

    HermiteRecurrence rec(alpha);
    double sum = 0.0;
    double compensation = 0.0;
    std::int64_t terms = 0;
    while (true) {
        auto const n = rec.degree();
        HermiteLog const h = rec.value();
        if (h.sign != 0 && (n == 0 || t != 0.0)) {
            double const nn = static_cast<double>(n);
            double const log_term = (n == 0 ? 0.0 : nn * std::log(abs_t)) +
                                    2.0 * h.log_magnitude - nn * std::log(2.0) -
                                    std::lgamma(nn + 1.0);
            double const sign = (t < 0.0 && (n % 2 == 1)) ? -1.0 : 1.0;
            // Kahan summation
            double const y = sign * std::exp(log_term) - compensation;
            double const s = sum + y;
            compensation = (s - sum) - y;
            sum = s;
        }
        ++terms;

        // bound on sum_{j > n} |term_j|
        if (t == 0.0) {
            break;
        }
        double const log_tail = log_envelope + static_cast<double>(n + 1) * std::log(abs_t);
        if (log_tail < std::log(target)) {
            break;
        }
        if (terms >= kMehlerMaxTerms) {
            throw NumericError("mehler_check: series did not converge within the term cap");
        }
        rec.advance();
    }
    return {sum, closed, terms};
}

} // namespace anticorr
