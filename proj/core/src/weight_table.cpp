#include "anticorr/weight_table.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

#include <boost/math/tools/minima.hpp>

#include "anticorr/hermite.hpp"

namespace anticorr {

namespace {

constexpr double kNormalizationSlack = 1e-9;

// log Phi(z) for real z in (1, 1/zeta)
double squeezed_log_pgf(SqueezedExcitation const& e, double z) {
    double const t = e.zeta * z;
    double const u = e.a * e.a * (1.0 + e.zeta) * (1.0 + e.zeta) / e.zeta;
    return 0.5 * std::log1p(-e.zeta * e.zeta) - 0.5 * std::log1p(-t * t) + u * t / (1.0 + t) -
           e.a * e.a * (1.0 + e.zeta);
}

// min over s in (0, -log zeta) of log Phi(e^s) - (c + 1) s; the objective is
// convex in s (it is a cumulant generating function minus a linear term).
double squeezed_log_chernoff(SqueezedExcitation const& e, std::int64_t cutoff) {
    double const exponent = static_cast<double>(cutoff + 1);
    auto objective = [&](double s) { return squeezed_log_pgf(e, std::exp(s)) - exponent * s; };

    double const hi = -std::log(e.zeta) * (1.0 - 1e-12);
    std::uintmax_t max_iter = 200;
    double const f_min = boost::math::tools::brent_find_minima(
                             objective, 0.0, hi, std::numeric_limits<double>::digits / 2, max_iter)
                             .second;
    return std::min(f_min, 0.0);
}

std::int64_t smallest_cutoff(ExcitationSpec const& spec, double tail_tol, std::int64_t cap) {
    std::int64_t hi = std::max<std::int64_t>(1, static_cast<std::int64_t>(
                                                    std::ceil(factorial_moments(spec).mu1)));
    while (tail_mass_bound(spec, hi) > tail_tol) {
        if (hi > cap) {
            break;
        }
        hi *= 2;
    }
    std::int64_t lo = 0;
    if (tail_mass_bound(spec, lo) <= tail_tol) {
        return lo;
    }
    // invariant: bound(lo) > tol >= bound(hi), unless hi overshot the cap
    while (hi - lo > 1) {
        std::int64_t const mid = lo + (hi - lo) / 2;
        if (tail_mass_bound(spec, mid) <= tail_tol) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

} // namespace

WeightTable::WeightTable(std::vector<double> weights, double tail_bound)
    : weights_(std::move(weights)), tail_bound_(tail_bound) {
    if (weights_.empty()) {
        throw InvariantError("WeightTable: at least one weight is required");
    }
    if (!(tail_bound_ >= 0.0) || !std::isfinite(tail_bound_)) {
        throw InvariantError("WeightTable: tail bound must be finite and non-negative");
    }
    cdf_.resize(weights_.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        if (!(weights_[i] >= 0.0) || !std::isfinite(weights_[i])) {
            throw InvariantError("WeightTable: weights must be finite and non-negative");
        }
        acc += weights_[i];
        cdf_[i] = acc;
    }
    if (acc > 1.0 + kNormalizationSlack || acc + tail_bound_ < 1.0 - kNormalizationSlack) {
        throw InvariantError("WeightTable: weights sum to " + std::to_string(acc) +
                             ", outside [1 - tail bound, 1]");
    }
}

std::int64_t WeightTable::sample(double u) const noexcept {
    auto const it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) {
        return cutoff();
    }
    return static_cast<std::int64_t>(it - cdf_.begin());
}

double tail_mass_bound(ExcitationSpec const& spec, std::int64_t cutoff) {
    if (cutoff < 0) {
        return 1.0;
    }
    return std::visit(
        [&](auto const& e) -> double {
            using E = std::decay_t<decltype(e)>;
            double const c1 = static_cast<double>(cutoff + 1);
            if constexpr (std::is_same_v<E, NumberExcitation>) {
                return cutoff >= e.n ? 0.0 : 1.0;
            } else if constexpr (std::is_same_v<E, PhaseExcitation>) {
                if (cutoff >= e.max_n) {
                    return 0.0;
                }
                return static_cast<double>(e.max_n - cutoff) / static_cast<double>(e.max_n + 1);
            } else if constexpr (std::is_same_v<E, ThermalExcitation>) {
                return std::exp(c1 * (std::log(e.nbar) - std::log1p(e.nbar)));
            } else if constexpr (std::is_same_v<E, PoissonExcitation>) {
                if (c1 <= e.lambda) {
                    return 1.0;
                }
                double const z = c1 / e.lambda;
                return std::exp(e.lambda * (z - 1.0) - c1 * std::log(z));
            } else {
                return std::exp(squeezed_log_chernoff(e, cutoff));
            }
        },
        spec.variant());
}

WeightTable build_weight_table(ExcitationSpec const& spec, double tail_tol,
                               std::int64_t cutoff_cap) {
    if (!(tail_tol > 0.0 && tail_tol <= 1e-3)) {
        throw InvariantError("build_weight_table: tail tolerance must lie in (0, 1e-3]");
    }

    std::int64_t cutoff = 0;
    switch (spec.family()) {
    case Family::number:
        cutoff = spec.get_if<NumberExcitation>()->n;
        break;
    case Family::phase:
        cutoff = spec.get_if<PhaseExcitation>()->max_n;
        break;
    case Family::thermal: {
        double const log_b = std::log(spec.get_if<ThermalExcitation>()->b());
        cutoff = std::max<std::int64_t>(
            0, static_cast<std::int64_t>(std::ceil(std::log(tail_tol) / log_b)) - 1);
        while (tail_mass_bound(spec, cutoff) > tail_tol) {
            ++cutoff;
        }
        while (cutoff > 0 && tail_mass_bound(spec, cutoff - 1) <= tail_tol) {
            --cutoff;
        }
        break;
    }
    case Family::poisson:
    case Family::squeezed:
        cutoff = smallest_cutoff(spec, tail_tol, cutoff_cap);
        break;
    }
    if (cutoff > cutoff_cap) {
        throw NumericError("build_weight_table: " + spec.describe() + " needs cutoff " +
                           std::to_string(cutoff) + " to reach tail tolerance, above the cap of " +
                           std::to_string(cutoff_cap));
    }

    std::vector<double> weights(static_cast<std::size_t>(cutoff + 1), 0.0);
    if (auto const* sq = spec.get_if<SqueezedExcitation>()) {
        double const x = sq->a * (1.0 + sq->zeta) / std::sqrt(2.0 * sq->zeta);
        double const base = 0.5 * std::log1p(-sq->zeta * sq->zeta) - sq->a * sq->a * (1.0 + sq->zeta);
        double const log_half_zeta = std::log(sq->zeta / 2.0);
        HermiteRecurrence rec(x);
        for (std::int64_t n = 0; n <= cutoff; ++n) {
            HermiteLog const h = rec.value();
            if (h.sign != 0) {
                double const nn = static_cast<double>(n);
                weights[static_cast<std::size_t>(n)] = std::exp(
                    base + nn * log_half_zeta - std::lgamma(nn + 1.0) + 2.0 * h.log_magnitude);
            }
            rec.advance();
        }
    } else {
        for (std::int64_t n = 0; n <= cutoff; ++n) {
            weights[static_cast<std::size_t>(n)] = weight_pmf(spec, n);
        }
    }
    return WeightTable(std::move(weights), tail_mass_bound(spec, cutoff));
}

} // namespace anticorr
