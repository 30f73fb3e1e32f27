#include "anticorr/excitation.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "anticorr/hermite.hpp"

namespace anticorr {

namespace {

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

} // namespace

std::string_view to_string(Family family) noexcept {
    switch (family) {
    case Family::number:
        return "number";
    case Family::poisson:
        return "poisson";
    case Family::thermal:
        return "thermal";
    case Family::squeezed:
        return "squeezed";
    case Family::phase:
        return "phase";
    }
    return "unknown";
}

ExcitationSpec ExcitationSpec::number(std::int64_t n) {
    if (n < 1) {
        throw InvariantError("number excitation: n must be >= 1");
    }
    return ExcitationSpec(NumberExcitation{n});
}

ExcitationSpec ExcitationSpec::poisson(double lambda) {
    if (!positive_finite(lambda)) {
        throw InvariantError("poisson excitation: lambda must be positive and finite");
    }
    return ExcitationSpec(PoissonExcitation{lambda});
}

ExcitationSpec ExcitationSpec::thermal(double nbar) {
    if (!positive_finite(nbar)) {
        throw InvariantError("thermal excitation: nbar must be positive and finite");
    }
    return ExcitationSpec(ThermalExcitation{nbar});
}

ExcitationSpec ExcitationSpec::thermal_from_b(double b) {
    if (!(b > 0.0 && b < 1.0)) {
        throw InvariantError("thermal excitation: b must lie in (0, 1)");
    }
    return thermal(b / (1.0 - b));
}

ExcitationSpec ExcitationSpec::squeezed(double a, double zeta) {
    if (!std::isfinite(a) || a < 0.0) {
        throw InvariantError("squeezed excitation: a must be finite and >= 0");
    }
    if (!(zeta > 0.0 && zeta < 1.0)) {
        throw InvariantError("squeezed excitation: zeta must lie in (0, 1)");
    }
    return ExcitationSpec(SqueezedExcitation{a, zeta});
}

ExcitationSpec ExcitationSpec::squeezed_from_epsilon(double a, double epsilon) {
    if (!(epsilon > 0.0 && epsilon < 2.0)) {
        throw InvariantError("squeezed excitation: epsilon must lie in (0, 2)");
    }
    return squeezed(a, (2.0 - epsilon) / (2.0 + epsilon));
}

ExcitationSpec ExcitationSpec::phase(std::int64_t max_n) {
    if (max_n < 0) {
        throw InvariantError("phase excitation: N must be >= 0");
    }
    return ExcitationSpec(PhaseExcitation{max_n});
}

std::string ExcitationSpec::describe() const {
    std::ostringstream os;
    os.precision(12);
    std::visit(
        [&](auto const& e) {
            using E = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<E, NumberExcitation>) {
                os << "number(n=" << e.n << ")";
            } else if constexpr (std::is_same_v<E, PoissonExcitation>) {
                os << "poisson(lambda=" << e.lambda << ")";
            } else if constexpr (std::is_same_v<E, ThermalExcitation>) {
                os << "thermal(nbar=" << e.nbar << ")";
            } else if constexpr (std::is_same_v<E, SqueezedExcitation>) {
                os << "squeezed(a=" << e.a << ", zeta=" << e.zeta << ")";
            } else {
                os << "phase(N=" << e.max_n << ")";
            }
        },
        variant_);
    return os.str();
}

SqueezedAlphaBeta squeezed_alpha_beta(double a, double zeta) {
    if (!std::isfinite(a) || a < 0.0 || !(zeta > 0.0 && zeta < 1.0)) {
        throw InvariantError("squeezed_alpha_beta: requires a >= 0 and 0 < zeta < 1");
    }
    double const z2 = zeta * zeta;
    double const one_minus_z2 = 1.0 - z2;
    double const a2 = a * a;
    double const alpha = a2 + z2 / one_minus_z2;
    double const beta = z2 * (1.0 + z2) / (one_minus_z2 * one_minus_z2) - 2.0 * zeta * a2 / (1.0 + zeta);
    return {alpha, beta};
}

FactorialMoments factorial_moments(ExcitationSpec const& spec) {
    return std::visit(
        [](auto const& e) -> FactorialMoments {
            using E = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<E, NumberExcitation>) {
                double const n = static_cast<double>(e.n);
                return {n, n * (n - 1.0), std::nullopt};
            } else if constexpr (std::is_same_v<E, PoissonExcitation>) {
                return {e.lambda, e.lambda * e.lambda, std::nullopt};
            } else if constexpr (std::is_same_v<E, ThermalExcitation>) {
                return {e.nbar, 2.0 * (e.nbar * e.nbar), std::nullopt};
            } else if constexpr (std::is_same_v<E, SqueezedExcitation>) {
                auto const [alpha, beta] = squeezed_alpha_beta(e.a, e.zeta);
                return {alpha, alpha * alpha + beta, std::nullopt};
            } else {
                double const n = static_cast<double>(e.max_n);
                return {n / 2.0, n * (n - 1.0) / 3.0, n * (4.0 * n - 1.0) / 12.0};
            }
        },
        spec.variant());
}

double weight_log_pmf(ExcitationSpec const& spec, std::int64_t n) {
    if (n < 0) {
        throw InvariantError("weight_pmf: n must be non-negative");
    }
    double const nn = static_cast<double>(n);
    return std::visit(
        [&](auto const& e) -> double {
            using E = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<E, NumberExcitation>) {
                return n == e.n ? 0.0 : kNegInf;
            } else if constexpr (std::is_same_v<E, PoissonExcitation>) {
                return nn * std::log(e.lambda) - e.lambda - std::lgamma(nn + 1.0);
            } else if constexpr (std::is_same_v<E, ThermalExcitation>) {
                // log[(1-b) b^n] with 1 - b = 1/(1+nbar)
                double const log1p_nbar = std::log1p(e.nbar);
                return -log1p_nbar + nn * (std::log(e.nbar) - log1p_nbar);
            } else if constexpr (std::is_same_v<E, SqueezedExcitation>) {
                double const x = e.a * (1.0 + e.zeta) / std::sqrt(2.0 * e.zeta);
                HermiteLog const h = hermite_log(n, x);
                if (h.sign == 0) {
                    return kNegInf;
                }
                return 0.5 * std::log1p(-e.zeta * e.zeta) - e.a * e.a * (1.0 + e.zeta) +
                       nn * std::log(e.zeta / 2.0) - std::lgamma(nn + 1.0) +
                       2.0 * h.log_magnitude;
            } else {
                return n <= e.max_n ? -std::log(static_cast<double>(e.max_n + 1)) : kNegInf;
            }
        },
        spec.variant());
}

double weight_pmf(ExcitationSpec const& spec, std::int64_t n) {
    if (auto const* ph = spec.get_if<PhaseExcitation>()) {
        if (n < 0) {
            throw InvariantError("weight_pmf: n must be non-negative");
        }
        return n <= ph->max_n ? 1.0 / static_cast<double>(ph->max_n + 1) : 0.0;
    }
    return std::exp(weight_log_pmf(spec, n));
}

} // namespace anticorr
