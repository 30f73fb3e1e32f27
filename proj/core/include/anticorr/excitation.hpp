#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <variant>

#include "anticorr/errors.hpp"

namespace anticorr {

enum class Family { number, poisson, thermal, squeezed, phase };

std::string_view to_string(Family family) noexcept;

// Sequence-length distributions. Construct through ExcitationSpec's factories,
// which enforce the parameter ranges.

/// Point mass at a fixed sequence length.
struct NumberExcitation {
    std::int64_t n;
};

/// Coherent light: W_n = lambda^n e^{-lambda} / n!.
struct PoissonExcitation {
    double lambda;
};

/// Bose distribution W_n = (1 - b) b^n with b = nbar / (1 + nbar).
struct ThermalExcitation {
    double nbar;

    double b() const noexcept { return nbar / (1.0 + nbar); }
    double one_minus_b() const noexcept { return 1.0 / (1.0 + nbar); }
};

/// Photon-number distribution of a squeezed coherent state with displacement
/// a and squeezing zeta. s and epsilon are the high-squeezing parametrization
/// zeta = (s - 1) / (s + 1), epsilon = 2 / s.
struct SqueezedExcitation {
    double a;
    double zeta;

    double s() const noexcept { return (1.0 + zeta) / (1.0 - zeta); }
    double epsilon() const noexcept { return 2.0 * (1.0 - zeta) / (1.0 + zeta); }
};

/// Uniform sequence length on {0, ..., max_n}.
struct PhaseExcitation {
    std::int64_t max_n;
};

class ExcitationSpec {
  public:
    using Variant = std::variant<NumberExcitation, PoissonExcitation, ThermalExcitation,
                                 SqueezedExcitation, PhaseExcitation>;

    static ExcitationSpec number(std::int64_t n);
    static ExcitationSpec poisson(double lambda);
    static ExcitationSpec thermal(double nbar);
    /// nbar = b / (1 - b), b in (0, 1).
    static ExcitationSpec thermal_from_b(double b);
    /// a >= 0 (a = 0 is the squeezed vacuum), 0 < zeta < 1.
    static ExcitationSpec squeezed(double a, double zeta);
    /// zeta = (2 - epsilon) / (2 + epsilon), 0 < epsilon < 2.
    static ExcitationSpec squeezed_from_epsilon(double a, double epsilon);
    static ExcitationSpec phase(std::int64_t max_n);

    Family family() const noexcept { return static_cast<Family>(variant_.index()); }
    Variant const& variant() const noexcept { return variant_; }

    template <class T>
    T const* get_if() const noexcept {
        return std::get_if<T>(&variant_);
    }

    /// Short human-readable form, e.g. "thermal(nbar=1.5)".
    std::string describe() const;

  private:
    explicit ExcitationSpec(Variant v) : variant_(v) {}
    Variant variant_;
};

/// mu1 = E[n], mu2 = E[n(n-1)] of the sequence length.
struct FactorialMoments {
    double mu1;
    double mu2;
    /// Phase only: the alternative closed form N(4N-1)/12 found in the
    /// literature, kept for comparison with the exact N(N-1)/3.
    std::optional<double> mu2_as_printed;

    double variance() const noexcept { return mu2 + mu1 - mu1 * mu1; }
    /// mu2 - mu1^2 = Var(n) - E[n]; its sign is the sign of the count covariance.
    double mandel() const noexcept { return mu2 - mu1 * mu1; }
};

FactorialMoments factorial_moments(ExcitationSpec const& spec);

struct SqueezedAlphaBeta {
    double alpha;  // E[n]
    double beta;   // Var(n) - E[n]
};

/// alpha = a^2 + zeta^2/(1-zeta^2),
/// beta  = zeta^2 (1+zeta^2)/(1-zeta^2)^2 - 2 zeta a^2/(1+zeta).
SqueezedAlphaBeta squeezed_alpha_beta(double a, double zeta);

/// Probability W_n of sequence length n. The squeezed family is evaluated in
/// log space through hermite_log.
double weight_pmf(ExcitationSpec const& spec, std::int64_t n);
double weight_log_pmf(ExcitationSpec const& spec, std::int64_t n);

/// Probability generating function Phi(z) = sum_n W_n z^n in closed form.
/// The mixture generating function of the counts is Phi(p x + q y + r).
///
/// Throws NumericError when z hits the thermal pole (|b z| >= 1) or leaves
/// the squeezed domain (|zeta z| >= 1).
template <class T>
T excitation_pgf(ExcitationSpec const& spec, T z);

// ---------------------------------------------------------------------------

namespace detail {

template <class T>
T phase_pgf(std::int64_t max_n, T z) {
    using std::abs;
    double const count = static_cast<double>(max_n + 1);
    // the closed form is 0/0 at z = 1; use the polynomial close to it
    if (abs(T(1.0) - z) < 1e-3) {
        T acc(0.0);
        for (std::int64_t n = max_n; n >= 0; --n) {
            acc = acc * z + T(1.0);
        }
        return acc / count;
    }
    return (T(1.0) - std::pow(z, static_cast<double>(max_n + 1))) / (T(1.0) - z) / count;
}

} // namespace detail

template <class T>
T excitation_pgf(ExcitationSpec const& spec, T z) {
    using std::abs;
    using std::exp;
    using std::sqrt;
    return std::visit(
        [&](auto const& e) -> T {
            using E = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<E, NumberExcitation>) {
                T result(1.0);
                T base = z;
                for (std::int64_t k = e.n; k > 0; k >>= 1) {
                    if (k & 1) {
                        result *= base;
                    }
                    base *= base;
                }
                return result;
            } else if constexpr (std::is_same_v<E, PoissonExcitation>) {
                return exp(e.lambda * (z - T(1.0)));
            } else if constexpr (std::is_same_v<E, ThermalExcitation>) {
                if (!(abs(e.b() * z) < 1.0)) {
                    throw NumericError("thermal generating function: pole guard |b z| < 1 violated");
                }
                return T(e.one_minus_b()) / (T(1.0) - e.b() * z);
            } else if constexpr (std::is_same_v<E, SqueezedExcitation>) {
                T const t = e.zeta * z;
                if (!(abs(t) < 1.0)) {
                    throw NumericError("squeezed generating function: |zeta z| < 1 violated");
                }
                double const u = e.a * e.a * (1.0 + e.zeta) * (1.0 + e.zeta) / e.zeta;
                double const shift = e.a * e.a * (1.0 + e.zeta);
                return std::sqrt(1.0 - e.zeta * e.zeta) / sqrt(T(1.0) - t * t) *
                       exp(u * t / (T(1.0) + t) - shift);
            } else {
                return detail::phase_pgf(e.max_n, z);
            }
        },
        spec.variant());
}

} // namespace anticorr
