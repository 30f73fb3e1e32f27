#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "anticorr/excitation.hpp"
#include "anticorr/trinomial.hpp"

namespace anticorr {

/// Coherent excitation: independent Poisson counts with means lambda p and
/// lambda q, so corr = 0 and g2 = 1.
MomentSummary poisson_summary(DetectorModel const& det, double lambda);

/// Bose excitation: Var(xi) = xi_mean + xi_mean^2 (particle plus wave term),
/// cov = p q nbar^2, g2 = 2. At p = q, corr = p nbar / (1 + p nbar).
MomentSummary thermal_summary(DetectorModel const& det, double nbar);

struct SqueezedSummary {
    MomentSummary moments;
    double alpha;
    double beta;
};

/// Squeezed excitation through (alpha, beta): mean = p alpha,
/// Var = p alpha + p^2 beta, cov = p q beta, g2 = 1 + beta / alpha^2.
SqueezedSummary squeezed_summary(DetectorModel const& det, double a, double zeta);

/// Closed-form high-squeezing approximations in the (a, epsilon)
/// parametrization, set against the exact route at zeta = (2 - eps)/(2 + eps).
///
/// The literature expansion uses beta ~ 1/eps^2 - a^2, while expanding the
/// exact beta gives 1/(2 eps^2) - a^2; both are reported so the gap is visible.
struct HighSqueezeReport {
    double epsilon;
    double zeta;
    double mean_printed;           // p (a^2 + 1/(2 eps))
    double corr_printed;           // p(1-e^2a^2) / (e/2 + e^2a^2 + p(1-e^2a^2))
    double g2_printed;             // 1 + 4(1-e^2a^2)/(1+2 e a^2)^2
    double alpha_printed;          // 1/(2 eps) + a^2
    double beta_printed;           // 1/eps^2 - a^2
    double beta_series;            // 1/(2 eps^2) - a^2, leading order of the exact beta
    double alpha_exact;
    double beta_exact;
    std::optional<double> corr_exact;
    std::optional<double> g2_exact;
    double corr_deviation;         // |corr_printed - corr_exact|, inf if exact corr absent
    double g2_deviation;           // |g2_printed - g2_exact|
    bool outside_regime;           // eps >= 0.1: the approximation is not expected to hold
};

/// Requires p = q (the approximation is stated for that case) and
/// 0 < epsilon < 2.
HighSqueezeReport squeezed_highsqueeze(DetectorModel const& det, double a, double epsilon);

enum class PhaseMode { derived_exact, as_printed };

/// Uniform excitation on {0..N}.
///
/// derived_exact composes from (mu1, mu2) = (N/2, N(N-1)/3).
/// as_printed keeps the literature closed forms E[xi eta] = (N/2)(4N-1)/6 p q
/// and g2 = 4/3 - 1/(3N); variances are the same in both modes.
/// N = 0 gives an all-zero summary with corr and g2 absent.
MomentSummary phase_summary(DetectorModel const& det, std::int64_t max_n,
                            PhaseMode mode = PhaseMode::derived_exact);

/// Displacement a >= 0 at which beta(a, zeta) = 0 for fixed zeta in (0, 1).
double squeezed_uncorrelated_displacement(double zeta);

/// Squeezing zeta in (0, 1) at which beta(a, zeta) = 0 for fixed a > 0.
double squeezed_uncorrelated_zeta(double a);

struct Table1Params {
    std::int64_t number_n = 10;
    double poisson_lambda = 2.0;
    double thermal_nbar = 1.5;
    double squeezed_a = 2.0;
    double squeezed_epsilon = 0.05;
    std::int64_t phase_n = 10;
};

struct Table1Column {
    Family family;
    std::string parameters;
    double mean;
    std::optional<double> g2;
    std::optional<double> corr;
    double mean_printed;
    std::optional<double> g2_printed;
    std::optional<double> corr_printed;

    /// True when the printed closed form and the exact value differ by more
    /// than 1e-9 relative in any row.
    bool differs() const;
};

struct Table1Report {
    DetectorModel det;
    std::vector<Table1Column> columns;  // number, poisson, thermal, squeezed, phase
};

/// Mean count, g2 and corr for all five families at p = q. Throws
/// InvariantError when p != q, since the correlation row is only defined in
/// that case.
Table1Report table1(DetectorModel const& det, Table1Params const& params = {});

} // namespace anticorr
