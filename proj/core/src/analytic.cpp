#include "anticorr/analytic.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <sstream>

#include <boost/math/tools/roots.hpp>

#include "anticorr/gf_engine.hpp"

namespace anticorr {

namespace {

void require_p_equals_q(DetectorModel const& det, char const* what) {
    if (det.p() != det.q()) {
        throw InvariantError(std::string(what) +
                             ": the table's correlation row is defined only for p = q");
    }
}

double find_root(auto f, double lo, double hi) {
    std::uintmax_t max_iter = 200;
    boost::math::tools::eps_tolerance<double> tol(std::numeric_limits<double>::digits - 3);
    auto const [a, b] = boost::math::tools::toms748_solve(f, lo, hi, tol, max_iter);
    return 0.5 * (a + b);
}

std::string format_params(auto const&... kv) {
    std::ostringstream os;
    os.precision(12);
    bool first = true;
    auto emit = [&](auto const& pair) {
        os << (first ? "" : ", ") << pair.first << "=" << pair.second;
        first = false;
    };
    (emit(kv), ...);
    return os.str();
}

bool rel_differs(double a, double b) {
    return std::abs(a - b) > 1e-9 * std::max({std::abs(a), std::abs(b), 1e-300});
}

bool opt_differs(std::optional<double> const& a, std::optional<double> const& b) {
    if (a.has_value() != b.has_value()) {
        return true;
    }
    return a && rel_differs(*a, *b);
}

} // namespace

MomentSummary poisson_summary(DetectorModel const& det, double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw InvariantError("poisson_summary: lambda must be positive");
    }
    MomentSummary s;
    s.mean_a = lambda * det.p();
    s.mean_b = lambda * det.q();
    s.var_a = s.mean_a;
    s.var_b = s.mean_b;
    s.cov = 0.0;
    if (s.var_a > 0.0 && s.var_b > 0.0) {
        s.corr = 0.0;
    }
    if (det.p() * det.q() > 0.0) {
        s.g2 = 1.0;
    }
    return s;
}

MomentSummary thermal_summary(DetectorModel const& det, double nbar) {
    if (!(nbar > 0.0) || !std::isfinite(nbar)) {
        throw InvariantError("thermal_summary: nbar must be positive");
    }
    MomentSummary s;
    s.mean_a = det.p() * nbar;
    s.mean_b = det.q() * nbar;
    s.var_a = s.mean_a + s.mean_a * s.mean_a;
    s.var_b = s.mean_b + s.mean_b * s.mean_b;
    s.cov = det.p() * det.q() * nbar * nbar;
    if (s.var_a > 0.0 && s.var_b > 0.0) {
        s.corr = s.cov / std::sqrt(s.var_a * s.var_b);
    }
    if (det.p() * det.q() > 0.0) {
        s.g2 = 2.0;
    }
    return s;
}

SqueezedSummary squeezed_summary(DetectorModel const& det, double a, double zeta) {
    auto const [alpha, beta] = squeezed_alpha_beta(a, zeta);
    double const p = det.p();
    double const q = det.q();

    MomentSummary s;
    s.mean_a = p * alpha;
    s.mean_b = q * alpha;
    s.var_a = p * alpha + p * p * beta;
    s.var_b = q * alpha + q * q * beta;
    s.cov = p * q * beta;
    if (s.var_a > 0.0 && s.var_b > 0.0) {
        s.corr = s.cov / std::sqrt(s.var_a * s.var_b);
    }
    if (alpha > 0.0 && p * q > 0.0) {
        s.g2 = 1.0 + beta / (alpha * alpha);
    }
    return {s, alpha, beta};
}

HighSqueezeReport squeezed_highsqueeze(DetectorModel const& det, double a, double epsilon) {
    require_p_equals_q(det, "squeezed_highsqueeze");
    if (!(epsilon > 0.0 && epsilon < 2.0)) {
        throw InvariantError("squeezed_highsqueeze: epsilon must lie in (0, 2)");
    }
    if (!std::isfinite(a) || a < 0.0) {
        throw InvariantError("squeezed_highsqueeze: a must be >= 0");
    }
    double const p = det.p();
    double const e = epsilon;
    double const ea2 = e * e * a * a;  // (eps a)^2

    HighSqueezeReport rep{};
    rep.epsilon = e;
    rep.zeta = (2.0 - e) / (2.0 + e);
    rep.mean_printed = p * (a * a + 1.0 / (2.0 * e));
    rep.corr_printed = p * (1.0 - ea2) / (e / 2.0 + ea2 + p * (1.0 - ea2));
    double const g2_den = 1.0 + 2.0 * e * a * a;
    rep.g2_printed = 1.0 + 4.0 * (1.0 - ea2) / (g2_den * g2_den);
    rep.alpha_printed = 1.0 / (2.0 * e) + a * a;
    rep.beta_printed = 1.0 / (e * e) - a * a;
    rep.beta_series = 1.0 / (2.0 * e * e) - a * a;

    SqueezedSummary const exact = squeezed_summary(det, a, rep.zeta);
    rep.alpha_exact = exact.alpha;
    rep.beta_exact = exact.beta;
    rep.corr_exact = exact.moments.corr;
    rep.g2_exact = exact.moments.g2;
    double const inf = std::numeric_limits<double>::infinity();
    rep.corr_deviation = rep.corr_exact ? std::abs(rep.corr_printed - *rep.corr_exact) : inf;
    rep.g2_deviation = rep.g2_exact ? std::abs(rep.g2_printed - *rep.g2_exact) : inf;
    rep.outside_regime = e >= 0.1;
    return rep;
}

MomentSummary phase_summary(DetectorModel const& det, std::int64_t max_n, PhaseMode mode) {
    if (max_n < 0) {
        throw InvariantError("phase_summary: N must be >= 0");
    }
    if (mode == PhaseMode::derived_exact) {
        return mixture_moments(ExcitationSpec::phase(max_n), det);
    }
    if (max_n == 0) {
        return MomentSummary{};
    }
    double const n = static_cast<double>(max_n);
    double const p = det.p();
    double const q = det.q();
    double const mean_a = p * n / 2.0;
    double const mean_b = q * n / 2.0;
    double const var_a = (p * n * (6.0 - 4.0 * p) + p * p * n * n) / 12.0;
    double const var_b = (q * n * (6.0 - 4.0 * q) + q * q * n * n) / 12.0;
    double const product = (n / 2.0) * ((4.0 * n - 1.0) / 6.0) * p * q;
    double const cov = product - mean_a * mean_b;
    std::optional<double> g2;
    if (p * q > 0.0) {
        g2 = 4.0 / 3.0 - 1.0 / (3.0 * n);
    }
    return make_summary(mean_a, mean_b, var_a, var_b, cov, g2);
}

double squeezed_uncorrelated_displacement(double zeta) {
    if (!(zeta > 0.0 && zeta < 1.0)) {
        throw InvariantError("squeezed_uncorrelated_displacement: zeta must lie in (0, 1)");
    }
    auto beta = [zeta](double a) { return squeezed_alpha_beta(a, zeta).beta; };
    double hi = 1.0;
    while (beta(hi) > 0.0) {
        hi *= 2.0;
    }
    return find_root(beta, 0.0, hi);
}

double squeezed_uncorrelated_zeta(double a) {
    if (!(a > 0.0) || !std::isfinite(a)) {
        throw InvariantError("squeezed_uncorrelated_zeta: a must be positive");
    }
    // beta / zeta is increasing in zeta, negative near 0 and unbounded near 1
    auto beta = [a](double zeta) { return squeezed_alpha_beta(a, zeta).beta; };
    double lo = std::min(1e-6, a * a);
    double hi = 0.5;
    while (beta(hi) < 0.0) {
        hi = 0.5 * (hi + 1.0);
        if (1.0 - hi < 1e-15) {
            throw NumericError("squeezed_uncorrelated_zeta: root too close to zeta = 1");
        }
    }
    return find_root(beta, lo, hi);
}

bool Table1Column::differs() const {
    return rel_differs(mean, mean_printed) || opt_differs(g2, g2_printed) ||
           opt_differs(corr, corr_printed);
}

Table1Report table1(DetectorModel const& det, Table1Params const& params) {
    require_p_equals_q(det, "table1");
    double const p = det.p();
    Table1Report report{det, {}};

    {
        auto const s = fixed_n_moments(det, params.number_n);
        double const n = static_cast<double>(params.number_n);
        std::optional<double> g2_printed;
        std::optional<double> corr_printed;
        if (p > 0.0) {
            g2_printed = 1.0 - 1.0 / n;
            corr_printed = -p / (1.0 - p);
        }
        report.columns.push_back({Family::number,
                                  format_params(std::pair{"n", params.number_n}), s.mean_a, s.g2,
                                  s.corr, p * n, g2_printed, corr_printed});
    }
    {
        double const lambda = params.poisson_lambda;
        auto const s = poisson_summary(det, lambda);
        std::optional<double> unit;
        std::optional<double> zero;
        if (p > 0.0) {
            unit = 1.0;
            zero = 0.0;
        }
        report.columns.push_back({Family::poisson, format_params(std::pair{"lambda", lambda}),
                                  s.mean_a, s.g2, s.corr, p * lambda, unit, zero});
    }
    {
        double const nbar = params.thermal_nbar;
        auto const s = thermal_summary(det, nbar);
        std::optional<double> g2_printed;
        std::optional<double> corr_printed;
        if (p > 0.0) {
            g2_printed = 2.0;
            corr_printed = p * nbar / (1.0 + p * nbar);
        }
        report.columns.push_back({Family::thermal, format_params(std::pair{"nbar", nbar}),
                                  s.mean_a, s.g2, s.corr, p * nbar, g2_printed, corr_printed});
    }
    {
        auto const hs = squeezed_highsqueeze(det, params.squeezed_a, params.squeezed_epsilon);
        auto const s = squeezed_summary(det, params.squeezed_a, hs.zeta).moments;
        std::optional<double> g2_printed;
        std::optional<double> corr_printed;
        if (p > 0.0) {
            g2_printed = hs.g2_printed;
            corr_printed = hs.corr_printed;
        }
        report.columns.push_back(
            {Family::squeezed,
             format_params(std::pair{"a", params.squeezed_a},
                           std::pair{"epsilon", params.squeezed_epsilon}, std::pair{"zeta", hs.zeta}),
             s.mean_a, s.g2, s.corr, hs.mean_printed, g2_printed, corr_printed});
    }
    {
        std::int64_t const max_n = params.phase_n;
        auto const s = phase_summary(det, max_n, PhaseMode::derived_exact);
        double const n = static_cast<double>(max_n);
        std::optional<double> g2_printed;
        std::optional<double> corr_printed;
        if (p > 0.0 && max_n > 0) {
            g2_printed = 4.0 / 3.0 - 1.0 / (3.0 * n);
            corr_printed = p * (n * n - n) / ((6.0 - 4.0 * p) * n + p * n * n);
        }
        report.columns.push_back({Family::phase, format_params(std::pair{"N", max_n}), s.mean_a,
                                  s.g2, s.corr, p * n / 2.0, g2_printed, corr_printed});
    }
    return report;
}

} // namespace anticorr
