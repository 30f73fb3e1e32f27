#pragma once

#include <cstdint>

#include "anticorr/excitation.hpp"
#include "anticorr/trinomial.hpp"
#include "anticorr/weight_table.hpp"

namespace anticorr {

/// G(x, y) = sum_n W_n (p x + q y + r)^n for one excitation seen through one
/// detector model.
struct MixtureGF {
    ExcitationSpec spec;
    DetectorModel det;
};

/// Closed-form mixture generating function, Phi(p x + q y + r).
/// Pole guards are those of excitation_pgf.
template <class T>
T mixture_gf_eval(MixtureGF const& gf, T x, T y) {
    T const z = gf.det.p() * x + gf.det.q() * y + T(gf.det.r());
    return excitation_pgf(gf.spec, z);
}

/// Count statistics composed from the excitation's factorial moments:
/// E[xi] = p mu1, E[xi eta] = p q mu2, cov = p q (mu2 - mu1^2),
/// Var(xi) = p(1-p) mu1 + p^2 (mu2 + mu1 - mu1^2). g2 = mu2 / mu1^2 whenever
/// mu1 > 0 and p q > 0, which makes it independent of the detector model.
MomentSummary moments_from_factorial(DetectorModel const& det, FactorialMoments const& fm);

/// Convenience: moments_from_factorial(det, factorial_moments(spec)).
MomentSummary mixture_moments(ExcitationSpec const& spec, DetectorModel const& det);

inline constexpr double kDefaultDifferenceStep = 1e-4;

/// Independent check of the analytic moments: central differences of G at
/// (1, 1) with one Richardson level (steps h and 2h). h must lie in
/// [1e-6, 1e-2]; it is shrunk automatically to keep 1 + 2h clear of the
/// thermal pole and the squeezed domain boundary. Throws NumericError on
/// non-finite intermediates or when no admissible step remains.
MomentSummary numeric_moments(MixtureGF const& gf, double h = kDefaultDifferenceStep);

/// P(xi = m, eta = k) = sum_n W_n trinomial_pmf(det, n, m, k) over a weight
/// table whose tail bound is at most tail_tol.
double joint_pmf_mixture(ExcitationSpec const& spec, DetectorModel const& det, std::int64_t m,
                         std::int64_t k, double tail_tol);

/// Same, reusing an existing table (error at most table.tail_bound()).
double joint_pmf_mixture(WeightTable const& table, DetectorModel const& det, std::int64_t m,
                         std::int64_t k);

/// Moments by direct summation over the whole joint mixture pmf grid
/// {(m, k) : m + k <= cutoff}. Limited to tables with cutoff <= kGridSummationLimit.
inline constexpr std::int64_t kGridSummationLimit = 2000;
MomentSummary mixture_summation_moments(WeightTable const& table, DetectorModel const& det);
MomentSummary mixture_summation_moments(ExcitationSpec const& spec, DetectorModel const& det,
                                        double tail_tol);

} // namespace anticorr
