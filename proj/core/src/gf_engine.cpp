#include "anticorr/gf_engine.hpp"

#include <cmath>
#include <string>
#include <vector>

namespace anticorr {

MomentSummary moments_from_factorial(DetectorModel const& det, FactorialMoments const& fm) {
    double const p = det.p();
    double const q = det.q();
    double const mandel = fm.mu2 - fm.mu1 * fm.mu1;
    double const n_excess = fm.mu2 + fm.mu1 - fm.mu1 * fm.mu1;  // Var(n)

    double const mean_a = p * fm.mu1;
    double const mean_b = q * fm.mu1;
    double const var_a = p * (1.0 - p) * fm.mu1 + p * p * n_excess;
    double const var_b = q * (1.0 - q) * fm.mu1 + q * q * n_excess;
    double const cov = p * q * mandel;

    std::optional<double> g2;
    if (fm.mu1 > 0.0 && p * q > 0.0) {
        g2 = fm.mu2 / (fm.mu1 * fm.mu1);
    }
    return make_summary(mean_a, mean_b, var_a, var_b, cov, g2);
}

MomentSummary mixture_moments(ExcitationSpec const& spec, DetectorModel const& det) {
    return moments_from_factorial(det, factorial_moments(spec));
}

MomentSummary numeric_moments(MixtureGF const& gf, double h) {
    if (!(h >= 1e-6 && h <= 1e-2)) {
        throw InvariantError("numeric_moments: step must lie in [1e-6, 1e-2]");
    }
    double const reach = gf.det.p() + gf.det.q();  // dz per unit step in x and y together

    // keep z = 1 + 2h (p + q) at most halfway to the nearest singularity
    double singular_z = 0.0;
    if (auto const* th = gf.spec.get_if<ThermalExcitation>()) {
        singular_z = 1.0 / th->b();
    } else if (auto const* sq = gf.spec.get_if<SqueezedExcitation>()) {
        singular_z = 1.0 / sq->zeta;
    }
    if (singular_z > 0.0) {
        while (1.0 + 2.0 * h * reach > 1.0 + (singular_z - 1.0) / 2.0) {
            h /= 2.0;
            if (h < 1e-9) {
                throw NumericError("numeric_moments: no admissible step next to the pole at z = " +
                                   std::to_string(singular_z));
            }
        }
    }

    auto G = [&](double dx, double dy) {
        double const v = mixture_gf_eval(gf, 1.0 + dx, 1.0 + dy);
        if (!std::isfinite(v)) {
            throw NumericError("numeric_moments: non-finite generating function value");
        }
        return v;
    };

    double const g0 = G(0.0, 0.0);
    auto first_x = [&](double s) { return (G(s, 0.0) - G(-s, 0.0)) / (2.0 * s); };
    auto first_y = [&](double s) { return (G(0.0, s) - G(0.0, -s)) / (2.0 * s); };
    auto second_x = [&](double s) { return (G(s, 0.0) - 2.0 * g0 + G(-s, 0.0)) / (s * s); };
    auto second_y = [&](double s) { return (G(0.0, s) - 2.0 * g0 + G(0.0, -s)) / (s * s); };
    auto mixed = [&](double s) {
        return (G(s, s) - G(s, -s) - G(-s, s) + G(-s, -s)) / (4.0 * s * s);
    };
    // cancels the O(h^2) error term of each central difference
    auto richardson = [&](auto const& diff) { return (4.0 * diff(h) - diff(2.0 * h)) / 3.0; };

    double const gx = richardson(first_x);
    double const gy = richardson(first_y);
    double const gxx = richardson(second_x);
    double const gyy = richardson(second_y);
    double const gxy = richardson(mixed);

    double const mean_a = gx;
    double const mean_b = gy;
    double const var_a = gxx + gx - gx * gx;
    double const var_b = gyy + gy - gy * gy;
    double const cov = gxy - gx * gy;
    for (double v : {mean_a, mean_b, var_a, var_b, cov}) {
        if (!std::isfinite(v)) {
            throw NumericError("numeric_moments: non-finite derivative estimate");
        }
    }

    std::optional<double> g2;
    if (gf.det.p() * gf.det.q() > 0.0 && mean_a * mean_b > 0.0) {
        g2 = gxy / (mean_a * mean_b);
    }
    return make_summary(mean_a, mean_b, var_a, var_b, cov, g2);
}

double joint_pmf_mixture(WeightTable const& table, DetectorModel const& det, std::int64_t m,
                         std::int64_t k) {
    if (m < 0 || k < 0) {
        throw InvariantError("joint_pmf_mixture: counts must be non-negative");
    }
    auto const weights = table.weights();
    double total = 0.0;
    for (std::int64_t n = m + k; n <= table.cutoff(); ++n) {
        double const w = weights[static_cast<std::size_t>(n)];
        if (w > 0.0) {
            total += w * trinomial_pmf(det, n, m, k);
        }
    }
    return total;
}

double joint_pmf_mixture(ExcitationSpec const& spec, DetectorModel const& det, std::int64_t m,
                         std::int64_t k, double tail_tol) {
    return joint_pmf_mixture(build_weight_table(spec, tail_tol), det, m, k);
}

MomentSummary mixture_summation_moments(WeightTable const& table, DetectorModel const& det) {
    std::int64_t const cutoff = table.cutoff();
    if (cutoff > kGridSummationLimit) {
        throw InvariantError("mixture_summation_moments: table cutoff " + std::to_string(cutoff) +
                             " exceeds the grid limit " + std::to_string(kGridSummationLimit));
    }
    auto const weights = table.weights();
    auto const width = static_cast<std::size_t>(cutoff + 1);

    std::vector<double> log_fact(width);
    for (std::size_t i = 0; i < width; ++i) {
        log_fact[i] = std::lgamma(static_cast<double>(i) + 1.0);
    }
    auto log_or_skip = [](double v) { return v > 0.0 ? std::log(v) : 0.0; };
    double const log_p = log_or_skip(det.p());
    double const log_q = log_or_skip(det.q());
    double const log_r = log_or_skip(det.r());

    // grid[m * width + k] = P(xi = m, eta = k)
    std::vector<double> grid(width * width, 0.0);
    for (std::int64_t n = 0; n <= cutoff; ++n) {
        double const w = weights[static_cast<std::size_t>(n)];
        if (w <= 0.0) {
            continue;
        }
        double const log_w = std::log(w) + log_fact[static_cast<std::size_t>(n)];
        for (std::int64_t m = 0; m <= n; ++m) {
            if (m > 0 && det.p() == 0.0) {
                break;
            }
            for (std::int64_t k = 0; m + k <= n; ++k) {
                if (k > 0 && det.q() == 0.0) {
                    break;
                }
                std::int64_t const rest = n - m - k;
                if (rest > 0 && det.r() == 0.0) {
                    continue;
                }
                double const lp = log_w - log_fact[static_cast<std::size_t>(m)] -
                                  log_fact[static_cast<std::size_t>(k)] -
                                  log_fact[static_cast<std::size_t>(rest)] +
                                  static_cast<double>(m) * log_p + static_cast<double>(k) * log_q +
                                  static_cast<double>(rest) * log_r;
                grid[static_cast<std::size_t>(m) * width + static_cast<std::size_t>(k)] +=
                    std::exp(lp);
            }
        }
    }

    double mean_a = 0.0;
    double mean_b = 0.0;
    for (std::size_t m = 0; m < width; ++m) {
        for (std::size_t k = 0; m + k < width; ++k) {
            double const w = grid[m * width + k];
            mean_a += w * static_cast<double>(m);
            mean_b += w * static_cast<double>(k);
        }
    }
    double var_a = 0.0;
    double var_b = 0.0;
    double cov = 0.0;
    for (std::size_t m = 0; m < width; ++m) {
        for (std::size_t k = 0; m + k < width; ++k) {
            double const w = grid[m * width + k];
            double const da = static_cast<double>(m) - mean_a;
            double const db = static_cast<double>(k) - mean_b;
            var_a += w * da * da;
            var_b += w * db * db;
            cov += w * da * db;
        }
    }

    std::optional<double> g2;
    if (det.p() * det.q() > 0.0 && mean_a * mean_b > 0.0) {
        g2 = (cov + mean_a * mean_b) / (mean_a * mean_b);
    }
    return make_summary(mean_a, mean_b, var_a, var_b, cov, g2);
}

MomentSummary mixture_summation_moments(ExcitationSpec const& spec, DetectorModel const& det,
                                        double tail_tol) {
    return mixture_summation_moments(build_weight_table(spec, tail_tol), det);
}

} // namespace anticorr
