#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "anticorr/excitation.hpp"

namespace anticorr {

/// Truncated sequence-length distribution W_0..W_cutoff plus a certified
/// upper bound on the discarded mass sum_{n > cutoff} W_n.
///
/// Weights are stored as evaluated; they are never renormalized.
class WeightTable {
  public:
    /// Requires non-empty, non-negative weights with
    /// 1 - tail_bound <= sum(weights) <= 1, each side up to 1e-9. The
    /// tail bound may be loose.
    WeightTable(std::vector<double> weights, double tail_bound);

    std::span<double const> weights() const noexcept { return weights_; }
    double tail_bound() const noexcept { return tail_bound_; }
    std::int64_t cutoff() const noexcept { return static_cast<std::int64_t>(weights_.size()) - 1; }
    double total() const noexcept { return cdf_.back(); }

    /// Inverse-CDF draw: smallest n with CDF(n) > u. Deviates that land in
    /// the untabulated tail map to cutoff().
    std::int64_t sample(double u) const noexcept;

  private:
    std::vector<double> weights_;
    std::vector<double> cdf_;
    double tail_bound_;
};

inline constexpr std::int64_t kDefaultCutoffCap = 1'000'000;

/// Tabulates W_n up to the smallest cutoff whose certified tail bound is at
/// most tail_tol (0 < tail_tol <= 1e-3).
///
/// Thermal uses the exact geometric tail b^{cutoff+1}. Poisson and squeezed
/// use the Chernoff bound P(n > c) <= min_{z > 1} Phi(z) / z^{c+1} on the
/// closed-form generating function. Number and phase have finite support and
/// a zero tail. Throws NumericError when the cutoff would exceed cutoff_cap.
WeightTable build_weight_table(ExcitationSpec const& spec, double tail_tol,
                               std::int64_t cutoff_cap = kDefaultCutoffCap);

/// Upper bound on P(n > cutoff) for the given spec, as used by
/// build_weight_table.
double tail_mass_bound(ExcitationSpec const& spec, std::int64_t cutoff);

inline std::int64_t sample_n(WeightTable const& table, double u) noexcept {
    return table.sample(u);
}

} // namespace anticorr
