#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "anticorr/excitation.hpp"
#include "anticorr/trinomial.hpp"
#include "anticorr/weight_table.hpp"

namespace anticorr {

enum class Outcome : std::uint8_t { a, b, none };

/// One elementary experiment: A if u < p, B if p <= u < p + q, otherwise C.
/// Exactly one outcome per call, so A and B never fire together.
inline Outcome run_elementary(DetectorModel const& det, double u) noexcept {
    if (u < det.p()) {
        return Outcome::a;
    }
    if (u < det.p() + det.q()) {
        return Outcome::b;
    }
    return Outcome::none;
}

/// Counter-based random stream: draw j of stream s under seed k is a pure
/// function of (k, s, j). Output is the SplitMix64 finalizer applied to
/// key(k, s) + j * golden_gamma, so repetition i of a run always sees the same
/// deviates regardless of which worker executes it.
class CounterStream {
  public:
    CounterStream(std::uint64_t seed, std::uint64_t stream_id) noexcept;

    std::uint64_t next_u64() noexcept;
    /// Uniform on [0, 1) with 53 random bits.
    double next_uniform() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    static std::uint64_t mix(std::uint64_t z) noexcept;

  private:
    std::uint64_t key_;
    std::uint64_t counter_ = 0;
};

/// n independent elementary experiments; returns the A and B counts.
CountPair run_sequence(DetectorModel const& det, std::int64_t n, CounterStream& rng);

struct RunConfig {
    ExcitationSpec spec;
    DetectorModel det;
    std::int64_t series_count = 1'000'000;  // M, repetitions
    std::uint64_t seed = 0;
    std::int64_t batch_count = 32;           // B, for batch-means error bars
    double tail_tol = 1e-12;
    /// Execution detail only; results do not depend on it. 0 means
    /// std::thread::hardware_concurrency().
    unsigned workers = 1;

    /// M >= B >= 2.
    void validate() const;
};

/// Monte Carlo estimates of a MomentSummary. Standard errors come from batch
/// means over contiguous repetition blocks.
struct EmpiricalStats {
    MomentSummary estimate;
    double se_mean_a = 0;
    double se_mean_b = 0;
    std::optional<double> se_corr;
    std::optional<double> se_g2;
    std::int64_t samples = 0;
    std::int64_t batches = 0;
    /// Probability mass of sequence lengths beyond the weight table; every
    /// expectation is biased by at most this much times the integrand bound.
    double tail_bias_bound = 0;
};

/// Single-pass co-moment accumulator for (xi, eta) with exact pairwise merge.
class CountMoments {
  public:
    void add(CountPair const& c) noexcept;
    void merge(CountMoments const& other) noexcept;

    std::int64_t count() const noexcept { return count_; }
    /// Population moments; corr and g2 absent where undefined.
    MomentSummary summary() const;

  private:
    std::int64_t count_ = 0;
    double mean_a_ = 0;
    double mean_b_ = 0;
    double m2_a_ = 0;
    double m2_b_ = 0;
    double c_ab_ = 0;
};

/// M repetitions: draw n from the weight table, run a sequence of n
/// elementary experiments, accumulate the counts. Bit-identical for a given
/// (spec, det, M, seed, B, tail_tol) whatever the worker count.
EmpiricalStats run_series(RunConfig const& config);

/// Same, with a prebuilt weight table for config.spec.
EmpiricalStats run_series(RunConfig const& config, WeightTable const& table);

/// Estimates after the first c repetitions for each checkpoint c. Every
/// checkpoint reuses the same repetition streams, so later checkpoints extend
/// earlier ones. Checkpoints must be ascending, each in [B, M].
std::vector<EmpiricalStats> convergence_sweep(RunConfig const& config,
                                              std::span<std::int64_t const> checkpoints);

} // namespace anticorr
