#include "anticorr/montecarlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <string>
#include <thread>

namespace anticorr {

namespace {

constexpr std::uint64_t kGoldenGamma = 0x9e3779b97f4a7c15ULL;

struct BatchMeans {
    double mean = 0;
    double se = 0;
};

BatchMeans batch_means(std::span<double const> values) {
    auto const count = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) {
        mean += v;
    }
    mean /= count;
    double ss = 0.0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
    }
    return {mean, std::sqrt(ss / (count - 1.0) / count)};
}

CountMoments run_block(RunConfig const& config, WeightTable const& table, std::int64_t begin,
                       std::int64_t end) {
    CountMoments acc;
    for (std::int64_t rep = begin; rep < end; ++rep) {
        CounterStream rng(config.seed, static_cast<std::uint64_t>(rep));
        std::int64_t const n = table.sample(rng.next_uniform());
        acc.add(run_sequence(config.det, n, rng));
    }
    return acc;
}

} // namespace

CounterStream::CounterStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
    : key_(mix(mix(seed) ^ stream_id)) {}

std::uint64_t CounterStream::mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t CounterStream::next_u64() noexcept {
    ++counter_;
    return mix(key_ + counter_ * kGoldenGamma);
}

CountPair run_sequence(DetectorModel const& det, std::int64_t n, CounterStream& rng) {
    if (n < 0) {
        throw InvariantError("run_sequence: n must be non-negative");
    }
    CountPair counts;
    for (std::int64_t i = 0; i < n; ++i) {
        switch (run_elementary(det, rng.next_uniform())) {
        case Outcome::a:
            ++counts.m;
            break;
        case Outcome::b:
            ++counts.k;
            break;
        case Outcome::none:
            break;
        }
    }
    return counts;
}

void RunConfig::validate() const {
    if (batch_count < 2) {
        throw InvariantError("RunConfig: batch count must be >= 2");
    }
    if (series_count < batch_count) {
        throw InvariantError("RunConfig: series count M (" + std::to_string(series_count) +
                             ") must be >= batch count B (" + std::to_string(batch_count) + ")");
    }
    if (!(tail_tol > 0.0 && tail_tol <= 1e-3)) {
        throw InvariantError("RunConfig: tail tolerance must lie in (0, 1e-3]");
    }
}

void CountMoments::add(CountPair const& c) noexcept {
    ++count_;
    double const a = static_cast<double>(c.m);
    double const b = static_cast<double>(c.k);
    double const da = a - mean_a_;
    double const db = b - mean_b_;
    double const inv = 1.0 / static_cast<double>(count_);
    mean_a_ += da * inv;
    mean_b_ += db * inv;
    m2_a_ += da * (a - mean_a_);
    m2_b_ += db * (b - mean_b_);
    c_ab_ += da * (b - mean_b_);
}

void CountMoments::merge(CountMoments const& other) noexcept {
    if (other.count_ == 0) {
        return;
    }
    if (count_ == 0) {
        *this = other;
        return;
    }
    double const n1 = static_cast<double>(count_);
    double const n2 = static_cast<double>(other.count_);
    double const n = n1 + n2;
    double const da = other.mean_a_ - mean_a_;
    double const db = other.mean_b_ - mean_b_;
    mean_a_ += da * n2 / n;
    mean_b_ += db * n2 / n;
    m2_a_ += other.m2_a_ + da * da * n1 * n2 / n;
    m2_b_ += other.m2_b_ + db * db * n1 * n2 / n;
    c_ab_ += other.c_ab_ + da * db * n1 * n2 / n;
    count_ += other.count_;
}

MomentSummary CountMoments::summary() const {
    if (count_ == 0) {
        return {};
    }
    double const n = static_cast<double>(count_);
    double const cov = c_ab_ / n;
    std::optional<double> g2;
    double const mean_product = mean_a_ * mean_b_;
    if (mean_product > 0.0) {
        g2 = (cov + mean_product) / mean_product;
    }
    return make_summary(mean_a_, mean_b_, m2_a_ / n, m2_b_ / n, cov, g2);
}

EmpiricalStats run_series(RunConfig const& config, WeightTable const& table) {
    config.validate();
    auto const batches = static_cast<std::size_t>(config.batch_count);
    std::int64_t const total = config.series_count;
    auto block_begin = [&](std::size_t b) {
        return static_cast<std::int64_t>(b) * total / config.batch_count;
    };

    std::vector<CountMoments> blocks(batches);
    unsigned workers = config.workers == 0 ? std::thread::hardware_concurrency() : config.workers;
    workers = std::clamp<unsigned>(workers, 1u, static_cast<unsigned>(batches));

    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t b = next.fetch_add(1); b < batches; b = next.fetch_add(1)) {
            blocks[b] = run_block(config, table, block_begin(b), block_begin(b + 1));
        }
    };
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(workers);
        for (unsigned w = 0; w < workers; ++w) {
            pool.emplace_back(work);
        }
    }

    // fixed merge order keeps the result independent of scheduling
    CountMoments all;
    std::vector<double> mean_a(batches);
    std::vector<double> mean_b(batches);
    std::vector<double> corr;
    std::vector<double> g2;
    corr.reserve(batches);
    g2.reserve(batches);
    for (std::size_t b = 0; b < batches; ++b) {
        all.merge(blocks[b]);
        MomentSummary const s = blocks[b].summary();
        mean_a[b] = s.mean_a;
        mean_b[b] = s.mean_b;
        if (s.corr) {
            corr.push_back(*s.corr);
        }
        if (s.g2) {
            g2.push_back(*s.g2);
        }
    }

    EmpiricalStats stats;
    stats.estimate = all.summary();
    stats.se_mean_a = batch_means(mean_a).se;
    stats.se_mean_b = batch_means(mean_b).se;
    if (corr.size() == batches) {
        stats.se_corr = batch_means(corr).se;
    }
    if (g2.size() == batches) {
        stats.se_g2 = batch_means(g2).se;
    }
    stats.samples = total;
    stats.batches = config.batch_count;
    stats.tail_bias_bound = table.tail_bound();
    return stats;
}

EmpiricalStats run_series(RunConfig const& config) {
    config.validate();
    return run_series(config, build_weight_table(config.spec, config.tail_tol));
}

std::vector<EmpiricalStats> convergence_sweep(RunConfig const& config,
                                              std::span<std::int64_t const> checkpoints) {
    config.validate();
    if (checkpoints.empty()) {
        throw InvariantError("convergence_sweep: at least one checkpoint is required");
    }
    if (!std::is_sorted(checkpoints.begin(), checkpoints.end()) ||
        std::adjacent_find(checkpoints.begin(), checkpoints.end()) != checkpoints.end()) {
        throw InvariantError("convergence_sweep: checkpoints must be strictly ascending");
    }
    if (checkpoints.front() < config.batch_count || checkpoints.back() > config.series_count) {
        throw InvariantError("convergence_sweep: checkpoints must lie in [B, M]");
    }

    WeightTable const table = build_weight_table(config.spec, config.tail_tol);
    std::vector<EmpiricalStats> out;
    out.reserve(checkpoints.size());
    for (std::int64_t c : checkpoints) {
        RunConfig sub = config;
        sub.series_count = c;
        out.push_back(run_series(sub, table));
    }
    return out;
}

} // namespace anticorr
