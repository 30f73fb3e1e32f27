#include <cmath>
#include <map>
#include <ostream>

#include "anticorr/gf_engine.hpp"
#include "anticorr/montecarlo.hpp"
#include "commands.hpp"
#include "format.hpp"
#include "options.hpp"

namespace anticorr::cli {

namespace {

constexpr std::int64_t kMaxSweepPoints = 100'000;

class SweepCommand final : public Command {
  public:
    explicit SweepCommand(CLI::App& parent)
        : Command(parent.add_subcommand("sweep", "Plot-ready CSV over one excitation parameter")) {
        det_.attach(sub());
        family_.attach(sub());
        output_.attach(sub());
        sub().add_option("--param", param_, "Swept parameter")
            ->required()
            ->check(CLI::IsMember({"n", "lambda", "nbar", "a", "zeta", "epsilon", "N"}));
        sub().add_option("--from", from_, "First value")->required();
        sub().add_option("--to", to_, "Last value (inclusive)")->required();
        sub().add_option("--step", step_, "Increment, > 0")->required();
        sub().add_option("-M,--series", series_, "Also simulate this many repetitions per point");
        sub().add_option("--seed", seed_, "Seed (default: ANTICORR_SEED, else 0)");
        sub().add_option("--batches", batches_, "Batches for batch-means error bars")
            ->capture_default_str();
        sub().add_option("--workers", workers_, "Worker threads, 0 for all cores")
            ->capture_default_str();
        sub().add_option("--tail-tol", tail_tol_, "Tail mass tolerance of the weight table")
            ->capture_default_str();
    }

    int execute(std::ostream& out, std::ostream& /*err*/) override {
        DetectorModel const det = det_.resolve();
        if (!(step_ > 0.0) || !(to_ >= from_) || !std::isfinite(to_ - from_)) {
            throw UsageError("sweep needs --step > 0 and --to >= --from");
        }
        double const span = (to_ - from_) / step_;
        if (span >= static_cast<double>(kMaxSweepPoints)) {
            throw UsageError("sweep grid exceeds " + std::to_string(kMaxSweepPoints) + " points");
        }
        auto const points = static_cast<std::int64_t>(std::floor(span + 1e-9)) + 1;
        std::uint64_t const seed = series_ ? (seed_ ? *seed_ : seed_from_environment()) : 0;

        std::vector<std::string> header{"param", "value", "family", "mean_a", "mean_b",
                                        "var_a", "var_b", "cov",    "corr",   "g2",
                                        "mu1",   "mu2",   "beta",   "mandel_q"};
        if (series_) {
            for (char const* h : {"empirical_corr", "empirical_corr_se", "empirical_g2",
                                  "empirical_g2_se", "tail_bias_bound"}) {
                header.emplace_back(h);
            }
        }
        std::string csv = csv_row(header);
        for (std::int64_t i = 0; i < points; ++i) {
            double const value = from_ + static_cast<double>(i) * step_;
            ExcitationSpec const spec = spec_at(value);
            FactorialMoments const fm = factorial_moments(spec);
            MomentSummary const s = moments_from_factorial(det, fm);
            double const beta = fm.mu2 - fm.mu1 * fm.mu1;
            std::vector<std::string> row{param_,
                                         num(value),
                                         std::string(to_string(spec.family())),
                                         num(s.mean_a),
                                         num(s.mean_b),
                                         num(s.var_a),
                                         num(s.var_b),
                                         num(s.cov),
                                         num(s.corr),
                                         num(s.g2),
                                         num(fm.mu1),
                                         num(fm.mu2),
                                         num(beta),
                                         fm.mu1 > 0.0 ? num(beta / fm.mu1) : ""};
            if (series_) {
                RunConfig const config{.spec = spec,
                                       .det = det,
                                       .series_count = *series_,
                                       .seed = seed,
                                       .batch_count = batches_,
                                       .tail_tol = tail_tol_,
                                       .workers = workers_};
                EmpiricalStats const stats = run_series(config);
                row.push_back(num(stats.estimate.corr));
                row.push_back(num(stats.se_corr));
                row.push_back(num(stats.estimate.g2));
                row.push_back(num(stats.se_g2));
                row.push_back(num(stats.tail_bias_bound));
            }
            csv += csv_row(row);
        }
        emit(output_.path, csv, out);
        return 0;
    }

  private:
    static std::int64_t integral(double v, char const* name) {
        double const rounded = std::round(v);
        if (std::abs(v - rounded) > 1e-9) {
            throw UsageError(std::string("--param ") + name + " takes integer values");
        }
        return static_cast<std::int64_t>(rounded);
    }

    ExcitationSpec spec_at(double value) const {
        FamilyOptions f = family_;
        if (param_ == "n") {
            f.number = integral(value, "n");
        } else if (param_ == "lambda") {
            f.poisson = value;
        } else if (param_ == "nbar") {
            f.thermal = value;
        } else if (param_ == "a") {
            f.squeezed_a = value;
        } else if (param_ == "zeta") {
            f.squeezed_zeta = value;
            f.squeezed_epsilon.reset();
        } else if (param_ == "epsilon") {
            f.squeezed_epsilon = value;
            f.squeezed_zeta.reset();
        } else {
            f.phase = integral(value, "N");
        }
        return f.resolve();
    }

    DetectorOptions det_;
    FamilyOptions family_;
    OutputOptions output_;
    std::string param_;
    double from_ = 0.0;
    double to_ = 0.0;
    double step_ = 0.0;
    std::optional<std::int64_t> series_;
    std::optional<std::uint64_t> seed_;
    std::int64_t batches_ = 32;
    unsigned workers_ = 1;
    double tail_tol_ = 1e-12;
};

} // namespace

std::unique_ptr<Command> make_sweep_command(CLI::App& parent) {
    return std::make_unique<SweepCommand>(parent);
}

} // namespace anticorr::cli
