#include <chrono>
#include <ostream>

#include "anticorr/gf_engine.hpp"
#include "anticorr/montecarlo.hpp"
#include "commands.hpp"
#include "format.hpp"
#include "options.hpp"

namespace anticorr::cli {

namespace {

std::optional<double> z_score(std::optional<double> estimate, std::optional<double> target,
                              std::optional<double> se) {
    if (!estimate || !target || !se || !(*se > 0.0)) {
        return std::nullopt;
    }
    return (*estimate - *target) / *se;
}

class SimulateCommand final : public Command {
  public:
    explicit SimulateCommand(CLI::App& parent)
        : Command(parent.add_subcommand("simulate", "Monte Carlo estimates with error bars")) {
        det_.attach(sub());
        family_.attach(sub());
        output_.attach(sub());
        sub().add_option("-M,--series", series_, "Number of repetitions")->capture_default_str();
        sub().add_option("--seed", seed_, "Seed (default: ANTICORR_SEED, else 0)");
        sub().add_option("--batches", batches_, "Batches for batch-means error bars")
            ->capture_default_str();
        sub().add_option("--workers", workers_, "Worker threads, 0 for all cores; results do not "
                                                "depend on it")
            ->capture_default_str();
        sub().add_option("--tail-tol", tail_tol_, "Tail mass tolerance of the weight table")
            ->capture_default_str();
        auto* json = sub().add_flag("--json", json_, "Emit one JSON object (default)");
        sub().add_flag("--csv", csv_, "Emit a CSV header and one row")->excludes(json);
        sub().add_flag("--no-wall-time", no_wall_time_,
                       "Leave out the wall-clock field so identical runs are byte-identical");
    }

    int execute(std::ostream& out, std::ostream& /*err*/) override {
        RunConfig const config{.spec = family_.resolve(),
                               .det = det_.resolve(),
                               .series_count = series_,
                               .seed = seed_ ? *seed_ : seed_from_environment(),
                               .batch_count = batches_,
                               .tail_tol = tail_tol_,
                               .workers = workers_};
        auto const start = std::chrono::steady_clock::now();
        EmpiricalStats const stats = run_series(config);
        double const wall =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

        MomentSummary const target = mixture_moments(config.spec, config.det);
        auto const& est = stats.estimate;
        auto const z_mean_a = z_score(est.mean_a, target.mean_a, stats.se_mean_a);
        auto const z_mean_b = z_score(est.mean_b, target.mean_b, stats.se_mean_b);
        auto const z_corr = z_score(est.corr, target.corr, stats.se_corr);
        auto const z_g2 = z_score(est.g2, target.g2, stats.se_g2);

        if (csv_) {
            std::vector<std::string> header{
                "family",        "parameters",  "p",         "q",           "r",
                "series_count",  "seed",        "batch_count", "mean_a",    "mean_b",
                "var_a",         "var_b",       "cov",       "corr",        "g2",
                "se_mean_a",     "se_mean_b",   "se_corr",   "se_g2",       "target_mean_a",
                "target_mean_b", "target_corr", "target_g2", "z_mean_a",    "z_mean_b",
                "z_corr",        "z_g2",        "tail_bias_bound"};
            std::vector<std::string> row{std::string(to_string(config.spec.family())),
                                         config.spec.describe(),
                                         num(config.det.p()),
                                         num(config.det.q()),
                                         num(config.det.r()),
                                         std::to_string(config.series_count),
                                         std::to_string(config.seed),
                                         std::to_string(config.batch_count),
                                         num(est.mean_a),
                                         num(est.mean_b),
                                         num(est.var_a),
                                         num(est.var_b),
                                         num(est.cov),
                                         num(est.corr),
                                         num(est.g2),
                                         num(stats.se_mean_a),
                                         num(stats.se_mean_b),
                                         num(stats.se_corr),
                                         num(stats.se_g2),
                                         num(target.mean_a),
                                         num(target.mean_b),
                                         num(target.corr),
                                         num(target.g2),
                                         num(z_mean_a),
                                         num(z_mean_b),
                                         num(z_corr),
                                         num(z_g2),
                                         num(stats.tail_bias_bound)};
            if (!no_wall_time_) {
                header.emplace_back("wall_time_s");
                row.push_back(num(wall));
            }
            emit(output_.path, csv_row(header) + csv_row(row), out);
            return 0;
        }

        Json j{{"schema", 1},
               {"command", "simulate"},
               {"config",
                {{"excitation", excitation_json(config.spec)},
                 {"detector", detector_json(config.det)},
                 {"series_count", config.series_count},
                 {"seed", config.seed},
                 {"batch_count", config.batch_count},
                 {"tail_tol", jnum(config.tail_tol)}}},
               {"estimates", summary_json(est)},
               {"errors",
                {{"mean_a", jnum(stats.se_mean_a)},
                 {"mean_b", jnum(stats.se_mean_b)},
                 {"corr", jnum(stats.se_corr)},
                 {"g2", jnum(stats.se_g2)}}},
               {"targets",
                {{"mean_a", jnum(target.mean_a)},
                 {"mean_b", jnum(target.mean_b)},
                 {"corr", jnum(target.corr)},
                 {"g2", jnum(target.g2)}}},
               {"z_scores",
                {{"mean_a", jnum(z_mean_a)},
                 {"mean_b", jnum(z_mean_b)},
                 {"corr", jnum(z_corr)},
                 {"g2", jnum(z_g2)}}},
               {"samples", stats.samples},
               {"tail_bias_bound", jnum(stats.tail_bias_bound)}};
        if (!no_wall_time_) {
            j["wall_time_s"] = jnum(wall);
        }
        emit(output_.path, j.dump(2) + "\n", out);
        return 0;
    }

  private:
    DetectorOptions det_;
    FamilyOptions family_;
    OutputOptions output_;
    std::int64_t series_ = 1'000'000;
    std::optional<std::uint64_t> seed_;
    std::int64_t batches_ = 32;
    unsigned workers_ = 1;
    double tail_tol_ = 1e-12;
    bool json_ = false;
    bool csv_ = false;
    bool no_wall_time_ = false;
};

} // namespace

std::unique_ptr<Command> make_simulate_command(CLI::App& parent) {
    return std::make_unique<SimulateCommand>(parent);
}

} // namespace anticorr::cli
