#include <ostream>

#include "anticorr/analytic.hpp"
#include "anticorr/gf_engine.hpp"
#include "commands.hpp"
#include "format.hpp"
#include "options.hpp"

namespace anticorr::cli {

namespace {

std::string opt_text(std::optional<double> const& v) { return v ? num(*v) : "-"; }

class MomentsCommand final : public Command {
  public:
    explicit MomentsCommand(CLI::App& parent)
        : Command(parent.add_subcommand(
              "moments", "Analytic count statistics checked against the generating function")) {
        det_.attach(sub());
        family_.attach(sub());
        output_.attach(sub());
        sub().add_flag("--table1", table1_,
                       "Five-family table at p = q; family flags override its parameters");
        sub().add_flag("--as-printed", as_printed_,
                       "Use the literature closed forms for phase and high-squeeze");
        sub().add_option("--step", step_, "Finite-difference step of the generating-function check")
            ->capture_default_str();
        auto* json = sub().add_flag("--json", json_, "Emit JSON");
        sub().add_flag("--csv", csv_, "Emit CSV (table mode only)")->excludes(json);
    }

    int execute(std::ostream& out, std::ostream& /*err*/) override {
        DetectorModel const det = det_.resolve();
        if (table1_) {
            emit(output_.path, table_report(det), out);
            return 0;
        }
        if (csv_) {
            throw UsageError("--csv applies to --table1 only");
        }
        emit(output_.path, single_report(det, family_.resolve()), out);
        return 0;
    }

  private:
    Table1Params table_params() const {
        Table1Params params;
        if (family_.number) {
            params.number_n = *family_.number;
        }
        if (family_.poisson) {
            params.poisson_lambda = *family_.poisson;
        }
        if (family_.thermal) {
            params.thermal_nbar = *family_.thermal;
        }
        if (family_.squeezed_a) {
            params.squeezed_a = *family_.squeezed_a;
        }
        if (family_.squeezed_epsilon) {
            params.squeezed_epsilon = *family_.squeezed_epsilon;
        } else if (family_.squeezed_zeta) {
            double const z = *family_.squeezed_zeta;
            params.squeezed_epsilon = 2.0 * (1.0 - z) / (1.0 + z);
        }
        if (family_.phase) {
            params.phase_n = *family_.phase;
        }
        return params;
    }

    std::string table_report(DetectorModel const& det) const {
        Table1Report const report = table1(det, table_params());
        if (json_) {
            Json columns = Json::array();
            for (auto const& c : report.columns) {
                columns.push_back({{"family", std::string(to_string(c.family))},
                                   {"parameters", c.parameters},
                                   {"mean", jnum(c.mean)},
                                   {"g2", jnum(c.g2)},
                                   {"corr", jnum(c.corr)},
                                   {"mean_printed", jnum(c.mean_printed)},
                                   {"g2_printed", jnum(c.g2_printed)},
                                   {"corr_printed", jnum(c.corr_printed)},
                                   {"differs", c.differs()}});
            }
            Json j{{"schema", 1},
                   {"command", "moments"},
                   {"mode", "table1"},
                   {"detector", detector_json(det)},
                   {"columns", columns}};
            return j.dump(2) + "\n";
        }
        if (csv_) {
            std::string csv = csv_row({"family", "parameters", "mean", "g2", "corr", "mean_printed",
                                       "g2_printed", "corr_printed", "differs"});
            for (auto const& c : report.columns) {
                csv += csv_row({std::string(to_string(c.family)), c.parameters, num(c.mean),
                                num(c.g2), num(c.corr), num(c.mean_printed), num(c.g2_printed),
                                num(c.corr_printed), c.differs() ? "true" : "false"});
            }
            return csv;
        }

        std::vector<std::vector<std::string>> rows(8);
        rows[0] = {""};
        rows[1] = {"parameters"};
        rows[2] = {"mean counts"};
        rows[3] = {"g2"};
        rows[4] = {"corr (p = q)"};
        rows[5] = {"mean counts, printed"};
        rows[6] = {"g2, printed"};
        rows[7] = {"corr, printed"};
        std::string differing;
        for (auto const& c : report.columns) {
            rows[0].push_back(std::string(to_string(c.family)));
            rows[1].push_back(c.parameters);
            rows[2].push_back(num(c.mean));
            rows[3].push_back(opt_text(c.g2));
            rows[4].push_back(opt_text(c.corr));
            rows[5].push_back(num(c.mean_printed));
            rows[6].push_back(opt_text(c.g2_printed));
            rows[7].push_back(opt_text(c.corr_printed));
            if (c.differs()) {
                differing += differing.empty() ? "" : ", ";
                differing += std::string(to_string(c.family));
            }
        }
        std::string text = "detector  p=" + num(det.p()) + " q=" + num(det.q()) +
                           " r=" + num(det.r()) + "\n\n" + aligned(rows);
        if (!differing.empty()) {
            text += "\nprinted closed forms differ from the exact route for: " + differing + "\n";
        }
        return text;
    }

    std::string single_report(DetectorModel const& det, ExcitationSpec const& spec) const {
        std::vector<std::string> notes;
        MomentSummary analytic = mixture_moments(spec, det);
        std::optional<HighSqueezeReport> high;
        if (as_printed_) {
            if (auto const* ph = spec.get_if<PhaseExcitation>()) {
                analytic = phase_summary(det, ph->max_n, PhaseMode::as_printed);
                notes.push_back(
                    "as-printed phase forms fail the N=1 enumeration check: over n in {0, 1} "
                    "E[xi eta] = 0, so cov = -pq/4 = " +
                    num(-det.p() * det.q() / 4.0) +
                    ", while the printed product term gives cov = 0 and g2 = 1");
            } else if (auto const* sq = spec.get_if<SqueezedExcitation>()) {
                high = squeezed_highsqueeze(det, sq->a, sq->epsilon());
                if (high->outside_regime) {
                    notes.push_back("epsilon >= 0.1: outside the high-squeeze regime");
                }
            } else {
                notes.push_back("printed and exact forms coincide for this family");
            }
        }
        MomentSummary const oracle = numeric_moments(MixtureGF{spec, det}, step_);
        double const gap = max_relative_discrepancy(analytic, oracle);
        std::string const mode = as_printed_ ? "as-printed" : "derived-exact";

        if (json_) {
            Json j{{"schema", 1},
                   {"command", "moments"},
                   {"config",
                    {{"excitation", excitation_json(spec)},
                     {"detector", detector_json(det)},
                     {"mode", mode}}},
                   {"analytic", summary_json(analytic)},
                   {"gf_oracle", summary_json(oracle)},
                   {"max_relative_discrepancy", jnum(gap)}};
            if (high) {
                j["high_squeeze"] = {{"epsilon", jnum(high->epsilon)},
                                     {"zeta", jnum(high->zeta)},
                                     {"mean_printed", jnum(high->mean_printed)},
                                     {"corr_printed", jnum(high->corr_printed)},
                                     {"g2_printed", jnum(high->g2_printed)},
                                     {"alpha_printed", jnum(high->alpha_printed)},
                                     {"beta_printed", jnum(high->beta_printed)},
                                     {"beta_series", jnum(high->beta_series)},
                                     {"alpha_exact", jnum(high->alpha_exact)},
                                     {"beta_exact", jnum(high->beta_exact)},
                                     {"corr_exact", jnum(high->corr_exact)},
                                     {"g2_exact", jnum(high->g2_exact)},
                                     {"corr_deviation", jnum(high->corr_deviation)},
                                     {"g2_deviation", jnum(high->g2_deviation)},
                                     {"outside_regime", high->outside_regime}};
            }
            j["notes"] = notes;
            return j.dump(2) + "\n";
        }

        std::string text;
        for (auto const& n : notes) {
            text += "note: " + n + "\n";
        }
        if (!notes.empty()) {
            text += "\n";
        }
        text += aligned({{"excitation", spec.describe()},
                         {"detector", "p=" + num(det.p()) + " q=" + num(det.q()) +
                                          " r=" + num(det.r())},
                         {"mode", mode}});
        text += "\n";
        text += aligned({{"field", "analytic", "gf_oracle"},
                         {"mean_a", num(analytic.mean_a), num(oracle.mean_a)},
                         {"mean_b", num(analytic.mean_b), num(oracle.mean_b)},
                         {"var_a", num(analytic.var_a), num(oracle.var_a)},
                         {"var_b", num(analytic.var_b), num(oracle.var_b)},
                         {"cov", num(analytic.cov), num(oracle.cov)},
                         {"corr", opt_text(analytic.corr), opt_text(oracle.corr)},
                         {"g2", opt_text(analytic.g2), opt_text(oracle.g2)}});
        text += "\nmax_relative_discrepancy  " + num(gap) + "\n";
        if (high) {
            text += "\nhigh-squeeze approximation at epsilon=" + num(high->epsilon) +
                    " (zeta=" + num(high->zeta) + ")\n";
            text += aligned({{"quantity", "printed", "exact", "deviation"},
                             {"alpha", num(high->alpha_printed), num(high->alpha_exact), ""},
                             {"beta", num(high->beta_printed), num(high->beta_exact), ""},
                             {"beta, leading order", num(high->beta_series), "", ""},
                             {"corr", num(high->corr_printed), opt_text(high->corr_exact),
                              num(high->corr_deviation)},
                             {"g2", num(high->g2_printed), opt_text(high->g2_exact),
                              num(high->g2_deviation)}});
        }
        return text;
    }

    DetectorOptions det_;
    FamilyOptions family_;
    OutputOptions output_;
    bool table1_ = false;
    bool as_printed_ = false;
    bool json_ = false;
    bool csv_ = false;
    double step_ = kDefaultDifferenceStep;
};

} // namespace

std::unique_ptr<Command> make_moments_command(CLI::App& parent) {
    return std::make_unique<MomentsCommand>(parent);
}

} // namespace anticorr::cli
