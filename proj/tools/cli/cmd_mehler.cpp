#include <cmath>
#include <ostream>

#include "anticorr/errors.hpp"
#include "anticorr/hermite.hpp"
#include "commands.hpp"
#include "format.hpp"
#include "options.hpp"

namespace anticorr::cli {

namespace {

class MehlerCommand final : public Command {
  public:
    explicit MehlerCommand(CLI::App& parent)
        : Command(parent.add_subcommand(
              "mehler", "Check the Hermite generating identity on an (alpha, t) grid")) {
        output_.attach(sub());
        sub().add_option("--alpha", alphas_, "Comma-separated alpha values")
            ->delimiter(',')
            ->capture_default_str();
        sub().add_option("--t", ts_, "Comma-separated t values, |t| <= 0.95")
            ->delimiter(',')
            ->capture_default_str();
        sub().add_option("--tol", tol_, "Relative tolerance")->capture_default_str();
    }

    int execute(std::ostream& out, std::ostream& err) override {
        if (!(tol_ > 0.0)) {
            throw UsageError("--tol must be positive");
        }
        std::string csv = csv_row({"alpha", "t", "partial_sum", "closed_form", "abs_error",
                                   "rel_error", "terms_used", "status"});
        int failures = 0;
        for (double alpha : alphas_) {
            for (double t : ts_) {
                try {
                    MehlerResult const r = mehler_check(alpha, t, tol_);
                    double const abs_error = std::abs(r.partial_sum - r.closed_form);
                    double const rel_error = abs_error / std::abs(r.closed_form);
                    bool const ok = rel_error <= tol_;
                    failures += ok ? 0 : 1;
                    csv += csv_row({num(alpha), num(t), num(r.partial_sum), num(r.closed_form),
                                    num(abs_error), num(rel_error), std::to_string(r.terms_used),
                                    ok ? "ok" : "exceeds_tol"});
                } catch (NumericError const& e) {
                    ++failures;
                    csv += csv_row({num(alpha), num(t), "", "", "", "", "", "no_convergence"});
                    err << "alpha=" << num(alpha) << " t=" << num(t) << ": " << e.what() << '\n';
                }
            }
        }
        emit(output_.path, csv, out);
        if (failures > 0) {
            err << failures << " grid point(s) failed the tolerance " << num(tol_) << '\n';
            return 1;
        }
        return 0;
    }

  private:
    OutputOptions output_;
    std::vector<double> alphas_{0.5, 1.0, 2.0};
    std::vector<double> ts_{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9};
    double tol_ = 1e-8;
};

} // namespace

std::unique_ptr<Command> make_mehler_command(CLI::App& parent) {
    return std::make_unique<MehlerCommand>(parent);
}

} // namespace anticorr::cli
