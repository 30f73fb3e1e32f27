#include "cli.hpp"

#include <ostream>

#include "anticorr/errors.hpp"
#include "commands.hpp"
#include "options.hpp"

#ifndef ANTICORR_VERSION
#define ANTICORR_VERSION "unknown"
#endif

namespace anticorr::cli {

int run(std::vector<std::string> const& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Counting statistics of two mutually exclusive detectors"};
    app.name("anticorr");
    app.set_version_flag("--version", ANTICORR_VERSION);
    app.set_config("--config", "",
                   "INI or TOML file, one section per subcommand; flags override it");
    app.require_subcommand(1);

    std::vector<std::unique_ptr<Command>> commands;
    commands.push_back(make_pmf_command(app));
    commands.push_back(make_moments_command(app));
    commands.push_back(make_simulate_command(app));
    commands.push_back(make_sweep_command(app));
    commands.push_back(make_mehler_command(app));

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (CLI::ParseError const& e) {
        return app.exit(e, out, err) == 0 ? kSuccess : kUsageError;
    }

    for (auto& command : commands) {
        if (!command->app().parsed()) {
            continue;
        }
        try {
            return command->execute(out, err);
        } catch (UsageError const& e) {
            err << "error: " << e.what() << '\n';
            return kUsageError;
        } catch (InvariantError const& e) {
            err << "error: " << e.what() << '\n';
            return kUsageError;
        } catch (NumericError const& e) {
            err << "numeric failure: " << e.what() << '\n';
            return kNumericFailure;
        } catch (std::exception const& e) {
            err << "failure: " << e.what() << '\n';
            return kNumericFailure;
        }
    }
    return kUsageError;
}

} // namespace anticorr::cli
