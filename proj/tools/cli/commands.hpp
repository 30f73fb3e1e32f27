#pragma once

#include <iosfwd>
#include <memory>

#include <CLI11.hpp>

namespace anticorr::cli {

/// A subcommand: flags are bound at construction, execute() runs after a
/// successful parse.
class Command {
  public:
    explicit Command(CLI::App* sub) : sub_(sub) {}
    virtual ~Command() = default;
    Command(Command const&) = delete;
    Command& operator=(Command const&) = delete;

    CLI::App const& app() const { return *sub_; }
    virtual int execute(std::ostream& out, std::ostream& err) = 0;

  protected:
    CLI::App& sub() { return *sub_; }

  private:
    CLI::App* sub_;
};

std::unique_ptr<Command> make_pmf_command(CLI::App& parent);
std::unique_ptr<Command> make_moments_command(CLI::App& parent);
std::unique_ptr<Command> make_simulate_command(CLI::App& parent);
std::unique_ptr<Command> make_sweep_command(CLI::App& parent);
std::unique_ptr<Command> make_mehler_command(CLI::App& parent);

} // namespace anticorr::cli
