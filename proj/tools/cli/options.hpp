#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <CLI11.hpp>

#include "anticorr/excitation.hpp"
#include "anticorr/trinomial.hpp"

namespace anticorr::cli {

/// Bad flag combination or value; maps to exit code 2.
class UsageError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

struct DetectorOptions {
    double p = 0.0;
    double q = 0.0;
    std::optional<double> r;

    void attach(CLI::App& app);
    /// r defaults to 1 - p - q.
    DetectorModel resolve() const;
};

/// One flag group per excitation family; at most one family may be named.
struct FamilyOptions {
    std::optional<std::int64_t> number;
    std::optional<double> poisson;
    std::optional<double> thermal;
    std::optional<double> squeezed_a;
    std::optional<double> squeezed_zeta;
    std::optional<double> squeezed_epsilon;
    std::optional<std::int64_t> phase;

    void attach(CLI::App& app);
    /// Throws UsageError unless exactly one family is fully specified.
    ExcitationSpec resolve() const;
};

struct OutputOptions {
    std::string path;

    void attach(CLI::App& app);
};

/// Default seed from ANTICORR_SEED, 0 when unset. Throws UsageError on a
/// malformed value.
std::uint64_t seed_from_environment();

} // namespace anticorr::cli
