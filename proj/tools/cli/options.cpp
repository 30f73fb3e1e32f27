#include "options.hpp"

#include <charconv>
#include <cstdlib>
#include <cstring>

namespace anticorr::cli {

void DetectorOptions::attach(CLI::App& app) {
    app.add_option("--p", p, "Detection probability of detector A per elementary experiment")
        ->required();
    app.add_option("--q", q, "Detection probability of detector B per elementary experiment")
        ->required();
    app.add_option("--r", r, "No-detection probability (default 1 - p - q)");
}

DetectorModel DetectorOptions::resolve() const {
    return r ? DetectorModel(p, q, *r) : DetectorModel::from_pq(p, q);
}

void FamilyOptions::attach(CLI::App& app) {
    app.add_option("--n,--number", number, "Fixed number of elementary experiments");
    app.add_option("--poisson", poisson, "Poisson excitation with this mean");
    app.add_option("--thermal", thermal, "Thermal excitation with this mean occupation");
    app.add_option("--squeezed-a", squeezed_a, "Squeezed excitation: displacement a");
    app.add_option("--squeezed-zeta", squeezed_zeta,
                   "Squeezed excitation: squeezing zeta in (0, 1)");
    app.add_option("--squeezed-epsilon", squeezed_epsilon,
                   "Squeezed excitation: epsilon = 2(1 - zeta)/(1 + zeta)");
    app.add_option("--phase", phase, "Uniform excitation on {0..N}");
}

ExcitationSpec FamilyOptions::resolve() const {
    bool const squeezed = squeezed_a || squeezed_zeta || squeezed_epsilon;
    int const named = int(number.has_value()) + int(poisson.has_value()) +
                      int(thermal.has_value()) + int(squeezed) + int(phase.has_value());
    if (named == 0) {
        throw UsageError("name one excitation: --n, --poisson, --thermal, "
                         "--squeezed-a with --squeezed-zeta or --squeezed-epsilon, or --phase");
    }
    if (named > 1) {
        throw UsageError("name exactly one excitation family");
    }
    if (number) {
        return ExcitationSpec::number(*number);
    }
    if (poisson) {
        return ExcitationSpec::poisson(*poisson);
    }
    if (thermal) {
        return ExcitationSpec::thermal(*thermal);
    }
    if (phase) {
        return ExcitationSpec::phase(*phase);
    }
    if (!squeezed_a) {
        throw UsageError("squeezed excitation needs --squeezed-a");
    }
    if (squeezed_zeta.has_value() == squeezed_epsilon.has_value()) {
        throw UsageError("squeezed excitation needs exactly one of --squeezed-zeta, "
                         "--squeezed-epsilon");
    }
    return squeezed_zeta ? ExcitationSpec::squeezed(*squeezed_a, *squeezed_zeta)
                         : ExcitationSpec::squeezed_from_epsilon(*squeezed_a, *squeezed_epsilon);
}

void OutputOptions::attach(CLI::App& app) {
    app.add_option("-o,--output", path, "Write the report to this file instead of stdout");
}

std::uint64_t seed_from_environment() {
    char const* raw = std::getenv("ANTICORR_SEED");
    if (raw == nullptr || *raw == '\0') {
        return 0;
    }
    std::uint64_t seed = 0;
    char const* end = raw + std::strlen(raw);
    auto const [ptr, ec] = std::from_chars(raw, end, seed);
    if (ec != std::errc{} || ptr != end) {
        throw UsageError(std::string("ANTICORR_SEED is not an unsigned 64-bit integer: ") + raw);
    }
    return seed;
}

} // namespace anticorr::cli
