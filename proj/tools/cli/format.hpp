#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "anticorr/excitation.hpp"
#include "anticorr/trinomial.hpp"

namespace anticorr::cli {

using Json = nlohmann::ordered_json;

/// 12 significant digits, printf %.12g style.
std::string num(double v);
/// num(*v), or the empty string when absent.
std::string num(std::optional<double> const& v);

/// v rounded to 12 significant digits; null when not finite.
Json jnum(double v);
Json jnum(std::optional<double> const& v);

Json excitation_json(ExcitationSpec const& spec);
Json detector_json(DetectorModel const& det);
/// mean_a, mean_b, var_a, var_b, cov, corr, g2.
Json summary_json(MomentSummary const& s);

/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(std::string const& s);
std::string csv_row(std::vector<std::string> const& fields);

/// Left-aligned columns separated by two spaces, one row per line.
std::string aligned(std::vector<std::vector<std::string>> const& rows);

/// Writes text to path (binary mode, LF kept as is) or to out when path is
/// empty. Throws UsageError when the file cannot be written.
void emit(std::string const& path, std::string const& text, std::ostream& out);

} // namespace anticorr::cli
