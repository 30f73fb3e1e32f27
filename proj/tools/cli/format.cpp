#include "format.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>
#include <type_traits>

#include <fmt/format.h>

#include "options.hpp"

namespace anticorr::cli {

std::string num(double v) { return fmt::format("{:.12g}", v); }

std::string num(std::optional<double> const& v) { return v ? num(*v) : std::string(); }

Json jnum(double v) {
    if (!std::isfinite(v)) {
        return nullptr;
    }
    // any decimal of <= 15 digits round-trips, so the dump shows at most 12
    return std::strtod(num(v).c_str(), nullptr);
}

Json jnum(std::optional<double> const& v) { return v ? jnum(*v) : Json(nullptr); }

Json excitation_json(ExcitationSpec const& spec) {
    Json j;
    j["family"] = std::string(to_string(spec.family()));
    std::visit(
        [&](auto const& e) {
            using E = std::decay_t<decltype(e)>;
            if constexpr (std::is_same_v<E, NumberExcitation>) {
                j["n"] = e.n;
            } else if constexpr (std::is_same_v<E, PoissonExcitation>) {
                j["lambda"] = jnum(e.lambda);
            } else if constexpr (std::is_same_v<E, ThermalExcitation>) {
                j["nbar"] = jnum(e.nbar);
            } else if constexpr (std::is_same_v<E, SqueezedExcitation>) {
                j["a"] = jnum(e.a);
                j["zeta"] = jnum(e.zeta);
            } else {
                j["max_n"] = e.max_n;
            }
        },
        spec.variant());
    return j;
}

Json detector_json(DetectorModel const& det) {
    return Json{{"p", jnum(det.p())}, {"q", jnum(det.q())}, {"r", jnum(det.r())}};
}

Json summary_json(MomentSummary const& s) {
    return Json{{"mean_a", jnum(s.mean_a)}, {"mean_b", jnum(s.mean_b)}, {"var_a", jnum(s.var_a)},
                {"var_b", jnum(s.var_b)},   {"cov", jnum(s.cov)},       {"corr", jnum(s.corr)},
                {"g2", jnum(s.g2)}};
}

std::string csv_field(std::string const& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) {
        return s;
    }
    std::string quoted = "\"";
    for (char c : s) {
        if (c == '"') {
            quoted += '"';
        }
        quoted += c;
    }
    quoted += '"';
    return quoted;
}

std::string csv_row(std::vector<std::string> const& fields) {
    std::string line;
    for (std::size_t i = 0; i < fields.size(); ++i) {
        if (i > 0) {
            line += ',';
        }
        line += csv_field(fields[i]);
    }
    line += '\n';
    return line;
}

std::string aligned(std::vector<std::vector<std::string>> const& rows) {
    std::vector<std::size_t> width;
    for (auto const& row : rows) {
        width.resize(std::max(width.size(), row.size()), 0);
        for (std::size_t c = 0; c < row.size(); ++c) {
            width[c] = std::max(width[c], row[c].size());
        }
    }
    std::string text;
    for (auto const& row : rows) {
        std::string line;
        for (std::size_t c = 0; c < row.size(); ++c) {
            line += row[c];
            if (c + 1 < row.size()) {
                line.append(width[c] - row[c].size() + 2, ' ');
            }
        }
        text += line;
        text += '\n';
    }
    return text;
}

void emit(std::string const& path, std::string const& text, std::ostream& out) {
    if (path.empty()) {
        out << text;
        return;
    }
    std::ofstream file(path, std::ios::binary | std::ios::trunc);
    file << text;
    if (!file) {
        throw UsageError("cannot write " + path);
    }
}

} // namespace anticorr::cli
