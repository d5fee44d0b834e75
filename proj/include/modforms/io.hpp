#pragma once

#include <cstdint>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "basis_search.hpp"
#include "eta_quotient.hpp"
#include "qseries.hpp"

namespace modforms {

using Json = nlohmann::ordered_json;

class FormatError : public std::runtime_error {
  public:
    FormatError(std::size_t line, const std::string& what)
        : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const { return line_; }

  private:
    std::size_t line_;
};

/// A list of q-expansions at one level and weight.
///
///     N <level> k <weight> prec <P> count <t>
///     a(0) a(1) ... a(P-1)        (t lines, integers or p/q)
struct SeriesFile {
    std::int64_t level = 1;
    int weight = 2;
    std::size_t prec = 0;
    std::vector<QSeries> series;
};

inline void write_series_file(std::ostream& os, const SeriesFile& f) {
    os << "N " << f.level << " k " << f.weight << " prec " << f.prec << " count " << f.series.size() << '\n';
    for (const auto& s : f.series) {
        if (s.prec() != f.prec) throw std::invalid_argument("write_series_file: series precision differs from header");
        os << to_string(s) << '\n';
    }
}

inline SeriesFile read_series_file(std::istream& is) {
    std::string line;
    std::size_t lineno = 0;
    auto next_line = [&]() {
        while (std::getline(is, line)) {
            ++lineno;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (line.find_first_not_of(" \t") != std::string::npos) return true;
        }
        return false;
    };
    if (!next_line()) throw FormatError(lineno, "missing header");

    SeriesFile f;
    {
        std::istringstream h(line);
        std::string kN, kk, kp, kc, extra;
        long long level = 0, weight = 0, prec = 0, count = 0;
        if (!(h >> kN >> level >> kk >> weight >> kp >> prec >> kc >> count) || kN != "N" || kk != "k" ||
            kp != "prec" || kc != "count" || (h >> extra))
            throw FormatError(lineno, "expected 'N <level> k <weight> prec <P> count <t>'");
        if (level < 1 || weight < 0 || prec < 1 || count < 0) throw FormatError(lineno, "header values out of range");
        f.level = level;
        f.weight = static_cast<int>(weight);
        f.prec = static_cast<std::size_t>(prec);
        f.series.reserve(static_cast<std::size_t>(count));
        for (long long i = 0; i < count; ++i) {
            if (!next_line()) throw FormatError(lineno, "expected " + std::to_string(count) + " series lines");
            QSeries s;
            try {
                s = parse_series(line);
            } catch (const std::invalid_argument& e) {
                throw FormatError(lineno, e.what());
            }
            if (s.prec() != f.prec)
                throw FormatError(lineno, "expected " + std::to_string(f.prec) + " coefficients, found " + std::to_string(s.prec()));
            f.series.push_back(std::move(s));
        }
    }
    if (next_line()) throw FormatError(lineno, "trailing content after the declared series");
    return f;
}

inline Json coefficients_json(const QSeries& f) {
    Json a = Json::array();
    for (const auto& c : f.coefficients()) a.push_back(c.get_str());
    return a;
}

/// {"N": n, "r": {"1": r1, "2": r2, ...}}
inline Json to_json(const EtaQuotient& e) {
    Json r = Json::object();
    const auto divs = divisors(e.level);
    for (std::size_t j = 0; j < divs.size(); ++j) r[std::to_string(divs[j])] = e.exponents[j];
    return Json{{"N", e.level}, {"r", r}};
}

inline EtaQuotient eta_from_json(const Json& j) {
    const std::int64_t N = j.at("N").get<std::int64_t>();
    std::map<std::int64_t, std::int64_t> r;
    for (const auto& [key, value] : j.at("r").items()) r[std::stoll(key)] = value.get<std::int64_t>();
    return EtaQuotient::from_map(N, r);
}

inline Json to_json(const Representation& rep) {
    Json terms = Json::array();
    for (const auto& [m, c] : rep.terms()) terms.push_back(Json{{"coeff", c.get_str()}, {"exponents", m}});
    return terms;
}

inline Representation representation_from_json(const Json& j) {
    Representation rep;
    for (const auto& t : j) {
        rep.add_scaled(parse_rational(t.at("coeff").get<std::string>()),
                       Representation::monomial(t.at("exponents").get<Monomial>()));
    }
    return rep;
}

/// Eta exponents, text form: `1:r1 2:r2 ...`
inline std::string to_text(const EtaQuotient& e) {
    std::string s;
    const auto divs = divisors(e.level);
    for (std::size_t j = 0; j < divs.size(); ++j) {
        if (j) s += ' ';
        s += std::to_string(divs[j]) + ':' + std::to_string(e.exponents[j]);
    }
    return s;
}

}  // namespace modforms
