#pragma once

#include <json.hpp>

#include <string>
#include <vector>

#include "lubinlab/analyzer.hpp"
#include "lubinlab/polygon.hpp"
#include "lubinlab/series.hpp"

namespace lubinlab {

using Json = nlohmann::ordered_json;

/// "a", "-a" or "a/b". Throws ParseError with the column offset added.
mpq_class parse_rational(const std::string& text, int column = 1);

/// Inline syntax "c1,c2,...@k" = sum c_i x^(k+i-1); "@k" defaults to 1.
/// Coefficients are integers or a/b. Throws ParseError.
ExactSeries parse_inline_series(const std::string& text, int p, int M);

/// {"val": int|"inf", "unit": decimal string, "prec": int|"inf"}
Json to_json(const PadicNum& x);
PadicNum padic_from_json(const Json& j, int p);

/// {"p", "M", "N", "coeffs": [[[exponents], "rational"], ...]}; N is the
/// least coefficient precision ("inf" when exact). Zero-to-precision
/// coefficients are omitted.
Json to_json(const PSeries& s);
Json to_json(const ExactSeries& s);
/// Accepts the object form or an inline string (then p and M are needed).
ExactSeries exact_series_from_json(const Json& j, int p = 0, int M = 0);

/// {"vertices": [[i, v], ...], "segments": [{"slope": "a/b", "width": w}, ...]}
Json to_json(const NewtonPolygon& polygon);

Json to_json(const Logarithm& logf);
Json to_json(const FormalGroupLaw& group, int m2);
Json to_json(const FrobeniusMultiplier& fr);
Json to_json(const AnalysisReport& report, bool include_group_law = true);
/// Throws ParseError naming the first field that does not match the report
/// schema.
void validate_report_json(const Json& j);

/// A JSON array of {name, p, N, M, f, u}. Throws ParseError with the line
/// and column of malformed text.
std::vector<Fixture> parse_fixtures(const std::string& text);
std::vector<Fixture> load_fixtures(const std::string& path);
Json to_json(const std::vector<Fixture>& fixtures);

/// Human-readable report of a single analysis.
std::string report_text(const AnalysisReport& report);

}  // namespace lubinlab
