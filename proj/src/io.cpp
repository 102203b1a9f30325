#include "lubinlab/io.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

#include "lubinlab/errors.hpp"

namespace lubinlab {

namespace {

Json int_or_inf(int v) { return v == kInfinity ? Json("inf") : Json(v); }

int int_or_inf_from(const Json& j, const std::string& field) {
  if (j.is_string() && j.get<std::string>() == "inf") return kInfinity;
  if (!j.is_number_integer()) throw ParseError(field + ": expected an integer or \"inf\"", 0, 0);
  return j.get<int>();
}

template <class T>
Json opt(const std::optional<T>& v) {
  return v ? Json(*v) : Json(nullptr);
}

/// Shortest rational a/b congruent to the value, else its representative.
std::string coeff_string(const PadicNum& c) {
  if (c.is_zero()) return "0";
  if (auto q = c.rational_reconstruction()) return q->get_str();
  return c.to_rational().get_str();
}

std::string term_string(const std::string& coeff, const Monomial& m, int nvars) {
  static const char* names[] = {"x", "y", "z"};
  std::string mono;
  for (int v = 0; v < nvars; ++v) {
    if (m[v] == 0) continue;
    mono += names[v];
    if (m[v] > 1) mono += "^" + std::to_string(m[v]);
  }
  if (mono.empty()) return coeff;
  if (coeff == "1") return mono;
  if (coeff == "-1") return "-" + mono;
  if (coeff.find('/') != std::string::npos) return "(" + coeff + ")" + mono;
  return coeff + mono;
}

std::string low_terms(const PSeries& s, int below_degree) {
  std::vector<std::pair<Monomial, std::string>> terms;
  for (const auto& [m, c] : s.terms()) {
    if (c.is_zero() || total_degree(m) >= below_degree) continue;
    terms.push_back({m, coeff_string(c)});
  }
  std::stable_sort(terms.begin(), terms.end(), [](const auto& a, const auto& b) {
    int da = total_degree(a.first), db = total_degree(b.first);
    if (da != db) return da < db;
    return a.first > b.first;
  });
  std::string out;
  for (const auto& [m, c] : terms) {
    std::string t = term_string(c, m, s.nvars());
    if (out.empty()) {
      out = t;
    } else if (t[0] == '-') {
      out += " - " + t.substr(1);
    } else {
      out += " + " + t;
    }
  }
  return (out.empty() ? "0" : out) + " + O(deg " + std::to_string(below_degree) + ")";
}

std::string vertices_string(const std::vector<PolygonPoint>& pts) {
  std::string out;
  for (const auto& v : pts) {
    if (!out.empty()) out += ' ';
    out += "(" + std::to_string(v.i) + "," + std::to_string(v.v) + ")";
  }
  return out;
}

Json vertices_json(const std::vector<PolygonPoint>& pts) {
  Json a = Json::array();
  for (const auto& v : pts) a.push_back({v.i, v.v});
  return a;
}

Json law_json(const LawCheck& c) { return {{"passed", c.passed}, {"degree", c.degree}}; }

std::pair<int, int> line_column(const std::string& text, std::size_t byte) {
  int line = 1, col = 1;
  for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

void require(const Json& j, const std::string& key, bool ok, const std::string& what) {
  if (!j.contains(key)) throw ParseError("report: missing field \"" + key + "\"", 0, 0);
  if (!ok) throw ParseError("report: field \"" + key + "\" must be " + what, 0, 0);
}

bool int_or_null(const Json& j) { return j.is_null() || j.is_number_integer() || j == "inf"; }

}  // namespace

mpq_class parse_rational(const std::string& text, int column) {
  std::size_t i = 0;
  auto fail = [&](const std::string& msg) -> ParseError {
    return ParseError(msg + " in \"" + text + "\"", 1, column + static_cast<int>(i));
  };
  std::string num, den;
  if (i < text.size() && (text[i] == '-' || text[i] == '+')) num += text[i++];
  std::size_t digits = 0;
  while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
    num += text[i++];
    ++digits;
  }
  if (digits == 0) throw fail("expected an integer or a/b");
  if (i < text.size() && text[i] == '/') {
    ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) den += text[i++];
    if (den.empty()) throw fail("expected a denominator");
  }
  if (i != text.size()) throw fail("unexpected character");
  if (num[0] == '+') num.erase(0, 1);
  mpq_class q;
  q.get_num() = mpz_class(num);
  q.get_den() = den.empty() ? mpz_class(1) : mpz_class(den);
  if (q.get_den() == 0) {
    i = text.find('/') + 1;
    throw fail("zero denominator");
  }
  q.canonicalize();
  return q;
}

ExactSeries parse_inline_series(const std::string& text, int p, int M) {
  ExactSeries s;
  s.p = p;
  s.x_prec = M;
  std::size_t at = text.find('@');
  std::string list = text.substr(0, at);
  int k = 1;
  if (at != std::string::npos) {
    std::string tail = text.substr(at + 1);
    std::size_t b = tail.find_first_not_of(' ');
    std::size_t e = tail.find_last_not_of(' ');
    tail = b == std::string::npos ? "" : tail.substr(b, e - b + 1);
    int col = static_cast<int>(at + 2 + (b == std::string::npos ? 0 : b));
    if (tail.empty() || tail.find_first_not_of("0123456789") != std::string::npos) {
      throw ParseError("expected a nonnegative start degree after '@'", 1, col);
    }
    k = std::stoi(tail);
  }
  std::size_t pos = 0;
  int index = 0;
  while (true) {
    std::size_t comma = list.find(',', pos);
    std::string item = list.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t b = item.find_first_not_of(" \t");
    std::size_t e = item.find_last_not_of(" \t");
    int col = static_cast<int>(pos + 1 + (b == std::string::npos ? 0 : b));
    if (b == std::string::npos) throw ParseError("empty coefficient", 1, col);
    mpq_class q = parse_rational(item.substr(b, e - b + 1), col);
    int degree = k + index;
    if (q != 0) {
      if (degree >= M) {
        throw ParseError("term of degree " + std::to_string(degree) + " beyond the truncation M = " +
                             std::to_string(M), 1, col);
      }
      s.coeffs[Monomial{degree, 0, 0}] = q;
    }
    ++index;
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return s;
}

Json to_json(const PadicNum& x) {
  Json j;
  j["val"] = int_or_inf(x.valuation());
  j["unit"] = x.is_zero() ? "0" : x.unit().get_str();
  j["prec"] = int_or_inf(x.precision());
  return j;
}

PadicNum padic_from_json(const Json& j, int p) {
  if (!j.is_object() || !j.contains("val") || !j.contains("unit") || !j.contains("prec")) {
    throw ParseError("scalar: expected {\"val\", \"unit\", \"prec\"}", 0, 0);
  }
  int val = int_or_inf_from(j["val"], "val");
  int prec = int_or_inf_from(j["prec"], "prec");
  if (val == kInfinity) return prec == kInfinity ? PadicNum::exact_zero(p) : PadicNum::zero(p, prec);
  if (!j["unit"].is_string()) throw ParseError("unit: expected a decimal string", 0, 0);
  return PadicNum::from_parts(p, val, mpz_class(j["unit"].get<std::string>()), prec);
}

Json to_json(const PSeries& s) {
  Json coeffs = Json::array();
  for (const auto& [m, c] : s.terms()) {
    if (c.is_zero()) continue;
    Json e = Json::array();
    for (int v = 0; v < s.nvars(); ++v) e.push_back(m[v]);
    coeffs.push_back({e, coeff_string(c)});
  }
  return {{"p", s.prime()}, {"M", s.x_prec()}, {"N", int_or_inf(s.precision())}, {"coeffs", coeffs}};
}

Json to_json(const ExactSeries& s) {
  Json coeffs = Json::array();
  for (const auto& [m, c] : s.coeffs) {
    if (c == 0) continue;
    Json e = Json::array();
    for (int v = 0; v < s.nvars; ++v) e.push_back(m[v]);
    coeffs.push_back({e, c.get_str()});
  }
  return {{"p", s.p}, {"M", s.x_prec}, {"N", int_or_inf(s.precision)}, {"coeffs", coeffs}};
}

ExactSeries exact_series_from_json(const Json& j, int p, int M) {
  if (j.is_string()) {
    if (p == 0 || M == 0) throw ParseError("inline series needs p and M", 0, 0);
    return parse_inline_series(j.get<std::string>(), p, M);
  }
  if (!j.is_object()) throw ParseError("series: expected an object or an inline string", 0, 0);
  for (const char* key : {"p", "M", "coeffs"}) {
    if (!j.contains(key)) throw ParseError(std::string("series: missing field \"") + key + "\"", 0, 0);
  }
  ExactSeries s;
  if (!j["p"].is_number_integer() || !j["M"].is_number_integer()) {
    throw ParseError("series: p and M must be integers", 0, 0);
  }
  s.p = j["p"].get<int>();
  s.x_prec = j["M"].get<int>();
  if (p != 0 && s.p != p) throw ParseError("series: prime differs from the fixture prime", 0, 0);
  s.precision = j.contains("N") ? int_or_inf_from(j["N"], "N") : kInfinity;
  if (!j["coeffs"].is_array()) throw ParseError("series: coeffs must be an array", 0, 0);
  int nvars = 1;
  for (const auto& term : j["coeffs"]) {
    if (!term.is_array() || term.size() != 2 || !term[0].is_array() || term[0].empty() ||
        term[0].size() > 3) {
      throw ParseError("series: each coefficient is [[exponents], value]", 0, 0);
    }
    Monomial m{0, 0, 0};
    for (std::size_t v = 0; v < term[0].size(); ++v) {
      if (!term[0][v].is_number_integer() || term[0][v].get<int>() < 0) {
        throw ParseError("series: exponents must be nonnegative integers", 0, 0);
      }
      m[v] = term[0][v].get<int>();
    }
    nvars = std::max(nvars, static_cast<int>(term[0].size()));
    mpq_class q;
    if (term[1].is_number_integer()) {
      q = mpz_class(term[1].dump());
    } else if (term[1].is_string()) {
      q = parse_rational(term[1].get<std::string>());
    } else {
      throw ParseError("series: coefficient must be a string or an integer", 0, 0);
    }
    if (total_degree(m) < s.x_prec && q != 0) s.coeffs[m] = q;
  }
  s.nvars = nvars;
  return s;
}

Json to_json(const NewtonPolygon& polygon) {
  Json segs = Json::array();
  for (const auto& s : polygon.segments) {
    segs.push_back({{"slope", s.slope.to_string()}, {"width", s.width}});
  }
  return {{"vertices", vertices_json(polygon.vertices)}, {"segments", segs}};
}

Json to_json(const Logarithm& logf) {
  Json j;
  j["method"] = logf.method == LogMethod::Recurrence ? "recurrence" : "iterate-limit";
  if (logf.method == LogMethod::IterateLimit) j["iterations"] = logf.iterations;
  j["precision"] = int_or_inf(logf.series.precision());
  j["series"] = to_json(logf.series);
  return j;
}

Json to_json(const FormalGroupLaw& group, int m2) {
  Json j;
  j["construction"] = group.construction == GroupConstruction::FromLog ? "from-log" : "lubin-tate-lift";
  j["min_valuation"] = int_or_inf(group.integrality.min_valuation);
  j["integral"] = group.integrality.integral;
  GroupCertificate cert = certify_group(group.F, m2);
  j["certificate"] = {{"identity", law_json(cert.identity)},
                      {"commutativity", law_json(cert.commutativity)},
                      {"associativity", law_json(cert.associativity)}};
  j["F"] = to_json(group.F);
  return j;
}

Json to_json(const FrobeniusMultiplier& fr) {
  return {{"pi", to_json(fr.pi)}, {"digits", fr.digits}, {"bracket", to_json(fr.bracket.series)}};
}

Json to_json(const AnalysisReport& r, bool include_group_law) {
  Json j;
  j["name"] = r.name;
  j["p"] = r.p;
  j["config"] = {{"N", r.config.N}, {"M", r.config.M}, {"M2", r.config.M2},
                 {"guard", r.config.guard}, {"n_shape", r.config.n_shape}};
  j["working_precision"] = r.working_precision;
  j["verdict"] = to_string(r.verdict);
  j["reason"] = r.reason;
  j["stage"] = r.stage;
  j["suggested"] = r.verdict == Verdict::Inconclusive
                       ? Json{{"N", r.suggested_N}, {"M", r.suggested_M}}
                       : Json(nullptr);
  j["hypotheses"] = {{"commute_degree", opt(r.commute_degree)},
                     {"fprime0_valuation", opt(r.fprime0_valuation)},
                     {"weierstrass_degree", opt(r.weierstrass_degree)},
                     {"u_invertible", opt(r.u_invertible)},
                     {"torsion_status", r.torsion_status},
                     {"normalization_e", opt(r.normalization_e)}};
  j["logarithm"] = {{"precision", r.log_precision ? int_or_inf(*r.log_precision) : Json(nullptr)},
                    {"limit_iterations", opt(r.limit_iterations)},
                    {"methods_agree", opt(r.log_methods_agree)},
                    {"polygon_vertices", vertices_json(r.log_vertices)},
                    {"dlog_min_valuation",
                     r.dlog_min_valuation ? int_or_inf(*r.dlog_min_valuation) : Json(nullptr)}};
  Json shapes = Json::array();
  for (const auto& s : r.shapes) {
    shapes.push_back({{"n", s.n}, {"shape", s.shape}, {"eisenstein", s.eisenstein},
                      {"vertices", vertices_json(s.vertices)}});
  }
  j["polygons"] = shapes;
  Json g;
  g["min_valuation"] = r.group_min_valuation ? int_or_inf(*r.group_min_valuation) : Json(nullptr);
  g["precision"] = r.group_precision ? int_or_inf(*r.group_precision) : Json(nullptr);
  if (r.group_certificate) {
    g["identity"] = law_json(r.group_certificate->identity);
    g["commutativity"] = law_json(r.group_certificate->commutativity);
    g["associativity"] = law_json(r.group_certificate->associativity);
  } else {
    g["identity"] = g["commutativity"] = g["associativity"] = nullptr;
  }
  g["f_bracket_degree"] = opt(r.f_bracket_degree);
  g["u_bracket_degree"] = opt(r.u_bracket_degree);
  g["F"] = include_group_law && r.group_law ? to_json(*r.group_law) : Json(nullptr);
  j["group"] = g;
  j["frobenius"] = {{"pi", r.pi ? to_json(*r.pi) : Json(nullptr)},
                    {"digits", r.pi_digits},
                    {"congruence", opt(r.pi_congruence)},
                    {"lift_agreement_degree", opt(r.lift_agreement_degree)}};
  j["final_precision"] = r.final_precision ? int_or_inf(*r.final_precision) : Json(nullptr);
  j["precision_consumed"] =
      r.final_precision ? Json(r.working_precision - *r.final_precision) : Json(nullptr);
  return j;
}

void validate_report_json(const Json& j) {
  if (!j.is_object()) throw ParseError("report: expected an object", 0, 0);
  require(j, "name", j.contains("name") && j["name"].is_string(), "a string");
  require(j, "p", j.contains("p") && j["p"].is_number_integer(), "an integer");
  require(j, "config", j.contains("config") && j["config"].is_object(), "an object");
  for (const char* k : {"N", "M", "M2", "guard", "n_shape"}) {
    require(j["config"], k, j["config"].contains(k) && j["config"][k].is_number_integer(), "an integer");
  }
  require(j, "verdict", j.contains("verdict") && j["verdict"].is_string() &&
                            (j["verdict"] == "CERTIFIED" || j["verdict"] == "REJECTED" ||
                             j["verdict"] == "INCONCLUSIVE"),
          "CERTIFIED, REJECTED or INCONCLUSIVE");
  require(j, "reason", j.contains("reason") && j["reason"].is_string(), "a string");
  require(j, "stage", j.contains("stage") && j["stage"].is_string(), "a string");
  for (const char* k : {"hypotheses", "logarithm", "group", "frobenius"}) {
    require(j, k, j.contains(k) && j[k].is_object(), "an object");
  }
  require(j, "polygons", j.contains("polygons") && j["polygons"].is_array(), "an array");
  for (const char* k : {"commute_degree", "fprime0_valuation", "weierstrass_degree", "normalization_e"}) {
    require(j["hypotheses"], k, j["hypotheses"].contains(k) && int_or_null(j["hypotheses"][k]),
            "an integer or null");
  }
  const Json& fr = j["frobenius"];
  require(fr, "pi", fr.contains("pi"), "present");
  if (!fr["pi"].is_null()) padic_from_json(fr["pi"], j["p"].get<int>());
  require(fr, "digits", fr.contains("digits") && fr["digits"].is_array(), "an array");
  const Json& g = j["group"];
  require(g, "F", g.contains("F"), "present");
  if (!g["F"].is_null()) exact_series_from_json(g["F"]);
  require(j, "final_precision", j.contains("final_precision") && int_or_null(j["final_precision"]),
          "an integer or null");
}

std::vector<Fixture> parse_fixtures(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    auto [line, col] = line_column(text, e.byte == 0 ? 0 : e.byte - 1);
    std::string what = e.what();
    std::size_t colon = what.rfind(": ");
    throw ParseError("malformed fixture JSON: " + (colon == std::string::npos ? what : what.substr(colon + 2)),
                     line, col);
  }
  if (!j.is_array()) throw ParseError("fixture file must hold a JSON array", 1, 1);
  std::vector<Fixture> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const Json& e = j[i];
    std::string where = "fixture " + std::to_string(i);
    try {
      if (!e.is_object()) throw ParseError("expected an object", 0, 0);
      Fixture fx;
      if (e.contains("name")) {
        if (!e["name"].is_string()) throw ParseError("name must be a string", 0, 0);
        fx.name = e["name"].get<std::string>();
        where += " (\"" + fx.name + "\")";
      }
      for (const char* key : {"p", "f", "u"}) {
        if (!e.contains(key)) throw ParseError(std::string("missing field \"") + key + "\"", 0, 0);
      }
      if (!e["p"].is_number_integer()) throw ParseError("p must be an integer", 0, 0);
      fx.p = e["p"].get<int>();
      for (auto [key, field] : {std::pair{"N", &fx.N}, std::pair{"M", &fx.M}}) {
        if (!e.contains(key)) continue;
        if (!e[key].is_number_integer() || e[key].get<int>() <= 0) {
          throw ParseError(std::string(key) + " must be a positive integer", 0, 0);
        }
        *field = e[key].get<int>();
      }
      const int m = fx.M > 0 ? fx.M : Config{}.M;
      try {
        fx.f = exact_series_from_json(e["f"], fx.p, m);
      } catch (const ParseError& pe) {
        throw ParseError(std::string("f: ") + pe.what(), 0, 0);
      }
      try {
        fx.u = exact_series_from_json(e["u"], fx.p, m);
      } catch (const ParseError& pe) {
        throw ParseError(std::string("u: ") + pe.what(), 0, 0);
      }
      out.push_back(std::move(fx));
    } catch (const ParseError& pe) {
      throw ParseError(where + ": " + pe.what(), 0, 0);
    }
  }
  return out;
}

std::vector<Fixture> load_fixtures(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open fixture file " + path, 0, 0);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_fixtures(ss.str());
}

Json to_json(const std::vector<Fixture>& fixtures) {
  Json a = Json::array();
  for (const auto& fx : fixtures) {
    Json e;
    e["name"] = fx.name;
    e["p"] = fx.p;
    if (fx.N > 0) e["N"] = fx.N;
    if (fx.M > 0) e["M"] = fx.M;
    e["f"] = to_json(fx.f);
    e["u"] = to_json(fx.u);
    a.push_back(e);
  }
  return a;
}

std::string report_text(const AnalysisReport& r) {
  std::ostringstream os;
  const Config& c = r.config;
  os << "fixture: " << (r.name.empty() ? "-" : r.name) << '\n';
  os << "p = " << r.p << ", N = " << c.N << ", M = " << c.M << ", M2 = " << c.M2
     << ", guard = " << c.guard << ", n_shape = " << c.n_shape << '\n';
  os << "verdict: " << to_string(r.verdict);
  if (!r.stage.empty()) os << " at " << r.stage;
  os << " (" << r.reason << ")\n";
  if (r.verdict == Verdict::Inconclusive) {
    os << "suggestion: rerun with N = " << r.suggested_N << ", M = " << r.suggested_M << '\n';
  }
  if (r.commute_degree) {
    os << "hypotheses:\n";
    os << "  f o u = u o f below degree " << *r.commute_degree << '\n';
    if (r.fprime0_valuation) os << "  v_p(f'(0)) = " << *r.fprime0_valuation << '\n';
    if (r.weierstrass_degree) os << "  Weierstrass degree of f mod p = " << *r.weierstrass_degree << '\n';
    if (r.u_invertible) os << "  u " << (*r.u_invertible ? "invertible" : "not invertible") << '\n';
    if (!r.torsion_status.empty()) os << "  u: " << r.torsion_status << '\n';
    if (r.normalization_e) os << "  normalization iterate e = " << *r.normalization_e << '\n';
  }
  if (r.log_precision) {
    os << "logarithm:\n";
    os << "  recurrence known modulo p^" << *r.log_precision << '\n';
    if (r.limit_iterations) {
      os << "  iterate limit stabilized after " << *r.limit_iterations << " steps"
         << (r.log_methods_agree.value_or(false) ? ", methods agree" : "") << '\n';
    }
    if (!r.log_vertices.empty()) os << "  polygon vertices " << vertices_string(r.log_vertices) << '\n';
    if (r.dlog_min_valuation) os << "  min valuation of log_f' = " << *r.dlog_min_valuation << '\n';
  }
  if (!r.shapes.empty()) {
    os << "iterate polygons:\n";
    for (const auto& s : r.shapes) {
      os << "  f^" << s.n << ": " << vertices_string(s.vertices) << (s.shape ? " (expected shape)" : " (wrong shape)")
         << (s.eisenstein ? ", Eisenstein factors" : "") << '\n';
    }
  }
  if (r.group_min_valuation) {
    os << "formal group:\n";
    os << "  min coefficient valuation " << *r.group_min_valuation << ", precision p^"
       << r.group_precision.value_or(0) << '\n';
    if (r.group_law) os << "  F = " << low_terms(*r.group_law, 4) << '\n';
    if (r.group_certificate) {
      const auto& g = *r.group_certificate;
      os << "  identity below " << g.identity.degree << ", commutativity below " << g.commutativity.degree
         << ", associativity below " << g.associativity.degree << '\n';
    }
    if (r.f_bracket_degree) {
      os << "  f = [f'(0)]_f below " << *r.f_bracket_degree << ", u = [u'(0)]_f below "
         << r.u_bracket_degree.value_or(0) << '\n';
    }
  }
  if (r.pi) {
    os << "frobenius:\n";
    os << "  pi_f = " << r.pi->to_string() << ", digits";
    for (int d : r.pi_digits) os << ' ' << d;
    os << '\n';
    if (r.lift_agreement_degree) {
      os << "  Lubin-Tate lift of [pi_f]_f agrees below degree " << *r.lift_agreement_degree << '\n';
    }
  }
  if (r.final_precision) {
    os << "precision: working p^" << r.working_precision << ", certified p^" << *r.final_precision
       << " (" << r.working_precision - *r.final_precision << " digits consumed)\n";
  }
  return os.str();
}

}  // namespace lubinlab
