// Command-line front end: polygon | log | group | frobenius | analyze | batch.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <optional>

#include "lubinlab/analyzer.hpp"
#include "lubinlab/errors.hpp"
#include "lubinlab/io.hpp"

using namespace lubinlab;

namespace {

struct Options {
  int p = 0;
  int N = Config{}.N;
  int M = Config{}.M;
  int M2 = Config{}.M2;
  int guard = -1;
  std::string series;
  std::string u_series;
  std::string fixture;
  std::string name;
  std::string out;
  std::string format = "text";
  int iterate = 1;
  std::string method = "recurrence";
  std::string construction = "log";

  std::vector<CLI::Option*> n_opts;
  std::vector<CLI::Option*> m_opts;
};

bool given(const std::vector<CLI::Option*>& opts) {
  for (auto* opt : opts) {
    if (opt->count() > 0) return true;
  }
  return false;
}

void add_common(CLI::App* cmd, Options& o, bool svg) {
  cmd->add_option("--p", o.p, "Prime (required with --series)")->check(CLI::PositiveNumber);
  o.n_opts.push_back(cmd->add_option("--N", o.N, "p-adic digits to certify")->capture_default_str());
  o.m_opts.push_back(cmd->add_option("--M", o.M, "Truncation order in x")->capture_default_str());
  cmd->add_option("--guard", o.guard, "Guard digits (default ceil(M/(p-1)) + 4)");
  cmd->add_option("--out", o.out, "Write the result to this file instead of stdout");
  std::vector<std::string> formats{"text", "json"};
  if (svg) formats.push_back("svg");
  cmd->add_option("--format", o.format, "Output format")->check(CLI::IsMember(formats))->capture_default_str();
  cmd->add_option("--fixture", o.fixture, "Fixture file (JSON array of {name, p, N, M, f, u})");
  cmd->add_option("--name", o.name, "Fixture to use from --fixture (default: the first)");
}

void add_series(CLI::App* cmd, Options& o) {
  cmd->add_option("--series", o.series, "Inline series \"c1,c2,...@k\" = sum c_i x^(k+i-1)");
}

Config config_of(const Options& o) {
  Config c;
  c.N = o.N;
  c.M = o.M;
  c.M2 = o.M2;
  c.guard = o.guard;
  return c;
}

// The selected fixture, with N and M flags taking precedence.
Fixture select_fixture(Options& o) {
  auto all = load_fixtures(o.fixture);
  if (all.empty()) throw ParseError("fixture file " + o.fixture + " is empty", 0, 0);
  const Fixture* chosen = &all.front();
  if (!o.name.empty()) {
    chosen = nullptr;
    for (const auto& fx : all) {
      if (fx.name == o.name) chosen = &fx;
    }
    if (!chosen) throw ParseError("no fixture named \"" + o.name + "\"", 0, 0);
  }
  Fixture fx = *chosen;
  if (!given(o.n_opts) && fx.N > 0) o.N = fx.N;
  if (!given(o.m_opts) && fx.M > 0) o.M = fx.M;
  if (o.p == 0) o.p = fx.p;
  if (o.p != fx.p) throw ParseError("--p differs from the fixture prime", 0, 0);
  return fx;
}

ExactSeries input_f(Options& o) {
  if (!o.series.empty() && !o.fixture.empty()) throw ParseError("give either --series or --fixture", 0, 0);
  if (!o.fixture.empty()) return select_fixture(o).f;
  if (o.series.empty()) throw ParseError("no input: give --series or --fixture", 0, 0);
  if (o.p == 0) throw ParseError("--series needs --p", 0, 0);
  return parse_inline_series(o.series, o.p, o.M);
}

PSeries working_series(const Options& o, const ExactSeries& f) {
  const Config c = config_of(o).resolved(o.p);
  PSeries s = f.materialize(c.N + c.guard);
  if (s.x_prec() > o.M) return s.truncated(o.M);
  if (s.x_prec() < o.M) {
    PSeries wide(s.prime(), s.nvars(), o.M);
    for (const auto& [m, v] : s.terms()) wide.set(m, v);
    return wide;
  }
  return s;
}

void emit(const Options& o, const std::string& text) {
  if (o.out.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(o.out);
  if (!file) throw ParseError("cannot write " + o.out, 0, 0);
  file << text;
}

std::string coeff_line(int n, const PadicNum& c) {
  std::string value = c.is_zero() ? "0" : c.to_string();
  if (!c.is_zero()) {
    if (auto q = c.rational_reconstruction()) value = q->get_str() + "  (" + c.to_string() + ")";
  }
  return "  a_" + std::to_string(n) + " = " + value + "\n";
}

int run_polygon(Options& o) {
  ExactSeries f = input_f(o);
  PSeries s = working_series(o, f);
  if (o.iterate > 1) s = iterate(s, o.iterate);
  NewtonPolygon np = newton_polygon(s);
  if (o.format == "json") {
    emit(o, to_json(np).dump(2) + "\n");
  } else if (o.format == "svg") {
    emit(o, render_svg(np));
  } else {
    emit(o, render_ascii(np) + "roots in the open unit disk: " +
                std::to_string(count_roots_open_disk(np)) + "\n");
  }
  return 0;
}

Logarithm compute_log(const Options& o, const ExactSeries& f) {
  if (o.method == "limit") {
    const Config c = config_of(o).resolved(o.p);
    int n_max = default_limit_iterations(o.p, o.M, o.N);
    Options wide = o;
    wide.guard = c.guard + n_max;
    return logarithm_limit(working_series(wide, f), n_max, o.N);
  }
  return logarithm_recurrence(working_series(o, f));
}

int run_log(Options& o) {
  ExactSeries f = input_f(o);
  Logarithm l = compute_log(o, f);
  if (o.format == "json") {
    emit(o, to_json(l).dump(2) + "\n");
    return 0;
  }
  std::string t = "log_f by " + std::string(o.method == "limit" ? "iterate limit" : "recurrence");
  if (l.method == LogMethod::IterateLimit) t += " (" + std::to_string(l.iterations) + " steps)";
  t += ", coefficients known modulo p^" + std::to_string(l.series.precision()) + ":\n";
  for (int n = 1; n < l.series.x_prec(); ++n) {
    PadicNum c = l.series.coeff(n);
    if (!c.is_zero()) t += coeff_line(n, c);
  }
  emit(o, t);
  return 0;
}

int run_group(Options& o) {
  ExactSeries f = input_f(o);
  FormalGroupLaw g = o.construction == "lift" ? lubin_tate_lift(working_series(o, f))
                                              : group_from_log(compute_log(o, f));
  Json j = to_json(g, config_of(o).resolved(f.p).M2);
  if (o.format == "json") {
    emit(o, j.dump(2) + "\n");
    return 0;
  }
  std::string t = "F (" + j["construction"].get<std::string>() + "), min coefficient valuation " +
                  j["min_valuation"].dump() + ", known modulo p^" + j["F"]["N"].dump() + "\n";
  for (const char* law : {"identity", "commutativity", "associativity"}) {
    const Json& c = j["certificate"][law];
    t += std::string("  ") + law + ": " + (c["passed"].get<bool>() ? "passed" : "FAILED") +
         " below degree " + c["degree"].dump() + "\n";
  }
  t += "coefficients:\n";
  for (const auto& term : j["F"]["coeffs"]) {
    t += "  x^" + term[0][0].dump() + " y^" + term[0][1].dump() + ": " + term[1].get<std::string>() + "\n";
  }
  emit(o, t);
  return g.integrality.integral ? 0 : 1;
}

int run_frobenius(Options& o) {
  ExactSeries f = input_f(o);
  PSeries fp = working_series(o, f);
  FrobeniusMultiplier fr = frobenius_multiplier(logarithm_recurrence(fp), fp);
  if (o.format == "json") {
    emit(o, to_json(fr).dump(2) + "\n");
    return 0;
  }
  std::string t = "pi_f = " + fr.pi.to_string() + "\ndigits:";
  for (int d : fr.digits) t += " " + std::to_string(d);
  t += "\n[pi_f]_f = x^p mod p below degree " + std::to_string(fp.x_prec()) + "\n";
  emit(o, t);
  return 0;
}

int run_analyze(Options& o) {
  AnalysisReport r;
  if (!o.fixture.empty()) {
    if (!o.series.empty() || !o.u_series.empty()) throw ParseError("give either --series/--u or --fixture", 0, 0);
    Fixture fx = select_fixture(o);
    r = analyze(fx.f, fx.u, config_of(o), fx.name);
  } else {
    if (o.series.empty() || o.u_series.empty()) throw ParseError("analyze needs --fixture or both --series and --u", 0, 0);
    if (o.p == 0) throw ParseError("--series needs --p", 0, 0);
    r = analyze(parse_inline_series(o.series, o.p, o.M), parse_inline_series(o.u_series, o.p, o.M), config_of(o));
  }
  emit(o, o.format == "json" ? to_json(r).dump(2) + "\n" : report_text(r));
  return exit_code(r.verdict);
}

int run_batch(Options& o) {
  if (o.fixture.empty()) throw ParseError("batch needs --fixture", 0, 0);
  auto fixtures = load_fixtures(o.fixture);
  Config c = config_of(o);
  // explicit flags win over per-fixture values
  for (auto& fx : fixtures) {
    if (given(o.n_opts)) fx.N = 0;
    if (given(o.m_opts)) fx.M = 0;
  }
  BatchResult b = batch_run(fixtures, c);
  if (o.format == "json") {
    Json a = Json::array();
    for (const auto& r : b.reports) a.push_back(to_json(r, false));
    emit(o, a.dump(2) + "\n");
  } else {
    emit(o, summary_table(b));
  }
  return exit_code(overall_verdict(b));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lubinlab: p-adic dynamics, Lubin logarithms and Lubin-Tate formal groups"};
  app.require_subcommand(1);
  Options o;

  auto* polygon = app.add_subcommand("polygon", "Newton polygon of a series (or of its n-th iterate)");
  add_common(polygon, o, true);
  add_series(polygon, o);
  polygon->add_option("--iterate", o.iterate, "Use the n-th iterate f^n")->check(CLI::PositiveNumber);

  auto* log = app.add_subcommand("log", "Logarithm log_f of a noninvertible series");
  add_common(log, o, false);
  add_series(log, o);
  log->add_option("--method", o.method, "recurrence or limit")
      ->check(CLI::IsMember({"recurrence", "limit"}))
      ->capture_default_str();

  auto* group = app.add_subcommand("group", "Formal group law exp_f(log_f(x) + log_f(y))");
  add_common(group, o, false);
  add_series(group, o);
  group->add_option("--M2", o.M2, "Truncation for the associativity check (default min(12, M))");
  group->add_option("--construction", o.construction, "log or lift (Lubin-Tate lift of f itself)")
      ->check(CLI::IsMember({"log", "lift"}))
      ->capture_default_str();

  auto* frob = app.add_subcommand("frobenius", "Frobenius multiplier pi_f with [pi_f]_f = x^p mod p");
  add_common(frob, o, false);
  add_series(frob, o);

  auto* an = app.add_subcommand("analyze", "Certify a commuting pair (f, u) end to end");
  add_common(an, o, false);
  add_series(an, o);
  an->add_option("--u", o.u_series, "Inline series for u");
  an->add_option("--M2", o.M2, "Truncation for the associativity check (default min(12, M))");

  auto* batch = app.add_subcommand("batch", "Analyze every fixture of a file; prints a summary table");
  add_common(batch, o, false);
  batch->add_option("--M2", o.M2, "Truncation for the associativity check (default min(12, M))");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (o.p != 0) {
      if (auto bad = config_of(o).invalid_reason(o.p); bad && !an->parsed() && !batch->parsed()) {
        throw ParseError("invalid configuration: " + *bad, 0, 0);
      }
    }
    if (polygon->parsed()) return run_polygon(o);
    if (log->parsed()) return run_log(o);
    if (group->parsed()) return run_group(o);
    if (frob->parsed()) return run_frobenius(o);
    if (an->parsed()) return run_analyze(o);
    if (batch->parsed()) return run_batch(o);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const PrecisionExhausted& e) {
    std::cerr << "inconclusive: " << e.what() << '\n';
    return 2;
  } catch (const TruncationInconclusive& e) {
    std::cerr << "inconclusive: " << e.what() << '\n';
    return 2;
  } catch (const AmbiguousAtPrecision& e) {
    std::cerr << "inconclusive: " << e.what() << '\n';
    return 2;
  } catch (const NoStabilization& e) {
    std::cerr << "inconclusive: " << e.what() << '\n';
    return 2;
  } catch (const DivisionByZeroToPrecision& e) {
    std::cerr << "inconclusive: " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    std::cerr << "rejected: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
