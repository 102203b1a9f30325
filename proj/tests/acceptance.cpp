// Acceptance checks, one line per criterion. `acceptance K` runs criterion K
// only; without arguments all seven run.

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "lubinlab/analyzer.hpp"
#include "lubinlab/errors.hpp"
#include "lubinlab/fixtures.hpp"
#include "lubinlab/io.hpp"

using namespace lubinlab;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t) {
  return std::chrono::duration<double>(Clock::now() - t).count();
}

struct Outcome {
  bool pass = true;
  std::vector<std::string> failures;
  std::string summary;

  void check(bool ok, const std::string& what) {
    if (ok) return;
    pass = false;
    failures.push_back(what);
  }
};

const Config kDefaults{};

const std::vector<Fixture>& all_twists() {
  static const std::vector<Fixture> fixtures = twist_fixtures(kDefaults.M);
  return fixtures;
}

PSeries binomial_minus_one(int p, long q, int m, int prec) {
  PSeries s(p, 1, m);
  for (int i = 1; i < m && i <= q; ++i) {
    mpz_class c;
    mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(i));
    s.set(i, PadicNum::from_integer(p, c, prec));
  }
  return s;
}

std::string fmt(double s) {
  std::ostringstream os;
  os.precision(2);
  os << std::fixed << s << " s";
  return os.str();
}

// 1. Newton polygons of iterates and Eisenstein slope factors
Outcome polygon_shape() {
  Outcome out;
  double worst = 0;
  int checked = 0;
  for (const auto& fx : all_twists()) {
    const Config c = kDefaults.resolved(fx.p);
    const PSeries f = fx.f.materialize(c.N + c.guard).truncated(c.M);
    auto start = Clock::now();
    for (long n = 1, pn = fx.p; n <= 3 && pn < c.M; ++n, pn *= fx.p) {
      std::string where = fx.name + " n=" + std::to_string(n);
      try {
        out.check(verify_iterate_shape(f, static_cast<int>(n)), where + ": shape");
        PSeries fn = iterate(f, static_cast<int>(n));
        NewtonPolygon np = newton_polygon(fn);
        for (const auto& seg : np.negative_segments()) {
          WeierstrassFactor wf = weierstrass_factor(fn, seg.slope);
          out.check(is_eisenstein(wf.poly), where + ": factor of slope " + seg.slope.to_string() + " not Eisenstein");
          ++checked;
        }
      } catch (const Error& e) {
        out.check(false, where + ": " + e.what());
      }
    }
    double t = seconds_since(start);
    worst = std::max(worst, t);
    out.check(t < 5.0, fx.name + " took " + fmt(t));
  }
  out.summary = std::to_string(all_twists().size()) + " series, " + std::to_string(checked) +
                " Eisenstein factors, slowest " + fmt(worst);
  return out;
}

// 2. Recurrence against iterate limit, polygon of log_f, integrality of log_f'
Outcome logarithm_cross() {
  Outcome out;
  int min_target = kInfinity;
  for (const auto& fx : all_twists()) {
    const Config c = kDefaults.resolved(fx.p);
    const int w = c.N + c.guard;
    try {
      Logarithm rec = logarithm_recurrence(fx.f.materialize(w).truncated(c.M));
      const int target = rec.series.precision();
      min_target = std::min(min_target, target);
      const int n_max = default_limit_iterations(fx.p, c.M, target);
      Logarithm lim = logarithm_limit(fx.f.materialize(target + n_max).truncated(c.M), n_max, target);
      out.check(rec.series.agrees_with(lim.series) && lim.series.precision() >= target,
                fx.name + ": methods disagree at degree " +
                    std::to_string(rec.series.first_disagreement(lim.series)));
      std::vector<PolygonPoint> expected;
      for (long q = 1, k = 0; q < 64; q *= fx.p, ++k) expected.push_back({static_cast<int>(q), static_cast<int>(-k)});
      out.check(newton_polygon(rec.series).negative_vertices() == expected, fx.name + ": log_f polygon");
      out.check(dlog_integrality(rec).integral, fx.name + ": log_f' not integral");
    } catch (const Error& e) {
      out.check(false, fx.name + ": " + e.what());
    }
  }
  out.summary = std::to_string(all_twists().size()) + " fixtures, agreement modulo p^" +
                std::to_string(min_target) + " or finer";
  return out;
}

// 3. Closed forms for the multiplicative group
Outcome multiplicative_closed_forms() {
  Outcome out;
  auto start = Clock::now();
  for (int p : {2, 3, 5}) {
    const Config c = kDefaults.resolved(p);
    const int m = c.M, w = c.N + c.guard;
    const std::string tag = "p=" + std::to_string(p) + ": ";
    try {
      PSeries f = binomial_minus_one(p, p, m, w);
      Logarithm l = logarithm_recurrence(f);
      for (int n = 1; n < m; ++n) {
        PadicNum expect = PadicNum::from_rational(p, mpq_class(n % 2 ? 1 : -1, n), w);
        out.check(l.series.coeff(n).agrees_with(expect), tag + "log coefficient " + std::to_string(n));
      }
      FormalGroupLaw g = group_from_log(l);
      const PadicNum one = PadicNum::from_integer(p, 1, kInfinity);
      for (const auto& [mono, coeff] : g.F.terms()) {
        bool linear = (mono[0] == 1 && mono[1] == 0) || (mono[0] == 0 && mono[1] == 1) ||
                      (mono[0] == 1 && mono[1] == 1);
        out.check(linear ? coeff.agrees_with(one) : coeff.is_zero(),
                  tag + "F coefficient x^" + std::to_string(mono[0]) + " y^" + std::to_string(mono[1]));
      }
      out.check(g.F.coeff(Monomial{1, 1, 0}).agrees_with(one), tag + "xy coefficient");
      PSeries minus_one = bracket(l, PadicNum::from_integer(p, -1, kInfinity)).series;
      for (int n = 1; n < m; ++n) {
        out.check(minus_one.coeff(n).agrees_with(PadicNum::from_integer(p, n % 2 ? -1 : 1, kInfinity)),
                  tag + "[-1] coefficient " + std::to_string(n));
      }
      FrobeniusMultiplier fr = frobenius_multiplier(l, f);
      out.check(fr.pi.agrees_with(PadicNum::from_integer(p, p, kInfinity)), tag + "pi_f = " + fr.pi.to_string());
      out.check(fr.bracket.series.agrees_with(f), tag + "[pi_f]_f differs from (1+x)^p - 1");
    } catch (const Error& e) {
      out.check(false, tag + e.what());
    }
  }
  double t = seconds_since(start);
  out.check(t < 2.0, "took " + fmt(t));
  out.summary = "p = 2, 3, 5 in " + fmt(t);
  return out;
}

// 4. The theorem on every twist fixture
Outcome twist_certificates() {
  Outcome out;
  double worst = 0;
  for (const auto& fx : all_twists()) {
    auto start = Clock::now();
    AnalysisReport r = analyze(fx.f, fx.u, kDefaults, fx.name);
    double t = seconds_since(start);
    worst = std::max(worst, t);
    const int m = r.config.M;
    const std::string& n = fx.name;
    out.check(r.verdict == Verdict::Certified, n + ": " + to_string(r.verdict) + " (" + r.reason + ")");
    if (r.verdict != Verdict::Certified) continue;
    out.check(r.group_min_valuation.value_or(-1) >= 0, n + ": F not integral");
    out.check(r.group_certificate->identity.passed && r.group_certificate->commutativity.passed &&
                  r.group_certificate->associativity.passed && r.group_certificate->associativity.degree >= r.config.M2,
              n + ": group law checks");
    out.check(r.f_bracket_degree.value_or(0) >= m && r.u_bracket_degree.value_or(0) >= m, n + ": brackets");
    out.check(r.pi && !r.pi->is_zero() && r.pi->valuation() == 1 && r.pi_congruence.value_or(false), n + ": pi_f");
    out.check(r.pi && r.pi->agrees_with(PadicNum::from_integer(fx.p, fx.p, kInfinity)), n + ": pi_f is not p");
    out.check(r.lift_agreement_degree.value_or(0) >= m, n + ": Lubin-Tate lift disagrees");
    out.check(r.final_precision.value_or(0) >= r.config.N, n + ": certified below p^N");
    out.check(t < 30.0, n + " took " + fmt(t));
  }
  out.summary = std::to_string(all_twists().size()) + " fixtures certified, slowest " + fmt(worst);
  return out;
}

// 5. Negative controls
Outcome negative_controls() {
  Outcome out;
  for (int p : {2, 3, 5}) {
    for (const auto& fx : negative_fixtures(p, kDefaults.N, kDefaults.M)) {
      AnalysisReport r = analyze(fx.f, fx.u, kDefaults, fx.name);
      out.check(r.verdict == Verdict::Rejected, fx.name + ": " + to_string(r.verdict));
      if (fx.name.starts_with("additive")) {
        out.check(r.stage == "hypotheses" && r.reason.find("weierstrass degree none") != std::string::npos,
                  fx.name + ": " + r.reason);
      } else if (fx.name.starts_with("torsion")) {
        out.check(r.reason.find("torsion") != std::string::npos, fx.name + ": " + r.reason);
      } else {
        const int w = kDefaults.working_precision(p);
        CommuteCheck cc = check_commute(fx.f.materialize(w), fx.u.materialize(w));
        out.check(!cc.commutes && cc.agreed_degree >= 2, fx.name + ": commute degree " + std::to_string(cc.agreed_degree));
        out.check(r.stage == "commute", fx.name + ": " + r.reason);
      }
    }
  }
  out.summary = "additive, torsion and perturbed pairs rejected at p = 2, 3, 5";
  return out;
}

// 6. Ramification estimates of the reduction of (1+x)^(1+p) - 1
Outcome ramification() {
  Outcome out;
  std::string seen;
  for (int p : {2, 3}) {
    const int m = 200;
    FpSeries omega = reduce_mod_p(binomial_minus_one(p, p + 1, m, 4));
    try {
      RamificationEstimate est = ramification_index(omega, 1);
      for (int n = 0; n <= 1; ++n) {
        const Rational& e = est.estimates[static_cast<std::size_t>(n)];
        seen += (seen.empty() ? "" : ", ") + std::string("p=") + std::to_string(p) + " n=" + std::to_string(n) +
                ": " + e.to_string();
        out.check(e == Rational(p - 1), "p=" + std::to_string(p) + " n=" + std::to_string(n) + ": estimate " +
                                            e.to_string() + " (i = " + std::to_string(est.depth[n]) + "), expected " +
                                            std::to_string(p - 1));
      }
    } catch (const Error& e) {
      out.check(false, "p=" + std::to_string(p) + ": " + e.what());
    }
  }
  out.summary = seen;
  return out;
}

// 7. Determinism and monotone precision over a randomized sweep
Outcome sweep() {
  Outcome out;
  std::mt19937 rng(20261015);
  std::vector<Fixture> pool;
  for (int p : {2, 3, 5}) pool.push_back(multiplicative_fixture(p, 64));
  for (const auto& fx : all_twists()) {
    if (fx.name.ends_with("w1")) pool.push_back(fx);
  }
  for (const auto& fx : negative_fixtures(3, 16, 64)) pool.push_back(fx);
  const int runs = 24;
  std::map<std::string, int> verdicts;
  for (int run = 0; run < runs; ++run) {
    const Fixture& fx = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
    Config c;
    c.N = std::uniform_int_distribution<int>(4, 20)(rng);
    c.M = std::uniform_int_distribution<int>(std::max(fx.p * fx.p, 8), 48)(rng);
    c.M2 = std::uniform_int_distribution<int>(2, std::min(c.M, 10))(rng);
    Config bigger = c;
    bigger.N += std::uniform_int_distribution<int>(0, 8)(rng);
    bigger.M = std::min(64, c.M + std::uniform_int_distribution<int>(0, 16)(rng));
    const std::string tag = fx.name + " N=" + std::to_string(c.N) + " M=" + std::to_string(c.M);

    AnalysisReport a = analyze(fx.f, fx.u, c, fx.name);
    AnalysisReport b = analyze(fx.f, fx.u, c, fx.name);
    std::string ja = to_json(a).dump(), jb = to_json(b).dump();
    out.check(ja == jb, tag + ": reports differ between identical runs");
    try {
      validate_report_json(Json::parse(ja));
    } catch (const std::exception& e) {
      out.check(false, tag + ": report does not re-parse: " + e.what());
    }
    AnalysisReport big = analyze(fx.f, fx.u, bigger, fx.name);
    out.check(!(a.verdict == Verdict::Certified && big.verdict == Verdict::Rejected),
              tag + ": CERTIFIED became REJECTED at N=" + std::to_string(bigger.N) + " M=" + std::to_string(bigger.M));
    ++verdicts[to_string(a.verdict)];
  }
  // batch output must not depend on scheduling
  std::vector<Fixture> batch(pool.begin(), pool.begin() + 4);
  Config small;
  small.M = 32;
  std::string first, second;
  for (const auto& r : batch_run(batch, small).reports) first += to_json(r).dump();
  for (const auto& r : batch_run(batch, small).reports) second += to_json(r).dump();
  out.check(first == second, "batch reports differ between runs");

  out.summary = std::to_string(runs) + " runs:";
  for (const auto& [v, k] : verdicts) out.summary += " " + std::to_string(k) + " " + v;
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"polygon shape of iterates", polygon_shape},
      {"logarithm cross-oracle", logarithm_cross},
      {"multiplicative group closed forms", multiplicative_closed_forms},
      {"formal group certificates for twists", twist_certificates},
      {"negative controls", negative_controls},
      {"ramification estimates", ramification},
      {"determinism and monotone precision", sweep},
  };
  std::vector<int> which;
  for (int i = 1; i < argc; ++i) which.push_back(std::atoi(argv[i]));
  if (which.empty()) {
    for (int i = 1; i <= static_cast<int>(criteria.size()); ++i) which.push_back(i);
  }
  bool all = true;
  for (int k : which) {
    if (k < 1 || k > static_cast<int>(criteria.size())) {
      std::cerr << "no criterion " << k << '\n';
      return 2;
    }
    const auto& [title, fn] = criteria[static_cast<std::size_t>(k - 1)];
    Outcome o = fn();
    std::cout << "criterion " << k << " (" << title << "): " << (o.pass ? "PASS" : "FAIL") << " - " << o.summary;
    for (const auto& f : o.failures) std::cout << "\n    " << f;
    std::cout << std::endl;
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
