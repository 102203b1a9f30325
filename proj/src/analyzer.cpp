#include "lubinlab/analyzer.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <thread>

#include "lubinlab/errors.hpp"

namespace lubinlab {

namespace {

int ceil_div(int a, int b) { return (a + b - 1) / b; }

bool is_prime(int p) {
  if (p < 2) return false;
  for (int d = 2; d * d <= p; ++d) {
    if (p % d == 0) return false;
  }
  return true;
}

// A verdict reached before the end of the pipeline.
struct Stop {
  Verdict verdict;
  std::string stage;
  std::string reason;
};

[[noreturn]] void reject(const std::string& stage, const std::string& reason) {
  throw Stop{Verdict::Rejected, stage, reason};
}

[[noreturn]] void starve(const std::string& stage, const std::string& reason) {
  throw Stop{Verdict::Inconclusive, stage, reason};
}

// Runs one stage, sorting library errors into precision starvation and
// mathematical rejection.
template <class Fn>
auto stage(const std::string& name, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const Stop&) {
    throw;
  } catch (const PrecisionExhausted& e) {
    starve(name, e.what());
  } catch (const DivisionByZeroToPrecision& e) {
    starve(name, e.what());
  } catch (const NoStabilization& e) {
    starve(name, e.what());
  } catch (const TruncationInconclusive& e) {
    starve(name, e.what());
  } catch (const AmbiguousAtPrecision& e) {
    starve(name, e.what());
  } catch (const Error& e) {
    reject(name, e.what());
  }
}

bool truncation_starved(const std::string& stage_name, const std::string& reason) {
  return stage_name == "frobenius" || reason.find("truncation") != std::string::npos ||
         reason.find("increase M") != std::string::npos ||
         reason.find("below degree") != std::string::npos;
}

std::string integrality_problem(const PSeries& s, const IntegralityCheck& check, bool& starved) {
  for (const auto& [m, c] : s.terms()) {
    if (c.valuation_lower_bound() != check.min_valuation) continue;
    starved = c.is_zero();
    std::string where = "degree " + std::to_string(total_degree(m));
    if (starved) return "coefficient at " + where + " known only modulo p^" + std::to_string(c.precision());
    return "coefficient at " + where + " has valuation " + std::to_string(c.valuation());
  }
  starved = false;
  return "not integral";
}

void run(AnalysisReport& r, const ExactSeries& f, const ExactSeries& u, const Config& config) {
  const int p = f.p;
  if (!is_prime(p)) reject("input", "p = " + std::to_string(p) + " is not prime");
  r.config = config.resolved(p);
  const Config& cfg = r.config;
  if (auto bad = config.invalid_reason(p)) starve("config", *bad);
  if (f.nvars != 1 || u.nvars != 1) reject("input", "f and u must be one-variable series");
  if (u.p != p) reject("input", "f and u over different primes");
  const int m = cfg.M;
  const int w = cfg.N + cfg.guard;
  r.working_precision = w;
  if (f.x_prec < m || u.x_prec < m) {
    starve("input", "input series are truncated below x^" + std::to_string(m));
  }
  if (std::min(f.precision, u.precision) < w) {
    starve("input", "input known only modulo p^" + std::to_string(std::min(f.precision, u.precision)) +
                        "; the working precision is p^" + std::to_string(w));
  }
  const PSeries fp = f.materialize(w).truncated(m);
  const PSeries up = u.materialize(w).truncated(m);
  if (!fp.coeff(0).is_zero() || !up.coeff(0).is_zero()) {
    reject("input", "f and u must have zero constant term");
  }
  if (fp.min_valuation() < 0 || up.min_valuation() < 0) reject("input", "f and u must be integral");

  // Hypotheses
  CommuteCheck cc = check_commute(fp, up);
  r.commute_degree = cc.agreed_degree;
  if (!cc.commutes) {
    reject("commute", "f and u do not commute: first disagreement at degree " +
                          std::to_string(cc.agreed_degree));
  }
  const PadicNum t = fp.coeff(1);
  if (!t.is_zero()) r.fprime0_valuation = t.valuation();
  if (t.is_zero() || t.valuation() != 1) {
    reject("hypotheses", t.is_zero() ? "f'(0) vanishes to precision"
                                     : "v_p(f'(0)) = " + std::to_string(t.valuation()) + ", not 1");
  }
  auto wd = weierstrass_degree(reduce_mod_p(fp));
  if (wd) r.weierstrass_degree = *wd;
  if (!wd) reject("hypotheses", "weierstrass degree none below M");
  if (*wd != p) {
    reject("hypotheses", "weierstrass degree " + std::to_string(*wd) + ", not p: f must have exactly p roots");
  }
  const PadicNum gamma = up.coeff(1);
  r.u_invertible = !gamma.is_zero() && gamma.valuation() == 0;
  if (!*r.u_invertible) reject("hypotheses", "u is not invertible: u'(0) is not a unit");

  CommutingPair pair{fp, up, gamma, t};
  NormalizedPair normalized = stage("normalize", [&] {
    try {
      return normalize_u(pair);
    } catch (const TorsionDetected& e) {
      r.torsion_status = "torsion to precision";
      reject("normalize", std::string(e.what()) +
                              "; the hypothesis 'u is invertible and has infinite order' fails");
    }
  });
  r.torsion_status = "infinite order to precision";
  r.normalization_e = normalized.e;

  // Logarithm, by two methods
  Logarithm logf = stage("logarithm", [&] { return logarithm_recurrence(fp); });
  r.log_precision = logf.series.precision();
  stage("logarithm", [&] {
    const int n_max = default_limit_iterations(p, m, cfg.N);
    PSeries fl = f.materialize(w + n_max).truncated(m);
    Logarithm lim = logarithm_limit(fl, n_max, cfg.N);
    r.limit_iterations = lim.iterations;
    int deg = logf.series.first_disagreement(lim.series);
    r.log_methods_agree = deg >= m;
    if (deg < m) {
      starve("logarithm", "recurrence and iterate limit disagree at degree " + std::to_string(deg));
    }
    NewtonPolygon np = newton_polygon(logf.series);
    r.log_vertices = np.negative_vertices();
    std::vector<PolygonPoint> expected;
    for (long q = 1, k = 0; q < m; q *= p, ++k) expected.push_back({static_cast<int>(q), static_cast<int>(-k)});
    if (r.log_vertices != expected) reject("logarithm", "log_f polygon vertices are not (p^k, -k)");
    return 0;
  });
  {
    IntegralityCheck d = dlog_integrality(logf);
    r.dlog_min_valuation = d.min_valuation;
    if (!d.integral) {
      bool starved = false;
      std::string what = integrality_problem(derivative(logf.series), d, starved);
      if (starved) starve("logarithm", "log_f' integrality undecided: " + what);
      reject("logarithm", "log_f' is not integral: " + what);
    }
  }

  // Newton polygons of the iterates
  for (int n = 1; n <= cfg.n_shape; ++n) {
    ShapeCheck sc = stage("polygon", [&] {
      ShapeCheck s;
      s.n = n;
      PSeries fn = iterate(fp, n);
      NewtonPolygon np = newton_polygon(fn);
      s.vertices = np.negative_vertices();
      s.shape = verify_iterate_shape(fp, n);
      s.eisenstein = s.shape;
      if (s.shape) {
        for (const auto& seg : np.negative_segments()) {
          if (!is_eisenstein(weierstrass_factor(fn, seg.slope).poly)) s.eisenstein = false;
        }
      }
      return s;
    });
    r.shapes.push_back(sc);
    if (!sc.shape) {
      reject("polygon", "vertices of N(f^" + std::to_string(n) + ") are not (p^k, " +
                            std::to_string(n) + " - k)");
    }
    if (!sc.eisenstein) {
      reject("polygon", "a slope factor of f^" + std::to_string(n) + " is not Eisenstein");
    }
  }

  // Formal group
  FormalGroupLaw group = stage("group", [&] { return group_from_log(logf); });
  r.group_min_valuation = group.integrality.min_valuation;
  r.group_precision = group.F.precision();
  r.group_law = group.F;
  GroupCertificate cert = stage("group", [&] { return certify_group(group.F, cfg.M2); });
  r.group_certificate = cert;
  for (const auto& [law, check] : {std::pair{"identity", cert.identity},
                                  std::pair{"commutativity", cert.commutativity},
                                  std::pair{"associativity", cert.associativity}}) {
    if (!check.passed) {
      starve("group", std::string(law) + " check failed at degree " + std::to_string(check.degree));
    }
  }
  stage("group", [&] {
    PSeries expf = reversion(logf.series);
    int fd = bracket(logf, expf, t).series.first_disagreement(fp);
    int ud = bracket(logf, expf, gamma).series.first_disagreement(up);
    r.f_bracket_degree = fd;
    r.u_bracket_degree = ud;
    if (fd < m) starve("group", "f and [f'(0)]_f disagree at degree " + std::to_string(fd));
    if (ud < m) starve("group", "u and [u'(0)]_f disagree at degree " + std::to_string(ud));
    return 0;
  });

  // Frobenius multiplier and the Lubin-Tate cross-check
  FrobeniusMultiplier fr = stage("frobenius", [&] { return frobenius_multiplier(logf, fp); });
  r.pi = fr.pi;
  r.pi_digits = fr.digits;
  r.pi_congruence = true;
  FormalGroupLaw lifted = stage("lift", [&] { return lubin_tate_lift(fr.bracket.series); });
  int ld = lifted.F.first_disagreement(group.F);
  r.lift_agreement_degree = ld;
  if (ld < m) starve("lift", "Lubin-Tate lift and exp(log + log) disagree at degree " + std::to_string(ld));

  r.final_precision = std::min({group.F.precision(), fr.bracket.series.precision(),
                                lifted.F.precision(), logf.series.precision()});
  r.verdict = Verdict::Certified;
  r.reason = "all certificates passed";
}

// Dense one-variable rational series, optionally reduced modulo p^k.
using QSeries = std::vector<mpq_class>;

struct QRing {
  int p;
  int m;
  std::optional<mpz_class> mod;

  void reduce(mpq_class& q) const {
    if (!mod) return;
    mpz_class inv;
    if (mpz_invert(inv.get_mpz_t(), q.get_den_mpz_t(), mod->get_mpz_t()) == 0) {
      throw NotInvertible("denominator divisible by p");
    }
    mpz_class v = q.get_num() * inv;
    mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), mod->get_mpz_t());
    q = v;
  }

  QSeries mul(const QSeries& a, const QSeries& b) const {
    QSeries out(static_cast<std::size_t>(m), 0);
    for (int i = 0; i < m; ++i) {
      if (a[i] == 0) continue;
      for (int j = 0; i + j < m; ++j) {
        if (b[j] != 0) out[i + j] += a[i] * b[j];
      }
    }
    for (auto& c : out) reduce(c);
    return out;
  }

  // g(h), Horner
  QSeries compose(const QSeries& g, const QSeries& h) const {
    QSeries out(static_cast<std::size_t>(m), 0);
    for (int i = m - 1; i >= 1; --i) {
      out = mul(out, h);
      out[0] += g[i];
    }
    return mul(out, h);
  }

  QSeries reversion(const QSeries& g) const {
    // columns of the power table of the inverse v, built degree by degree
    std::vector<QSeries> pw(static_cast<std::size_t>(m), QSeries(static_cast<std::size_t>(m), 0));
    QSeries v(static_cast<std::size_t>(m), 0);
    v[1] = 1 / g[1];
    reduce(v[1]);
    pw[1][1] = v[1];
    for (int n = 2; n < m; ++n) {
      mpq_class s = 0;
      for (int k = 2; k <= n; ++k) {
        mpq_class c = 0;
        for (int j = 1; j <= n - k + 1; ++j) {
          if (v[j] != 0 && pw[k - 1][n - j] != 0) c += v[j] * pw[k - 1][n - j];
        }
        reduce(c);
        pw[k][n] = c;
        if (g[k] != 0) s += g[k] * c;
      }
      v[n] = -s / g[1];
      reduce(v[n]);
      pw[1][n] = v[n];
    }
    return v;
  }
};

QSeries to_dense(const ExactSeries& s, int m) {
  QSeries out(static_cast<std::size_t>(m), 0);
  for (const auto& [mono, c] : s.coeffs) {
    if (mono[0] < m) out[mono[0]] = c;
  }
  return out;
}

ExactSeries from_dense(int p, const QSeries& c, int precision) {
  ExactSeries out;
  out.p = p;
  out.x_prec = static_cast<int>(c.size());
  out.precision = precision;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] != 0) out.coeffs[Monomial{static_cast<int>(i), 0, 0}] = c[i];
  }
  return out;
}

ExactSeries binomial_minus_one(int p, long q, int m) {
  QSeries c(static_cast<std::size_t>(m), 0);
  for (int i = 1; i < m && i <= q; ++i) {
    mpz_class b;
    mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(i));
    c[i] = b;
  }
  return from_dense(p, c, kInfinity);
}

int p_valuation(int p, const mpq_class& q) {
  return valuation_of(p, q.get_num()) - valuation_of(p, q.get_den());
}

}  // namespace

Config Config::resolved(int p) const {
  Config c = *this;
  if (c.M2 < 0) c.M2 = std::min(12, M);
  if (c.guard < 0) c.guard = ceil_div(M, std::max(p - 1, 1)) + 4;
  if (c.n_shape < 0) {
    // Level n needs room to resolve v(g'(alpha)) = n at slope
    // 1/(p^(n-1)(p-1)): n p^(n-1) (p-1) + 1 < M.
    c.n_shape = 0;
    for (long q = 1; c.n_shape < 3 && (c.n_shape + 1) * q * (p - 1) + 1 < M; q *= p) ++c.n_shape;
  }
  return c;
}

std::optional<std::string> Config::invalid_reason(int p) const {
  Config c = resolved(p);
  if (!is_prime(p)) return "p must be prime";
  if (c.N < 4) return "N must be at least 4";
  if (c.M < p * p) return "M must be at least p^2";
  if (c.guard < ceil_div(c.M, p - 1)) return "guard must be at least ceil(M/(p-1))";
  if (c.M2 < 2 || c.M2 > c.M) return "M2 must lie in [2, M]";
  long q = 1;
  for (int i = 0; i < c.n_shape; ++i) q *= p;
  if (c.n_shape < 0 || q >= c.M) return "n_shape needs p^n_shape < M";
  return std::nullopt;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Certified: return "CERTIFIED";
    case Verdict::Rejected: return "REJECTED";
    case Verdict::Inconclusive: return "INCONCLUSIVE";
  }
  return "?";
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Certified: return 0;
    case Verdict::Rejected: return 1;
    case Verdict::Inconclusive: return 2;
  }
  return 2;
}

AnalysisReport analyze(const ExactSeries& f, const ExactSeries& u, const Config& config,
                       const std::string& name) {
  AnalysisReport r;
  r.name = name;
  r.p = f.p;
  r.config = config;
  try {
    run(r, f, u, config);
  } catch (const Stop& s) {
    r.verdict = s.verdict;
    r.stage = s.stage;
    r.reason = s.reason;
  } catch (const Error& e) {
    r.verdict = Verdict::Rejected;
    r.stage = "input";
    r.reason = e.what();
  } catch (const std::exception& e) {
    r.verdict = Verdict::Inconclusive;
    r.stage = "internal";
    r.reason = e.what();
  }
  if (r.verdict == Verdict::Inconclusive) {
    r.suggested_N = r.config.N;
    r.suggested_M = r.config.M;
    if (truncation_starved(r.stage, r.reason)) {
      r.suggested_M = 2 * r.config.M;
    } else {
      r.suggested_N = r.config.N + 8;
    }
  }
  return r;
}

TwistBase TwistBase::multiplicative(int p) {
  TwistBase b;
  b.kind = Kind::MultiplicativeGroup;
  b.p = p;
  return b;
}

TwistBase TwistBase::lubin_tate(const ExactSeries& f0) {
  TwistBase b;
  b.kind = Kind::LubinTate;
  b.p = f0.p;
  b.f0 = f0;
  return b;
}

TwistBase TwistBase::standard_lubin_tate(int p) {
  ExactSeries f0;
  f0.p = p;
  f0.x_prec = std::max(p + 1, 2);
  f0.coeffs[Monomial{1, 0, 0}] = p;
  f0.coeffs[Monomial{p, 0, 0}] += 1;
  return lubin_tate(f0);
}

Fixture make_twist_fixture(const TwistBase& base, const ExactSeries& w, int M, int precision) {
  const int p = base.p;
  if (w.p != p || w.nvars != 1) throw NotInvertible("w must be a one-variable series over the same prime");
  for (const auto& [mono, c] : w.coeffs) {
    if (c != 0 && p_valuation(p, c) < 0) throw NotInvertible("w is not integral");
    if (mono[0] == 0 && c != 0) throw NotInvertible("w has a constant term");
  }
  auto w1 = w.coeffs.find(Monomial{1, 0, 0});
  if (w1 == w.coeffs.end() || w1->second == 0 || p_valuation(p, w1->second) != 0) {
    throw NotInvertible("w'(0) is not a unit");
  }
  QRing exact{p, M, std::nullopt};
  const QSeries wd = to_dense(w, M);
  const QSeries winv = exact.reversion(wd);

  ExactSeries f0, u0;
  if (base.kind == TwistBase::Kind::MultiplicativeGroup) {
    f0 = binomial_minus_one(p, p, M);
    u0 = binomial_minus_one(p, p + 1, M);
  } else {
    if (base.f0.precision != kInfinity) throw DomainError("Lubin-Tate base series must be exact");
    f0 = base.f0;
    int extra = 2 * M + 20;
    PSeries fp = f0.materialize(precision + extra);
    fp = fp.truncated(M);
    if (fp.x_prec() < M) {
      PSeries wide(p, 1, M);
      for (const auto& [mono, c] : fp.terms()) wide.set(mono, c);
      fp = wide;
    }
    Logarithm logf = logarithm_recurrence(fp);
    PSeries br = bracket(logf, PadicNum::from_integer(p, 1 + p, kInfinity)).series;
    if (br.precision() < precision) {
      throw PrecisionExhausted("[1+p]_f0 reached only p^" + std::to_string(br.precision()));
    }
    u0 = ExactSeries::from_series(br.reduced_to(precision));
    u0.precision = precision;
  }

  auto twist = [&](const ExactSeries& g) {
    QRing ring{p, M, std::nullopt};
    if (g.precision != kInfinity) ring.mod = prime_power(p, g.precision);
    QSeries inner = ring.compose(to_dense(g, M), wd);
    QSeries out = ring.compose(winv, inner);
    return from_dense(p, out, g.precision);
  };
  Fixture fx;
  fx.p = p;
  fx.M = M;
  fx.f = twist(f0);
  fx.u = twist(u0);
  return fx;
}

BatchResult batch_run(const std::vector<Fixture>& fixtures, const Config& config) {
  BatchResult out;
  out.reports.resize(fixtures.size());
  unsigned threads = std::max(1u, std::thread::hardware_concurrency());
  if (const char* cap = std::getenv("LUBINLAB_THREADS")) {
    int n = std::atoi(cap);
    if (n > 0) threads = std::min(threads, static_cast<unsigned>(n));
  }
  threads = std::min<unsigned>(threads, static_cast<unsigned>(std::max<std::size_t>(fixtures.size(), 1)));
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < fixtures.size(); i = next++) {
      const Fixture& fx = fixtures[i];
      Config c = config;
      if (fx.N > 0) c.N = fx.N;
      if (fx.M > 0) c.M = fx.M;
      out.reports[i] = analyze(fx.f, fx.u, c, fx.name);
    }
  };
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < threads; ++i) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  std::stable_sort(out.reports.begin(), out.reports.end(),
                   [](const AnalysisReport& a, const AnalysisReport& b) { return a.name < b.name; });
  return out;
}

Verdict overall_verdict(const BatchResult& batch) {
  Verdict v = Verdict::Certified;
  for (const auto& r : batch.reports) {
    if (exit_code(r.verdict) > exit_code(v)) v = r.verdict;
  }
  return v;
}

std::string summary_table(const BatchResult& batch) {
  std::vector<std::array<std::string, 7>> rows;
  rows.push_back({"fixture", "p", "N", "M", "verdict", "pi_f", "detail"});
  for (const auto& r : batch.reports) {
    std::string detail = r.reason;
    if (r.verdict == Verdict::Certified) {
      detail = "F integral, min v " + std::to_string(r.group_min_valuation.value_or(0)) +
               ", certified mod p^" + std::to_string(r.final_precision.value_or(0));
    } else if (r.verdict == Verdict::Inconclusive) {
      detail = r.stage + ": " + r.reason + " (try N=" + std::to_string(r.suggested_N) +
               ", M=" + std::to_string(r.suggested_M) + ")";
    } else {
      detail = r.stage + ": " + r.reason;
    }
    rows.push_back({r.name.empty() ? "-" : r.name, std::to_string(r.p), std::to_string(r.config.N),
                    std::to_string(r.config.M), to_string(r.verdict),
                    r.pi ? r.pi->to_string() : "-", detail});
  }
  std::array<std::size_t, 7> width{};
  for (const auto& row : rows) {
    for (std::size_t i = 0; i + 1 < row.size(); ++i) width[i] = std::max(width[i], row[i].size());
  }
  std::ostringstream os;
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      os << row[i];
      if (i + 1 < row.size()) os << std::string(width[i] - row[i].size() + 2, ' ');
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace lubinlab
