#include "lubinlab/formal_group.hpp"

#include <algorithm>
#include <array>

#include "dense.hpp"
#include "lubinlab/errors.hpp"

namespace lubinlab {

namespace {

int floor_log(int p, int n) {
  int k = 0;
  for (long q = p; q <= n; q *= p) ++k;
  return k;
}

PSeries embed(const PSeries& F, int nvars, int x_to, int y_to, int m) {
  PSeries out(F.prime(), nvars, m);
  for (const auto& [mono, c] : F.terms()) {
    Monomial mm{0, 0, 0};
    mm[static_cast<std::size_t>(x_to)] += mono[0];
    mm[static_cast<std::size_t>(y_to)] += mono[1];
    out.set(mm, c);
  }
  return out;
}

// Congruence [t]_f = x^p mod p below the truncation of br; returns nullopt
// when some coefficient is not known modulo p.
std::optional<bool> matches_frobenius(const PSeries& br) {
  const int p = br.prime();
  const PadicNum one = PadicNum::from_integer(p, 1, kInfinity);
  for (int i = 0; i < br.x_prec(); ++i) {
    PadicNum c = br.coeff(i);
    if (c.is_exact_zero()) {
      if (i == p) return false;
      continue;
    }
    PadicNum d = i == p ? c - one : c;
    if (d.is_zero()) {
      if (d.precision() < 1) return std::nullopt;
      continue;
    }
    if (d.valuation() < 1) return false;
  }
  return true;
}

}  // namespace

FormalGroupLaw group_from_log(const Logarithm& logf) {
  const PSeries& log = logf.series;
  if (log.nvars() != 1) throw DomainError("logarithm must be a one-variable series");
  const int p = log.prime();
  const int m = log.x_prec();
  auto l = log.dense();
  auto e = reversion(log).dense();
  auto pw = dense::power_table(l, p, m);

  // w[j][i] = e_{i+j} binom(i+j, j)
  std::vector<dense::Coeffs> w(static_cast<std::size_t>(m), dense::zeros(p, m));
  for (int j = 0; j < m; ++j) {
    for (int i = 0; i + j < m; ++i) {
      if (i + j == 0 || e[i + j].is_exact_zero()) continue;
      mpz_class b;
      mpz_bin_uiui(b.get_mpz_t(), static_cast<unsigned long>(i + j), static_cast<unsigned long>(j));
      w[j][i] = e[i + j] * b;
    }
  }
  // t[a][i] = sum_j w[j][i] [x^a] l^j
  std::vector<dense::Coeffs> t(static_cast<std::size_t>(m), dense::zeros(p, m));
  for (int a = 0; a < m; ++a) {
    for (int i = 0; i + a < m; ++i) {
      PadicNum acc = PadicNum::exact_zero(p);
      for (int j = 0; j <= a; ++j) {
        if (w[j][i].is_exact_zero() || pw[j][a].is_exact_zero()) continue;
        acc += w[j][i] * pw[j][a];
      }
      t[a][i] = acc;
    }
  }
  PSeries F(p, 2, m);
  for (int a = 0; a < m; ++a) {
    for (int b = 0; a + b < m; ++b) {
      PadicNum acc = PadicNum::exact_zero(p);
      for (int i = 0; i <= b; ++i) {
        if (t[a][i].is_exact_zero() || pw[i][b].is_exact_zero()) continue;
        acc += t[a][i] * pw[i][b];
      }
      F.set(Monomial{a, b, 0}, acc);
    }
  }
  FormalGroupLaw out{F, GroupConstruction::FromLog, check_integrality(F)};
  if (!out.integrality.integral) {
    for (const auto& [mono, c] : F.terms()) {
      if (c.valuation_lower_bound() != out.integrality.min_valuation) continue;
      std::string where = "x^" + std::to_string(mono[0]) + " y^" + std::to_string(mono[1]);
      if (c.is_zero()) {
        throw PrecisionExhausted("coefficient of " + where + " is known only modulo p^" +
                                 std::to_string(c.precision()) + "; raise the guard digits");
      }
      throw IntegralityFailure("coefficient of " + where + " has valuation " +
                               std::to_string(c.valuation()));
    }
  }
  return out;
}

FormalGroupLaw lubin_tate_lift(const PSeries& f) {
  if (f.nvars() != 1) throw DomainError("Lubin-Tate lift needs a one-variable series");
  const int p = f.prime();
  const int m = f.x_prec();
  const int k = f.precision();
  if (k == kInfinity || k < 2) throw PrecisionExhausted("series precision too low to lift");
  if (f.min_valuation() < 0) throw DomainError("series is not integral");
  PadicNum t = f.coeff(1);
  if (t.is_zero() || t.valuation() != 1) throw DomainError("v_p(f'(0)) is not 1");
  if (!f.coeff(0).is_zero()) throw ConstantTermError("f(0) must be zero");

  const mpz_class& mod = prime_power(p, k);
  auto red = [&](mpz_class& v) {
    mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), mod.get_mpz_t());
  };
  std::vector<mpz_class> fc(static_cast<std::size_t>(m), 0);
  for (int i = 1; i < m; ++i) {
    PadicNum c = f.coeff(i);
    if (!c.is_zero()) fc[i] = c.residue(k);
  }
  // fp[a][s] = [x^s] f^a mod p^k
  std::vector<std::vector<mpz_class>> fp(static_cast<std::size_t>(m),
                                         std::vector<mpz_class>(static_cast<std::size_t>(m), 0));
  fp[0][0] = 1;
  for (int a = 1; a < m; ++a) {
    for (int s = a; s < m; ++s) {
      mpz_class acc = 0;
      for (int i = 1; i <= s - (a - 1); ++i) {
        if (fc[i] != 0 && fp[a - 1][s - i] != 0) acc += fc[i] * fp[a - 1][s - i];
      }
      red(acc);
      fp[a][s] = acc;
    }
  }

  using Hom = std::vector<mpz_class>;  // index = exponent of x
  std::vector<Hom> F(static_cast<std::size_t>(m));
  // pow[k][d] = degree-d part of F^k
  std::vector<std::vector<Hom>> pw(static_cast<std::size_t>(m),
                                   std::vector<Hom>(static_cast<std::size_t>(m)));
  F[1] = {1, 1};
  pw[1][1] = F[1];
  const mpz_class tu = t.unit();  // t = p * tu
  for (int d = 2; d < m; ++d) {
    Hom x(static_cast<std::size_t>(d + 1), 0);
    for (int kk = 2; kk <= d; ++kk) {
      Hom acc(static_cast<std::size_t>(d + 1), 0);
      for (int j = 1; j <= d - kk + 1; ++j) {
        const Hom& a = F[j];
        const Hom& b = pw[kk - 1][d - j];
        for (std::size_t ia = 0; ia < a.size(); ++ia) {
          if (a[ia] == 0) continue;
          for (std::size_t ib = 0; ib < b.size(); ++ib) {
            if (b[ib] != 0) acc[ia + ib] += a[ia] * b[ib];
          }
        }
      }
      for (auto& v : acc) red(v);
      if (fc[kk] != 0) {
        for (int s = 0; s <= d; ++s) x[s] += fc[kk] * acc[s];
      }
      pw[kk][d] = std::move(acc);
    }
    // y = degree-d part of sum_{j<d} F_j(f(x), f(y))
    Hom y(static_cast<std::size_t>(d + 1), 0);
    for (int j = 1; j < d; ++j) {
      for (int a = 0; a <= j; ++a) {
        const mpz_class& c = F[j][a];
        if (c == 0) continue;
        const int b = j - a;
        for (int s = a; s <= d - b; ++s) {
          if (fp[a][s] == 0 || fp[b][d - s] == 0) continue;
          y[s] += c * fp[a][s] * fp[b][d - s];
        }
      }
    }
    // F_d (t^d - t) = x - y, and t^d - t = p * tu * (t^(d-1) - 1)
    mpz_class unit;
    mpz_powm_ui(unit.get_mpz_t(), t.residue(k).get_mpz_t(), static_cast<unsigned long>(d - 1),
                mod.get_mpz_t());
    unit = tu * (unit - 1);
    red(unit);
    mpz_class inv;
    if (mpz_invert(inv.get_mpz_t(), unit.get_mpz_t(), mod.get_mpz_t()) == 0) {
      throw PrecisionExhausted("cannot invert t^" + std::to_string(d) + " - t");
    }
    Hom fd(static_cast<std::size_t>(d + 1), 0);
    for (int s = 0; s <= d; ++s) {
      mpz_class num = x[s] - y[s];
      red(num);
      if (mpz_divisible_ui_p(num.get_mpz_t(), static_cast<unsigned long>(p)) == 0) {
        throw NonUniqueLift("no integral solution at degree " + std::to_string(d) +
                            "; f is not congruent to a series in x^p mod p");
      }
      num /= p;
      num *= inv;
      red(num);
      fd[s] = num;
    }
    F[d] = fd;
    pw[1][d] = std::move(fd);
  }

  PSeries out(p, 2, m);
  for (int d = 1; d < m; ++d) {
    const int prec = k - 1 - floor_log(p, d);
    if (prec < 1) throw PrecisionExhausted("lift precision exhausted at degree " + std::to_string(d));
    for (int a = 0; a <= d; ++a) {
      out.set(Monomial{a, d - a, 0}, PadicNum::from_integer(p, F[d][a], d == 1 ? kInfinity : prec));
    }
  }
  return {out, GroupConstruction::LubinTateLift, check_integrality(out)};
}

LawCheck check_identity(const PSeries& F) {
  const int p = F.prime();
  const int m = F.x_prec();
  PSeries fx(p, 1, m), fy(p, 1, m);
  for (const auto& [mono, c] : F.terms()) {
    if (mono[1] == 0) fx.set(mono[0], c);
    if (mono[0] == 0) fy.set(mono[1], c);
  }
  PSeries id = PSeries::variable(p, 1, m, 0, kInfinity);
  int deg = std::min(fx.first_disagreement(id), fy.first_disagreement(id));
  return {deg >= m, deg};
}

LawCheck check_commutativity(const PSeries& F) {
  PSeries swapped = embed(F, 2, 1, 0, F.x_prec());
  int deg = F.first_disagreement(swapped);
  return {deg >= F.x_prec(), deg};
}

LawCheck check_associativity(const PSeries& F, int m2) {
  const int p = F.prime();
  const int m = std::min(m2, F.x_prec());
  PSeries f2 = F.truncated(m);
  const int prec = F.precision();
  PSeries x = PSeries::variable(p, 3, m, 0, prec);
  PSeries z = PSeries::variable(p, 3, m, 2, prec);
  std::array<PSeries, 2> left_args{embed(f2, 3, 0, 1, m), z};
  std::array<PSeries, 2> right_args{x, embed(f2, 3, 1, 2, m)};
  PSeries left = compose(f2, std::span<const PSeries>(left_args));
  PSeries right = compose(f2, std::span<const PSeries>(right_args));
  int deg = left.first_disagreement(right);
  return {deg >= m, deg};
}

GroupCertificate certify_group(const PSeries& F, int m2) {
  return {check_identity(F), check_commutativity(F), check_associativity(F, m2)};
}

LawCheck check_endomorphism(const PSeries& F, const PSeries& g, int m2) {
  const int m = std::min({m2, F.x_prec(), g.x_prec()});
  PSeries f2 = F.truncated(m);
  PSeries g1 = g.truncated(m);
  PSeries gx(g.prime(), 2, m), gy(g.prime(), 2, m);
  for (const auto& [mono, c] : g1.terms()) {
    gx.set(Monomial{mono[0], 0, 0}, c);
    gy.set(Monomial{0, mono[0], 0}, c);
  }
  std::array<PSeries, 1> inner{f2};
  std::array<PSeries, 2> outer{gx, gy};
  PSeries left = compose(g1, std::span<const PSeries>(inner));
  PSeries right = compose(f2, std::span<const PSeries>(outer));
  int deg = left.first_disagreement(right);
  return {deg >= m, deg};
}

Bracket bracket(const Logarithm& logf, const PSeries& expf, const PadicNum& a) {
  return {a, compose(expf, logf.series * a)};
}

Bracket bracket(const Logarithm& logf, const PadicNum& a) {
  return bracket(logf, reversion(logf.series), a);
}

bool is_frobenius_lift(const PSeries& g) {
  auto r = matches_frobenius(g);
  return r.has_value() && *r;
}

FrobeniusMultiplier frobenius_multiplier(const Logarithm& logf, const PSeries& f) {
  const int p = f.prime();
  const int m = std::min(f.x_prec(), logf.series.x_prec());
  if (m <= p) {
    throw AmbiguousAtPrecision("truncation order " + std::to_string(m) +
                               " does not reach degree p; increase M");
  }
  PSeries expf = reversion(logf.series);
  std::vector<int> digits{0};
  mpz_class pi = 0;
  int k = 1;
  for (; prime_power(p, k) < m; ++k) {
    const int window = static_cast<int>(std::min<long>(m, prime_power(p, k).get_si() + 1));
    PSeries lt = logf.series.truncated(window);
    PSeries et = expf.truncated(window);
    std::vector<int> passing;
    for (int c = (k == 1 ? 1 : 0); c < p; ++c) {
      mpz_class cand = pi + mpz_class(c) * prime_power(p, k);
      PSeries br = compose(et, lt * PadicNum::from_integer(p, cand, kInfinity));
      auto ok = matches_frobenius(br);
      if (!ok) {
        throw PrecisionExhausted("bracket coefficients unknown modulo p while testing digit " +
                                 std::to_string(k) + "; raise the guard digits");
      }
      if (*ok) passing.push_back(c);
    }
    if (passing.empty()) {
      throw NoCandidate("no digit " + std::to_string(k) +
                        " makes [pi]_f congruent to x^p mod p below degree " +
                        std::to_string(window));
    }
    if (passing.size() > 1) {
      throw AmbiguousAtPrecision(std::to_string(passing.size()) + " candidates for digit " +
                                 std::to_string(k) + " below degree " + std::to_string(window) +
                                 "; increase M");
    }
    digits.push_back(passing.front());
    pi += mpz_class(passing.front()) * prime_power(p, k);
  }
  PadicNum pi_num = PadicNum::from_integer(p, pi, k);
  PSeries full = compose(expf, logf.series * PadicNum::from_integer(p, pi, kInfinity));
  auto ok = matches_frobenius(full);
  if (!ok) throw PrecisionExhausted("full-truncation bracket unknown modulo p");
  if (!*ok) {
    throw NoCandidate("[" + pi.get_str() + "]_f is not congruent to x^p mod p below degree " +
                      std::to_string(m));
  }
  return {pi_num, {pi_num, full}, digits};
}

}  // namespace lubinlab
