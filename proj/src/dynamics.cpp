#include "lubinlab/dynamics.hpp"

#include <algorithm>

#include "dense.hpp"
#include "lubinlab/errors.hpp"

namespace lubinlab {

namespace {

PSeries identity_like(const PSeries& s) {
  return PSeries::variable(s.prime(), 1, s.x_prec(), 0, kInfinity);
}

int ceil_log(int p, int m) {
  int k = 0;
  long q = 1;
  while (q < m) {
    q *= p;
    ++k;
  }
  return k;
}

}  // namespace

CommuteCheck check_commute(const PSeries& f, const PSeries& u) {
  PSeries fu = compose(f, u);
  PSeries uf = compose(u, f);
  CommuteCheck out;
  out.agreed_degree = fu.first_disagreement(uf);
  out.commutes = out.agreed_degree >= std::min(fu.x_prec(), uf.x_prec());
  out.precision = std::min(fu.precision(), uf.precision());
  return out;
}

CommutingPair make_commuting_pair(const PSeries& f, const PSeries& u) {
  if (f.nvars() != 1 || u.nvars() != 1) throw DomainError("pair series must be one-variable");
  if (f.prime() != u.prime()) throw PrimeMismatch("f and u over different primes");
  if (!f.coeff(0).is_zero() || !u.coeff(0).is_zero()) {
    throw DomainError("f and u must have zero constant term");
  }
  if (!check_commute(f, u).commutes) throw DomainError("f and u do not commute");
  CommutingPair pair{f, u, u.coeff(1), f.coeff(1)};
  if (pair.fprime0.is_zero() || pair.fprime0.valuation() != 1) {
    throw DomainError("v_p(f'(0)) is not 1");
  }
  if (pair.gamma.is_zero() || pair.gamma.valuation() != 0) {
    throw DomainError("u'(0) is not a unit");
  }
  if (weierstrass_degree(reduce_mod_p(f)) != f.prime()) {
    throw DomainError("f mod p does not have Weierstrass degree p");
  }
  return pair;
}

Logarithm logarithm_recurrence(const PSeries& f) {
  if (f.nvars() != 1) throw DomainError("logarithm needs a one-variable series");
  const int p = f.prime();
  const int m = f.x_prec();
  auto fd = f.dense();
  if (!fd[0].is_zero()) throw ConstantTermError("f(0) must be zero");
  const PadicNum pi = fd[1];
  if (pi.is_zero()) throw DomainError("f'(0) is zero to precision");

  auto powers = dense::power_table(fd, p, m);
  auto a = dense::zeros(p, m);
  Logarithm out{PSeries(p, 1, m), LogMethod::Recurrence, 0, std::vector<int>(m, 0)};
  if (m > 1) a[1] = PadicNum::from_integer(p, 1, kInfinity);
  PadicNum pin = pi;
  for (int n = 2; n < m; ++n) {
    pin *= pi;
    PadicNum denom = pin - pi;
    if (denom.is_zero()) {
      throw PrecisionExhausted("f'(0)^" + std::to_string(n) + " - f'(0) vanishes to precision");
    }
    PadicNum s = PadicNum::exact_zero(p);
    for (int k = 1; k < n; ++k) {
      const PadicNum& c = powers[k][n];
      if (a[k].is_exact_zero() || c.is_exact_zero()) continue;
      s += a[k] * c;
    }
    a[n] = -s / denom;
    out.digits_lost[n] = denom.valuation();
  }
  out.series = PSeries::univariate(p, m, a);
  return out;
}

int default_limit_iterations(int p, int m, int target) {
  return target + 2 * ceil_log(p, m) + 4;
}

Logarithm logarithm_limit(const PSeries& f, int n_max, int target) {
  if (f.nvars() != 1) throw DomainError("logarithm needs a one-variable series");
  const int p = f.prime();
  const int m = f.x_prec();
  Logarithm out{identity_like(f), LogMethod::IterateLimit, 0, {}};
  if (n_max <= 0) return out;
  auto fd = f.dense();
  if (!fd[0].is_zero()) throw ConstantTermError("f(0) must be zero");
  const PadicNum pi = fd[1];
  if (pi.is_zero()) throw DomainError("f'(0) is zero to precision");

  auto powers = dense::power_table(fd, p, m);
  auto g = identity_like(f).dense();
  PSeries prev = out.series;
  PadicNum pin = PadicNum::from_integer(p, 1, kInfinity);
  for (int n = 1; n <= n_max; ++n) {
    g = dense::compose_with_powers(g, powers, p, m);  // f^n = f^(n-1) o f
    pin *= pi;
    auto l = g;
    for (auto& c : l) {
      if (!c.is_exact_zero()) c /= pin;
    }
    PSeries cur = PSeries::univariate(p, m, l);
    if (cur.precision() < target) {
      throw NoStabilization("iterates lost precision below p^" + std::to_string(target) +
                            " after " + std::to_string(n) + " of " + std::to_string(n_max) +
                            " steps");
    }
    PSeries cur_t = cur.reduced_to(target);
    if (n >= 2 && cur_t.agrees_with(prev)) {
      out.series = cur_t;
      out.iterations = n;
      return out;
    }
    prev = cur_t;
  }
  throw NoStabilization("iterates did not stabilize modulo p^" + std::to_string(target) +
                        " within " + std::to_string(n_max) + " steps");
}

IntegralityCheck check_integrality(const PSeries& s) {
  IntegralityCheck out;
  for (const auto& [m, c] : s.terms()) {
    int v = c.valuation_lower_bound();
    if (v < out.min_valuation) {
      out.min_valuation = v;
      out.worst_degree = total_degree(m);
    }
  }
  out.integral = out.min_valuation >= 0;
  return out;
}

IntegralityCheck dlog_integrality(const Logarithm& logf) {
  return check_integrality(derivative(logf.series));
}

NormalizedPair normalize_u(const CommutingPair& pair) {
  const int p = pair.f.prime();
  const PadicNum& gamma = pair.gamma;
  if (gamma.is_zero() || gamma.valuation() != 0) throw DomainError("u'(0) is not a unit");
  auto rou = is_root_of_unity(gamma);
  if (rou.is_root_of_unity) {
    PSeries it = iterate(pair.u, rou.order);
    if (it.agrees_with(identity_like(pair.u))) {
      throw TorsionDetected("u has order " + std::to_string(rou.order) +
                            " to precision p^" + std::to_string(rou.certified_precision) +
                            " (torsion to precision)");
    }
  }
  int e = multiplicative_order_mod_p(gamma.residue(1), p);
  if (p == 2 && gamma.residue(2) == 3) e *= 2;
  NormalizedPair out{pair, e};
  if (e > 1) {
    out.pair.u = iterate(pair.u, e);
    out.pair.gamma = out.pair.u.coeff(1);
  }
  return out;
}

PSeries zp_iterate(const CommutingPair& pair, const Logarithm& logf, const PadicNum& a) {
  const int p = pair.f.prime();
  const PadicNum& gamma = pair.gamma;
  const int q = p == 2 ? 2 : 1;
  PadicNum scale;
  bool near_one = !gamma.is_zero() && gamma.valuation() == 0 &&
                  (gamma - PadicNum::from_integer(p, 1, kInfinity)).valuation_lower_bound() >= q;
  if (near_one) {
    scale = padic_pow(gamma, a);
  } else {
    mpq_class r = a.to_rational();
    if (r.get_den() != 1 || r < 0) {
      throw DomainError("u'(0) is not 1 mod p; only nonnegative integer exponents apply");
    }
    scale = padic_pow(gamma, r.get_num());
  }
  PSeries expf = reversion(logf.series);
  return compose(expf, logf.series * scale);
}

RamificationEstimate ramification_index(const FpSeries& omega, int n_max) {
  const int p = omega.prime();
  const int m = omega.x_prec();
  if (m < 2 || omega[0] != 0 || omega[1] != 1) {
    throw DomainError("omega must satisfy omega(0) = 0 and omega'(0) = 1");
  }
  FpSeries id = FpSeries::identity(p, m);
  if (omega == id) throw DomainError("omega is the identity below the truncation");
  RamificationEstimate out;
  long pn = 1;
  for (int n = 0; n <= n_max; ++n) {
    int i = (iterate(omega, pn) - id).x_valuation();
    if (i >= m) {
      throw TruncationInconclusive("omega^(p^" + std::to_string(n) +
                                   ") agrees with x below degree " + std::to_string(m));
    }
    out.depth.push_back(i);
    out.estimates.push_back(Rational(static_cast<std::int64_t>(p - 1) * i, pn * p));
    pn *= p;
  }
  std::size_t k = out.estimates.size();
  out.stabilized = k >= 2 && out.estimates[k - 1] == out.estimates[k - 2];
  return out;
}

}  // namespace lubinlab
