#include "lubinlab/series.hpp"

#include <algorithm>
#include <sstream>

#include "dense.hpp"
#include "lubinlab/errors.hpp"

namespace lubinlab {

// --- dense one-variable helpers ----------------------------------------------

namespace dense {

Coeffs zeros(int p, int n) {
  return Coeffs(static_cast<std::size_t>(std::max(n, 0)), PadicNum::exact_zero(p));
}

Coeffs multiply(const Coeffs& a, const Coeffs& b, int p, int m) {
  Coeffs r = zeros(p, m);
  std::vector<int> ia, ib;
  for (int i = 0; i < static_cast<int>(a.size()) && i < m; ++i) {
    if (!a[i].is_exact_zero()) ia.push_back(i);
  }
  for (int j = 0; j < static_cast<int>(b.size()) && j < m; ++j) {
    if (!b[j].is_exact_zero()) ib.push_back(j);
  }
  for (int i : ia) {
    for (int j : ib) {
      if (i + j >= m) break;
      r[i + j] += a[i] * b[j];
    }
  }
  return r;
}

Coeffs compose(const Coeffs& g, const Coeffs& h, int p, int m) {
  Coeffs r = zeros(p, m);
  if (!g.empty()) r[0] = g[0];
  int top = 0;
  for (int k = 1; k < static_cast<int>(g.size()) && k < m; ++k) {
    if (!g[k].is_exact_zero()) top = k;
  }
  Coeffs power = h;
  power.resize(static_cast<std::size_t>(m), PadicNum::exact_zero(p));
  for (int k = 1; k <= top; ++k) {
    if (k > 1) power = multiply(power, h, p, m);
    if (g[k].is_exact_zero()) continue;
    for (int n = k; n < m; ++n) {
      if (!power[n].is_exact_zero()) r[n] += g[k] * power[n];
    }
  }
  return r;
}

std::vector<Coeffs> power_table(const Coeffs& h, int p, int m) {
  std::vector<Coeffs> out;
  out.reserve(static_cast<std::size_t>(m));
  Coeffs one = zeros(p, m);
  if (m > 0) one[0] = PadicNum::from_integer(p, 1, kInfinity);
  out.push_back(std::move(one));
  Coeffs hh = h;
  hh.resize(static_cast<std::size_t>(m), PadicNum::exact_zero(p));
  for (int k = 1; k < m; ++k) {
    out.push_back(k == 1 ? hh : multiply(out.back(), hh, p, m));
  }
  return out;
}

Coeffs compose_with_powers(const Coeffs& g, const std::vector<Coeffs>& powers, int p, int m) {
  Coeffs r = zeros(p, m);
  for (int k = 0; k < static_cast<int>(g.size()) && k < m; ++k) {
    if (g[k].is_exact_zero()) continue;
    const Coeffs& pw = powers[static_cast<std::size_t>(k)];
    for (int n = 0; n < m; ++n) {
      if (!pw[n].is_exact_zero()) r[n] += g[k] * pw[n];
    }
  }
  return r;
}

}  // namespace dense

namespace {

void require_no_constant(const PSeries& h) {
  PadicNum c = h.coeff(Monomial{0, 0, 0});
  if (!c.is_zero()) {
    throw ConstantTermError("substituted series has nonzero constant term " +
                            c.to_string());
  }
}

}  // namespace

// --- PSeries -------------------------------------------------------------------

PSeries::PSeries(int p, int nvars, int x_prec) : p_(p), nvars_(nvars), x_prec_(x_prec) {
  if (p < 2) throw DomainError("prime must be at least 2");
  if (nvars < 1 || nvars > 3) throw DomainError("series support 1 to 3 variables");
  if (x_prec < 1) throw DomainError("truncation order must be positive");
}

PSeries PSeries::variable(int p, int nvars, int x_prec, int index, int precision) {
  PSeries s(p, nvars, x_prec);
  if (index < 0 || index >= nvars) throw DomainError("variable index out of range");
  Monomial m{0, 0, 0};
  m[static_cast<std::size_t>(index)] = 1;
  s.set(m, PadicNum::from_integer(p, 1, precision));
  return s;
}

PSeries PSeries::univariate(int p, int x_prec, std::span<const PadicNum> coeffs) {
  PSeries s(p, 1, x_prec);
  for (std::size_t i = 0; i < coeffs.size(); ++i) s.set(static_cast<int>(i), coeffs[i]);
  return s;
}

PadicNum PSeries::coeff(const Monomial& m) const {
  auto it = coeffs_.find(m);
  if (it == coeffs_.end()) return PadicNum::exact_zero(p_);
  return it->second;
}

void PSeries::set(const Monomial& m, const PadicNum& c) {
  if (total_degree(m) >= x_prec_) return;
  for (int v = nvars_; v < 3; ++v) {
    if (m[static_cast<std::size_t>(v)] != 0) throw DomainError("monomial uses an absent variable");
  }
  if (c.is_exact_zero()) {
    coeffs_.erase(m);
    return;
  }
  if (c.prime() != p_) throw PrimeMismatch("coefficient over a different prime");
  coeffs_[m] = c;
}

bool PSeries::s0() const { return coeff(Monomial{0, 0, 0}).is_exact_zero(); }

int PSeries::precision() const {
  int r = kInfinity;
  for (const auto& [m, c] : coeffs_) r = std::min(r, c.precision());
  return r;
}

int PSeries::min_valuation() const {
  int r = kInfinity;
  for (const auto& [m, c] : coeffs_) r = std::min(r, c.valuation_lower_bound());
  return r;
}

int PSeries::x_valuation() const {
  int r = x_prec_;
  for (const auto& [m, c] : coeffs_) {
    if (!c.is_zero()) r = std::min(r, total_degree(m));
  }
  return r;
}

std::vector<PadicNum> PSeries::dense() const {
  if (nvars_ != 1) throw DomainError("dense view needs a one-variable series");
  auto out = dense::zeros(p_, x_prec_);
  for (const auto& [m, c] : coeffs_) out[static_cast<std::size_t>(m[0])] = c;
  return out;
}

PSeries PSeries::truncated(int x_prec) const {
  PSeries r(p_, nvars_, std::min(x_prec, x_prec_));
  for (const auto& [m, c] : coeffs_) r.set(m, c);
  return r;
}

PSeries PSeries::reduced_to(int precision) const {
  PSeries r(p_, nvars_, x_prec_);
  for (const auto& [m, c] : coeffs_) r.set(m, c.reduced_to(precision));
  return r;
}

PSeries PSeries::lifted_to(int precision) const {
  PSeries r(p_, nvars_, x_prec_);
  for (const auto& [m, c] : coeffs_) r.set(m, c.lifted_to(precision));
  return r;
}

void PSeries::check_compatible(const PSeries& other) const {
  if (p_ != other.p_) {
    throw PrimeMismatch("series over different primes: " + std::to_string(p_) + " and " +
                        std::to_string(other.p_));
  }
  if (nvars_ != other.nvars_) throw DomainError("series with different numbers of variables");
}

PSeries PSeries::operator-() const {
  PSeries r(p_, nvars_, x_prec_);
  for (const auto& [m, c] : coeffs_) r.coeffs_[m] = -c;
  return r;
}

PSeries& PSeries::operator+=(const PSeries& rhs) {
  check_compatible(rhs);
  x_prec_ = std::min(x_prec_, rhs.x_prec_);
  std::erase_if(coeffs_, [&](const auto& kv) { return total_degree(kv.first) >= x_prec_; });
  for (const auto& [m, c] : rhs.coeffs_) {
    if (total_degree(m) >= x_prec_) continue;
    auto it = coeffs_.find(m);
    if (it == coeffs_.end()) {
      coeffs_.emplace(m, c);
    } else {
      it->second += c;
    }
  }
  return *this;
}

PSeries& PSeries::operator-=(const PSeries& rhs) { return *this += -rhs; }

PSeries operator*(const PSeries& a, const PSeries& b) {
  a.check_compatible(b);
  const int m = std::min(a.x_prec_, b.x_prec_);
  const int p = a.p_;
  if (a.nvars_ == 1) {
    auto r = dense::multiply(a.dense(), b.dense(), p, m);
    return PSeries::univariate(p, m, r);
  }
  std::vector<std::pair<Monomial, const PadicNum*>> ta, tb;
  for (const auto& [mono, c] : a.coeffs_) ta.emplace_back(mono, &c);
  for (const auto& [mono, c] : b.coeffs_) tb.emplace_back(mono, &c);
  auto by_degree = [](const auto& x, const auto& y) {
    return total_degree(x.first) < total_degree(y.first);
  };
  std::stable_sort(tb.begin(), tb.end(), by_degree);
  std::map<Monomial, PadicNum> acc;
  for (const auto& [ma, ca] : ta) {
    const int da = total_degree(ma);
    for (const auto& [mb, cb] : tb) {
      if (da + total_degree(mb) >= m) break;
      Monomial mm{ma[0] + mb[0], ma[1] + mb[1], ma[2] + mb[2]};
      PadicNum prod = *ca * *cb;
      auto it = acc.find(mm);
      if (it == acc.end()) {
        acc.emplace(mm, std::move(prod));
      } else {
        it->second += prod;
      }
    }
  }
  PSeries r(p, a.nvars_, m);
  for (auto& [mono, c] : acc) r.set(mono, c);
  return r;
}

PSeries& PSeries::operator*=(const PSeries& rhs) { return *this = *this * rhs; }

PSeries& PSeries::operator*=(const PadicNum& c) {
  if (c.is_exact_zero()) {
    coeffs_.clear();
    return *this;
  }
  if (c.prime() != p_) throw PrimeMismatch("scalar over a different prime");
  for (auto& [m, v] : coeffs_) v *= c;
  return *this;
}

int PSeries::first_disagreement(const PSeries& other) const {
  check_compatible(other);
  PSeries diff = *this - other;
  return diff.x_valuation();
}

bool PSeries::agrees_with(const PSeries& other) const {
  return first_disagreement(other) >= std::min(x_prec_, other.x_prec_);
}

std::string PSeries::to_string() const {
  static const char* names[] = {"x", "y", "z"};
  std::ostringstream out;
  bool first = true;
  for (const auto& [m, c] : coeffs_) {
    if (c.is_zero()) continue;
    if (!first) out << " + ";
    first = false;
    out << c.to_rational().get_str();
    for (int v = 0; v < nvars_; ++v) {
      int e = m[static_cast<std::size_t>(v)];
      if (e == 0) continue;
      out << "*" << names[v];
      if (e > 1) out << "^" << e;
    }
  }
  if (first) out << "0";
  out << " + O(deg " << x_prec_ << ")";
  return out.str();
}

// --- calculus and composition ------------------------------------------------

PSeries derivative(const PSeries& g, int var) {
  if (var < 0 || var >= g.nvars()) throw DomainError("derivative variable out of range");
  PSeries r(g.prime(), g.nvars(), std::max(1, g.x_prec() - 1));
  for (const auto& [m, c] : g.terms()) {
    int e = m[static_cast<std::size_t>(var)];
    if (e == 0) continue;
    Monomial mm = m;
    mm[static_cast<std::size_t>(var)] -= 1;
    r.set(mm, c * mpz_class(e));
  }
  return r;
}

PSeries compose(const PSeries& g, const PSeries& h) {
  if (g.nvars() != 1) throw DomainError("compose(g, h) needs a one-variable g");
  if (h.nvars() != 1) {
    std::array<PSeries, 1> hs{h};
    return compose(g, std::span<const PSeries>(hs));
  }
  if (g.prime() != h.prime()) throw PrimeMismatch("composition over different primes");
  require_no_constant(h);
  const int m = std::min(g.x_prec(), h.x_prec());
  auto hd = h.dense();
  hd[0] = PadicNum::exact_zero(h.prime());
  auto r = dense::compose(g.dense(), hd, g.prime(), m);
  return PSeries::univariate(g.prime(), m, r);
}

namespace {

using TermList = std::vector<std::pair<Monomial, PadicNum>>;

// Sum over the terms of coeff * prod_{i >= var} hs[i]^{e_i}, grouping by the
// exponent of variable `var` so that each distinct power is multiplied once.
PSeries compose_terms(const TermList& terms, std::span<const PSeries> hs, std::size_t var,
                      std::vector<std::vector<PSeries>>& powers, const PSeries& zero_like) {
  PSeries out = zero_like;
  if (var == hs.size()) {
    for (const auto& [m, c] : terms) {
      PSeries one = zero_like;
      one.set(Monomial{0, 0, 0}, c);
      out += one;
    }
    return out;
  }
  std::map<int, TermList> groups;
  for (const auto& t : terms) groups[t.first[var]].push_back(t);
  for (auto& [e, group] : groups) {
    PSeries inner = compose_terms(group, hs, var + 1, powers, zero_like);
    if (e == 0) {
      out += inner;
      continue;
    }
    auto& table = powers[var];
    while (static_cast<int>(table.size()) <= e) {
      table.push_back(table.size() == 0 ? hs[var] : table.back() * hs[var]);
    }
    // table[k] holds hs[var]^(k+1)
    out += inner * table[static_cast<std::size_t>(e - 1)];
  }
  return out;
}

}  // namespace

PSeries compose(const PSeries& g, std::span<const PSeries> hs) {
  if (static_cast<int>(hs.size()) != g.nvars()) {
    throw DomainError("composition arity mismatch: series in " + std::to_string(g.nvars()) +
                      " variables, " + std::to_string(hs.size()) + " substitutions");
  }
  int m = g.x_prec();
  for (const auto& h : hs) {
    if (h.prime() != g.prime()) throw PrimeMismatch("composition over different primes");
    if (h.nvars() != hs[0].nvars()) throw DomainError("substitutions in different rings");
    require_no_constant(h);
    m = std::min(m, h.x_prec());
  }
  if (g.nvars() == 1 && hs[0].nvars() == 1) return compose(g, hs[0]);
  std::vector<PSeries> trimmed;
  for (const auto& h : hs) {
    PSeries t = h.truncated(m);
    t.set(Monomial{0, 0, 0}, PadicNum::exact_zero(g.prime()));
    trimmed.push_back(std::move(t));
  }
  TermList terms;
  for (const auto& [mono, c] : g.terms()) {
    if (total_degree(mono) < m) terms.emplace_back(mono, c);
  }
  std::vector<std::vector<PSeries>> powers(hs.size());
  PSeries zero_like(g.prime(), hs[0].nvars(), m);
  return compose_terms(terms, trimmed, 0, powers, zero_like);
}

PSeries iterate(const PSeries& g, int n) {
  if (n < 0) throw DomainError("negative iteration count");
  PSeries r = PSeries::variable(g.prime(), 1, g.x_prec(), 0, g.precision());
  for (int i = 0; i < n; ++i) r = (i == 0) ? g : compose(g, r);
  return r;
}

PSeries reversion(const PSeries& g) {
  if (g.nvars() != 1) throw DomainError("reversion needs a one-variable series");
  const int p = g.prime();
  const int m = g.x_prec();
  if (!g.coeff(0).is_zero()) throw ConstantTermError("reversion needs g(0) = 0");
  auto gd = g.dense();
  if (m < 2) return PSeries(p, 1, m);
  const PadicNum& g1 = gd[1];
  if (g1.is_zero()) throw NotInvertible("g'(0) is zero to precision " + g1.to_string());
  auto h = dense::zeros(p, m);
  // powers[k][n] = [x^n] h^k
  std::vector<dense::Coeffs> powers(static_cast<std::size_t>(m), dense::zeros(p, m));
  h[1] = PadicNum::from_integer(p, 1, kInfinity) / g1;
  powers[1][1] = h[1];
  for (int n = 2; n < m; ++n) {
    PadicNum c = PadicNum::exact_zero(p);
    for (int k = 2; k <= n; ++k) {
      PadicNum acc = PadicNum::exact_zero(p);
      for (int j = 1; j <= n - k + 1; ++j) {
        if (h[j].is_exact_zero() || powers[k - 1][n - j].is_exact_zero()) continue;
        acc += h[j] * powers[k - 1][n - j];
      }
      powers[k][n] = acc;
      if (!gd[k].is_exact_zero() && !acc.is_exact_zero()) c += gd[k] * acc;
    }
    h[n] = -c / g1;
    powers[1][n] = h[n];
  }
  return PSeries::univariate(p, m, h);
}

PSeries reciprocal(const PSeries& g) {
  if (g.nvars() != 1) throw DomainError("reciprocal needs a one-variable series");
  const int p = g.prime();
  const int m = g.x_prec();
  auto gd = g.dense();
  if (gd[0].is_zero()) throw NotInvertible("constant term is zero to precision");
  auto r = dense::zeros(p, m);
  r[0] = PadicNum::from_integer(p, 1, kInfinity) / gd[0];
  for (int n = 1; n < m; ++n) {
    PadicNum acc = PadicNum::exact_zero(p);
    for (int j = 1; j <= n; ++j) {
      if (gd[j].is_exact_zero()) continue;
      acc += gd[j] * r[n - j];
    }
    r[n] = -acc / gd[0];
  }
  return PSeries::univariate(p, m, r);
}

// --- F_p series ----------------------------------------------------------------

FpSeries::FpSeries(int p, int x_prec) : p_(p), c_(static_cast<std::size_t>(x_prec), 0) {
  if (p < 2) throw DomainError("prime must be at least 2");
}

FpSeries FpSeries::identity(int p, int x_prec) {
  FpSeries s(p, x_prec);
  if (x_prec > 1) s.set(1, 1);
  return s;
}

void FpSeries::set(int i, long value) {
  if (i < 0 || i >= x_prec()) return;
  long r = value % p_;
  if (r < 0) r += p_;
  c_[static_cast<std::size_t>(i)] = static_cast<std::uint32_t>(r);
}

bool FpSeries::is_zero() const {
  return std::all_of(c_.begin(), c_.end(), [](auto v) { return v == 0; });
}

int FpSeries::x_valuation() const {
  for (int i = 0; i < x_prec(); ++i) {
    if (c_[static_cast<std::size_t>(i)] != 0) return i;
  }
  return x_prec();
}

FpSeries operator*(const FpSeries& a, const FpSeries& b) {
  if (a.p_ != b.p_) throw PrimeMismatch("F_p series over different primes");
  const int m = std::min(a.x_prec(), b.x_prec());
  std::vector<std::uint64_t> acc(static_cast<std::size_t>(m), 0);
  const std::uint64_t p = static_cast<std::uint64_t>(a.p_);
  for (int i = 0; i < m; ++i) {
    if (a.c_[i] == 0) continue;
    for (int j = 0; i + j < m; ++j) {
      if (b.c_[j] == 0) continue;
      acc[i + j] = (acc[i + j] + static_cast<std::uint64_t>(a.c_[i]) * b.c_[j]) % p;
    }
  }
  FpSeries r(a.p_, m);
  for (int i = 0; i < m; ++i) r.c_[i] = static_cast<std::uint32_t>(acc[i]);
  return r;
}

FpSeries operator-(const FpSeries& a, const FpSeries& b) {
  if (a.p_ != b.p_) throw PrimeMismatch("F_p series over different primes");
  const int m = std::min(a.x_prec(), b.x_prec());
  FpSeries r(a.p_, m);
  for (int i = 0; i < m; ++i) {
    r.set(i, static_cast<long>(a.c_[i]) - static_cast<long>(b.c_[i]));
  }
  return r;
}

std::string FpSeries::to_string() const {
  std::ostringstream out;
  bool first = true;
  for (int i = 0; i < x_prec(); ++i) {
    auto c = c_[static_cast<std::size_t>(i)];
    if (c == 0) continue;
    if (!first) out << " + ";
    first = false;
    if (c != 1 || i == 0) out << c;
    if (i > 0) out << (c != 1 ? "*" : "") << "x" << (i > 1 ? "^" + std::to_string(i) : "");
  }
  if (first) out << "0";
  out << " + O(x^" << x_prec() << ")";
  return out.str();
}

FpSeries compose(const FpSeries& g, const FpSeries& h) {
  if (g.prime() != h.prime()) throw PrimeMismatch("F_p series over different primes");
  if (h.x_prec() > 0 && h[0] != 0) throw ConstantTermError("substituted series has a constant term");
  const int m = std::min(g.x_prec(), h.x_prec());
  FpSeries r(g.prime(), m);
  if (m == 0) return r;
  r.set(0, g[0]);
  FpSeries power = h;
  for (int k = 1; k < m; ++k) {
    if (k > 1) power = power * h;
    if (g[k] == 0) continue;
    for (int n = k; n < m; ++n) {
      r.set(n, static_cast<long>(r[n]) + static_cast<long>(g[k]) * power[n]);
    }
  }
  return r;
}

FpSeries iterate(const FpSeries& g, long n) {
  if (n < 0) throw DomainError("negative iteration count");
  FpSeries result = FpSeries::identity(g.prime(), g.x_prec());
  FpSeries base = g;
  while (n > 0) {
    if (n & 1) result = compose(base, result);
    n >>= 1;
    if (n > 0) base = compose(base, base);
  }
  return result;
}

FpSeries reduce_mod_p(const PSeries& g) {
  if (g.nvars() != 1) throw DomainError("reduction mod p needs a one-variable series");
  FpSeries r(g.prime(), g.x_prec());
  for (const auto& [m, c] : g.terms()) {
    if (c.valuation_lower_bound() < 0) {
      throw DomainError("coefficient of x^" + std::to_string(m[0]) + " is not integral");
    }
    r.set(m[0], c.residue(1).get_si());
  }
  return r;
}

std::optional<int> weierstrass_degree(const FpSeries& g) {
  int v = g.x_valuation();
  if (v >= g.x_prec()) return std::nullopt;
  return v;
}

std::optional<ModPForm> mod_p_form(const FpSeries& f) {
  if (f.is_zero() || f[0] != 0) return std::nullopt;
  const int p = f.prime();
  long step = 1;
  // largest p^h dividing every exponent with a nonzero coefficient
  for (;;) {
    long next = step * p;
    bool divides = true;
    for (int i = 1; i < f.x_prec(); ++i) {
      if (f[i] != 0 && i % next != 0) {
        divides = false;
        break;
      }
    }
    if (!divides) break;
    step = next;
  }
  int h = 0;
  for (long s = step; s > 1; s /= p) ++h;
  ModPForm out{FpSeries(p, static_cast<int>((f.x_prec() - 1) / step) + 1), h, false};
  for (int i = 0; i < f.x_prec(); i += static_cast<int>(step)) {
    out.a.set(static_cast<int>(i / step), f[i]);
  }
  out.invertible = out.a.x_prec() > 1 && out.a[1] != 0;
  return out;
}

// --- exact input -----------------------------------------------------------------

PSeries ExactSeries::materialize(int prec) const {
  const int precision = std::min(prec, this->precision);
  PSeries s(p, nvars, x_prec);
  for (const auto& [m, q] : coeffs) {
    if (q == 0) continue;
    s.set(m, PadicNum::from_rational(p, q, precision));
  }
  return s;
}

ExactSeries ExactSeries::from_series(const PSeries& s) {
  ExactSeries e;
  e.p = s.prime();
  e.nvars = s.nvars();
  e.x_prec = s.x_prec();
  e.precision = s.precision();
  for (const auto& [m, c] : s.terms()) {
    if (!c.is_zero()) e.coeffs[m] = c.to_rational();
  }
  return e;
}

}  // namespace lubinlab
