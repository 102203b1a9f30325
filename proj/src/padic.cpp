#include "lubinlab/padic.hpp"

#include <algorithm>
#include <deque>
#include <unordered_map>
#include <vector>

#include "lubinlab/errors.hpp"

namespace lubinlab {

namespace {

// Precision offsets saturate at kInfinity.
int shift(int prec, long delta) {
  if (prec == kInfinity) return kInfinity;
  long r = static_cast<long>(prec) + delta;
  if (r >= kInfinity) return kInfinity - 1;
  return static_cast<int>(r);
}

void require_same_prime(const PadicNum& a, const PadicNum& b) {
  if (a.prime() != b.prime()) {
    throw PrimeMismatch("p-adic operands over different primes: " +
                        std::to_string(a.prime()) + " and " +
                        std::to_string(b.prime()));
  }
}

int relative_precision_or_inf(const PadicNum& x) {
  if (x.precision() == kInfinity) return kInfinity;
  return x.precision() - x.valuation();
}

mpz_class mod_positive(const mpz_class& a, const mpz_class& m) {
  mpz_class r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

mpz_class inverse_mod(const mpz_class& a, const mpz_class& m) {
  if (m == 1) return 0;
  mpz_class r;
  if (mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()) == 0) {
    throw DivisionByZeroToPrecision("element is not invertible modulo " +
                                    m.get_str());
  }
  return r;
}

// floor(log_p(k)) for k >= 1.
int floor_log(int p, long k) {
  int r = 0;
  long q = k;
  while (q >= p) {
    q /= p;
    ++r;
  }
  return r;
}

}  // namespace

const mpz_class& prime_power(int p, int k) {
  // deque: references handed out stay valid while the table grows
  thread_local std::unordered_map<int, std::deque<mpz_class>> cache;
  if (k < 0) throw DomainError("negative exponent in prime_power");
  auto& powers = cache[p];
  if (powers.empty()) powers.emplace_back(1);
  while (static_cast<int>(powers.size()) <= k) {
    powers.push_back(powers.back() * p);
  }
  return powers[k];
}

int valuation_of(int p, const mpz_class& n) {
  if (n == 0) return kInfinity;
  mpz_class q = n;
  int v = 0;
  while (mpz_divisible_ui_p(q.get_mpz_t(), static_cast<unsigned long>(p))) {
    mpz_divexact_ui(q.get_mpz_t(), q.get_mpz_t(), static_cast<unsigned long>(p));
    ++v;
  }
  return v;
}

PadicNum PadicNum::exact_zero(int p) { return PadicNum(p, kInfinity, 0, kInfinity); }

PadicNum PadicNum::zero(int p, int precision) {
  return PadicNum(p, kInfinity, 0, precision);
}

PadicNum PadicNum::from_integer(int p, const mpz_class& n, int precision) {
  return from_parts(p, 0, n, precision);
}

PadicNum PadicNum::from_rational(int p, const mpq_class& q, int precision) {
  if (q == 0) return zero(p, precision);
  mpz_class num = q.get_num();
  mpz_class den = q.get_den();
  int vn = valuation_of(p, num);
  int vd = valuation_of(p, den);
  num /= prime_power(p, vn);
  den /= prime_power(p, vd);
  int val = vn - vd;
  if (precision == kInfinity) {
    if (den != 1) {
      throw PrecisionExhausted("rational " + q.get_str() +
                               " has no exact p-adic expansion");
    }
    return PadicNum(p, val, num, kInfinity);
  }
  if (val >= precision) return zero(p, precision);
  const mpz_class& m = prime_power(p, precision - val);
  mpz_class unit = mod_positive(num * inverse_mod(den, m), m);
  return PadicNum(p, val, unit, precision);
}

PadicNum PadicNum::from_parts(int p, int valuation, const mpz_class& unit,
                              int precision) {
  if (p < 2) throw DomainError("prime must be at least 2");
  if (unit == 0) return zero(p, precision);
  PadicNum r(p, valuation, unit, precision);
  r.normalize();
  return r;
}

void PadicNum::normalize() {
  if (val_ == kInfinity) {
    unit_ = 0;
    return;
  }
  if (unit_ == 0) {
    val_ = kInfinity;
    return;
  }
  int extra = valuation_of(p_, unit_);
  if (extra > 0) {
    unit_ /= prime_power(p_, extra);
    val_ += extra;
  }
  if (prec_ == kInfinity) return;
  if (val_ >= prec_) {
    val_ = kInfinity;
    unit_ = 0;
    return;
  }
  unit_ = mod_positive(unit_, prime_power(p_, prec_ - val_));
}

mpq_class PadicNum::to_rational() const {
  if (is_zero()) return 0;
  if (val_ >= 0) return mpq_class(unit_ * prime_power(p_, val_));
  mpq_class r(unit_, prime_power(p_, -val_));
  r.canonicalize();
  return r;
}

mpz_class PadicNum::residue(int k) const {
  if (k <= 0) return 0;
  if (prec_ < k) {
    throw PrecisionExhausted("value known only modulo p^" + std::to_string(prec_) +
                             ", residue modulo p^" + std::to_string(k) + " requested");
  }
  if (is_zero()) return 0;
  if (val_ < 0) throw DomainError("residue of a non-integral p-adic number");
  if (val_ >= k) return 0;
  return mod_positive(unit_ * prime_power(p_, val_), prime_power(p_, k));
}

PadicNum PadicNum::reduced_to(int precision) const {
  if (precision >= prec_) return *this;
  PadicNum r = *this;
  r.prec_ = precision;
  r.normalize();
  return r;
}

PadicNum PadicNum::lifted_to(int precision) const {
  PadicNum r = *this;
  if (r.is_zero()) {
    r.prec_ = precision;
    return r;
  }
  r.prec_ = precision;
  r.normalize();
  return r;
}

PadicNum PadicNum::operator-() const {
  PadicNum r = *this;
  if (!r.is_zero()) {
    if (prec_ == kInfinity) {
      r.unit_ = -r.unit_;
    } else {
      r.unit_ = prime_power(p_, prec_ - val_) - r.unit_;
      r.normalize();
    }
  }
  return r;
}

PadicNum& PadicNum::operator+=(const PadicNum& rhs) {
  if (rhs.is_exact_zero()) return *this;
  if (is_exact_zero()) return *this = rhs;
  require_same_prime(*this, rhs);
  int prec = std::min(prec_, rhs.prec_);
  if (rhs.is_zero()) return *this = reduced_to(prec);
  if (is_zero()) return *this = rhs.reduced_to(prec);
  int v = std::min(val_, rhs.val_);
  if (v >= prec) return *this = zero(p_, prec);
  mpz_class sum = unit_ * prime_power(p_, val_ - v) +
                  rhs.unit_ * prime_power(p_, rhs.val_ - v);
  val_ = v;
  unit_ = std::move(sum);
  prec_ = prec;
  normalize();
  return *this;
}

PadicNum& PadicNum::operator-=(const PadicNum& rhs) { return *this += -rhs; }

PadicNum& PadicNum::operator*=(const PadicNum& rhs) {
  if (is_exact_zero()) return *this;
  if (rhs.is_exact_zero()) return *this = exact_zero(p_);
  require_same_prime(*this, rhs);
  if (is_zero() && rhs.is_zero()) {
    prec_ = shift(prec_, rhs.prec_);
    return *this;
  }
  if (is_zero()) {
    prec_ = shift(prec_, rhs.val_);
    return *this;
  }
  if (rhs.is_zero()) {
    return *this = zero(p_, shift(rhs.prec_, val_));
  }
  int prec = std::min(shift(prec_, rhs.val_), shift(rhs.prec_, val_));
  val_ += rhs.val_;
  unit_ *= rhs.unit_;
  prec_ = prec;
  normalize();
  return *this;
}

PadicNum& PadicNum::operator/=(const PadicNum& rhs) {
  require_same_prime(*this, rhs);
  if (rhs.is_zero()) {
    throw DivisionByZeroToPrecision("division by a value that is zero modulo p^" +
                                    (rhs.prec_ == kInfinity ? std::string("inf")
                                                            : std::to_string(rhs.prec_)));
  }
  if (is_exact_zero()) return *this;
  if (is_zero()) {
    prec_ = shift(prec_, -static_cast<long>(rhs.val_));
    return *this;
  }
  int rel = std::min(relative_precision_or_inf(*this), relative_precision_or_inf(rhs));
  int val = val_ - rhs.val_;
  if (rel == kInfinity) {
    if (rhs.unit_ != 1 && rhs.unit_ != -1) {
      throw PrecisionExhausted("exact quotient has no finite p-adic expansion");
    }
    val_ = val;
    unit_ *= rhs.unit_;
    return *this;
  }
  const mpz_class& m = prime_power(p_, rel);
  unit_ = mod_positive(unit_ * inverse_mod(rhs.unit_, m), m);
  val_ = val;
  prec_ = val + rel;
  normalize();
  return *this;
}

PadicNum& PadicNum::operator*=(const mpz_class& n) {
  if (n == 0) return *this = exact_zero(p_);
  if (is_exact_zero()) return *this;
  int k = valuation_of(p_, n);
  if (is_zero()) {
    prec_ = shift(prec_, k);
    return *this;
  }
  val_ += k;
  prec_ = shift(prec_, k);
  unit_ *= n / prime_power(p_, k);
  normalize();
  return *this;
}

PadicNum& PadicNum::operator/=(const mpz_class& n) {
  if (n == 0) throw DivisionByZeroToPrecision("division by the integer 0");
  if (is_exact_zero()) return *this;
  int k = valuation_of(p_, n);
  if (is_zero()) {
    prec_ = shift(prec_, -static_cast<long>(k));
    return *this;
  }
  mpz_class m = n / prime_power(p_, k);
  val_ -= k;
  prec_ = shift(prec_, -static_cast<long>(k));
  if (prec_ == kInfinity) {
    if (m != 1 && m != -1) {
      throw PrecisionExhausted("exact quotient has no finite p-adic expansion");
    }
    unit_ *= m;
    return *this;
  }
  const mpz_class& mod = prime_power(p_, prec_ - val_);
  unit_ = mod_positive(unit_ * inverse_mod(m, mod), mod);
  normalize();
  return *this;
}

bool PadicNum::agrees_with(const PadicNum& other) const {
  return (*this - other).is_zero();
}

bool operator==(const PadicNum& a, const PadicNum& b) {
  return a.p_ == b.p_ && a.val_ == b.val_ && a.prec_ == b.prec_ && a.unit_ == b.unit_;
}

std::optional<mpq_class> PadicNum::rational_reconstruction() const {
  if (is_zero()) return mpq_class(0);
  if (prec_ == kInfinity) return to_rational();
  const mpz_class& m = prime_power(p_, prec_ - val_);
  mpz_class bound;
  mpz_class half = m / 2;
  mpz_sqrt(bound.get_mpz_t(), half.get_mpz_t());
  mpz_class r0 = m, r1 = unit_, t0 = 0, t1 = 1;
  while (r1 > bound) {
    mpz_class q = r0 / r1;
    mpz_class r2 = r0 - q * r1;
    mpz_class t2 = t0 - q * t1;
    r0 = std::move(r1);
    r1 = std::move(r2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (t1 == 0 || abs(t1) > bound) return std::nullopt;
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), r1.get_mpz_t(), t1.get_mpz_t());
  if (g != 1 || valuation_of(p_, t1) != 0) return std::nullopt;
  mpq_class q(r1, t1);
  q.canonicalize();
  if (val_ >= 0) {
    q *= mpq_class(prime_power(p_, val_));
  } else {
    q /= mpq_class(prime_power(p_, -val_));
  }
  return q;
}

std::string PadicNum::to_string() const {
  auto big_o = [&] {
    return "O(" + std::to_string(p_) + "^" + std::to_string(prec_) + ")";
  };
  if (is_exact_zero()) return "0";
  if (is_zero()) return big_o();
  std::string head = to_rational().get_str();
  if (prec_ == kInfinity) return head;
  return head + " + " + big_o();
}

// --- transcendental functions ------------------------------------------------

namespace {

int min_log_valuation(int p) { return p == 2 ? 2 : 1; }

}  // namespace

PadicNum padic_log(const PadicNum& x) {
  const int p = x.prime();
  if (x.is_zero() || x.valuation() != 0) {
    throw DomainError("logarithm needs a unit argument");
  }
  const int target = x.precision();
  if (target == kInfinity) throw DomainError("logarithm of an exact value");
  PadicNum y = x - PadicNum::from_integer(p, 1, target);
  if (y.is_zero()) return PadicNum::zero(p, target);
  const int vy = y.valuation();
  if (vy < min_log_valuation(p)) {
    throw DomainError("logarithm argument outside 1 + " +
                      std::string(p == 2 ? "4" : "p") + "Z_p");
  }
  PadicNum sum = PadicNum::zero(p, target);
  PadicNum power = y;
  for (long k = 1; static_cast<long>(k) * vy - floor_log(p, k) < target; ++k) {
    PadicNum term = power / mpz_class(k);
    if (k % 2 == 0) {
      sum -= term;
    } else {
      sum += term;
    }
    power *= y;
  }
  return sum.reduced_to(target);
}

PadicNum padic_exp(const PadicNum& x) {
  const int p = x.prime();
  const int target = x.precision();
  if (target == kInfinity && !x.is_zero()) throw DomainError("exponential of an exact value");
  if (x.is_exact_zero()) return PadicNum::from_integer(p, 1, kInfinity);
  if (x.is_zero()) return PadicNum::from_integer(p, 1, target);
  const int vx = x.valuation();
  if (vx < min_log_valuation(p)) {
    throw DomainError("exponential argument needs valuation >= " +
                      std::to_string(min_log_valuation(p)));
  }
  PadicNum sum = PadicNum::from_integer(p, 1, target);
  PadicNum term = PadicNum::from_integer(p, 1, target);
  // v(x^k / k!) >= k*vx - (k-1)/(p-1), increasing in k.
  for (long k = 1;; ++k) {
    long bound = static_cast<long>(k) * vx * (p - 1) - (k - 1);
    if (bound >= static_cast<long>(target) * (p - 1)) break;
    term *= x;
    term /= mpz_class(k);
    sum += term;
  }
  return sum.reduced_to(target);
}

PadicNum padic_pow(const PadicNum& gamma, const mpz_class& exponent) {
  if (exponent < 0) throw DomainError("negative integer exponent");
  PadicNum result = PadicNum::from_integer(gamma.prime(), 1, gamma.precision());
  PadicNum base = gamma;
  mpz_class e = exponent;
  while (e > 0) {
    if (mpz_odd_p(e.get_mpz_t())) result *= base;
    e >>= 1;
    if (e > 0) base *= base;
  }
  return result;
}

PadicNum padic_pow(const PadicNum& gamma, const PadicNum& exponent) {
  const int p = gamma.prime();
  if (exponent.prime() != p) throw PrimeMismatch("exponent over a different prime");
  if (gamma.is_zero() || gamma.valuation() != 0) {
    throw DomainError("power base must be a unit");
  }
  PadicNum d = gamma - PadicNum::from_integer(p, 1, gamma.precision());
  int vd = d.valuation_lower_bound();
  if (vd < min_log_valuation(p)) {
    throw DomainError("p-adic exponent needs base in 1 + " +
                      std::string(p == 2 ? "4" : "p") + "Z_p");
  }
  if (!exponent.is_zero() && exponent.valuation() < 0) {
    throw DomainError("exponent must lie in Z_p");
  }
  const int k = exponent.precision();
  if (k == kInfinity) {
    if (exponent.is_zero()) return PadicNum::from_integer(p, 1, gamma.precision());
    return padic_pow(gamma, exponent.unit() * prime_power(p, exponent.valuation()));
  }
  // gamma^(p^k) = 1 mod p^(k + vd), so a mod p^k fixes gamma^a to that depth.
  mpz_class a = exponent.residue(k);
  int depth = vd == kInfinity ? kInfinity : shift(vd, k);
  return padic_pow(gamma, a).reduced_to(depth);
}

int multiplicative_order_mod_p(const mpz_class& a, int p) {
  mpz_class r;
  mpz_fdiv_r_ui(r.get_mpz_t(), a.get_mpz_t(), static_cast<unsigned long>(p));
  long base = r.get_si();
  if (base == 0) throw DomainError("element is not coprime to p");
  long x = base;
  int order = 1;
  while (x != 1) {
    x = (x * base) % p;
    ++order;
  }
  return order;
}

RootOfUnityCheck is_root_of_unity(const PadicNum& gamma) {
  const int p = gamma.prime();
  if (gamma.is_zero() || gamma.valuation() != 0) {
    throw DomainError("root-of-unity test needs a unit");
  }
  RootOfUnityCheck out;
  PadicNum one = PadicNum::from_integer(p, 1, gamma.precision());
  if (p == 2) {
    PadicNum minus = gamma - one;
    PadicNum plus = gamma + one;
    if (minus.is_zero()) {
      out = {true, 1, minus.precision()};
    } else if (plus.is_zero()) {
      out = {true, 2, plus.precision()};
    }
    return out;
  }
  PadicNum t = padic_pow(gamma, mpz_class(p - 1)) - one;
  if (t.is_zero()) {
    out.is_root_of_unity = true;
    out.order = multiplicative_order_mod_p(gamma.unit(), p);
    out.certified_precision = t.precision();
  }
  return out;
}

}  // namespace lubinlab
