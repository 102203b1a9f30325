#pragma once

#include <gmpxx.h>

#include <limits>
#include <optional>
#include <string>

namespace lubinlab {

/// Sentinel used both for the valuation of zero and the precision of an
/// exact zero.
inline constexpr int kInfinity = std::numeric_limits<int>::max();

/// p^k for k >= 0, cached per thread.
const mpz_class& prime_power(int p, int k);

/// v_p(n) for a nonzero integer n.
int valuation_of(int p, const mpz_class& n);

/**
 * An element of Q_p known modulo p^N (absolute precision N).
 *
 * A nonzero value is p^valuation * unit with 0 < unit < p^(N - valuation)
 * and unit coprime to p. A value that is indistinguishable from zero is
 * stored with valuation = kInfinity and keeps its precision N as the
 * lower bound on its true valuation. The exact zero has precision
 * kInfinity as well.
 */
class PadicNum {
 public:
  /// Exact zero of the 2-adic numbers; only useful as a placeholder.
  PadicNum() = default;

  static PadicNum exact_zero(int p);
  static PadicNum zero(int p, int precision);
  static PadicNum from_integer(int p, const mpz_class& n, int precision);
  static PadicNum from_integer(int p, long n, int precision) {
    return from_integer(p, mpz_class(n), precision);
  }
  static PadicNum from_rational(int p, const mpq_class& q, int precision);
  /// Builds p^valuation * unit + O(p^precision); unit may carry factors of p.
  static PadicNum from_parts(int p, int valuation, const mpz_class& unit,
                             int precision);

  int prime() const { return p_; }
  int valuation() const { return val_; }
  const mpz_class& unit() const { return unit_; }
  int precision() const { return prec_; }

  bool is_zero() const { return val_ == kInfinity; }
  bool is_exact_zero() const { return val_ == kInfinity && prec_ == kInfinity; }
  /// The valuation if nonzero, otherwise the precision bound.
  int valuation_lower_bound() const { return is_zero() ? prec_ : val_; }
  /// Number of significant digits; 0 for zero-to-precision.
  int relative_precision() const { return is_zero() ? 0 : prec_ - val_; }

  /// The representative unit * p^valuation as a rational number.
  mpq_class to_rational() const;
  /// The value mod p^k as an integer in [0, p^k); requires an integral value
  /// known to at least k digits.
  mpz_class residue(int k) const;

  /// Same representative, known to the smaller of the current and the given
  /// precision.
  PadicNum reduced_to(int precision) const;
  /// Same representative, reinterpreted as known to the given precision.
  /// Used by fixed-point iterations that assign precision by analysis.
  PadicNum lifted_to(int precision) const;

  PadicNum operator-() const;
  PadicNum& operator+=(const PadicNum& rhs);
  PadicNum& operator-=(const PadicNum& rhs);
  PadicNum& operator*=(const PadicNum& rhs);
  PadicNum& operator/=(const PadicNum& rhs);
  /// Multiplication and division by an exact integer.
  PadicNum& operator*=(const mpz_class& n);
  PadicNum& operator/=(const mpz_class& n);

  friend PadicNum operator+(PadicNum a, const PadicNum& b) { return a += b; }
  friend PadicNum operator-(PadicNum a, const PadicNum& b) { return a -= b; }
  friend PadicNum operator*(PadicNum a, const PadicNum& b) { return a *= b; }
  friend PadicNum operator/(PadicNum a, const PadicNum& b) { return a /= b; }
  friend PadicNum operator*(PadicNum a, const mpz_class& n) { return a *= n; }
  friend PadicNum operator*(const mpz_class& n, PadicNum a) { return a *= n; }
  friend PadicNum operator/(PadicNum a, const mpz_class& n) { return a /= n; }

  /// True when a - b is zero to the joint precision.
  bool agrees_with(const PadicNum& other) const;
  /// Structural equality: same prime, valuation, unit and precision.
  friend bool operator==(const PadicNum& a, const PadicNum& b);

  /// Recovers a rational a/b with |a|, |b| <= sqrt(p^relprec / 2) matching
  /// the value, when one exists.
  std::optional<mpq_class> rational_reconstruction() const;

  /// "55 + O(5^3)" style rendering.
  std::string to_string() const;

 private:
  PadicNum(int p, int val, mpz_class unit, int prec)
      : p_(p), val_(val), unit_(std::move(unit)), prec_(prec) {}
  void normalize();

  int p_ = 2;
  int val_ = kInfinity;
  mpz_class unit_ = 0;
  int prec_ = kInfinity;
};

/// Partial sum of the logarithm series; x must lie in 1 + pZ_p (1 + 4Z_2).
PadicNum padic_log(const PadicNum& x);
/// Exponential series; requires v_p(x) >= 1 (>= 2 when p = 2).
PadicNum padic_exp(const PadicNum& x);
/// gamma^a for a nonnegative integer exponent (repeated squaring).
PadicNum padic_pow(const PadicNum& gamma, const mpz_class& exponent);
/// gamma^a for a in Z_p; gamma must lie in 1 + pZ_p (1 + 4Z_2).
PadicNum padic_pow(const PadicNum& gamma, const PadicNum& exponent);

struct RootOfUnityCheck {
  bool is_root_of_unity = false;
  /// Order of the root of unity when is_root_of_unity holds.
  int order = 0;
  /// Precision at which gamma^(p-1) = 1 (or gamma = +-1) was observed;
  /// finite precision never proves torsion.
  int certified_precision = 0;
};

/// Decides whether a unit is a root of unity to its precision.
RootOfUnityCheck is_root_of_unity(const PadicNum& gamma);

/// Multiplicative order of a mod p for a coprime to p.
int multiplicative_order_mod_p(const mpz_class& a, int p);

}  // namespace lubinlab
