#pragma once

#include <gmpxx.h>

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lubinlab/padic.hpp"

namespace lubinlab {

/// Exponent tuple; unused trailing variables carry exponent 0.
using Monomial = std::array<int, 3>;

inline int total_degree(const Monomial& m) { return m[0] + m[1] + m[2]; }

/**
 * Truncated power series in 1 to 3 variables over Q_p.
 *
 * Only monomials of total degree below x_prec are retained. Coefficients
 * are stored sparsely; an absent coefficient is an exact zero, while a
 * coefficient that vanished only to precision stays stored so that its
 * precision bound is not lost.
 */
class PSeries {
 public:
  PSeries(int p, int nvars, int x_prec);

  /// The coordinate x_index at the given p-adic precision.
  static PSeries variable(int p, int nvars, int x_prec, int index = 0,
                          int precision = kInfinity);
  /// One-variable series with coeffs[i] the coefficient of x^i.
  static PSeries univariate(int p, int x_prec, std::span<const PadicNum> coeffs);

  int prime() const { return p_; }
  int nvars() const { return nvars_; }
  int x_prec() const { return x_prec_; }

  PadicNum coeff(const Monomial& m) const;
  PadicNum coeff(int i) const { return coeff(Monomial{i, 0, 0}); }
  void set(const Monomial& m, const PadicNum& c);
  void set(int i, const PadicNum& c) { set(Monomial{i, 0, 0}, c); }
  const std::map<Monomial, PadicNum>& terms() const { return coeffs_; }

  /// No constant term (the S_0 condition).
  bool s0() const;
  /// Smallest absolute precision among stored coefficients.
  int precision() const;
  /// Smallest valuation lower bound among stored coefficients.
  int min_valuation() const;
  /// Lowest total degree whose coefficient is nonzero to precision, or
  /// x_prec when there is none.
  int x_valuation() const;

  /// Dense coefficient vector of a one-variable series, length x_prec.
  std::vector<PadicNum> dense() const;

  PSeries truncated(int x_prec) const;
  PSeries reduced_to(int precision) const;
  PSeries lifted_to(int precision) const;

  PSeries operator-() const;
  PSeries& operator+=(const PSeries& rhs);
  PSeries& operator-=(const PSeries& rhs);
  PSeries& operator*=(const PSeries& rhs);
  PSeries& operator*=(const PadicNum& c);

  friend PSeries operator+(PSeries a, const PSeries& b) { return a += b; }
  friend PSeries operator-(PSeries a, const PSeries& b) { return a -= b; }
  friend PSeries operator*(const PSeries& a, const PSeries& b);
  friend PSeries operator*(PSeries a, const PadicNum& c) { return a *= c; }
  friend PSeries operator*(const PadicNum& c, PSeries a) { return a *= c; }

  /// Every coefficient of the difference is zero to precision.
  bool agrees_with(const PSeries& other) const;
  /// Lowest total degree at which the difference is nonzero to precision;
  /// min(x_prec) when the series agree.
  int first_disagreement(const PSeries& other) const;

  std::string to_string() const;

 private:
  void check_compatible(const PSeries& other) const;

  int p_;
  int nvars_;
  int x_prec_;
  std::map<Monomial, PadicNum> coeffs_;
};

/// d/dx_var; the truncation order drops by one.
PSeries derivative(const PSeries& g, int var = 0);

/// g(h) for a one-variable g.
PSeries compose(const PSeries& g, const PSeries& h);
/// g(h_1, ..., h_k) with k = g.nvars(); every h_i shares prime and arity
/// and has no constant term.
PSeries compose(const PSeries& g, std::span<const PSeries> hs);
/// g composed with itself n times; n = 0 gives the identity.
PSeries iterate(const PSeries& g, int n);
/// Compositional inverse of a one-variable series with g(0) = 0 and g'(0)
/// nonzero to precision.
PSeries reversion(const PSeries& g);
/// Multiplicative inverse of a one-variable series with invertible constant.
PSeries reciprocal(const PSeries& g);

/// One-variable truncated series over F_p.
class FpSeries {
 public:
  FpSeries(int p, int x_prec);
  static FpSeries identity(int p, int x_prec);

  int prime() const { return p_; }
  int x_prec() const { return static_cast<int>(c_.size()); }
  std::uint32_t operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
  void set(int i, long value);
  const std::vector<std::uint32_t>& coefficients() const { return c_; }

  bool is_zero() const;
  /// Lowest index with a nonzero coefficient, or x_prec.
  int x_valuation() const;

  friend FpSeries operator*(const FpSeries& a, const FpSeries& b);
  friend FpSeries operator-(const FpSeries& a, const FpSeries& b);
  friend bool operator==(const FpSeries& a, const FpSeries& b) = default;

  std::string to_string() const;

 private:
  int p_;
  std::vector<std::uint32_t> c_;
};

FpSeries compose(const FpSeries& g, const FpSeries& h);
FpSeries iterate(const FpSeries& g, long n);

/// Reduction modulo p of an integral one-variable series.
FpSeries reduce_mod_p(const PSeries& g);
/// Least index of a unit coefficient, or nullopt ("none below M").
std::optional<int> weierstrass_degree(const FpSeries& g);

struct ModPForm {
  FpSeries a;
  int h = 0;
  /// a'(0) != 0
  bool invertible = false;
};

/// Writes f = a(x^(p^h)) with h maximal; nullopt when f is zero or has a
/// constant term.
std::optional<ModPForm> mod_p_form(const FpSeries& f);

/**
 * Exact rational description of a series, as read from input. It can be
 * materialized at any p-adic precision.
 */
struct ExactSeries {
  int p = 2;
  int nvars = 1;
  int x_prec = 0;
  /// Coefficients are known modulo p^precision; kInfinity when exact.
  int precision = kInfinity;
  std::map<Monomial, mpq_class> coeffs;

  /// The series at the smaller of the given and the known precision.
  PSeries materialize(int precision) const;
  /// Representatives of a computed series, taken as exact values.
  static ExactSeries from_series(const PSeries& s);
};

}  // namespace lubinlab
