#pragma once

#include <gmpxx.h>

#include <vector>

#include "lubinlab/series.hpp"

namespace testing_helpers {

using lubinlab::PadicNum;
using lubinlab::PSeries;

inline PSeries int_series(int p, int m, const std::vector<long>& c, int prec) {
  PSeries s(p, 1, m);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] != 0) s.set(static_cast<int>(i), PadicNum::from_integer(p, c[i], prec));
  }
  return s;
}

inline PSeries rat_series(int p, int m, const std::vector<mpq_class>& c, int prec) {
  PSeries s(p, 1, m);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] != 0) s.set(static_cast<int>(i), PadicNum::from_rational(p, c[i], prec));
  }
  return s;
}

/// (1+x)^q - 1 for q >= 0, coefficients from mpz binomials.
inline PSeries binomial_minus_one(int p, long q, int m, int prec) {
  PSeries s(p, 1, m);
  for (int i = 1; i < m && i <= q; ++i) {
    mpz_class c;
    mpz_bin_uiui(c.get_mpz_t(), static_cast<unsigned long>(q), static_cast<unsigned long>(i));
    s.set(i, PadicNum::from_integer(p, c, prec));
  }
  return s;
}

/// (1+x)^(-1) - 1 = -x + x^2 - ...
inline PSeries inverse_minus_one(int p, int m, int prec) {
  PSeries s(p, 1, m);
  for (int i = 1; i < m; ++i) s.set(i, PadicNum::from_integer(p, i % 2 ? -1 : 1, prec));
  return s;
}

/// log(1+x) = sum (-1)^(n+1) x^n / n as exact rationals.
inline std::vector<mpq_class> log1p_coeffs(int m) {
  std::vector<mpq_class> c(static_cast<std::size_t>(m), 0);
  for (int n = 1; n < m; ++n) c[n] = mpq_class(n % 2 ? 1 : -1, n);
  return c;
}

inline PSeries identity(int p, int m) { return PSeries::variable(p, 1, m, 0); }

}  // namespace testing_helpers
