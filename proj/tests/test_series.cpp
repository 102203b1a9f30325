#include <random>
#include <vector>

#include "doctest.h"
#include "lubinlab/errors.hpp"
#include "lubinlab/series.hpp"

using namespace lubinlab;

namespace {

constexpr int kPrec = 30;

PSeries poly(int p, int m, std::vector<long> c) {
  PSeries s(p, 1, m);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] != 0) s.set(static_cast<int>(i), PadicNum::from_integer(p, c[i], kPrec));
  }
  return s;
}

PSeries rational_poly(int p, int m, std::vector<mpq_class> c) {
  PSeries s(p, 1, m);
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (c[i] != 0) s.set(static_cast<int>(i), PadicNum::from_rational(p, c[i], kPrec));
  }
  return s;
}

// Integer polynomial composition by Horner, independent of the library.
std::vector<long> horner_compose(const std::vector<long>& g, const std::vector<long>& h) {
  std::vector<long> r{0};
  for (auto it = g.rbegin(); it != g.rend(); ++it) {
    std::vector<long> next(r.size() + h.size(), 0);
    for (std::size_t i = 0; i < r.size(); ++i)
      for (std::size_t j = 0; j < h.size(); ++j) next[i + j] += r[i] * h[j];
    next[0] += *it;
    r = next;
  }
  while (r.size() > 1 && r.back() == 0) r.pop_back();
  return r;
}

PSeries random_s0(std::mt19937_64& rng, int p, int m, bool invertible) {
  PSeries s(p, 1, m);
  for (int i = 1; i < m; ++i) {
    long c = static_cast<long>(rng() % 50) - 25;
    if (i == 1 && invertible && c % p == 0) c += 1;
    if (c != 0) s.set(i, PadicNum::from_integer(p, c, kPrec));
  }
  return s;
}

}  // namespace

TEST_CASE("ring operations and truncation") {
  PSeries f = poly(2, 8, {0, 2, 1});
  PSeries d = derivative(f);
  CHECK(d.agrees_with(poly(2, 7, {2, 2})));
  CHECK(d.x_prec() == 7);

  PSeries x = poly(2, 2, {0, 1});
  PSeries sq = x * x;
  CHECK(sq.terms().empty());
  CHECK(sq.x_prec() == 2);

  CHECK((f + poly(2, 8, {0, 1})).agrees_with(poly(2, 8, {0, 3, 1})));
  CHECK_THROWS_AS(f + poly(3, 8, {0, 1}), PrimeMismatch);
}

TEST_CASE("composition against direct expansion") {
  PSeries f = poly(2, 10, {0, 2, 1});
  PSeries g = poly(2, 10, {0, 1, 1});
  auto fg = horner_compose({0, 2, 1}, {0, 1, 1});
  CHECK(fg == std::vector<long>{0, 2, 3, 2, 1});
  CHECK(compose(f, g).agrees_with(poly(2, 10, fg)));
  CHECK(compose(f, f).agrees_with(poly(2, 10, {0, 4, 6, 4, 1})));
  CHECK(iterate(f, 2).agrees_with(poly(2, 10, {0, 4, 6, 4, 1})));
  CHECK(compose(g, poly(2, 10, {0, 1})).agrees_with(g));
  CHECK_THROWS_AS(compose(f, poly(2, 10, {1, 1})), ConstantTermError);
}

TEST_CASE("composition is associative on random triples") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 10; ++t) {
    int p = t % 2 ? 3 : 5;
    PSeries a = random_s0(rng, p, 12, false), b = random_s0(rng, p, 12, false),
            c = random_s0(rng, p, 12, false);
    CHECK(compose(compose(a, b), c).agrees_with(compose(a, compose(b, c))));
  }
}

TEST_CASE("reversion examples") {
  // Lagrange inversion of x + x^2: coefficients (-1)^{n-1} Catalan(n-1)
  CHECK(reversion(poly(3, 4, {0, 1, 1})).agrees_with(poly(3, 4, {0, 1, -1, 2})));
  CHECK(reversion(poly(3, 6, {0, 1})).agrees_with(poly(3, 6, {0, 1})));
  // log(1+x) reverts to exp(x) - 1
  PSeries l = rational_poly(5, 4, {0, 1, mpq_class(-1, 2), mpq_class(1, 3)});
  PSeries e = rational_poly(5, 4, {0, 1, mpq_class(1, 2), mpq_class(1, 6)});
  CHECK(reversion(l).agrees_with(e));
  CHECK_THROWS_AS(reversion(poly(3, 4, {0, 0, 1})), NotInvertible);
}

TEST_CASE("reversion round trip on random invertible series") {
  std::mt19937_64 rng(9);
  for (int t = 0; t < 10; ++t) {
    int p = 2 + (t % 2);
    PSeries g = random_s0(rng, p, 15, true);
    PSeries h = reversion(g);
    PSeries id = poly(p, 15, {0, 1});
    CHECK(compose(g, h).agrees_with(id));
    CHECK(compose(h, g).agrees_with(id));
  }
}

TEST_CASE("reciprocal") {
  PSeries g = poly(5, 6, {1, 1});
  CHECK((g * reciprocal(g)).agrees_with(poly(5, 6, {1})));
}

TEST_CASE("multivariate composition matches expansion") {
  // F(x,y) = x + y + xy composed with (x, y) = (u+v, uv) in two variables
  PSeries f(3, 2, 6);
  f.set(Monomial{1, 0, 0}, PadicNum::from_integer(3, 1, kPrec));
  f.set(Monomial{0, 1, 0}, PadicNum::from_integer(3, 1, kPrec));
  f.set(Monomial{1, 1, 0}, PadicNum::from_integer(3, 1, kPrec));
  PSeries u = PSeries::variable(3, 2, 6, 0, kPrec), v = PSeries::variable(3, 2, 6, 1, kPrec);
  std::vector<PSeries> hs{u + v, u * v};
  PSeries expect = u + v + u * v + (u + v) * (u * v);
  CHECK(compose(f, hs).agrees_with(expect));
}

TEST_CASE("mod p reduction and Weierstrass degree") {
  // (1+x)^3 - 1 = 3x + 3x^2 + x^3
  FpSeries r = reduce_mod_p(poly(3, 8, {0, 3, 3, 1}));
  CHECK(weierstrass_degree(r) == 3);
  CHECK_FALSE(weierstrass_degree(reduce_mod_p(poly(2, 8, {0, 2, 4}))).has_value());
  CHECK(weierstrass_degree(reduce_mod_p(poly(3, 8, {0, 3, 0, 1, 3}))) == 3);
}

TEST_CASE("reduction is a ring map") {
  std::mt19937_64 rng(2);
  for (int t = 0; t < 20; ++t) {
    PSeries a = random_s0(rng, 3, 10, false), b = random_s0(rng, 3, 10, false);
    CHECK(reduce_mod_p(a * b) == reduce_mod_p(a) * reduce_mod_p(b));
  }
}

TEST_CASE("mod p form") {
  FpSeries f(3, 10);
  f.set(3, 1);
  f.set(6, 1);
  auto form = mod_p_form(f);
  REQUIRE(form.has_value());
  CHECK(form->h == 1);
  CHECK(form->invertible);
  CHECK(form->a[1] == 1);
  CHECK(form->a[2] == 1);

  auto ident = mod_p_form(FpSeries::identity(5, 10));
  REQUIRE(ident.has_value());
  CHECK(ident->h == 0);

  auto frob = mod_p_form(reduce_mod_p(poly(2, 10, {0, 2, 1})));
  REQUIRE(frob.has_value());
  CHECK(frob->h == 1);
  CHECK(frob->invertible);
  CHECK_FALSE(mod_p_form(FpSeries(3, 10)).has_value());
}

TEST_CASE("F_p iteration by squaring matches repeated composition") {
  FpSeries w(2, 20);
  w.set(1, 1);
  w.set(2, 1);
  w.set(3, 1);
  FpSeries slow = FpSeries::identity(2, 20);
  for (int i = 0; i < 5; ++i) slow = compose(w, slow);
  CHECK(iterate(w, 5) == slow);
}

TEST_CASE("exact series round trip") {
  PSeries s = rational_poly(5, 5, {0, 1, mpq_class(1, 3), 7});
  ExactSeries e = ExactSeries::from_series(s);
  CHECK(e.materialize(kPrec).agrees_with(s));
}
