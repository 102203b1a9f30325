#include <random>

#include "doctest.h"
#include "helpers.hpp"
#include "lubinlab/dynamics.hpp"
#include "lubinlab/errors.hpp"
#include "lubinlab/polygon.hpp"

using namespace lubinlab;
using namespace testing_helpers;

namespace {

CommutingPair gm_pair(int p, int m, int prec) {
  return {binomial_minus_one(p, p, m, prec), binomial_minus_one(p, p + 1, m, prec),
          PadicNum::from_integer(p, p + 1, prec), PadicNum::from_integer(p, p, prec)};
}

}  // namespace

TEST_CASE("commutation examples") {
  CHECK(check_commute(binomial_minus_one(3, 3, 20, 20), binomial_minus_one(3, 4, 20, 20)).commutes);
  auto bad = check_commute(int_series(2, 10, {0, 2, 1}, 20), int_series(2, 10, {0, 1, 1}, 20));
  CHECK_FALSE(bad.commutes);
  CHECK(bad.agreed_degree == 2);
  CHECK(check_commute(int_series(5, 10, {0, 5, 1, 1}, 20), identity(5, 10)).commutes);
}

TEST_CASE("pair hypotheses") {
  CHECK_NOTHROW(make_commuting_pair(binomial_minus_one(3, 3, 20, 20),
                                    binomial_minus_one(3, 4, 20, 20)));
  CHECK_THROWS_AS(make_commuting_pair(int_series(3, 20, {0, 3}, 20), int_series(3, 20, {0, 4}, 20)),
                  DomainError);
}

TEST_CASE("recurrence logarithm of the multiplicative group is log(1+x)") {
  for (int p : {2, 3, 5}) {
    Logarithm l = logarithm_recurrence(binomial_minus_one(p, p, 20, 40));
    CHECK(l.series.agrees_with(rat_series(p, 20, log1p_coeffs(20), 40)));
    CHECK(l.series.coeff(1).agrees_with(PadicNum::from_integer(p, 1, 40)));
  }
}

TEST_CASE("recurrence on 3x + x^3 gives a_3 = -1/24") {
  // hand recurrence: a_3 (3^3 - 3) = -[x^3] f = -1
  Logarithm l = logarithm_recurrence(int_series(3, 10, {0, 3, 0, 1}, 30));
  CHECK(l.series.coeff(3).agrees_with(PadicNum::from_rational(3, mpq_class(-1, 24), 30)));
  CHECK(l.series.coeff(2).is_zero());
  auto d = dlog_integrality(l);
  CHECK(d.integral);
  CHECK(derivative(l.series).coeff(2).agrees_with(PadicNum::from_rational(3, mpq_class(-1, 8), 30)));
}

TEST_CASE("iterate limit agrees with the recurrence") {
  int target = 10;
  for (int p : {2, 3}) {
    PSeries f = binomial_minus_one(p, p, 16, 80);
    Logarithm lim = logarithm_limit(f, default_limit_iterations(p, 16, target), target);
    Logarithm rec = logarithm_recurrence(f);
    CHECK(lim.series.agrees_with(rec.series));
    CHECK(lim.series.precision() >= target);
  }
  PSeries g = int_series(3, 10, {0, 3, 0, 1}, 80);
  Logarithm lim = logarithm_limit(g, 40, 12);
  CHECK(lim.series.coeff(3).agrees_with(PadicNum::from_rational(3, mpq_class(-1, 24), 12)));
  CHECK(logarithm_limit(g, 0, 12).series.agrees_with(identity(3, 10)));
  CHECK_THROWS_AS(logarithm_limit(g, 2, 12), NoStabilization);
}

TEST_CASE("logarithm functional equations and polygon") {
  auto pair = gm_pair(3, 30, 60);
  // twist by w = x + x^2 so the logarithm is not a closed form
  PSeries w = int_series(3, 30, {0, 1, 1}, 60);
  PSeries wi = reversion(w);
  PSeries f = compose(wi, compose(pair.f, w));
  PSeries u = compose(wi, compose(pair.u, w));
  Logarithm l = logarithm_recurrence(f);
  CHECK(compose(l.series, f).agrees_with(l.series * f.coeff(1)));
  CHECK(compose(l.series, u).agrees_with(l.series * u.coeff(1)));
  NewtonPolygon n = newton_polygon(l.series);
  CHECK(n.vertices.front() == PolygonPoint{1, 0});
  CHECK(n.vertices[1] == PolygonPoint{3, -1});
  CHECK(n.vertices[2] == PolygonPoint{9, -2});
  CHECK(n.vertices[3] == PolygonPoint{27, -3});
  CHECK(dlog_integrality(l).integral);
}

TEST_CASE("dlog integrality rejects x + x^2/p") {
  Logarithm fake{rat_series(3, 6, {0, 1, mpq_class(1, 3)}, 20), LogMethod::Recurrence, 0, {}};
  auto d = dlog_integrality(fake);
  CHECK_FALSE(d.integral);
  CHECK(d.worst_degree == 1);
}

TEST_CASE("normalizing u") {
  CommutingPair a{int_series(5, 8, {0, 5}, 20), int_series(5, 8, {0, 2}, 20),
                  PadicNum::from_integer(5, 2, 20), PadicNum::from_integer(5, 5, 20)};
  auto na = normalize_u(a);
  CHECK(na.e == 4);
  CHECK(na.pair.gamma.agrees_with(PadicNum::from_integer(5, 16, 20)));

  auto gm = gm_pair(3, 12, 20);
  CHECK(normalize_u(gm).e == 1);

  CommutingPair b{binomial_minus_one(2, 2, 12, 20), binomial_minus_one(2, 3, 12, 20),
                  PadicNum::from_integer(2, 3, 20), PadicNum::from_integer(2, 2, 20)};
  auto nb = normalize_u(b);
  CHECK(nb.e == 2);
  CHECK(nb.pair.gamma.agrees_with(PadicNum::from_integer(2, 9, 20)));
  CHECK(nb.pair.u.agrees_with(binomial_minus_one(2, 9, 12, 20)));

  CommutingPair t{binomial_minus_one(3, 3, 12, 20), inverse_minus_one(3, 12, 20),
                  PadicNum::from_integer(3, -1, 20), PadicNum::from_integer(3, 3, 20)};
  CHECK_THROWS_AS(normalize_u(t), TorsionDetected);
}

TEST_CASE("Z_p iteration") {
  auto pair = gm_pair(3, 16, 60);
  Logarithm l = logarithm_recurrence(pair.f);
  CHECK(zp_iterate(pair, l, PadicNum::from_integer(3, 1, 40)).agrees_with(pair.u));
  CHECK(zp_iterate(pair, l, PadicNum::from_integer(3, 2, 40)).agrees_with(compose(pair.u, pair.u)));
  PadicNum quarter = PadicNum::from_rational(3, mpq_class(1, 4), 40);
  PSeries r = zp_iterate(pair, l, quarter);
  CHECK(r.coeff(1).agrees_with(padic_pow(pair.gamma, quarter)));
  CHECK(iterate(r, 4).agrees_with(pair.u));
  CHECK(check_commute(pair.f, r).commutes);
}

TEST_CASE("Z_p iteration is additive on random exponents") {
  auto pair = gm_pair(5, 12, 60);
  Logarithm l = logarithm_recurrence(pair.f);
  std::mt19937_64 rng(4);
  for (int t = 0; t < 5; ++t) {
    PadicNum a = PadicNum::from_integer(5, static_cast<long>(rng() % 100000), 30);
    PadicNum b = PadicNum::from_rational(5, mpq_class(static_cast<long>(rng() % 1000), 7), 30);
    CHECK(compose(zp_iterate(pair, l, a), zp_iterate(pair, l, b))
              .agrees_with(zp_iterate(pair, l, a + b)));
  }
}

TEST_CASE("ramification estimates") {
  FpSeries w3 = reduce_mod_p(binomial_minus_one(3, 4, 40, 10));
  auto e3 = ramification_index(w3, 1);
  CHECK(e3.depth == std::vector<int>{3, 9});
  CHECK(e3.estimates == std::vector<Rational>{Rational(2), Rational(2)});
  CHECK(e3.stabilized);

  FpSeries w2 = reduce_mod_p(binomial_minus_one(2, 3, 40, 10));
  auto e2 = ramification_index(w2, 0);
  CHECK(e2.depth == std::vector<int>{2});
  CHECK(e2.estimates[0] == Rational(1));

  CHECK_THROWS_AS(ramification_index(FpSeries::identity(3, 20), 1), DomainError);
  CHECK_THROWS_AS(ramification_index(w3, 4), TruncationInconclusive);
}
