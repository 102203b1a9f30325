#include "doctest.h"
#include "helpers.hpp"
#include "lubinlab/errors.hpp"
#include "lubinlab/formal_group.hpp"

using namespace lubinlab;
using namespace testing_helpers;

namespace {

PSeries two_var(int p, int m, const std::vector<std::tuple<int, int, mpq_class>>& terms, int prec) {
  PSeries s(p, 2, m);
  for (const auto& [a, b, c] : terms) s.set(Monomial{a, b, 0}, PadicNum::from_rational(p, c, prec));
  return s;
}

}  // namespace

TEST_CASE("multiplicative group law from log(1+x)") {
  for (int p : {2, 3, 5}) {
    const int m = 16;
    Logarithm l = logarithm_recurrence(binomial_minus_one(p, p, m, 60));
    FormalGroupLaw g = group_from_log(l);
    CHECK(g.integrality.integral);
    CHECK(g.F.agrees_with(two_var(p, m, {{1, 0, 1}, {0, 1, 1}, {1, 1, 1}}, 60)));
    auto cert = certify_group(g.F, 8);
    CHECK(cert.identity.passed);
    CHECK(cert.commutativity.passed);
    CHECK(cert.associativity.passed);
  }
}

TEST_CASE("brackets of the multiplicative group") {
  const int p = 3, m = 14;
  Logarithm l = logarithm_recurrence(binomial_minus_one(p, p, m, 60));
  CHECK(bracket(l, PadicNum::from_integer(p, -1, 60)).series.agrees_with(inverse_minus_one(p, m, 60)));
  CHECK(bracket(l, PadicNum::from_integer(p, 3, 60)).series.agrees_with(binomial_minus_one(p, 3, m, 60)));
  CHECK(bracket(l, PadicNum::from_integer(p, 7, 60)).series.agrees_with(binomial_minus_one(p, 7, m, 60)));
}

TEST_CASE("law of 3x + x^3") {
  const int m = 12;
  PSeries f = int_series(3, m, {0, 3, 0, 1}, 60);
  FormalGroupLaw g = group_from_log(logarithm_recurrence(f));
  // exp(l(x) + l(y)) with l = x - x^3/24: (x+y)^3/24 - (x^3+y^3)/24 = (x^2 y + x y^2)/8
  CHECK(g.F.coeff(Monomial{2, 1, 0}).agrees_with(PadicNum::from_rational(3, mpq_class(1, 8), 60)));
  CHECK(g.F.coeff(Monomial{1, 2, 0}).agrees_with(PadicNum::from_rational(3, mpq_class(1, 8), 60)));
  CHECK(g.F.coeff(Monomial{1, 1, 0}).is_zero());
  CHECK(check_endomorphism(g.F, f, 8).passed);
  CHECK_FALSE(check_endomorphism(g.F, int_series(3, m, {0, 3, 1}, 60), 8).passed);

  FormalGroupLaw lt = lubin_tate_lift(f);
  CHECK(lt.construction == GroupConstruction::LubinTateLift);
  CHECK(lt.integrality.integral);
  CHECK(lt.F.agrees_with(g.F));
  CHECK(lt.F.coeff(Monomial{5, 0, 0}).is_exact_zero() == false);
}

TEST_CASE("Lubin-Tate lift of a linear series is additive") {
  FormalGroupLaw lt = lubin_tate_lift(int_series(5, 10, {0, 5}, 20));
  CHECK(lt.F.agrees_with(two_var(5, 10, {{1, 0, 1}, {0, 1, 1}}, 20)));
}

TEST_CASE("Lubin-Tate lift of (1+x)^p - 1 is the multiplicative law") {
  for (int p : {2, 3}) {
    FormalGroupLaw lt = lubin_tate_lift(binomial_minus_one(p, p, 14, 30));
    CHECK(lt.F.agrees_with(two_var(p, 14, {{1, 0, 1}, {0, 1, 1}, {1, 1, 1}}, 30)));
    CHECK(certify_group(lt.F, 8).associativity.passed);
  }
}

TEST_CASE("Lubin-Tate lift rejects series not congruent to x^p") {
  CHECK_THROWS_AS(lubin_tate_lift(int_series(3, 10, {0, 3, 1}, 20)), NonUniqueLift);
  CHECK_THROWS_AS(lubin_tate_lift(int_series(3, 10, {0, 9, 0, 1}, 20)), DomainError);
}

TEST_CASE("law checks detect broken laws") {
  PSeries F = two_var(3, 8, {{1, 0, 1}, {0, 1, 1}, {2, 1, 1}}, 20);
  CHECK(check_identity(F).passed);
  auto c = check_commutativity(F);
  CHECK_FALSE(c.passed);
  CHECK(c.degree == 3);
  CHECK_FALSE(check_associativity(F, 8).passed);
  PSeries G = two_var(3, 8, {{1, 0, 1}, {0, 1, 1}, {2, 0, 1}}, 20);
  CHECK(check_identity(G).degree == 2);
}

TEST_CASE("Frobenius multiplier of the multiplicative group is p") {
  for (int p : {2, 3, 5}) {
    const int m = 30;
    PSeries f = binomial_minus_one(p, p, m, 60);
    auto fr = frobenius_multiplier(logarithm_recurrence(f), f);
    CHECK(fr.pi.agrees_with(PadicNum::from_integer(p, p, 60)));
    CHECK(fr.digits[0] == 0);
    CHECK(fr.digits[1] == 1);
    CHECK(fr.bracket.series.agrees_with(f));
  }
}

TEST_CASE("Frobenius multiplier of px + x^p is p") {
  for (int p : {3, 5}) {
    PSeries f = int_series(p, 30, [&] {
      std::vector<long> c(static_cast<std::size_t>(p + 1), 0);
      c[1] = p;
      c[p] = 1;
      return c;
    }(), 60);
    auto fr = frobenius_multiplier(logarithm_recurrence(f), f);
    CHECK(fr.pi.agrees_with(PadicNum::from_integer(p, p, 60)));
    CHECK(is_frobenius_lift(fr.bracket.series));
  }
}

TEST_CASE("Frobenius multiplier needs the truncation past degree p") {
  PSeries f = binomial_minus_one(5, 5, 5, 40);
  CHECK_THROWS_AS(frobenius_multiplier(logarithm_recurrence(f), f), AmbiguousAtPrecision);
}
