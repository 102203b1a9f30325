#include "lubinlab/fixtures.hpp"

namespace lubinlab {

ExactSeries integer_series(int p, int M, const std::vector<long>& c) {
  ExactSeries s;
  s.p = p;
  s.x_prec = M;
  for (std::size_t i = 0; i < c.size() && static_cast<int>(i) < M; ++i) {
    if (c[i] != 0) s.coeffs[Monomial{static_cast<int>(i), 0, 0}] = c[i];
  }
  return s;
}

std::vector<std::pair<std::string, ExactSeries>> standard_twists(int p, int M) {
  return {{"w0", integer_series(p, M, {0, 1})},
          {"w1", integer_series(p, M, {0, 1, 1})},
          {"w2", integer_series(p, M, {0, 1, p, 1})}};
}

Fixture multiplicative_fixture(int p, int M, int N) {
  Fixture fx = make_twist_fixture(TwistBase::multiplicative(p), integer_series(p, M, {0, 1}), M);
  fx.name = "gm_p" + std::to_string(p);
  fx.N = N;
  return fx;
}

std::vector<Fixture> twist_fixtures(int M) {
  std::vector<Fixture> out;
  for (int p : {2, 3, 5}) {
    for (const auto& [wname, w] : standard_twists(p, M)) {
      Fixture gm = make_twist_fixture(TwistBase::multiplicative(p), w, M);
      gm.name = "gm_p" + std::to_string(p) + "_" + wname;
      out.push_back(gm);
      Fixture lt = make_twist_fixture(TwistBase::standard_lubin_tate(p), w, M);
      lt.name = "lt_p" + std::to_string(p) + "_" + wname;
      out.push_back(lt);
    }
  }
  return out;
}

std::vector<Fixture> negative_fixtures(int p, int N, int M) {
  const std::string tag = "_p" + std::to_string(p);
  Fixture additive;
  additive.name = "additive" + tag;
  additive.p = p;
  additive.M = M;
  additive.f = integer_series(p, M, {0, p});
  additive.u = integer_series(p, M, {0, 1 + p});

  Fixture torsion = multiplicative_fixture(p, M);
  torsion.name = "torsion" + tag;
  std::vector<long> inv(static_cast<std::size_t>(M), 0);
  for (int i = 1; i < M; ++i) inv[i] = i % 2 ? -1 : 1;
  torsion.u = integer_series(p, M, inv);

  Fixture perturbed = multiplicative_fixture(p, M);
  perturbed.name = "perturbed" + tag;
  perturbed.u.coeffs[Monomial{2, 0, 0}] += mpq_class(prime_power(p, N - 1));
  return {additive, torsion, perturbed};
}

}  // namespace lubinlab
