#include <gmpxx.h>

#include <cstdlib>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "lubinlab/analyzer.hpp"
#include "lubinlab/fixtures.hpp"

using namespace lubinlab;

namespace {

Config small(int N, int M) {
  Config c;
  c.N = N;
  c.M = M;
  c.M2 = 8;
  return c;
}

const Fixture& by_name(const std::vector<Fixture>& fs, const std::string& name) {
  for (const auto& f : fs) {
    if (f.name == name) return f;
  }
  FAIL("no fixture " << name);
  return fs.front();
}

}  // namespace

TEST_CASE("multiplicative pair at p = 3 is certified with pi = 3") {
  Fixture fx = multiplicative_fixture(3, 64);
  AnalysisReport r = analyze(fx.f, fx.u, small(12, 64), fx.name);
  REQUIRE_MESSAGE(r.verdict == Verdict::Certified, r.stage << ": " << r.reason);
  REQUIRE(r.pi);
  CHECK(r.pi->agrees_with(PadicNum::from_integer(3, 3, 12)));
  CHECK(r.fprime0_valuation == 1);
  CHECK(r.weierstrass_degree == 3);
  CHECK(r.log_methods_agree == true);
  CHECK(r.group_certificate->associativity.passed);
  CHECK(exit_code(r.verdict) == 0);
}

TEST_CASE("additive and torsion pairs are rejected") {
  auto neg = negative_fixtures(3, 12, 32);
  AnalysisReport add = analyze(by_name(neg, "additive_p3").f, by_name(neg, "additive_p3").u,
                               small(12, 32));
  CHECK(add.verdict == Verdict::Rejected);
  CHECK(add.reason.find("weierstrass") != std::string::npos);
  CHECK(exit_code(add.verdict) == 1);

  AnalysisReport tor = analyze(by_name(neg, "torsion_p3").f, by_name(neg, "torsion_p3").u,
                               small(12, 32));
  CHECK(tor.verdict == Verdict::Rejected);
  CHECK(tor.torsion_status.find("torsion") != std::string::npos);
}

TEST_CASE("twist by x leaves the base pair unchanged") {
  const int p = 3, m = 20;
  Fixture fx = make_twist_fixture(TwistBase::multiplicative(p), integer_series(p, m, {0, 1}), m);
  for (int i = 1; i < m; ++i) {
    mpz_class c;
    if (i <= p) mpz_bin_uiui(c.get_mpz_t(), p, i);
    auto it = fx.f.coeffs.find(Monomial{i, 0, 0});
    mpq_class got = it == fx.f.coeffs.end() ? mpq_class(0) : it->second;
    CHECK(got == mpq_class(c));
  }
}

TEST_CASE("twist by x + x^2 keeps f'(0) = p and Weierstrass degree p") {
  const int p = 3;
  Fixture fx = make_twist_fixture(TwistBase::multiplicative(p), integer_series(p, 32, {0, 1, 1}), 32);
  CHECK(fx.f.coeffs.at(Monomial{1, 0, 0}) == 3);
  AnalysisReport r = analyze(fx.f, fx.u, small(8, 32));
  CHECK(r.fprime0_valuation == 1);
  CHECK(r.weierstrass_degree == 3);
}

TEST_CASE("empty batch") {
  BatchResult b = batch_run({}, small(8, 16));
  CHECK(b.reports.empty());
  CHECK(overall_verdict(b) == Verdict::Certified);
  std::string table = summary_table(b);
  CHECK(table.find("gm_") == std::string::npos);
}

TEST_CASE("batch of multiplicative pairs matches the golden table") {
  std::vector<Fixture> fs;
  for (int p : {5, 2, 3}) fs.push_back(multiplicative_fixture(p, 32));
  BatchResult b = batch_run(fs, small(8, 32));
  REQUIRE(b.reports.size() == 3);
  CHECK(b.reports[0].name == "gm_p2");
  CHECK(b.reports[2].name == "gm_p5");
  for (const auto& r : b.reports) CHECK(r.verdict == Verdict::Certified);
  CHECK(overall_verdict(b) == Verdict::Certified);

  std::ifstream in(LUBINLAB_GOLDEN_DIR "/summary.txt");
  REQUIRE(in);
  std::stringstream golden;
  golden << in.rdbuf();
  CHECK(summary_table(b) == golden.str());
}

TEST_CASE("batch order does not depend on the thread count") {
  std::vector<Fixture> fs = negative_fixtures(2, 8, 16);
  fs.push_back(multiplicative_fixture(2, 16));
  setenv("LUBINLAB_THREADS", "1", 1);
  std::string one = summary_table(batch_run(fs, small(8, 16)));
  setenv("LUBINLAB_THREADS", "4", 1);
  std::string four = summary_table(batch_run(fs, small(8, 16)));
  unsetenv("LUBINLAB_THREADS");
  CHECK(one == four);
}
