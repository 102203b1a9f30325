#pragma once

#include <optional>
#include <string>
#include <vector>

#include "lubinlab/formal_group.hpp"
#include "lubinlab/polygon.hpp"
#include "lubinlab/series.hpp"

namespace lubinlab {

/// Analysis parameters. M2, guard and n_shape of -1 take the defaults for
/// the prime of the input (M2: min(12, M)).
struct Config {
  int N = 16;   // p-adic digits certified
  int M = 64;   // x-adic truncation order
  int M2 = -1;  // truncation for the three-variable associativity check
  int guard = -1;
  int n_shape = -1;

  /// Defaults filled in for prime p.
  Config resolved(int p) const;
  /// Empty when the (resolved) configuration is usable at p, otherwise the
  /// first violated constraint.
  std::optional<std::string> invalid_reason(int p) const;
  int working_precision(int p) const { return N + resolved(p).guard; }
};

enum class Verdict { Certified, Rejected, Inconclusive };
std::string to_string(Verdict v);

struct ShapeCheck {
  int n = 0;
  bool shape = false;
  /// Every negative-slope Weierstrass factor of f^n is Eisenstein.
  bool eisenstein = false;
  std::vector<PolygonPoint> vertices;
};

struct AnalysisReport {
  std::string name;
  int p = 0;
  Config config;  // resolved
  int working_precision = 0;

  // Hypotheses
  std::optional<int> commute_degree;
  std::optional<int> fprime0_valuation;
  std::optional<int> weierstrass_degree;
  std::optional<bool> u_invertible;
  std::string torsion_status;
  std::optional<int> normalization_e;

  // Logarithm
  std::optional<int> log_precision;
  std::optional<int> limit_iterations;
  std::optional<bool> log_methods_agree;
  std::vector<PolygonPoint> log_vertices;
  std::optional<int> dlog_min_valuation;

  std::vector<ShapeCheck> shapes;

  // Formal group
  std::optional<int> group_min_valuation;
  std::optional<int> group_precision;
  std::optional<GroupCertificate> group_certificate;
  std::optional<int> f_bracket_degree;  // f = [f'(0)]_f below this degree
  std::optional<int> u_bracket_degree;  // u = [u'(0)]_f below this degree
  std::optional<PSeries> group_law;

  // Frobenius
  std::optional<PadicNum> pi;
  std::vector<int> pi_digits;
  std::optional<bool> pi_congruence;
  std::optional<int> lift_agreement_degree;

  /// Smallest absolute precision reached by a certified quantity.
  std::optional<int> final_precision;

  Verdict verdict = Verdict::Inconclusive;
  std::string reason;
  /// For an inconclusive verdict: the starved stage and suggested (N, M).
  std::string stage;
  int suggested_N = 0;
  int suggested_M = 0;
};

/// Runs the full pipeline on a candidate pair. Never throws: every failure
/// is recorded in the verdict.
AnalysisReport analyze(const ExactSeries& f, const ExactSeries& u, const Config& config,
                       const std::string& name = "");

struct Fixture {
  std::string name;
  int p = 0;
  /// Per-fixture N and M; 0 keeps the value from the batch configuration.
  int N = 0;
  int M = 0;
  ExactSeries f;
  ExactSeries u;
};

/// Base pair of a twist: the multiplicative group ((1+x)^p - 1, (1+x)^(1+p) - 1)
/// or a Lubin-Tate series f0 with u0 = [1+p]_{f0}.
struct TwistBase {
  enum class Kind { MultiplicativeGroup, LubinTate };
  Kind kind = Kind::MultiplicativeGroup;
  int p = 2;
  ExactSeries f0;

  static TwistBase multiplicative(int p);
  static TwistBase lubin_tate(const ExactSeries& f0);
  /// px + x^p
  static TwistBase standard_lubin_tate(int p);
};

/// (w^-1 o f0 o w, w^-1 o u0 o w) truncated at M. Exact when the base pair
/// is; u0 of a Lubin-Tate base is known modulo p^precision. Throws
/// NotInvertible unless w is integral with w(0) = 0 and w'(0) a unit.
Fixture make_twist_fixture(const TwistBase& base, const ExactSeries& w, int M,
                           int precision = 200);

struct BatchResult {
  /// Ordered by fixture name (stable for equal names).
  std::vector<AnalysisReport> reports;
};

/// Analyzes each fixture in isolation, in parallel up to LUBINLAB_THREADS
/// (default: hardware concurrency).
BatchResult batch_run(const std::vector<Fixture>& fixtures, const Config& config);

/// Plain-text table, one row per report.
std::string summary_table(const BatchResult& batch);

/// The exit status matching a verdict: 0, 1 or 2.
int exit_code(Verdict v);
/// Worst verdict of a batch (inconclusive over rejected over certified).
Verdict overall_verdict(const BatchResult& batch);

}  // namespace lubinlab
