#pragma once

#include <vector>

#include "lubinlab/rational.hpp"
#include "lubinlab/series.hpp"

namespace lubinlab {

/// A noninvertible f and an invertible u in S_0(Z_p) that commute.
struct CommutingPair {
  PSeries f;
  PSeries u;
  PadicNum gamma;    // u'(0)
  PadicNum fprime0;  // f'(0)
};

/// Builds the pair and checks Assumption-style hypotheses: f and u commute,
/// v_p(f'(0)) = 1, u'(0) is a unit and f mod p has Weierstrass degree p.
/// Throws DomainError naming the first failed condition.
CommutingPair make_commuting_pair(const PSeries& f, const PSeries& u);

struct CommuteCheck {
  bool commutes = false;
  /// f o u and u o f agree below this total degree.
  int agreed_degree = 0;
  /// p-adic precision of the comparison.
  int precision = 0;
};

CommuteCheck check_commute(const PSeries& f, const PSeries& u);

enum class LogMethod { Recurrence, IterateLimit };

struct Logarithm {
  PSeries series;
  LogMethod method = LogMethod::Recurrence;
  /// Iterate limit: the n at which f^n / f'(0)^n stopped moving.
  int iterations = 0;
  /// Recurrence: digits lost dividing by f'(0)^n - f'(0), per degree.
  std::vector<int> digits_lost;
};

/// Solves log(f(x)) = f'(0) log(x) with log'(0) = 1 degree by degree.
Logarithm logarithm_recurrence(const PSeries& f);

/// Limit of f^n(x) / f'(0)^n, stopping once two consecutive terms agree
/// modulo p^target. n_max = 0 returns x. Throws NoStabilization.
Logarithm logarithm_limit(const PSeries& f, int n_max, int target);

/// Iterations allowed to the limit method by default: enough for the
/// iterates to settle `target` digits at truncation order m.
int default_limit_iterations(int p, int m, int target);

struct IntegralityCheck {
  bool integral = true;
  /// Smallest valuation lower bound over the coefficients.
  int min_valuation = kInfinity;
  /// Total degree of a coefficient attaining it (-1 if none).
  int worst_degree = -1;
};

IntegralityCheck check_integrality(const PSeries& s);
/// Integrality of the derivative of a logarithm.
IntegralityCheck dlog_integrality(const Logarithm& logf);

struct NormalizedPair {
  CommutingPair pair;
  /// u was replaced by its e-th iterate.
  int e = 1;
};

/// Replaces u by u^e so that u'(0) = 1 mod p (mod 4 when p = 2).
/// Throws TorsionDetected when u'(0) is a root of unity and the matching
/// iterate of u is the identity to precision.
NormalizedPair normalize_u(const CommutingPair& pair);

/// u^a = exp_f(gamma^a log_f(x)) for a in Z_p; integer a is also accepted
/// when gamma is not 1 mod p.
PSeries zp_iterate(const CommutingPair& pair, const Logarithm& logf, const PadicNum& a);

struct RamificationEstimate {
  /// i(n) = v_x(omega^(p^n)(x) - x)
  std::vector<int> depth;
  /// (p - 1) i(n) / p^(n+1)
  std::vector<Rational> estimates;
  bool stabilized = false;
};

/// Estimates the absolute ramification index of omega, with omega'(0) = 1
/// and omega not the identity below its truncation.
RamificationEstimate ramification_index(const FpSeries& omega, int n_max);

}  // namespace lubinlab
