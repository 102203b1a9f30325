#pragma once

#include <vector>

#include "lubinlab/dynamics.hpp"
#include "lubinlab/series.hpp"

namespace lubinlab {

enum class GroupConstruction { FromLog, LubinTateLift };

struct LawCheck {
  bool passed = false;
  /// The two sides agree below this total degree.
  int degree = 0;
};

struct GroupCertificate {
  LawCheck identity;
  LawCheck commutativity;
  LawCheck associativity;
};

/// A two-variable series F(x, y) over Z_p, with its integrality certificate.
struct FormalGroupLaw {
  PSeries F;
  GroupConstruction construction = GroupConstruction::FromLog;
  IntegralityCheck integrality;
};

/// F = exp_f(log_f(x) + log_f(y)). Throws IntegralityFailure naming a
/// coefficient of negative valuation, PrecisionExhausted when the guard
/// digits ran out before integrality could be decided.
FormalGroupLaw group_from_log(const Logarithm& logf);

/// The unique F with F = x + y mod degree 2 and f(F(x,y)) = F(f(x), f(y)),
/// for integral f with v_p(f'(0)) = 1. Throws NonUniqueLift when a degree
/// has no integral solution (f is not congruent to a power of x^p mod p).
FormalGroupLaw lubin_tate_lift(const PSeries& f);

LawCheck check_identity(const PSeries& F);
LawCheck check_commutativity(const PSeries& F);
/// F(F(x,y),z) = F(x,F(y,z)) in three variables below total degree m2.
LawCheck check_associativity(const PSeries& F, int m2);
GroupCertificate certify_group(const PSeries& F, int m2);

/// g(F(x,y)) = F(g(x), g(y)) below total degree m2.
LawCheck check_endomorphism(const PSeries& F, const PSeries& g, int m2);

struct Bracket {
  PadicNum a;
  PSeries series;
};

/// [a]_f = exp_f(a log_f(x)).
Bracket bracket(const Logarithm& logf, const PadicNum& a);
Bracket bracket(const Logarithm& logf, const PSeries& expf, const PadicNum& a);

struct FrobeniusMultiplier {
  /// pi_f modulo p^(K+1), K the largest k with p^k < M.
  PadicNum pi;
  /// [t]_f for the integer representative t of pi, checked at full M.
  Bracket bracket;
  /// Base-p digits of pi, least significant first.
  std::vector<int> digits;
};

/// Recovers the unique pi of valuation 1 with [pi]_f = x^p mod p, digit by
/// digit. Throws NoCandidate or AmbiguousAtPrecision.
FrobeniusMultiplier frobenius_multiplier(const Logarithm& logf, const PSeries& f);

/// [g]_f mod p equals x^p below the truncation, with integral coefficients.
bool is_frobenius_lift(const PSeries& g);

}  // namespace lubinlab
