#pragma once

#include <string>
#include <vector>

#include "lubinlab/analyzer.hpp"

namespace lubinlab {

/// Polynomial with integer coefficients c[i] x^i, exact, truncated at M.
ExactSeries integer_series(int p, int M, const std::vector<long>& c);

/// The twisting series used by the fixture set: x, x + x^2, x + p x^2 + x^3.
std::vector<std::pair<std::string, ExactSeries>> standard_twists(int p, int M);

/// ((1+x)^p - 1, (1+x)^(1+p) - 1), named gm_p<p>.
Fixture multiplicative_fixture(int p, int M = 64, int N = 0);

/// Twists of the multiplicative pair and of (px + x^p, [1+p]) by each
/// standard twist, for p in {2, 3, 5}.
std::vector<Fixture> twist_fixtures(int M = 64);

/// Pairs violating a hypothesis: additive (px, (1+p)x), torsion u with
/// u'(0) = -1, and u + p^(N-1) x^2 perturbing a commuting pair.
std::vector<Fixture> negative_fixtures(int p, int N = 16, int M = 64);

}  // namespace lubinlab
