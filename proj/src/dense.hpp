#pragma once

// Dense one-variable coefficient vectors; shared by the series and polygon
// code for the hot univariate loops.

#include <vector>

#include "lubinlab/padic.hpp"

namespace lubinlab::dense {

using Coeffs = std::vector<PadicNum>;

Coeffs zeros(int p, int n);
/// a*b truncated below degree m.
Coeffs multiply(const Coeffs& a, const Coeffs& b, int p, int m);
/// g(h) truncated below degree m; h[0] must be zero.
Coeffs compose(const Coeffs& g, const Coeffs& h, int p, int m);

}  // namespace lubinlab::dense

namespace lubinlab::dense {

/// powers[k] = h^k for k = 0..m-1, truncated below degree m.
std::vector<Coeffs> power_table(const Coeffs& h, int p, int m);
/// sum_k g[k] * powers[k], truncated below degree m.
Coeffs compose_with_powers(const Coeffs& g, const std::vector<Coeffs>& powers, int p, int m);

}  // namespace lubinlab::dense
