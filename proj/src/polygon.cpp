#include "lubinlab/polygon.hpp"

#include <algorithm>
#include <cstdio>
#include <optional>
#include <sstream>

#include "dense.hpp"
#include "lubinlab/errors.hpp"

namespace lubinlab {

namespace {

std::int64_t cross(const PolygonPoint& o, const PolygonPoint& a, const PolygonPoint& b) {
  return static_cast<std::int64_t>(a.i - o.i) * (b.v - o.v) -
         static_cast<std::int64_t>(a.v - o.v) * (b.i - o.i);
}

std::int64_t ceil_of(Rational r) {
  std::int64_t q = r.num() / r.den();
  if (r.num() % r.den() != 0 && r.num() > 0) ++q;
  return q;
}

// Height of the hull above x-index i, extended flat to the right of the last
// vertex and unbounded below to the left of the first.
std::optional<Rational> hull_height(const std::vector<PolygonPoint>& vs, int i) {
  if (vs.empty() || i < vs.front().i) return std::nullopt;
  for (std::size_t k = 0; k + 1 < vs.size(); ++k) {
    if (i <= vs[k + 1].i) {
      Rational slope(vs[k + 1].v - vs[k].v, vs[k + 1].i - vs[k].i);
      return Rational(vs[k].v) + slope * Rational(i - vs[k].i);
    }
  }
  int vmin = vs.front().v;
  for (const auto& v : vs) vmin = std::min(vmin, v.v);
  return Rational(vmin);
}

struct DivMod {
  dense::Coeffs q;
  dense::Coeffs r;
};

// Long division of a polynomial (coefficients a[0..]) by a monic polynomial
// of degree d (coefficients b[0..d], b[d] = 1).
DivMod poly_divmod(const dense::Coeffs& a, const dense::Coeffs& b, int p) {
  const int d = static_cast<int>(b.size()) - 1;
  const int n = static_cast<int>(a.size());
  DivMod out{dense::zeros(p, std::max(n - d, 0)), {}};
  dense::Coeffs rem = a;
  for (int k = n - 1; k >= d; --k) {
    PadicNum q = rem[k];
    out.q[k - d] = q;
    if (q.is_exact_zero()) continue;
    for (int j = 0; j < d; ++j) {
      if (!b[j].is_exact_zero()) rem[k - d + j] -= q * b[j];
    }
  }
  rem.resize(static_cast<std::size_t>(std::min(d, n)), PadicNum::exact_zero(p));
  rem.resize(static_cast<std::size_t>(d), PadicNum::exact_zero(p));
  out.r = std::move(rem);
  return out;
}

// Monic factor of the polynomial gd whose roots are those of valuation at
// least the slope ending at vertex index d. Iterates A <- A + R/Q(0) where
// g = A Q + R; the error contracts by the gap between root valuations.
dense::Coeffs split_at_vertex(const dense::Coeffs& gd, int d, int p, int work_prec) {
  dense::Coeffs a = dense::zeros(p, d + 1);
  a[d] = PadicNum::from_integer(p, 1, kInfinity);
  for (int i = 0; i < d; ++i) {
    if (!gd[i].is_exact_zero()) a[i] = (gd[i] / gd[d]).lifted_to(work_prec);
  }
  const int cap = 64 * work_prec + 64;
  for (int iter = 0; iter < cap; ++iter) {
    DivMod qr = poly_divmod(gd, a, p);
    const PadicNum& q0 = qr.q[0];
    if (q0.is_zero()) throw PrecisionExhausted("factor splitting met a quotient vanishing at 0");
    bool settled = true;
    for (int i = 0; i < d; ++i) {
      if (qr.r[i].is_exact_zero()) continue;
      PadicNum delta = qr.r[i] / q0;
      if (!delta.is_zero()) settled = false;
      a[i] = (a[i] + delta).lifted_to(work_prec);
    }
    if (settled) {
      int natural = work_prec - q0.valuation();
      for (int i = 0; i < d; ++i) a[i] = a[i].reduced_to(natural);
      return a;
    }
  }
  throw PrecisionExhausted("factor lifting did not separate digits within " +
                           std::to_string(cap) + " steps");
}

// Valuation of det of an n x n matrix, by elimination with minimal-valuation
// pivots; nullopt when a pivot column is zero to precision.
std::optional<int> det_valuation(std::vector<dense::Coeffs> a) {
  const std::size_t n = a.size();
  int total = 0;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = n;
    for (std::size_t r = c; r < n; ++r) {
      if (a[r][c].is_zero()) continue;
      if (piv == n || a[r][c].valuation() < a[piv][c].valuation()) piv = r;
    }
    if (piv == n) return std::nullopt;
    std::swap(a[c], a[piv]);
    total += a[c][c].valuation();
    for (std::size_t r = c + 1; r < n; ++r) {
      if (a[r][c].is_exact_zero()) continue;
      PadicNum factor = a[r][c] / a[c][c];
      for (std::size_t k = c; k < n; ++k) {
        if (!a[c][k].is_exact_zero()) a[r][k] -= factor * a[c][k];
      }
    }
  }
  return total;
}

// Upper bound on v(g'(alpha)) over the roots alpha of the monic factor a
// (roots of valuation lambda). Exact when one term of sum i a_i alpha^(i-1)
// dominates; otherwise the norm prod g'(alpha) = det(g' mod a acting on
// Z_p[x]/a) caps the worst root given the termwise lower bound of the rest.
Rational derivative_valuation_at_roots(const PSeries& g, Rational lambda, const dense::Coeffs& a) {
  const int m = g.x_prec();
  const int p = g.prime();
  const int vmin = std::min(0, g.min_valuation());
  std::optional<Rational> best;
  bool tie = false;
  Rational floor_bound = Rational(m - 1) * lambda + Rational(vmin);
  for (const auto& [mono, c] : g.terms()) {
    const int i = mono[0];
    if (i == 0) continue;
    Rational shift = Rational(valuation_of(p, mpz_class(i))) + Rational(i - 1) * lambda;
    if (c.is_zero()) {
      floor_bound = std::min(floor_bound, Rational(c.precision()) + shift);
      continue;
    }
    Rational t = Rational(c.valuation()) + shift;
    if (!best || t < *best) {
      best = t;
      tie = false;
    } else if (t == *best) {
      tie = true;
    }
  }
  const std::string unresolved = "valuation of the derivative at the roots is not resolved at this truncation";
  if (!best) throw PrecisionExhausted(unresolved);
  if (!tie) {
    if (!(*best < floor_bound)) throw PrecisionExhausted(unresolved);
    return *best;
  }
  const int w = static_cast<int>(a.size()) - 1;
  dense::Coeffs r = poly_divmod(derivative(g).dense(), a, p).r;
  std::vector<dense::Coeffs> mult;
  dense::Coeffs shifted(r.begin(), r.end());
  for (int j = 0; j < w; ++j) {
    mult.push_back(shifted);
    // multiply by x modulo a
    dense::Coeffs next(static_cast<std::size_t>(w + 1), PadicNum::exact_zero(p));
    for (int i = 0; i < w; ++i) next[i + 1] = shifted[i];
    shifted = poly_divmod(next, a, p).r;
  }
  auto norm = det_valuation(mult);
  if (!norm) throw PrecisionExhausted(unresolved);
  Rational lower = std::min(*best, floor_bound);
  Rational upper = Rational(*norm) - Rational(w - 1) * lower;
  if (!(upper < floor_bound)) throw PrecisionExhausted(unresolved);
  return upper;
}

}  // namespace

std::vector<PolygonPoint> NewtonPolygon::negative_vertices() const {
  std::vector<PolygonPoint> out;
  if (vertices.empty()) return out;
  out.push_back(vertices.front());
  for (std::size_t k = 0; k < segments.size(); ++k) {
    if (!(segments[k].slope < Rational(0))) break;
    out.push_back(vertices[k + 1]);
  }
  return out;
}

std::vector<PolygonSegment> NewtonPolygon::negative_segments() const {
  std::vector<PolygonSegment> out;
  for (const auto& s : segments) {
    if (s.slope < Rational(0)) out.push_back(s);
  }
  return out;
}

NewtonPolygon newton_polygon(const PSeries& g) {
  if (g.nvars() != 1) throw DomainError("Newton polygon needs a one-variable series");
  NewtonPolygon poly;
  poly.p = g.prime();
  poly.x_prec = g.x_prec();
  std::vector<PolygonPoint> bounds;
  for (const auto& [m, c] : g.terms()) {
    if (c.is_zero()) {
      bounds.push_back({m[0], c.precision()});
    } else {
      poly.points.push_back({m[0], c.valuation()});
    }
  }
  // terms() iterates in increasing index, so points are already sorted
  std::vector<PolygonPoint> hull;
  for (const auto& pt : poly.points) {
    while (hull.size() >= 2 && cross(hull[hull.size() - 2], hull.back(), pt) <= 0) {
      hull.pop_back();
    }
    hull.push_back(pt);
  }
  // The lower hull ends at the rightmost point of minimal valuation or
  // continues with positive slopes; both are part of the polygon.
  poly.vertices = hull;
  for (std::size_t k = 0; k + 1 < hull.size(); ++k) {
    poly.segments.push_back({Rational(hull[k + 1].v - hull[k].v, hull[k + 1].i - hull[k].i),
                             hull[k + 1].i - hull[k].i, hull[k].i});
  }
  for (const auto& b : bounds) {
    auto h = hull_height(poly.vertices, b.i);
    if (!h || Rational(b.v) < *h) {
      throw TruncationInconclusive("coefficient of x^" + std::to_string(b.i) +
                                   " is zero only modulo p^" + std::to_string(b.v) +
                                   " and could lower the polygon");
    }
  }
  bool integral = std::all_of(poly.points.begin(), poly.points.end(),
                              [](const PolygonPoint& pt) { return pt.v >= 0; });
  bool has_unit = std::any_of(poly.vertices.begin(), poly.vertices.end(),
                              [](const PolygonPoint& pt) { return pt.v == 0; });
  poly.negative_part_complete = integral && has_unit;
  return poly;
}

int count_roots_open_disk(const NewtonPolygon& polygon) {
  if (!polygon.negative_part_complete) {
    throw TruncationInconclusive("no unit coefficient below degree " +
                                 std::to_string(polygon.x_prec));
  }
  int count = polygon.x_valuation();
  for (const auto& s : polygon.negative_segments()) count += s.width;
  return count;
}

int count_roots_open_disk(const PSeries& g) { return count_roots_open_disk(newton_polygon(g)); }

bool verify_iterate_shape(const PSeries& f, int n) {
  if (n < 0) throw DomainError("negative iteration count");
  const int p = f.prime();
  if (prime_power(p, n) >= f.x_prec()) {
    throw TruncationInconclusive("p^n = " + prime_power(p, n).get_str() +
                                 " is not below the truncation order " +
                                 std::to_string(f.x_prec()));
  }
  NewtonPolygon poly = newton_polygon(iterate(f, n));
  if (!poly.negative_part_complete) {
    throw TruncationInconclusive("iterate has no unit coefficient below the truncation");
  }
  std::vector<PolygonPoint> expected;
  for (int k = 0; k <= n; ++k) {
    expected.push_back({static_cast<int>(prime_power(p, k).get_si()), n - k});
  }
  return poly.negative_vertices() == expected;
}

WeierstrassFactor weierstrass_factor(const PSeries& g, Rational slope) {
  if (g.nvars() != 1) throw DomainError("Weierstrass factor needs a one-variable series");
  NewtonPolygon poly = newton_polygon(g);
  auto segs = poly.negative_segments();
  auto seg = std::find_if(segs.begin(), segs.end(),
                          [&](const PolygonSegment& s) { return s.slope == slope; });
  if (seg == segs.end()) {
    throw DomainError("slope " + slope.to_string() + " is not a negative-slope segment");
  }
  if (!poly.negative_part_complete) {
    throw TruncationInconclusive("no unit coefficient below the truncation order");
  }
  const int p = g.prime();
  const int m = g.x_prec();
  const int k = g.precision() == kInfinity ? 4 * m : g.precision();
  const Rational lambda = -slope;
  const int d_lo = seg->start;
  const int d_hi = seg->start + seg->width;
  const int w = seg->width;

  dense::Coeffs gd = g.dense();
  dense::Coeffs hi = split_at_vertex(gd, d_hi, p, k);
  dense::Coeffs lo;
  if (d_lo == poly.x_valuation()) {
    lo = dense::zeros(p, d_lo + 1);
    lo[d_lo] = PadicNum::from_integer(p, 1, kInfinity);
  } else {
    lo = split_at_vertex(gd, d_lo, p, k);
  }
  DivMod qr = poly_divmod(hi, lo, p);

  // Precision granted by the truncated tail: each root moves by at least
  // eps = min(M lambda, k) - v(g'(alpha)), so the coefficient of x^(w-j)
  // moves by at least eps + (j-1) min(lambda, eps).
  Rational vd = derivative_valuation_at_roots(g, lambda, qr.q);
  Rational tail = Rational(m) * lambda + Rational(std::min(0, g.min_valuation()));
  Rational eps = std::min(tail, Rational(k)) - vd;
  if (!(eps > Rational(0))) {
    throw PrecisionExhausted("truncation order " + std::to_string(m) +
                             " is too short to separate the slope " + slope.to_string() +
                             " factor");
  }
  Rational step = std::min(lambda, eps);

  PSeries factor(p, 1, w + 1);
  factor.set(w, PadicNum::from_integer(p, 1, kInfinity));
  for (int j = 1; j <= w; ++j) {
    int bound = static_cast<int>(ceil_of(eps + Rational(j - 1) * step));
    factor.set(w - j, qr.q[w - j].reduced_to(bound));
  }
  PSeries widened(p, 1, m);
  for (const auto& [mono, c] : factor.terms()) widened.set(mono, c);
  PSeries cofactor = g * reciprocal(widened);
  return {factor, cofactor, w};
}

bool is_eisenstein(const PSeries& poly) {
  if (poly.nvars() != 1) throw DomainError("Eisenstein test needs a polynomial in one variable");
  int d = -1;
  for (const auto& [m, c] : poly.terms()) {
    if (!c.is_zero()) d = std::max(d, m[0]);
  }
  if (d < 1) return false;
  PadicNum lead = poly.coeff(d);
  if (!lead.agrees_with(PadicNum::from_integer(poly.prime(), 1, kInfinity))) {
    throw DomainError("polynomial is not monic");
  }
  for (int i = 1; i < d; ++i) {
    PadicNum c = poly.coeff(i);
    if (c.is_exact_zero()) continue;
    if (c.is_zero()) {
      if (c.precision() < 1) throw PrecisionExhausted("coefficient of x^" + std::to_string(i) +
                                                      " is unknown modulo p");
      continue;
    }
    if (c.valuation() < 1) return false;
  }
  PadicNum c0 = poly.coeff(0);
  if (c0.is_exact_zero()) return false;
  if (c0.is_zero()) {
    if (c0.precision() >= 2) return false;
    throw PrecisionExhausted("constant term known only modulo p^" +
                             std::to_string(c0.precision()));
  }
  return c0.valuation() == 1;
}

// --- rendering -------------------------------------------------------------

std::string render_ascii(const NewtonPolygon& polygon) {
  std::ostringstream out;
  if (polygon.points.empty()) return "(empty polygon)\n";
  int imax = 0, vmin = 0, vmax = 0;
  for (const auto& pt : polygon.points) {
    imax = std::max(imax, pt.i);
    vmin = std::min(vmin, pt.v);
    vmax = std::max(vmax, pt.v);
  }
  auto is_vertex = [&](int i, int v) {
    return std::any_of(polygon.vertices.begin(), polygon.vertices.end(),
                       [&](const PolygonPoint& q) { return q.i == i && q.v == v; });
  };
  auto is_point = [&](int i, int v) {
    return std::any_of(polygon.points.begin(), polygon.points.end(),
                       [&](const PolygonPoint& q) { return q.i == i && q.v == v; });
  };
  for (int v = vmax; v >= vmin; --v) {
    char label[16];
    std::snprintf(label, sizeof label, "%4d |", v);
    out << label;
    for (int i = 0; i <= imax; ++i) {
      char c = is_vertex(i, v) ? 'o' : is_point(i, v) ? '*' : '.';
      out << ' ' << c;
    }
    out << '\n';
  }
  out << "     +" << std::string(static_cast<std::size_t>(2 * (imax + 1)), '-') << '\n';
  out << "vertices:";
  for (const auto& q : polygon.vertices) out << " (" << q.i << "," << q.v << ")";
  out << "\nsegments:";
  for (const auto& s : polygon.segments) {
    out << " [slope " << s.slope.to_string() << ", width " << s.width << "]";
  }
  out << '\n';
  return out.str();
}

std::string render_svg(const NewtonPolygon& polygon) {
  constexpr double kWidth = 480, kHeight = 320, kMargin = 40;
  int imin = 0, imax = 1, vmin = 0, vmax = 1;
  for (const auto& pt : polygon.points) {
    imax = std::max(imax, pt.i);
    vmin = std::min(vmin, pt.v);
    vmax = std::max(vmax, pt.v);
  }
  const double sx = (kWidth - 2 * kMargin) / (imax - imin);
  const double sy = (kHeight - 2 * kMargin) / std::max(1, vmax - vmin);
  auto px = [&](int i) { return kMargin + sx * (i - imin); };
  auto py = [&](int v) { return kHeight - kMargin - sy * (v - vmin); };
  char buf[256];
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 480 320\">\n";
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#999\"/>\n",
                px(imin), py(0), px(imax), py(0));
  out << buf;
  std::snprintf(buf, sizeof buf,
                "<line x1=\"%.2f\" y1=\"%.2f\" x2=\"%.2f\" y2=\"%.2f\" stroke=\"#999\"/>\n",
                px(0), py(vmin), px(0), py(vmax));
  out << buf;
  if (!polygon.vertices.empty()) {
    out << "<polyline fill=\"none\" stroke=\"#c03\" stroke-width=\"2\" points=\"";
    for (std::size_t k = 0; k < polygon.vertices.size(); ++k) {
      std::snprintf(buf, sizeof buf, "%s%.2f,%.2f", k ? " " : "", px(polygon.vertices[k].i),
                    py(polygon.vertices[k].v));
      out << buf;
    }
    out << "\"/>\n";
  }
  for (const auto& pt : polygon.points) {
    std::snprintf(buf, sizeof buf, "<circle cx=\"%.2f\" cy=\"%.2f\" r=\"3\" fill=\"#333\"/>\n",
                  px(pt.i), py(pt.v));
    out << buf;
  }
  for (const auto& q : polygon.vertices) {
    std::snprintf(buf, sizeof buf,
                  "<text x=\"%.2f\" y=\"%.2f\" font-size=\"11\">(%d,%d)</text>\n", px(q.i) + 4,
                  py(q.v) - 6, q.i, q.v);
    out << buf;
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace lubinlab
