#pragma once

#include <string>
#include <vector>

#include "lubinlab/rational.hpp"
#include "lubinlab/series.hpp"

namespace lubinlab {

struct PolygonPoint {
  int i = 0;
  int v = 0;
  friend bool operator==(const PolygonPoint&, const PolygonPoint&) = default;
};

struct PolygonSegment {
  Rational slope;
  int width = 0;
  int start = 0;  // x-index of the left vertex
};

/**
 * Lower convex hull of (i, v_p(a_i)) over the coefficients that are nonzero
 * to precision. Vertices are strictly convex; segment slopes increase.
 */
struct NewtonPolygon {
  int p = 2;
  int x_prec = 0;
  std::vector<PolygonPoint> points;
  std::vector<PolygonPoint> vertices;
  std::vector<PolygonSegment> segments;
  /// A vertex of valuation 0 exists below x_prec, so the negative-slope part
  /// cannot be changed by the truncated tail of an integral series.
  bool negative_part_complete = false;

  /// Index of the first vertex (the order of vanishing at 0).
  int x_valuation() const { return vertices.empty() ? x_prec : vertices.front().i; }
  /// Vertices up to the right end of the last negative-slope segment.
  std::vector<PolygonPoint> negative_vertices() const;
  std::vector<PolygonSegment> negative_segments() const;
};

/// Throws TruncationInconclusive when a coefficient known only to be zero
/// to precision could lie below the hull.
NewtonPolygon newton_polygon(const PSeries& g);

/// Roots of g in the open unit disk of C_p, with multiplicity.
int count_roots_open_disk(const NewtonPolygon& polygon);
int count_roots_open_disk(const PSeries& g);

/// The negative-slope vertices of N(f^n) are exactly (p^k, n-k), 0 <= k <= n.
bool verify_iterate_shape(const PSeries& f, int n);

struct WeierstrassFactor {
  /// Monic polynomial (stored as a one-variable series of x_prec deg + 1).
  PSeries poly;
  PSeries cofactor;
  int degree = 0;
};

/// Splits off the monic factor of g whose roots have valuation -slope.
WeierstrassFactor weierstrass_factor(const PSeries& g, Rational slope);

/// Monic, lower coefficients divisible by p, constant term of valuation 1.
bool is_eisenstein(const PSeries& poly);

std::string render_ascii(const NewtonPolygon& polygon);
std::string render_svg(const NewtonPolygon& polygon);

}  // namespace lubinlab
