#pragma once

#include <Eigen/Dense>
#include <functional>
#include <span>
#include <vector>

#include "phom/errors.hpp"

namespace phom {

using Vec2 = Eigen::Vector2d;

/// Quadrature-ready smooth closed boundary curve, parametrized over [0, 2pi)
/// on equispaced nodes. Normals point out of the enclosed region. Weights are
/// the periodic trapezoidal rule times the parametrization speed, so
/// sum(weights * values) approximates the arclength integral with spectral
/// accuracy for smooth integrands.
struct ClosedCurve {
  int n_nodes = 0;
  std::vector<double> params;
  std::vector<Vec2> points;
  std::vector<Vec2> tangents;   // unit
  std::vector<Vec2> normals;    // unit, outward
  std::vector<double> speeds;   // |gamma'(t)|
  std::vector<double> weights;  // (2pi/n) * speed
  std::vector<double> curvatures;

  /// Builds a curve from a counterclockwise parametrization and its first two
  /// derivatives. n_nodes must be even and >= 8.
  static ClosedCurve from_parametrization(
      int n_nodes, const std::function<Vec2(double)>& gamma,
      const std::function<Vec2(double)>& dgamma,
      const std::function<Vec2(double)>& ddgamma);

  double enclosed_area() const;
  double perimeter() const;
  /// Largest distance of a node from the origin.
  double max_radius() const;
  /// Mean arclength spacing between nodes; the plain-quadrature evaluation
  /// guard is a small multiple of this.
  double node_spacing() const { return perimeter() / n_nodes; }

  /// Affine image s*p + shift of the curve (s > 0). Normals and tangents are
  /// unchanged, speeds/weights scale by s, curvatures by 1/s.
  ClosedCurve scaled_translated(double scale, const Vec2& shift) const;
};

ClosedCurve make_circle(double radius, const Vec2& center, int n_nodes);
ClosedCurve make_ellipse(double a, double b, const Vec2& center, double rotation,
                         int n_nodes);

/// The model hole T: a union of disjoint closed curves contained in B_{1/3}
/// (assumption A1 of the geometric set-up), or the analytic-sphere tag in
/// dimension 3 for which no boundary discretization is kept.
struct HoleShape {
  int dim = 2;
  std::vector<ClosedCurve> components;
  double area = 0;            // total enclosed area (volume for dim == 3)
  double sphere_radius = 0;   // dim == 3 only

  /// Validates containment in B_{1/3}, pairwise disjointness and the
  /// component cap (at most 8 per cell), then takes ownership.
  static HoleShape from_components(std::vector<ClosedCurve> components);
  static HoleShape from_curve(ClosedCurve curve);
  static HoleShape sphere(double radius);

  int total_nodes() const;
  /// Flattened node data across components, in component order.
  const ClosedCurve& component_of_node(int flat_index, int* local_index) const;
  double max_radius() const;
  double node_spacing() const;  // largest component spacing
};

/// Weighted trapezoidal rule: sum w_i v_i ~ integral of v over the curve.
double boundary_integral(const ClosedCurve& curve, std::span<const double> values);
/// Same over all components of a shape; values are flattened in component order.
double boundary_integral(const HoleShape& shape, std::span<const double> values);

/// Discrete winding-style test: ~1 when p is enclosed by the curve, ~0 when
/// outside, via the double-layer identity applied to the unit density.
double winding_indicator(const ClosedCurve& curve, const Vec2& p);

}  // namespace phom
