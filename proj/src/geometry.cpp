#include "phom/geometry.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace phom {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kContainmentRadius = 1.0 / 3.0;
constexpr int kMaxComponents = 8;
}  // namespace

ClosedCurve ClosedCurve::from_parametrization(
    int n_nodes, const std::function<Vec2(double)>& gamma,
    const std::function<Vec2(double)>& dgamma,
    const std::function<Vec2(double)>& ddgamma) {
  if (n_nodes < 8 || n_nodes % 2 != 0)
    throw validation_error("n_nodes must be even and at least 8");
  ClosedCurve c;
  c.n_nodes = n_nodes;
  c.params.resize(n_nodes);
  c.points.resize(n_nodes);
  c.tangents.resize(n_nodes);
  c.normals.resize(n_nodes);
  c.speeds.resize(n_nodes);
  c.weights.resize(n_nodes);
  c.curvatures.resize(n_nodes);
  const double h = 2.0 * kPi / n_nodes;
  for (int i = 0; i < n_nodes; ++i) {
    const double t = h * i;
    const Vec2 p = gamma(t);
    const Vec2 d1 = dgamma(t);
    const Vec2 d2 = ddgamma(t);
    const double speed = d1.norm();
    if (!(speed > 0)) throw geometry_error("degenerate parametrization (zero speed)");
    c.params[i] = t;
    c.points[i] = p;
    c.speeds[i] = speed;
    c.weights[i] = h * speed;
    c.tangents[i] = d1 / speed;
    // Outward normal of a counterclockwise curve: tangent rotated by -90 deg.
    c.normals[i] = Vec2(c.tangents[i].y(), -c.tangents[i].x());
    c.curvatures[i] = (d1.x() * d2.y() - d1.y() * d2.x()) / (speed * speed * speed);
  }
  if (c.enclosed_area() <= 0)
    throw geometry_error("curve must be parametrized counterclockwise (area > 0)");
  return c;
}

double ClosedCurve::enclosed_area() const {
  double a = 0;
  for (int i = 0; i < n_nodes; ++i) a += weights[i] * points[i].dot(normals[i]);
  return 0.5 * a;
}

double ClosedCurve::perimeter() const {
  double s = 0;
  for (double w : weights) s += w;
  return s;
}

double ClosedCurve::max_radius() const {
  double r = 0;
  for (const auto& p : points) r = std::max(r, p.norm());
  return r;
}

ClosedCurve ClosedCurve::scaled_translated(double scale, const Vec2& shift) const {
  if (!(scale > 0)) throw validation_error("curve scale must be positive");
  ClosedCurve c = *this;
  for (int i = 0; i < n_nodes; ++i) {
    c.points[i] = scale * points[i] + shift;
    c.speeds[i] = scale * speeds[i];
    c.weights[i] = scale * weights[i];
    c.curvatures[i] = curvatures[i] / scale;
  }
  return c;
}

ClosedCurve make_circle(double radius, const Vec2& center, int n_nodes) {
  if (!(radius > 0)) throw validation_error("circle radius must be positive");
  if (radius + center.norm() >= kContainmentRadius)
    throw geometry_error("hole curve violates containment in B_{1/3} (assumption A1)");
  return ClosedCurve::from_parametrization(
      n_nodes,
      [&](double t) -> Vec2 { return Vec2(center.x() + radius * std::cos(t),
                                          center.y() + radius * std::sin(t)); },
      [&](double t) -> Vec2 { return Vec2(-radius * std::sin(t), radius * std::cos(t)); },
      [&](double t) -> Vec2 { return Vec2(-radius * std::cos(t), -radius * std::sin(t)); });
}

ClosedCurve make_ellipse(double a, double b, const Vec2& center, double rotation,
                         int n_nodes) {
  if (!(a > 0) || !(b > 0)) throw validation_error("ellipse semi-axes must be positive");
  const double cr = std::cos(rotation), sr = std::sin(rotation);
  auto rot = [cr, sr](const Vec2& v) {
    return Vec2(cr * v.x() - sr * v.y(), sr * v.x() + cr * v.y());
  };
  // Containment check on the exact support radius of the rotated ellipse.
  if (std::max(a, b) + center.norm() >= kContainmentRadius)
    throw geometry_error("hole curve violates containment in B_{1/3} (assumption A1)");
  return ClosedCurve::from_parametrization(
      n_nodes,
      [&](double t) -> Vec2 { return center + rot(Vec2(a * std::cos(t), b * std::sin(t))); },
      [&](double t) -> Vec2 { return rot(Vec2(-a * std::sin(t), b * std::cos(t))); },
      [&](double t) -> Vec2 { return rot(Vec2(-a * std::cos(t), -b * std::sin(t))); });
}

double winding_indicator(const ClosedCurve& curve, const Vec2& p) {
  double s = 0;
  for (int j = 0; j < curve.n_nodes; ++j) {
    const Vec2 r = curve.points[j] - p;
    const double r2 = r.squaredNorm();
    if (r2 == 0) return 0.5;  // on a node
    s += curve.weights[j] * curve.normals[j].dot(r) / (2.0 * kPi * r2);
  }
  return s;
}

HoleShape HoleShape::from_components(std::vector<ClosedCurve> components) {
  if (components.empty()) throw validation_error("hole shape needs at least one component");
  if (static_cast<int>(components.size()) > kMaxComponents)
    throw geometry_error("hole shape limited to 8 components per cell");
  for (const auto& c : components)
    if (c.max_radius() >= kContainmentRadius)
      throw geometry_error("hole curve violates containment in B_{1/3} (assumption A1)");
  for (std::size_t i = 0; i < components.size(); ++i) {
    for (std::size_t j = i + 1; j < components.size(); ++j) {
      double dmin = std::numeric_limits<double>::infinity();
      for (const auto& pi : components[i].points)
        for (const auto& pj : components[j].points)
          dmin = std::min(dmin, (pi - pj).norm());
      if (!(dmin > 1e-9)) throw geometry_error("hole components touch or overlap");
      if (std::abs(winding_indicator(components[i], components[j].points[0])) > 0.5 ||
          std::abs(winding_indicator(components[j], components[i].points[0])) > 0.5)
        throw geometry_error("hole components are nested");
    }
  }
  HoleShape s;
  s.dim = 2;
  s.components = std::move(components);
  for (const auto& c : s.components) s.area += c.enclosed_area();
  return s;
}

HoleShape HoleShape::from_curve(ClosedCurve curve) {
  std::vector<ClosedCurve> v;
  v.push_back(std::move(curve));
  return from_components(std::move(v));
}

HoleShape HoleShape::sphere(double radius) {
  if (!(radius > 0 && radius < kContainmentRadius))
    throw geometry_error("sphere radius must lie in (0, 1/3) (assumption A1)");
  HoleShape s;
  s.dim = 3;
  s.sphere_radius = radius;
  s.area = 4.0 / 3.0 * kPi * radius * radius * radius;
  return s;
}

int HoleShape::total_nodes() const {
  int n = 0;
  for (const auto& c : components) n += c.n_nodes;
  return n;
}

const ClosedCurve& HoleShape::component_of_node(int flat_index, int* local_index) const {
  for (const auto& c : components) {
    if (flat_index < c.n_nodes) {
      if (local_index) *local_index = flat_index;
      return c;
    }
    flat_index -= c.n_nodes;
  }
  throw domain_error("node index out of range");
}

double HoleShape::max_radius() const {
  if (dim == 3) return sphere_radius;
  double r = 0;
  for (const auto& c : components) r = std::max(r, c.max_radius());
  return r;
}

double HoleShape::node_spacing() const {
  double h = 0;
  for (const auto& c : components) h = std::max(h, c.node_spacing());
  return h;
}

double boundary_integral(const ClosedCurve& curve, std::span<const double> values) {
  if (static_cast<int>(values.size()) != curve.n_nodes)
    throw validation_error("value count does not match node count");
  double s = 0;
  for (int i = 0; i < curve.n_nodes; ++i) s += curve.weights[i] * values[i];
  return s;
}

double boundary_integral(const HoleShape& shape, std::span<const double> values) {
  if (static_cast<int>(values.size()) != shape.total_nodes())
    throw validation_error("value count does not match node count");
  double s = 0;
  std::size_t off = 0;
  for (const auto& c : shape.components) {
    s += boundary_integral(c, values.subspan(off, c.n_nodes));
    off += c.n_nodes;
  }
  return s;
}

}  // namespace phom
