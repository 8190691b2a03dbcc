#include "phom/layer_potentials.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

namespace phom {

namespace {

constexpr double kPi = std::numbers::pi;

void require_dim2(const HoleShape& shape) {
  if (shape.dim != 2 || shape.components.empty())
    throw unsupported_error("boundary operators require a dim-2 shape with curves");
}

// Product-quadrature weights for the kernel log(4 sin^2((s-t)/2)) on n
// equispaced nodes, as a circulant indexed by (i - j) mod n.
std::vector<double> log_kernel_circulant(int n) {
  std::vector<double> r(n);
  for (int p = 0; p < n; ++p) {
    double s = 0;
    for (int m = 1; m <= n / 2 - 1; ++m)
      s += std::cos(2.0 * kPi * m * p / n) / m;
    s += (p % 2 == 0 ? 1.0 : -1.0) / n;
    r[p] = -4.0 * kPi * s / n;
  }
  return r;
}

// Double-layer kernel value (1/2pi) N_y.(y - x)/|y - x|^2 with the curvature
// limit on the diagonal handled by the caller.
inline double dlp_kernel(const Vec2& x, const Vec2& y, const Vec2& ny) {
  const Vec2 r = y - x;
  return ny.dot(r) / (2.0 * kPi * r.squaredNorm());
}

}  // namespace

FlatNodes flatten(const HoleShape& shape) {
  require_dim2(shape);
  FlatNodes f;
  f.comp_offset.push_back(0);
  int ci = 0;
  for (const auto& c : shape.components) {
    for (int i = 0; i < c.n_nodes; ++i) {
      f.points.push_back(c.points[i]);
      f.normals.push_back(c.normals[i]);
      f.weights.push_back(c.weights[i]);
      f.speeds.push_back(c.speeds[i]);
      f.curvatures.push_back(c.curvatures[i]);
      f.component.push_back(ci);
    }
    f.comp_offset.push_back(static_cast<int>(f.points.size()));
    f.comp_guard.push_back(3.0 * c.node_spacing());
    ++ci;
  }
  return f;
}

double density_integral(const HoleShape& shape, const Eigen::VectorXd& values) {
  const FlatNodes f = flatten(shape);
  if (values.size() != f.size()) throw validation_error("density size mismatch");
  double s = 0;
  for (int i = 0; i < f.size(); ++i) s += f.weights[i] * values[i];
  return s;
}

double density_mean(const HoleShape& shape, const Eigen::VectorXd& values) {
  const FlatNodes f = flatten(shape);
  if (values.size() != f.size()) throw validation_error("density size mismatch");
  double s = 0, len = 0;
  for (int i = 0; i < f.size(); ++i) {
    s += f.weights[i] * values[i];
    len += f.weights[i];
  }
  return s / len;
}

Eigen::VectorXd normal_component(const HoleShape& shape, int k) {
  if (k < 0 || k > 1) throw validation_error("normal component index must be 0 or 1");
  const FlatNodes f = flatten(shape);
  Eigen::VectorXd v(f.size());
  for (int i = 0; i < f.size(); ++i) v[i] = f.normals[i][k];
  return v;
}

NystromOperator assemble_free(const HoleShape& shape, PotentialKind kind) {
  require_dim2(shape);
  const FlatNodes f = flatten(shape);
  const int n = f.size();
  Eigen::MatrixXd m(n, n);

  switch (kind) {
    case PotentialKind::SingleLayer: {
      // Same-component blocks: split the log kernel into the periodic log
      // part (product rule) and a smooth remainder; cross blocks are smooth.
      int ci = 0;
      std::vector<std::vector<double>> circ;
      for (const auto& c : shape.components) circ.push_back(log_kernel_circulant(c.n_nodes));
      for (int i = 0; i < n; ++i) {
        ci = f.component[i];
        const int ni = shape.components[ci].n_nodes;
        const int ioff = f.comp_offset[ci];
        for (int j = 0; j < n; ++j) {
          if (f.component[j] != ci) {
            m(i, j) = f.weights[j] * std::log((f.points[i] - f.points[j]).norm()) /
                      (2.0 * kPi);
            continue;
          }
          const int li = i - ioff, lj = j - ioff;
          const int p = (li - lj + ni) % ni;
          if (p == 0) {
            m(i, j) = circ[ci][0] * f.speeds[j] / (4.0 * kPi) +
                      f.weights[j] * std::log(f.speeds[i]) / (2.0 * kPi);
          } else {
            const double sin2 = 4.0 * std::pow(std::sin(kPi * p / ni), 2);
            const double d2 = (f.points[i] - f.points[j]).squaredNorm();
            m(i, j) = circ[ci][p] * f.speeds[j] / (4.0 * kPi) +
                      f.weights[j] * std::log(d2 / sin2) / (4.0 * kPi);
          }
        }
      }
      break;
    }
    case PotentialKind::DoubleLayer:
    case PotentialKind::K: {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          m(i, j) = (i == j) ? f.weights[i] * f.curvatures[i] / (4.0 * kPi)
                             : f.weights[j] * dlp_kernel(f.points[i], f.points[j],
                                                         f.normals[j]);
      break;
    }
    case PotentialKind::Kstar: {
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          if (i == j) {
            m(i, j) = f.weights[i] * f.curvatures[i] / (4.0 * kPi);
          } else {
            const Vec2 r = f.points[i] - f.points[j];
            m(i, j) = f.weights[j] * f.normals[i].dot(r) /
                      (2.0 * kPi * r.squaredNorm());
          }
        }
      break;
    }
    default:
      throw unsupported_error("assemble_free supports S, D, K, Kstar");
  }
  return {std::move(m), kind, 0.0};
}

NystromOperator assemble_periodic(const HoleShape& shape, const GreenEta& green,
                                  PotentialKind kind) {
  require_dim2(shape);
  if (green.base().dim() != 2)
    throw unsupported_error("periodic boundary operators are dim-2 only");
  const FlatNodes f = flatten(shape);
  const int n = f.size();
  const double eta = green.eta();

  auto r1_matrix = [&]() {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        m(i, j) = f.weights[j] *
                  green.base().eval_R_raw(Vec2(eta * (f.points[i] - f.points[j])));
    return m;
  };
  auto r2_matrix = [&]() {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Vec2 g = green.base().grad_R_raw(Vec2(eta * (f.points[i] - f.points[j])));
        m(i, j) = f.weights[j] * f.normals[i].dot(g);
      }
    return m;
  };

  switch (kind) {
    case PotentialKind::R1:
      return {r1_matrix(), kind, eta};
    case PotentialKind::R2:
      return {r2_matrix(), kind, eta};
    case PotentialKind::PeriodicSingle: {
      Eigen::MatrixXd m = assemble_free(shape, PotentialKind::SingleLayer).matrix;
      const double lc = green.log_const();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) += lc * f.weights[j];
      m += r1_matrix();
      return {std::move(m), kind, eta};
    }
    case PotentialKind::PeriodicKstar: {
      Eigen::MatrixXd m = assemble_free(shape, PotentialKind::Kstar).matrix;
      m += eta * r2_matrix();  // eta^{d-1}, d = 2
      return {std::move(m), kind, eta};
    }
    default:
      throw unsupported_error("assemble_periodic supports Sp, Kstarp, R1, R2");
  }
}

NystromOperator assemble_moment(const HoleShape& shape, PotentialKind kind) {
  require_dim2(shape);
  const FlatNodes f = flatten(shape);
  const int n = f.size();
  const double d = 2.0;
  Eigen::MatrixXd m(n, n);
  if (kind == PotentialKind::Q1) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        m(i, j) = -f.weights[j] * (f.points[i] - f.points[j]).squaredNorm() / (2.0 * d);
  } else if (kind == PotentialKind::Q2) {
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        m(i, j) = -f.weights[j] * f.normals[i].dot(f.points[i] - f.points[j]) / d;
  } else {
    throw unsupported_error("assemble_moment supports Q1, Q2");
  }
  return {std::move(m), kind, 0.0};
}

namespace {

void fill_warning(const FlatNodes& f, const Vec2& x, double cell,
                  NearBoundaryWarning* warning) {
  if (!warning) return;
  double best = std::numeric_limits<double>::infinity(), limit = 0;
  for (int j = 0; j < f.size(); ++j) {
    Vec2 d = x - f.points[j];
    if (cell > 0) {
      d.x() -= cell * std::round(d.x() / cell);
      d.y() -= cell * std::round(d.y() / cell);
    }
    const double dist = d.norm();
    if (dist < best) {
      best = dist;
      limit = f.comp_guard[f.component[j]];
    }
  }
  if (best < limit) *warning = {true, best, limit};
}

}  // namespace

double eval_potential(const HoleShape& shape, const BoundaryDensity& density,
                      PotentialKind kind, const Vec2& x, const GreenEta* green,
                      NearBoundaryWarning* warning) {
  require_dim2(shape);
  const FlatNodes f = flatten(shape);
  if (density.values.size() != f.size()) throw validation_error("density size mismatch");
  const bool periodic =
      kind == PotentialKind::PeriodicSingle || kind == PotentialKind::PeriodicDouble;
  if (periodic && !green)
    throw validation_error("periodic evaluation requires the rescaled Green function");
  fill_warning(f, x, periodic ? 1.0 / green->eta() : 0.0, warning);

  double s = 0;
  switch (kind) {
    case PotentialKind::SingleLayer:
      for (int j = 0; j < f.size(); ++j)
        s += f.weights[j] * density.values[j] *
             std::log((x - f.points[j]).norm()) / (2.0 * kPi);
      break;
    case PotentialKind::DoubleLayer:
      for (int j = 0; j < f.size(); ++j)
        s += f.weights[j] * density.values[j] *
             dlp_kernel(x, f.points[j], f.normals[j]);
      break;
    case PotentialKind::PeriodicSingle:
      for (int j = 0; j < f.size(); ++j)
        s += f.weights[j] * density.values[j] * green->g_eta(x - f.points[j]);
      break;
    case PotentialKind::PeriodicDouble:
      for (int j = 0; j < f.size(); ++j)
        s += f.weights[j] * density.values[j] *
             f.normals[j].dot(green->grad_g_eta(f.points[j] - x));
      break;
    default:
      throw unsupported_error("eval_potential supports S, D, Sp, Dp");
  }
  return s;
}

Vec2 eval_grad_potential(const HoleShape& shape, const BoundaryDensity& density,
                         PotentialKind kind, const Vec2& x, const GreenEta* green,
                         NearBoundaryWarning* warning) {
  require_dim2(shape);
  const FlatNodes f = flatten(shape);
  if (density.values.size() != f.size()) throw validation_error("density size mismatch");
  const bool periodic = kind == PotentialKind::PeriodicSingle;
  if (periodic && !green)
    throw validation_error("periodic evaluation requires the rescaled Green function");
  fill_warning(f, x, periodic ? 1.0 / green->eta() : 0.0, warning);

  Vec2 g(0, 0);
  switch (kind) {
    case PotentialKind::SingleLayer:
      for (int j = 0; j < f.size(); ++j) {
        const Vec2 r = x - f.points[j];
        g += f.weights[j] * density.values[j] / (2.0 * kPi * r.squaredNorm()) * r;
      }
      break;
    case PotentialKind::DoubleLayer:
      for (int j = 0; j < f.size(); ++j) {
        const Vec2 r = x - f.points[j];
        const double r2 = r.squaredNorm();
        const Vec2 nj = f.normals[j];
        const Vec2 kern = -nj / (2.0 * kPi * r2) + nj.dot(r) / (kPi * r2 * r2) * r;
        g += f.weights[j] * density.values[j] * kern;
      }
      break;
    case PotentialKind::PeriodicSingle:
      for (int j = 0; j < f.size(); ++j)
        g += f.weights[j] * density.values[j] * green->grad_g_eta(x - f.points[j]);
      break;
    default:
      throw unsupported_error("eval_grad_potential supports S, D, Sp");
  }
  return g;
}

BoundaryDensity neumann_series_inverse(const HoleShape& shape,
                                       const NystromOperator& kstar_free,
                                       const NystromOperator& r2, double eta,
                                       const Eigen::VectorXd& rhs, int terms,
                                       NeumannSeriesDiag* diag) {
  if (kstar_free.kind != PotentialKind::Kstar || r2.kind != PotentialKind::R2)
    throw validation_error("neumann_series_inverse needs the Kstar and R2 operators");
  if (terms < 0) throw validation_error("term count must be nonnegative");
  const double mean_scale = rhs.cwiseAbs().maxCoeff() + 1e-300;
  if (std::abs(density_integral(shape, rhs)) > 1e-8 * mean_scale)
    throw validation_error("Neumann-series rhs must be mean-zero");

  Eigen::MatrixXd a0 = kstar_free.matrix;
  a0.diagonal().array() += 0.5;
  const auto lu = lu_with_check(a0, "free-space second-kind system");

  Eigen::VectorXd term = lu.solve(rhs);
  Eigen::VectorXd sum = term;
  double prev = term.cwiseAbs().maxCoeff();
  if (diag) {
    diag->term_norms.push_back(prev);
    diag->partial_sum_means.push_back(density_mean(shape, sum));
    diag->terms_used = 1;
  }
  const double factor = eta;  // eta^{d-1}, d = 2
  for (int l = 1; l <= terms; ++l) {
    term = -factor * lu.solve(r2.matrix * term);
    const double nrm = term.cwiseAbs().maxCoeff();
    if (nrm > prev)
      throw numeric_error("eta above Neumann-series radius: term norms grow");
    sum += term;
    prev = nrm;
    if (diag) {
      diag->term_norms.push_back(nrm);
      diag->partial_sum_means.push_back(density_mean(shape, sum));
      diag->terms_used = l + 1;
    }
    if (nrm < 1e-16 * sum.cwiseAbs().maxCoeff()) break;
  }
  return {&shape, std::move(sum)};
}

Eigen::PartialPivLU<Eigen::MatrixXd> lu_with_check(const Eigen::MatrixXd& m,
                                                   const char* context) {
  Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  // Partial pivoting pushes rank deficiency into tiny U pivots; the pivot
  // ratio is a cheap and reliable conditioning estimate for these systems.
  const auto d = lu.matrixLU().diagonal().cwiseAbs();
  const double dmax = d.maxCoeff();
  const double rc = dmax > 0 ? d.minCoeff() / dmax : 0.0;
  if (!(rc > 1e-14)) {
    std::ostringstream os;
    os << context << ": dense solve failed, pivot-ratio condition estimate " << rc;
    throw numeric_error(os.str());
  }
  return lu;
}

}  // namespace phom
