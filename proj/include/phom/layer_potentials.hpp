#pragma once

#include <Eigen/Dense>
#include <optional>
#include <vector>

#include "phom/geometry.hpp"
#include "phom/torus_green.hpp"

namespace phom {

/// Scalar field on the quadrature nodes of a hole boundary (layer-potential
/// momentum). Values are flattened across components in component order.
struct BoundaryDensity {
  const HoleShape* shape = nullptr;
  Eigen::VectorXd values;
};

/// Flattened node data of a multi-component shape.
struct FlatNodes {
  std::vector<Vec2> points;
  std::vector<Vec2> normals;
  std::vector<double> weights;
  std::vector<double> speeds;
  std::vector<double> curvatures;
  std::vector<int> component;
  std::vector<int> comp_offset;  // size = #components + 1
  std::vector<double> comp_guard;  // plain-quadrature distance guard, 3h

  int size() const { return static_cast<int>(points.size()); }
};

FlatNodes flatten(const HoleShape& shape);

/// Weighted quadrature functionals on flattened node values.
double density_integral(const HoleShape& shape, const Eigen::VectorXd& values);
double density_mean(const HoleShape& shape, const Eigen::VectorXd& values);
/// Nodal values of the k-th outward normal component (k = 0 or 1).
Eigen::VectorXd normal_component(const HoleShape& shape, int k);

enum class PotentialKind {
  SingleLayer,      // S, weakly singular log kernel
  DoubleLayer,      // D off boundary; on boundary its PV coincides with K
  K,                // Neumann-Poincare operator (double-layer trace)
  Kstar,            // adjoint of K
  PeriodicSingle,   // S restricted to the rescaled torus
  PeriodicDouble,   // off-boundary evaluation only
  PeriodicKstar,
  R1,               // smooth single-layer correction kernel R(eta (x-y))
  R2,               // smooth adjoint-double-layer correction kernel
  Q1,               // leading moment of R1: -|x-y|^2 / (2d)
  Q2,               // leading moment of R2: -N_x.(x-y) / d
};

/// Dense Nystrom matrix acting on nodal density values.
struct NystromOperator {
  Eigen::MatrixXd matrix;
  PotentialKind kind;
  double eta = 0;  // periodic kinds only

  Eigen::VectorXd apply(const Eigen::VectorXd& density) const { return matrix * density; }
};

/// On-boundary operators with the free-space kernel. The single layer uses
/// the spectrally accurate product rule for the periodic log kernel; K and
/// K* use the continuous double-layer kernel with the curvature diagonal.
NystromOperator assemble_free(const HoleShape& shape, PotentialKind kind);

/// Periodic on-boundary operators at scale eta: the free-space matrix plus
/// the smooth correction assembled from the regular part of the torus Green
/// function (the dim-2 log(eta) constant is carried explicitly).
NystromOperator assemble_periodic(const HoleShape& shape, const GreenEta& green,
                                  PotentialKind kind);

/// Dense moment operators of the leading regular-part expansion.
NystromOperator assemble_moment(const HoleShape& shape, PotentialKind kind);

/// Filled when an off-boundary evaluation point violates the plain-quadrature
/// distance guard (3 node spacings): the value is still returned.
struct NearBoundaryWarning {
  bool triggered = false;
  double distance = 0;
  double limit = 0;
};

/// Off-boundary potential evaluation by direct quadrature. `green` is
/// required for the periodic kinds and ignored otherwise.
double eval_potential(const HoleShape& shape, const BoundaryDensity& density,
                      PotentialKind kind, const Vec2& x,
                      const GreenEta* green = nullptr,
                      NearBoundaryWarning* warning = nullptr);
Vec2 eval_grad_potential(const HoleShape& shape, const BoundaryDensity& density,
                         PotentialKind kind, const Vec2& x,
                         const GreenEta* green = nullptr,
                         NearBoundaryWarning* warning = nullptr);

struct NeumannSeriesDiag {
  std::vector<double> term_norms;        // sup norms of successive terms
  std::vector<double> partial_sum_means; // quadrature mean of each partial sum
  int terms_used = 0;
};

/// Truncated Neumann series for the periodic second-kind solve: the sum of
/// (-1)^l eta^{l(d-1)} (R3)^l applied to (1/2 I + K*)^{-1} rhs, where
/// R3 = (1/2 I + K*)^{-1} R2. Requires a mean-zero rhs. Aborts when the term
/// norms grow (eta above the convergence radius).
BoundaryDensity neumann_series_inverse(const HoleShape& shape,
                                       const NystromOperator& kstar_free,
                                       const NystromOperator& r2, double eta,
                                       const Eigen::VectorXd& rhs, int terms,
                                       NeumannSeriesDiag* diag = nullptr);

/// LU factorization with a reciprocal-condition sanity check; throws
/// numeric_error carrying the estimate when the system is unusable.
Eigen::PartialPivLU<Eigen::MatrixXd> lu_with_check(const Eigen::MatrixXd& m,
                                                   const char* context);

}  // namespace phom
