#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "phom/errors.hpp"
#include "phom/geometry.hpp"

namespace phom {

struct RExpansionRow {
  double radius = 0;
  double rms_residual = 0;  // rms over sample directions of |R - R(0) + |x|^2/(2d)|
};

struct RExpansionFit {
  double slope = 0;       // log-log slope of the residual vs radius
  double quad_coeff = 0;  // fitted coefficient of |x|^2, expected -1/(2d)
  double r0 = 0;
  std::vector<RExpansionRow> rows;
};

/// Evaluator for the fundamental solution G of the Laplacian on the unit
/// torus (with unit background charge and zero mean), its smooth regular part
/// R = G - Gamma, and their gradients. Evaluation uses Ewald splitting: a
/// Gaussian-screened real-space lattice sum plus a damped Fourier sum, both
/// truncated well below double precision. Supports dim 2 (full) and dim 3
/// (R, R(0) and G for analytic-sphere cross checks).
///
/// Immutable after construction and safe for concurrent evaluation.
class TorusGreen {
 public:
  explicit TorusGreen(int dim, double splitting_width = 1.0, int real_shells = 3,
                      int fourier_cutoff = 20);

  int dim() const { return dim_; }
  double splitting_width() const { return width_; }
  int real_space_cutoff() const { return shells_; }
  int fourier_cutoff() const { return fourier_cutoff_; }
  /// Cached value of R(0).
  double r0() const { return r0_; }

  /// Regular part R(x) = G(x) - Gamma(x), smooth on the closed unit cube.
  /// Throws domain_error outside [-1/2, 1/2]^d: across the cube faces the
  /// periodic extension of R is continuous but not differentiable.
  double eval_R(const double* x) const;
  double eval_R(const Vec2& x) const { return eval_R(x.data()); }

  /// Same value without the cube check; valid while x stays away from the
  /// nonzero lattice points (used for kernel differences, |x|_inf <= 3/4).
  double eval_R_raw(const double* x) const;
  double eval_R_raw(const Vec2& x) const { return eval_R_raw(x.data()); }

  void grad_R_raw(const double* x, double* g) const;
  Vec2 grad_R_raw(const Vec2& x) const {
    Vec2 g;
    grad_R_raw(x.data(), g.data());
    return g;
  }

  /// Periodic Green function G = Gamma + R; x is wrapped to the nearest
  /// image. Throws domain_error at lattice points.
  double eval_G(const double* x) const;
  double eval_G(const Vec2& x) const { return eval_G(x.data()); }

  void eval_gradG(const double* x, double* g) const;
  Vec2 eval_gradG(const Vec2& x) const {
    Vec2 g;
    eval_gradG(x.data(), g.data());
    return g;
  }

  /// Value and gradient of G in one pass over the lattice and mode sums.
  void eval_G_with_grad(const double* x, double* value, double* grad) const;

  /// Free-space fundamental solution at distance r > 0.
  static double gamma_free(int dim, double r);

  /// Fits the near-origin behavior of R against R(0) - |x|^2/(2d). The
  /// returned slope estimates the order of the remainder (expected ~4) and
  /// quad_coeff the |x|^2 coefficient (expected -1/(2d)). Requires at least
  /// two radii, all within (0, 0.2].
  RExpansionFit check_R_expansion(const std::vector<double>& radii) const;

 private:
  void fourier_accumulate(const double* x, double* value, double* grad) const;

  int dim_;
  double width_;
  int shells_;
  int fourier_cutoff_;
  double s0_;  // Gaussian split scale, width^2 / (4 pi)
  std::vector<std::array<double, 3>> lattice_;  // pruned images, origin excluded
  struct Mode {
    std::array<int, 3> k;
    double w;
  };
  std::vector<Mode> modes_;  // pruned damped Fourier modes, origin excluded
  int mode_kmax_ = 0;
  double r0_ = 0;
};

/// The Green function of the torus rescaled by 1/eta, presented as the
/// free-space kernel plus a smooth perturbation.
class GreenEta {
 public:
  GreenEta(const TorusGreen& base, double eta) : base_(&base), eta_(eta) {
    if (!(eta > 0.0 && eta <= 1.0)) throw validation_error("eta must be in (0,1]");
  }

  double eta() const { return eta_; }
  const TorusGreen& base() const { return *base_; }

  /// The additive constant of the dim-2 splitting, log(eta)/(2 pi); zero in
  /// dim 3 where the perturbation is eta^(d-2) R(eta x).
  double log_const() const;

  /// G_eta(x) - Gamma(x) for unwrapped x (|eta x|_inf within the smooth
  /// range): log_const + eta^(d-2) R(eta x).
  double smooth_kernel(const Vec2& diff) const;
  /// grad of the smooth part: eta^(d-1) (grad R)(eta x).
  Vec2 grad_smooth_kernel(const Vec2& diff) const;

  /// Fully periodic evaluation of G_eta (and its gradient) at any x in the
  /// rescaled torus, via wrapping.
  double g_eta(const Vec2& diff) const;
  Vec2 grad_g_eta(const Vec2& diff) const;
  void g_eta_with_grad(const Vec2& diff, double* value, Vec2* grad) const;

 private:
  const TorusGreen* base_;
  double eta_;
};

}  // namespace phom
