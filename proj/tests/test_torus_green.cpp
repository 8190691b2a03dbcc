#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "phom/torus_green.hpp"
#include "support/fourier_green.hpp"

using namespace phom;
namespace {
constexpr double kPi = std::numbers::pi;

// Regression constants for R(0), established once by the dual-method oracle
// below (Ewald vs accelerated Fourier summation at two cutoffs) and frozen.
constexpr double kR0Dim2 = 0.20857779324350142;
constexpr double kR0Dim3 = 0.22578495944075802;
}  // namespace

TEST_CASE("R(0): dual-method oracle and frozen regression value, dim 2") {
  const TorusGreen g(2);
  const double oracle_a = phom_test::fourier_R0(2, 30);
  const double oracle_b = phom_test::fourier_R0(2, 45);
  CHECK(std::abs(oracle_a - oracle_b) < 1e-9);   // cutoff independence
  CHECK(std::abs(g.r0() - oracle_b) < 1e-9);     // method independence
  CHECK(std::abs(g.r0() - kR0Dim2) < 1e-10);     // frozen regression
}

TEST_CASE("R(0): dual-method oracle and frozen regression value, dim 3") {
  const TorusGreen g(3);
  const double oracle_a = phom_test::fourier_R0(3, 24);
  const double oracle_b = phom_test::fourier_R0(3, 36);
  CHECK(std::abs(oracle_a - oracle_b) < 5e-8);
  CHECK(std::abs(g.r0() - oracle_b) < 5e-8);
  CHECK(std::abs(g.r0() - kR0Dim3) < 1e-10);
}

TEST_CASE("eval_R agrees with the Fourier oracle at interior points") {
  const TorusGreen g(2);
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> u(-0.45, 0.45);
  for (int i = 0; i < 10; ++i) {
    const Vec2 x(u(rng), u(rng));
    if (x.norm() < 0.05) continue;
    const double ref = phom_test::fourier_R(2, {x.x(), x.y(), 0.0}, 40);
    CHECK(std::abs(g.eval_R(x) - ref) < 1e-8);
  }
}

TEST_CASE("Ewald value independent of the splitting width") {
  const TorusGreen ga(2, 0.75, 6, 20);
  const TorusGreen gb(2, 1.5, 6, 20);
  CHECK(std::abs(ga.r0() - gb.r0()) < 1e-10);
  std::mt19937 rng(777);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int i = 0; i < 20; ++i) {
    const Vec2 x(u(rng), u(rng));
    if (x.norm() < 1e-3) continue;
    CHECK(std::abs(ga.eval_R_raw(x) - gb.eval_R_raw(x)) < 1e-10);
    CHECK(std::abs(ga.eval_G(x) - gb.eval_G(x)) < 1e-10);
    CHECK((ga.eval_gradG(x) - gb.eval_gradG(x)).norm() < 1e-9);
  }
}

TEST_CASE("periodicity and evenness") {
  const TorusGreen g(2);
  const Vec2 pts[] = {{0.13, -0.27}, {0.41, 0.33}, {-0.05, 0.49}};
  for (const Vec2& x : pts) {
    CHECK(std::abs(g.eval_G(Vec2(x.x() + 1.0, x.y())) - g.eval_G(x)) < 1e-10);
    CHECK(std::abs(g.eval_G(Vec2(-x.x(), -x.y())) - g.eval_G(x)) < 1e-10);
    CHECK(std::abs(g.eval_R(x) - g.eval_R(Vec2(-x.x(), -x.y()))) < 1e-12);
    CHECK((g.eval_gradG(x) + g.eval_gradG(Vec2(-x.x(), -x.y()))).norm() < 1e-10);
  }
  const TorusGreen g3(3);
  const double a[3] = {0.21, -0.11, 0.32}, b[3] = {1.21, -0.11, 0.32},
               c[3] = {-0.21, 0.11, -0.32};
  CHECK(std::abs(g3.eval_G(a) - g3.eval_G(b)) < 1e-10);
  CHECK(std::abs(g3.eval_G(a) - g3.eval_G(c)) < 1e-10);
}

TEST_CASE("definition consistency G = Gamma + R") {
  const TorusGreen g(2);
  const Vec2 x(0.25, 0.0);
  CHECK(std::abs(g.eval_G(x) - TorusGreen::gamma_free(2, x.norm()) - g.eval_R(x)) <
        1e-12);
}

TEST_CASE("grid estimate of the torus mean of G") {
  const TorusGreen g(2);
  const int n = 64;
  const double h = 1.0 / n;
  double sum = 0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const Vec2 x(-0.5 + (i + 0.5) * h, -0.5 + (j + 0.5) * h);
      if (x.norm() < 0.05) continue;
      sum += g.eval_G(x) * h * h;
    }
  }
  // analytic contribution of Gamma over the excluded ball
  const double r = 0.05;
  sum += (r * r / 2.0) * (std::log(r) - 0.5);
  CHECK(std::abs(sum) < 2e-3);
}

TEST_CASE("flux of grad G through a small circle") {
  const TorusGreen g(2);
  const double r = 0.1;
  const int n = 256;
  double flux = 0;
  for (int i = 0; i < n; ++i) {
    const double t = 2.0 * kPi * i / n;
    const Vec2 nrm(std::cos(t), std::sin(t));
    const Vec2 x = r * nrm;
    flux += (2.0 * kPi * r / n) * nrm.dot(g.eval_gradG(x));
  }
  // Laplacian of G is a unit point mass minus the unit background.
  CHECK(std::abs(flux + kPi * r * r - 1.0) < 1e-8);
}

TEST_CASE("finite-difference Laplacian of R") {
  const TorusGreen g(2);
  const Vec2 x(0.1, 0.07);
  const double s = 1e-3;
  const double lap =
      (g.eval_R(Vec2(x.x() + s, x.y())) + g.eval_R(Vec2(x.x() - s, x.y())) +
       g.eval_R(Vec2(x.x(), x.y() + s)) + g.eval_R(Vec2(x.x(), x.y() - s)) -
       4.0 * g.eval_R(x)) /
      (s * s);
  CHECK(std::abs(lap + 1.0) < 1e-5);
}

TEST_CASE("regular part expansion near the origin") {
  const TorusGreen g(2);
  const auto fit = g.check_R_expansion({0.2, 0.1, 0.05, 0.025, 0.0125});
  CHECK(fit.slope > 3.8);
  CHECK(fit.slope < 4.2);
  CHECK(std::abs(fit.quad_coeff + 0.25) < 1e-3);
  CHECK_THROWS_AS(g.check_R_expansion({0.1}), validation_error);

  const TorusGreen g3(3);
  const auto fit3 = g3.check_R_expansion({0.2, 0.1, 0.05, 0.025});
  CHECK(std::abs(fit3.quad_coeff + 1.0 / 6.0) < 1e-3);
}

TEST_CASE("domain guards") {
  const TorusGreen g(2);
  CHECK_THROWS_AS(g.eval_R(Vec2(0.51, 0.0)), domain_error);
  CHECK_THROWS_AS(g.eval_G(Vec2(1.0, 0.0)), domain_error);
  CHECK_THROWS_AS(g.eval_G(Vec2(0.0, 0.0)), domain_error);
  CHECK_THROWS_AS(TorusGreen(4), validation_error);
}

TEST_CASE("rescaled Green function is the stated perturbation of Gamma") {
  const TorusGreen base(2);
  for (double eta : {0.37, 0.8, 1.0}) {
    const GreenEta ge(base, eta);
    const Vec2 pts[] = {{0.3, -0.2}, {0.45, 0.1}, {0.05, 0.4}};
    for (const Vec2& x : pts) {
      const double lhs = ge.g_eta(x) - TorusGreen::gamma_free(2, x.norm());
      const double rhs = std::log(eta) / (2.0 * kPi) +
                         base.eval_R(Vec2(eta * x.x(), eta * x.y()));
      CHECK(std::abs(lhs - rhs) < 1e-10);
      // gradient form of the perturbation
      const Vec2 gl = ge.grad_g_eta(x);
      const Vec2 gr = Vec2(x / (2.0 * kPi * x.squaredNorm())) +
                      ge.grad_smooth_kernel(x);
      CHECK((gl - gr).norm() < 1e-10);
    }
  }
  CHECK_THROWS_AS(GreenEta(base, 0.0), validation_error);
  CHECK_THROWS_AS(GreenEta(base, 1.5), validation_error);
}
