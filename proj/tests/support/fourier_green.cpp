#include "fourier_green.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace phom_test {
namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = 0.57721566490153286060651209008240243;
const double kMass = 2.0 * kPi;  // base screening mass

// Coefficients of the third finite-difference acceleration:
// 1/A = 3/(A+m^2) - 3/(A+2 m^2) + 1/(A+3 m^2) + 6 m^6 / (A ... (A+3 m^2)).
constexpr double kC[3] = {3.0, -3.0, 1.0};

double screened_lattice_sum(int dim, const std::array<double, 3>& x, double mu) {
  // sum over images of the free-space kernel of (-Lap + mu^2): K0/2pi or
  // exp(-mu r)/(4 pi r). Shells chosen so the dropped tail is < 1e-16.
  int S = 2;
  while (mu * (S - 1.3) < 40.0 && S < 60) ++S;
  double s = 0;
  const int lz = dim == 3 ? S : 0;
  for (int i = -S; i <= S; ++i)
    for (int j = -S; j <= S; ++j)
      for (int l = -lz; l <= lz; ++l) {
        const double dx = x[0] - i, dy = x[1] - j, dz = x[2] - l;
        const double r = std::sqrt(dx * dx + dy * dy + dz * dz);
        if (r == 0) throw std::domain_error("lattice point");
        if (mu * r > 45.0) continue;
        s += dim == 2 ? std::cyl_bessel_k(0.0, mu * r) / (2.0 * kPi)
                      : std::exp(-mu * r) / (4.0 * kPi * r);
      }
  return s;
}

double fourier_tail(int dim, const std::array<double, 3>& x, int cutoff) {
  const double m2 = kMass * kMass;
  double s = 0;
  const int lz = dim == 3 ? cutoff : 0;
  for (int i = -cutoff; i <= cutoff; ++i)
    for (int j = -cutoff; j <= cutoff; ++j)
      for (int l = -lz; l <= lz; ++l) {
        const double k2 = double(i) * i + double(j) * j + double(l) * l;
        if (k2 == 0) continue;
        const double a = 4.0 * kPi * kPi * k2;
        const double w =
            6.0 * m2 * m2 * m2 / (a * (a + m2) * (a + 2 * m2) * (a + 3 * m2));
        s += w * std::cos(2.0 * kPi * (i * x[0] + j * x[1] + l * x[2]));
      }
  return s;
}

}  // namespace

double fourier_G(int dim, const std::array<double, 3>& x, int cutoff) {
  double g = 0;
  for (int j = 0; j < 3; ++j) {
    const double mu = kMass * std::sqrt(j + 1.0);
    g -= kC[j] * (screened_lattice_sum(dim, x, mu) - 1.0 / (mu * mu));
  }
  return g - fourier_tail(dim, x, cutoff);
}

double fourier_R(int dim, const std::array<double, 3>& x, int cutoff) {
  const double r = std::sqrt(x[0] * x[0] + x[1] * x[1] + x[2] * x[2]);
  const double gamma = dim == 2 ? std::log(r) / (2.0 * kPi) : -1.0 / (4.0 * kPi * r);
  return fourier_G(dim, x, cutoff) - gamma;
}

double fourier_R0(int dim, int cutoff) {
  // The n = 0 image of the three screened kernels minus Gamma has a finite
  // limit at the origin; all other contributions are evaluated at x = 0.
  double g = 0;
  for (int j = 0; j < 3; ++j) {
    const double mu = kMass * std::sqrt(j + 1.0);
    // image sum without n = 0:
    int S = 2;
    while (mu * (S - 1.3) < 40.0 && S < 60) ++S;
    double s = 0;
    const int lz = dim == 3 ? S : 0;
    for (int i = -S; i <= S; ++i)
      for (int jj = -S; jj <= S; ++jj)
        for (int l = -lz; l <= lz; ++l) {
          if (i == 0 && jj == 0 && l == 0) continue;
          const double r = std::sqrt(double(i) * i + double(jj) * jj + double(l) * l);
          if (mu * r > 45.0) continue;
          s += dim == 2 ? std::cyl_bessel_k(0.0, mu * r) / (2.0 * kPi)
                        : std::exp(-mu * r) / (4.0 * kPi * r);
        }
    g -= kC[j] * (s - 1.0 / (mu * mu));
  }
  if (dim == 2) {
    // lim_{r->0} -(1/2pi) [sum_j c_j K0(mu_j r) + log r]
    double l0 = -kEulerGamma;
    for (int j = 0; j < 3; ++j) {
      const double mu = kMass * std::sqrt(j + 1.0);
      l0 -= kC[j] * std::log(mu / 2.0);
    }
    g += -l0 / (2.0 * kPi);
  } else {
    // lim_{r->0} -(1/4pi r) [sum_j c_j exp(-mu_j r) - 1] = (1/4pi) sum c_j mu_j
    double l0 = 0;
    for (int j = 0; j < 3; ++j) l0 += kC[j] * kMass * std::sqrt(j + 1.0);
    g += l0 / (4.0 * kPi);
  }
  return g - fourier_tail(dim, {0, 0, 0}, cutoff);
}

}  // namespace phom_test
