#include "phom/torus_green.hpp"

#include <cmath>
#include <complex>
#include <numbers>

namespace phom {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

// Exponential integral E1 for x > 0: series for x <= 1, modified Lentz
// continued fraction beyond.
double expint_e1(double x) {
  if (!(x > 0)) throw domain_error("E1 requires a positive argument");
  if (x <= 1.0) {
    double sum = 0, term = 1;
    for (int k = 1; k <= 40; ++k) {
      term *= -x / k;
      const double add = -term / k;
      sum += add;
      if (std::abs(add) < 1e-18 * std::abs(sum)) break;
    }
    return -kEulerGamma - std::log(x) + sum;
  }
  if (x > 700.0) return 0.0;
  // E1(x) = exp(-x) * cf, cf = 1/(x+1- 1^2/(x+3- 2^2/(x+5- ...))).
  double b = x + 1.0;
  double c = 1e308, d = 1.0 / b, h = d;
  for (int i = 1; i <= 200; ++i) {
    const double a = -static_cast<double>(i) * i;
    b += 2.0;
    d = 1.0 / (a * d + b);
    c = b + a / c;
    const double del = c * d;
    h *= del;
    if (std::abs(del - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x);
}

// E1(z) + log(z), smooth through z = 0 (value -EulerGamma).
double expint_e1_plus_log(double z) {
  if (z < 0) throw domain_error("E1 requires a nonnegative argument");
  if (z <= 1.0) {
    double sum = 0, term = 1;
    for (int k = 1; k <= 40; ++k) {
      term *= -z / k;
      const double add = -term / k;
      sum += add;
      if (std::abs(add) < 1e-18) break;
    }
    return -kEulerGamma + sum;
  }
  return expint_e1(z) + std::log(z);
}

double dot3(const double* a, const double* b, int dim) {
  double s = 0;
  for (int i = 0; i < dim; ++i) s += a[i] * b[i];
  return s;
}

}  // namespace

TorusGreen::TorusGreen(int dim, double splitting_width, int real_shells,
                       int fourier_cutoff)
    : dim_(dim), width_(splitting_width), shells_(real_shells),
      fourier_cutoff_(fourier_cutoff) {
  if (dim != 2 && dim != 3) throw validation_error("dim must be 2 or 3");
  if (!(splitting_width > 0)) throw validation_error("splitting width must be positive");
  if (real_shells < 1 || fourier_cutoff < 1)
    throw validation_error("cutoffs must be at least 1");
  s0_ = width_ * width_ / (4.0 * kPi);

  // Real-space images, pruned by the worst-case Gaussian factor over the
  // evaluation range |x|_inf <= 3/4.
  const double reach = 0.75 * std::sqrt(static_cast<double>(dim_));
  const int S = shells_;
  for (int i = -S; i <= S; ++i) {
    for (int j = -S; j <= S; ++j) {
      if (dim_ == 2) {
        if (i == 0 && j == 0) continue;
        const double dmin = std::max(0.0, std::hypot(i, j) - reach);
        if (dmin * dmin / (4.0 * s0_) > 46.0) continue;
        lattice_.push_back({static_cast<double>(i), static_cast<double>(j), 0.0});
      } else {
        for (int l = -S; l <= S; ++l) {
          if (i == 0 && j == 0 && l == 0) continue;
          const double dmin =
              std::max(0.0, std::sqrt(double(i) * i + double(j) * j + double(l) * l) - reach);
          if (dmin * dmin / (4.0 * s0_) > 46.0) continue;
          lattice_.push_back({static_cast<double>(i), static_cast<double>(j),
                              static_cast<double>(l)});
        }
      }
    }
  }

  // Damped Fourier modes with weight exp(-4 pi^2 |k|^2 s0) / (4 pi^2 |k|^2).
  const int K = fourier_cutoff_;
  auto push_mode = [&](int kx, int ky, int kz) {
    const double k2 = double(kx) * kx + double(ky) * ky + double(kz) * kz;
    if (k2 == 0) return;
    const double a = 4.0 * kPi * kPi * k2;
    const double w = std::exp(-a * s0_) / a;
    if (w < 1e-20) return;
    modes_.push_back({{kx, ky, kz}, w});
    mode_kmax_ = std::max({mode_kmax_, std::abs(kx), std::abs(ky), std::abs(kz)});
  };
  for (int i = -K; i <= K; ++i)
    for (int j = -K; j <= K; ++j) {
      if (dim_ == 2) push_mode(i, j, 0);
      else
        for (int l = -K; l <= K; ++l) push_mode(i, j, l);
    }

  // R(0): the self term of the screened free-space kernel is analytic.
  double lat = 0;
  if (dim_ == 2) {
    for (const auto& n : lattice_)
      lat += expint_e1(dot3(n.data(), n.data(), 2) / (4.0 * s0_)) / (4.0 * kPi);
  } else {
    for (const auto& n : lattice_) {
      const double r = std::sqrt(dot3(n.data(), n.data(), 3));
      lat += std::erfc(r / (2.0 * std::sqrt(s0_))) / (4.0 * kPi * r);
    }
  }
  double four = 0;
  for (const auto& m : modes_) four += m.w;
  if (dim_ == 2) {
    r0_ = s0_ - (-kEulerGamma + std::log(4.0 * s0_)) / (4.0 * kPi) - lat - four;
  } else {
    r0_ = s0_ + 1.0 / (4.0 * kPi * std::sqrt(kPi * s0_)) - lat - four;
  }
}

double TorusGreen::gamma_free(int dim, double r) {
  if (!(r > 0)) throw domain_error("Gamma is singular at the origin");
  return dim == 2 ? std::log(r) / (2.0 * kPi) : -1.0 / (4.0 * kPi * r);
}

void TorusGreen::fourier_accumulate(const double* x, double* value, double* grad) const {
  using cplx = std::complex<double>;
  // Powers of exp(2 pi i x_a) per axis; modes then combine by index lookup.
  std::array<std::vector<cplx>, 3> pw;
  for (int a = 0; a < dim_; ++a) {
    pw[a].resize(mode_kmax_ + 1);
    pw[a][0] = 1.0;
    const cplx e(std::cos(2.0 * kPi * x[a]), std::sin(2.0 * kPi * x[a]));
    for (int p = 1; p <= mode_kmax_; ++p) pw[a][p] = pw[a][p - 1] * e;
  }
  auto axis = [&](int a, int k) -> cplx {
    return k >= 0 ? pw[a][k] : std::conj(pw[a][-k]);
  };
  for (const auto& m : modes_) {
    cplx c = axis(0, m.k[0]) * axis(1, m.k[1]);
    if (dim_ == 3) c *= axis(2, m.k[2]);
    if (value) *value -= m.w * c.real();
    if (grad) {
      const double s = m.w * c.imag() * 2.0 * kPi;
      for (int a = 0; a < dim_; ++a) grad[a] += s * m.k[a];
    }
  }
}

double TorusGreen::eval_R_raw(const double* x) const {
  double r2 = dot3(x, x, dim_);
  double v = s0_;
  if (dim_ == 2) {
    // Merged n = 0 term minus Gamma: smooth through the origin.
    v -= (expint_e1_plus_log(r2 / (4.0 * s0_)) + std::log(4.0 * s0_)) / (4.0 * kPi);
    for (const auto& n : lattice_) {
      const double dx = x[0] - n[0], dy = x[1] - n[1];
      const double q = (dx * dx + dy * dy) / (4.0 * s0_);
      if (q < 46.0) v -= expint_e1(q) / (4.0 * kPi);
    }
  } else {
    const double r = std::sqrt(r2);
    const double a = 2.0 * std::sqrt(s0_);
    if (r > 1e-6) {
      v += std::erf(r / a) / (4.0 * kPi * r);
    } else {
      const double u = r / a;
      v += (1.0 - u * u / 3.0 + u * u * u * u / 10.0) / (2.0 * a * kPi * std::sqrt(kPi));
    }
    for (const auto& n : lattice_) {
      const double dx = x[0] - n[0], dy = x[1] - n[1], dz = x[2] - n[2];
      const double rr = std::sqrt(dx * dx + dy * dy + dz * dz);
      if (rr / a < 7.0) v -= std::erfc(rr / a) / (4.0 * kPi * rr);
    }
  }
  fourier_accumulate(x, &v, nullptr);
  return v;
}

double TorusGreen::eval_R(const double* x) const {
  for (int a = 0; a < dim_; ++a)
    if (std::abs(x[a]) > 0.5 + 1e-12)
      throw domain_error("R is evaluated on the closed unit cube only; "
                         "its periodic extension is not smooth across the faces");
  return eval_R_raw(x);
}

void TorusGreen::grad_R_raw(const double* x, double* g) const {
  const double r2 = dot3(x, x, dim_);
  for (int a = 0; a < dim_; ++a) g[a] = 0;
  if (dim_ == 2) {
    const double z = r2 / (4.0 * s0_);
    double f;  // (1 - exp(-z)) / r^2, smooth at 0
    if (z > 1e-4) f = -std::expm1(-z) / r2;
    else f = (1.0 - z / 2.0 + z * z / 6.0 - z * z * z / 24.0) / (4.0 * s0_);
    for (int a = 0; a < 2; ++a) g[a] -= x[a] * f / (2.0 * kPi);
    for (const auto& n : lattice_) {
      const double dx = x[0] - n[0], dy = x[1] - n[1];
      const double rr2 = dx * dx + dy * dy;
      const double q = rr2 / (4.0 * s0_);
      if (q > 46.0) continue;
      const double s = std::exp(-q) / (2.0 * kPi * rr2);
      g[0] += dx * s;
      g[1] += dy * s;
    }
  } else {
    const double a3 = 2.0 * std::sqrt(s0_);
    const double r = std::sqrt(r2);
    // d/dr of erf(r/a)/r, odd and smooth through the origin.
    double fp_over_r;
    if (r > 1e-5) {
      const double u = r / a3;
      const double fp = (2.0 / std::sqrt(kPi)) * std::exp(-u * u) * u - std::erf(u);
      fp_over_r = fp / (r2 * r);
    } else {
      fp_over_r = (2.0 / std::sqrt(kPi)) * (-2.0 / (3.0 * a3 * a3 * a3));
    }
    for (int a = 0; a < 3; ++a) g[a] += x[a] * fp_over_r / (4.0 * kPi);
    for (const auto& n : lattice_) {
      const double d[3] = {x[0] - n[0], x[1] - n[1], x[2] - n[2]};
      const double rr = std::sqrt(dot3(d, d, 3));
      const double u = rr / a3;
      if (u > 7.0) continue;
      const double s = (std::erfc(u) + (2.0 / std::sqrt(kPi)) * u * std::exp(-u * u)) /
                       (4.0 * kPi * rr * rr * rr);
      for (int a = 0; a < 3; ++a) g[a] += d[a] * s;
    }
  }
  double gf[3] = {0, 0, 0};
  fourier_accumulate(x, nullptr, gf);
  for (int a = 0; a < dim_; ++a) g[a] += gf[a];
}

double TorusGreen::eval_G(const double* x) const {
  double xw[3] = {0, 0, 0};
  double r2 = 0;
  for (int a = 0; a < dim_; ++a) {
    xw[a] = x[a] - std::round(x[a]);
    r2 += xw[a] * xw[a];
  }
  if (r2 < 1e-28) throw domain_error("G is singular at lattice points");
  return eval_R_raw(xw) + gamma_free(dim_, std::sqrt(r2));
}

void TorusGreen::eval_G_with_grad(const double* x, double* value, double* grad) const {
  double xw[3] = {0, 0, 0};
  double r2 = 0;
  for (int a = 0; a < dim_; ++a) {
    xw[a] = x[a] - std::round(x[a]);
    r2 += xw[a] * xw[a];
  }
  if (r2 < 1e-28) throw domain_error("G is singular at lattice points");
  double v = s0_;
  for (int a = 0; a < dim_; ++a) grad[a] = 0;
  if (dim_ == 2) {
    // Screened kernel and its gradient, direct form (singular at 0 is fine
    // here since the wrapped point is off-lattice).
    const double q0 = r2 / (4.0 * s0_);
    v -= expint_e1(q0) / (4.0 * kPi);
    const double s = std::exp(-q0) / (2.0 * kPi * r2);
    grad[0] += xw[0] * s;
    grad[1] += xw[1] * s;
    for (const auto& n : lattice_) {
      const double dx = xw[0] - n[0], dy = xw[1] - n[1];
      const double rr2 = dx * dx + dy * dy;
      const double q = rr2 / (4.0 * s0_);
      if (q > 46.0) continue;
      v -= expint_e1(q) / (4.0 * kPi);
      const double sg = std::exp(-q) / (2.0 * kPi * rr2);
      grad[0] += dx * sg;
      grad[1] += dy * sg;
    }
  } else {
    const double a3 = 2.0 * std::sqrt(s0_);
    const double r = std::sqrt(r2);
    v -= std::erfc(r / a3) / (4.0 * kPi * r);
    {
      const double u = r / a3;
      const double sg = (std::erfc(u) + (2.0 / std::sqrt(kPi)) * u * std::exp(-u * u)) /
                        (4.0 * kPi * r2 * r);
      for (int a = 0; a < 3; ++a) grad[a] += xw[a] * sg;
    }
    for (const auto& n : lattice_) {
      const double d[3] = {xw[0] - n[0], xw[1] - n[1], xw[2] - n[2]};
      const double rr = std::sqrt(dot3(d, d, 3));
      const double u = rr / a3;
      if (u > 7.0) continue;
      v -= std::erfc(u) / (4.0 * kPi * rr);
      const double sg = (std::erfc(u) + (2.0 / std::sqrt(kPi)) * u * std::exp(-u * u)) /
                        (4.0 * kPi * rr * rr * rr);
      for (int a = 0; a < 3; ++a) grad[a] += d[a] * sg;
    }
  }
  fourier_accumulate(xw, &v, grad);
  *value = v;
}

void TorusGreen::eval_gradG(const double* x, double* g) const {
  double xw[3] = {0, 0, 0};
  double r2 = 0;
  for (int a = 0; a < dim_; ++a) {
    xw[a] = x[a] - std::round(x[a]);
    r2 += xw[a] * xw[a];
  }
  if (r2 < 1e-28) throw domain_error("G is singular at lattice points");
  grad_R_raw(xw, g);
  if (dim_ == 2) {
    for (int a = 0; a < 2; ++a) g[a] += xw[a] / (2.0 * kPi * r2);
  } else {
    const double r3 = r2 * std::sqrt(r2);
    for (int a = 0; a < 3; ++a) g[a] += xw[a] / (4.0 * kPi * r3);
  }
}

RExpansionFit TorusGreen::check_R_expansion(const std::vector<double>& radii) const {
  if (radii.size() < 2) throw validation_error("need >= 2 radii for the expansion fit");
  for (double r : radii)
    if (!(r > 0 && r <= 0.2)) throw validation_error("radii must lie in (0, 0.2]");

  // Fixed direction set, axis-avoiding.
  const int n_dir = dim_ == 2 ? 8 : 26;
  std::vector<std::array<double, 3>> dirs;
  if (dim_ == 2) {
    for (int i = 0; i < n_dir; ++i) {
      const double th = 2.0 * kPi * (i + 0.373) / n_dir;
      dirs.push_back({std::cos(th), std::sin(th), 0.0});
    }
  } else {
    for (int i = -1; i <= 1; ++i)
      for (int j = -1; j <= 1; ++j)
        for (int l = -1; l <= 1; ++l) {
          if (i == 0 && j == 0 && l == 0) continue;
          const double nn = std::sqrt(double(i * i + j * j + l * l));
          dirs.push_back({i / nn, j / nn, l / nn});
        }
  }

  RExpansionFit fit;
  fit.r0 = r0_;
  std::vector<double> mean_dev(radii.size(), 0.0);
  for (std::size_t ir = 0; ir < radii.size(); ++ir) {
    const double r = radii[ir];
    double ss = 0, mean = 0;
    for (const auto& d : dirs) {
      double x[3] = {r * d[0], r * d[1], r * d[2]};
      const double dev = eval_R_raw(x) - r0_;
      mean += dev;
      const double res = dev + r * r / (2.0 * dim_);
      ss += res * res;
    }
    mean_dev[ir] = mean / dirs.size();
    fit.rows.push_back({r, std::sqrt(ss / dirs.size())});
  }

  // Least-squares slope of log(rms residual) vs log(radius).
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int m = 0;
  for (const auto& row : fit.rows) {
    if (row.rms_residual <= 0) continue;
    const double lx = std::log(row.radius), ly = std::log(row.rms_residual);
    sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
    ++m;
  }
  if (m >= 2) fit.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);

  // Fit mean deviation ~ c2 r^2 + c4 r^4 for the quadratic coefficient.
  double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
  for (std::size_t ir = 0; ir < radii.size(); ++ir) {
    const double r2 = radii[ir] * radii[ir], r4 = r2 * r2;
    a11 += r2 * r2; a12 += r2 * r4; a22 += r4 * r4;
    b1 += r2 * mean_dev[ir]; b2 += r4 * mean_dev[ir];
  }
  const double det = a11 * a22 - a12 * a12;
  fit.quad_coeff = det != 0 ? (a22 * b1 - a12 * b2) / det : 0.0;
  return fit;
}

double GreenEta::log_const() const {
  return base_->dim() == 2 ? std::log(eta_) / (2.0 * kPi) : 0.0;
}

double GreenEta::smooth_kernel(const Vec2& diff) const {
  const double z[3] = {eta_ * diff.x(), eta_ * diff.y(), 0.0};
  const double scale = base_->dim() == 2 ? 1.0 : eta_;
  return log_const() + scale * base_->eval_R_raw(z);
}

Vec2 GreenEta::grad_smooth_kernel(const Vec2& diff) const {
  const double z[3] = {eta_ * diff.x(), eta_ * diff.y(), 0.0};
  double g[3] = {0, 0, 0};
  base_->grad_R_raw(z, g);
  const double scale = std::pow(eta_, base_->dim() - 1);
  return Vec2(scale * g[0], scale * g[1]);
}

double GreenEta::g_eta(const Vec2& diff) const {
  const double z[3] = {eta_ * diff.x(), eta_ * diff.y(), 0.0};
  const double scale = base_->dim() == 2 ? 1.0 : eta_;
  return scale * base_->eval_G(z);
}

Vec2 GreenEta::grad_g_eta(const Vec2& diff) const {
  const double z[3] = {eta_ * diff.x(), eta_ * diff.y(), 0.0};
  double g[3] = {0, 0, 0};
  base_->eval_gradG(z, g);
  const double scale = std::pow(eta_, base_->dim() - 1);
  return Vec2(scale * g[0], scale * g[1]);
}

void GreenEta::g_eta_with_grad(const Vec2& diff, double* value, Vec2* grad) const {
  const double z[3] = {eta_ * diff.x(), eta_ * diff.y(), 0.0};
  double g[3] = {0, 0, 0};
  base_->eval_G_with_grad(z, value, g);
  if (base_->dim() == 3) *value *= eta_;
  const double scale = std::pow(eta_, base_->dim() - 1);
  *grad = Vec2(scale * g[0], scale * g[1]);
}

}  // namespace phom
