#pragma once

#include <array>

// Test-only oracle for the torus Green function, independent of the Ewald
// implementation path. The slowly convergent Fourier series of G is
// accelerated by subtracting three screened (massive) kernels whose periodic
// sums are exponentially convergent lattice sums of K0 (dim 2) or Yukawa
// (dim 3) kernels; the remaining Fourier tail decays like |k|^-8 and is
// summed directly up to the given cutoff.
namespace phom_test {

/// G(x) on the unit torus, dim in {2,3}, cutoff = Fourier tail cutoff per axis.
double fourier_G(int dim, const std::array<double, 3>& x, int cutoff);

/// Regular part R(x) = G(x) - Gamma(x) for x != 0 inside the unit cube.
double fourier_R(int dim, const std::array<double, 3>& x, int cutoff);

/// R(0) with the logarithmic/1-over-r limit taken analytically.
double fourier_R0(int dim, int cutoff);

}  // namespace phom_test
