#pragma once

// Data-parallel kernels in serial and OpenMP form. The serial versions are the
// references for tests; both versions reduce in the same fixed order, so the
// OpenMP results do not depend on the thread count.

#include <cstddef>
#include <vector>

#include "phi4/dispersion.hpp"
#include "phi4/polynomial.hpp"

namespace phi4::kernels {

// <l>^2 on the box |l|_inf <= K in FrequencyLattice::minimal(K) order. Legs
// are restricted to |l_j|_inf <= leg_cut (the support of a truncated free
// field); the total momentum ranges over the whole box.
struct BoxRates {
  int K = 0;
  int leg_cut = 0;
  std::vector<double> a;
  static BoxRates from_symbol(const DispersionQ& Q, int K, int leg_cut = -1);
};

// Mean of I(A) o A for A = X^<>p up to the factor p!/2^p:
//   sum_{l_1..l_p, l = sum l_j all in the box} k(<l>^2, S) / prod <l_j>^2,
// all legs within leg_cut, S = sum <l_j>^2, with k(A, S) = 1/(A+S) for dt = 0 and the exponential
// left-point version phi(A) e^{-dt S} / (1 - e^{-dt(A+S)}) for dt > 0.
double resonance_kernel(double A, double S, double dt);
double wick_resonance_direct_serial(const BoxRates& r, int p, double dt);
double wick_resonance_direct_omp(const BoxRates& r, int p, double dt);

// Same sum by DCT-I convolution: Laplace nodes for dt = 0, geometric series in
// the step index for dt > 0.
double wick_resonance_fft_serial(const BoxRates& r, int p, double dt);
double wick_resonance_fft_omp(const BoxRates& r, int p, double dt);

// Pointwise polynomial evaluation out[i] = P(in[i]).
void polynomial_map_serial(const Polynomial& P, const double* in, double* out, std::size_t n);
void polynomial_map_omp(const Polynomial& P, const double* in, double* out, std::size_t n);

}  // namespace phi4::kernels
