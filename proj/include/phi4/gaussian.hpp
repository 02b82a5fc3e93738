#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

#include "phi4/dispersion.hpp"
#include "phi4/field.hpp"
#include "phi4/polynomial.hpp"
#include "phi4/rng.hpp"

namespace phi4 {

// Stationary Ornstein-Uhlenbeck free field, one complex mode per lattice
// point with X^(-k) = conj X^(k). Mode k of the half-lattice draws its normals
// from counter (sample, index(k), step); the zero mode is real.
class ModeOUEnsemble {
 public:
  ModeOUEnsemble(const NoiseSeed& seed, const FrequencyLattice& grid, const DispersionQ& Q, std::uint64_t sample,
                 double t0);

  const FourierField& field() const { return x_; }
  const FrequencyLattice& grid() const { return x_.grid(); }
  const DispersionQ& symbol() const { return Q_; }
  const std::vector<double>& rates() const { return *rate_; }
  double time() const { return t_; }
  std::uint32_t step() const { return step_; }
  std::uint64_t sample() const { return sample_; }
  const NoiseSeed& seed() const { return seed_; }

  // Exact OU transition over dt using the normals of the next step counter.
  void advance(double dt);

 private:
  NoiseSeed seed_;
  DispersionQ Q_;
  std::shared_ptr<const std::vector<double>> rate_;
  std::uint64_t sample_;
  std::uint32_t step_ = 0;
  double t_;
  FourierField x_;
};

ModeOUEnsemble sample_stationary(const NoiseSeed& seed, const FrequencyLattice& grid, const DispersionQ& Q,
                                 std::uint64_t sample = 0, double t0 = 0.0);
ModeOUEnsemble advance(const ModeOUEnsemble& ens, double dt);

// H_n(x; nu) with H_{n+1} = x H_n - n nu H_{n-1}.
double hermite(int n, double x, double nu);
Polynomial hermite_polynomial(int n, double nu);
// Pointwise H_n(f(x); nu).
std::vector<double> wick_power(const std::vector<double>& f_phys, int n, double nu);

// c_k = E[f^(k)(X)] / k! for X ~ N(0, nu), k = 0..deg f, so f = sum c_k H_k(.; nu).
std::vector<double> chaos_coefficients(const Polynomial& f, double nu);

// E f(X) for X ~ N(0, sigma2), exact for polynomials.
double gaussian_expectation(const Polynomial& f, double sigma2);
// 64-node Gauss-Hermite quadrature for general f.
double gaussian_expectation(const std::function<double(double)>& f, double sigma2);

// (2m-1)!! nu^m, the 2m-th moment of N(0, nu); odd moments vanish.
double gaussian_moment(int k, double nu);

}  // namespace phi4
