#pragma once

#include <functional>
#include <vector>

#include "phi4/dispersion.hpp"
#include "phi4/field.hpp"

namespace phi4 {

// Physical samples f(m/M) on an M^3 grid, index (m1*M + m2)*M + m3.
using RealGrid = std::vector<double>;
using ComplexGrid = std::vector<cplx>;

// Smallest 2,3,5,7-smooth integer >= n.
int fft_size_at_least(int n);
// Grid size on which a degree-d polynomial of fields supported in |k|_inf <= K
// is alias-free on the lattice: M >= (d+1)K + 1.
int padded_size(int K, int degree);

RealGrid to_physical(const FourierField& f, int M);
ComplexGrid to_physical_complex(const FourierField& f, int M);
// Transform and project onto |k|_inf <= K.
FourierField from_physical(const RealGrid& g, int M, const FrequencyLattice& grid);
FourierField from_physical_complex(const ComplexGrid& g, int M, const FrequencyLattice& grid);

// Transforms on the lattice's own M^3 grid.
FourierField forward(const RealGrid& g, const FrequencyLattice& grid);
RealGrid inverse(const FourierField& f);

// Galerkin product: pointwise product on a padded grid, projected back.
FourierField product(const FourierField& f, const FourierField& g, int degree_hint = 2);
// Pointwise map x -> fn(x) of a real field, where fn is a polynomial of the
// given degree (the padding makes the projection exact).
FourierField map_pointwise(const FourierField& f, const std::function<double(double)>& fn, int degree);

// Diagonal propagator e^{t(L_eps - 1)} with the per-mode rates <k>_eps^2.
class Propagator {
 public:
  Propagator(const DispersionQ& Q, const FrequencyLattice& grid);

  const std::vector<double>& rates() const { return rate_; }
  const FrequencyLattice& grid() const { return grid_; }

  FourierField apply(const FourierField& f, double t) const;
  // int_0^dt e^{-(dt-r) a} dr f = (1 - e^{-dt a})/a f per mode.
  FourierField phi1(const FourierField& f, double dt) const;
  // e^{-dt a} x + (1 - e^{-dt a})/a n, mode by mode, into x.
  void exp_euler(FourierField& x, const FourierField& n, double dt) const;

 private:
  FrequencyLattice grid_;
  std::vector<double> rate_;
};

FourierField apply_semigroup(const FourierField& f, const DispersionQ& Q, double t);

}  // namespace phi4
