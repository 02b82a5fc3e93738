#pragma once

#include <complex>
#include <vector>

#include "phi4/lattice.hpp"

namespace phi4 {

using cplx = std::complex<double>;

// Fourier coefficients f^(k) = int f(x) e^{-2 pi i k.x} dx on the truncated
// lattice. hermitian marks coefficients of a real field.
class FourierField {
 public:
  explicit FourierField(const FrequencyLattice& grid, bool hermitian = true);

  static FourierField constant(const FrequencyLattice& grid, double c);
  // amp * e_k; hermitian only when k = 0 and amp is real.
  static FourierField single_mode(const FrequencyLattice& grid, const Mode& k, cplx amp = 1.0);
  // amp e_k + conj(amp) e_{-k}, a real field.
  static FourierField real_mode(const FrequencyLattice& grid, const Mode& k, cplx amp = 1.0);

  const FrequencyLattice& grid() const { return grid_; }
  bool hermitian() const { return hermitian_; }
  void set_hermitian(bool h) { hermitian_ = h; }

  std::vector<cplx>& coeffs() { return c_; }
  const std::vector<cplx>& coeffs() const { return c_; }
  cplx& operator[](std::size_t i) { return c_[i]; }
  const cplx& operator[](std::size_t i) const { return c_[i]; }
  cplx& at(const Mode& k) { return c_[grid_.index(k)]; }
  const cplx& at(const Mode& k) const { return c_[grid_.index(k)]; }
  std::size_t size() const { return c_.size(); }

  FourierField& operator+=(const FourierField& o);
  FourierField& operator-=(const FourierField& o);
  FourierField& operator*=(double s);
  // this += s * o
  FourierField& axpy(double s, const FourierField& o);

  // max_k |f^(k)|
  double max_abs() const;
  // sum_k |f^(k)|^2, the mean square of the physical field.
  double l2_sq() const;
  // max_k |f^(-k) - conj f^(k)|
  double hermitian_defect() const;
  // Restores exact conjugate symmetry by averaging f^(k) and conj f^(-k).
  void symmetrize();
  void set_zero();

 private:
  FrequencyLattice grid_;
  bool hermitian_;
  std::vector<cplx> c_;
};

FourierField operator+(FourierField a, const FourierField& b);
FourierField operator-(FourierField a, const FourierField& b);
FourierField operator*(double s, FourierField a);

void require_same_grid(const FourierField& a, const FourierField& b);

// max_k |a^(k) - b^(k)|
double max_abs_diff(const FourierField& a, const FourierField& b);

}  // namespace phi4
