#include "phi4/field.hpp"

#include <algorithm>
#include <cmath>

#include "phi4/error.hpp"

namespace phi4 {

FourierField::FourierField(const FrequencyLattice& grid, bool hermitian)
    : grid_(grid), hermitian_(hermitian), c_(grid.size(), cplx(0.0, 0.0)) {}

FourierField FourierField::constant(const FrequencyLattice& grid, double c) {
  FourierField f(grid, true);
  f.c_[grid.zero_index()] = c;
  return f;
}

FourierField FourierField::single_mode(const FrequencyLattice& grid, const Mode& k, cplx amp) {
  if (!grid.contains(k)) fail(ErrorKind::domain, "mode outside lattice");
  const bool zero = k[0] == 0 && k[1] == 0 && k[2] == 0;
  FourierField f(grid, zero && amp.imag() == 0.0);
  f.at(k) = amp;
  return f;
}

FourierField FourierField::real_mode(const FrequencyLattice& grid, const Mode& k, cplx amp) {
  if (!grid.contains(k)) fail(ErrorKind::domain, "mode outside lattice");
  FourierField f(grid, true);
  const std::size_t i = grid.index(k);
  if (i == grid.zero_index()) {
    f.c_[i] = 2.0 * amp.real();
  } else {
    f.c_[i] = amp;
    f.c_[grid.conj_index(i)] = std::conj(amp);
  }
  return f;
}

void require_same_grid(const FourierField& a, const FourierField& b) {
  if (a.grid() != b.grid()) fail(ErrorKind::shape_mismatch, "fields live on different lattices");
}

FourierField& FourierField::operator+=(const FourierField& o) {
  require_same_grid(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += o.c_[i];
  hermitian_ = hermitian_ && o.hermitian_;
  return *this;
}

FourierField& FourierField::operator-=(const FourierField& o) {
  require_same_grid(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] -= o.c_[i];
  hermitian_ = hermitian_ && o.hermitian_;
  return *this;
}

FourierField& FourierField::operator*=(double s) {
  for (auto& x : c_) x *= s;
  return *this;
}

FourierField& FourierField::axpy(double s, const FourierField& o) {
  require_same_grid(*this, o);
  for (std::size_t i = 0; i < c_.size(); ++i) c_[i] += s * o.c_[i];
  hermitian_ = hermitian_ && o.hermitian_;
  return *this;
}

double FourierField::max_abs() const {
  double m = 0.0;
  for (const auto& x : c_) m = std::max(m, std::abs(x));
  return m;
}

double FourierField::l2_sq() const {
  double s = 0.0;
  for (const auto& x : c_) s += std::norm(x);
  return s;
}

double FourierField::hermitian_defect() const {
  double m = 0.0;
  for (std::size_t i = 0; i < c_.size(); ++i) m = std::max(m, std::abs(c_[grid_.conj_index(i)] - std::conj(c_[i])));
  return m;
}

void FourierField::symmetrize() {
  for (std::size_t i = 0; i <= grid_.zero_index(); ++i) {
    const std::size_t j = grid_.conj_index(i);
    const cplx avg = 0.5 * (c_[i] + std::conj(c_[j]));
    c_[i] = avg;
    c_[j] = std::conj(avg);
  }
  hermitian_ = true;
}

void FourierField::set_zero() { std::fill(c_.begin(), c_.end(), cplx(0.0, 0.0)); }

FourierField operator+(FourierField a, const FourierField& b) { return a += b; }
FourierField operator-(FourierField a, const FourierField& b) { return a -= b; }
FourierField operator*(double s, FourierField a) { return a *= s; }

double max_abs_diff(const FourierField& a, const FourierField& b) {
  require_same_grid(a, b);
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace phi4
