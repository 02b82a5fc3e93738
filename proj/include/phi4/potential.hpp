#pragma once

#include <vector>

#include "phi4/polynomial.hpp"

namespace phi4 {

// Even polynomial V(x) = sum_j v_{2j} x^{2j} given by (v_2, v_4, ..., v_{2n}).
class Potential {
 public:
  // Requires degree 2n >= 4 with a nonzero leading coefficient.
  explicit Potential(std::vector<double> even_coeffs);
  // V = 0, used by linear runs.
  static Potential zero();
  // V = x^4 / 4 (lambda = 1, a_1 = 1).
  static Potential quartic() { return Potential({0.0, 0.25}); }

  bool is_zero() const { return n_ == 0; }
  int n() const { return n_; }
  int degree() const { return 2 * n_; }
  const std::vector<double>& even_coeffs() const { return v_; }
  const Polynomial& poly() const { return p_; }
  Polynomial derivative(int k) const { return p_.derivative(k); }

 private:
  Potential() = default;
  std::vector<double> v_;
  Polynomial p_;
  int n_ = 0;
};

}  // namespace phi4
