#pragma once

#include <vector>

namespace phi4 {

// Dense real polynomial sum_i c[i] x^i.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> c);
  static Polynomial monomial(int n, double a = 1.0);

  int degree() const;
  const std::vector<double>& coeffs() const { return c_; }
  double coeff(int i) const { return i >= 0 && i < int(c_.size()) ? c_[std::size_t(i)] : 0.0; }

  double operator()(double x) const;
  Polynomial derivative(int k = 1) const;
  // x -> p(a x)
  Polynomial scaled(double a) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(double s);

 private:
  void trim();
  std::vector<double> c_;
};

Polynomial operator+(Polynomial a, const Polynomial& b);
Polynomial operator-(Polynomial a, const Polynomial& b);
Polynomial operator*(const Polynomial& a, const Polynomial& b);
Polynomial operator*(double s, Polynomial a);

}  // namespace phi4
