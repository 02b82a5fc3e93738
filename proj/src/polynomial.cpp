#include "phi4/polynomial.hpp"

#include <cmath>

namespace phi4 {

Polynomial::Polynomial(std::vector<double> c) : c_(std::move(c)) { trim(); }

Polynomial Polynomial::monomial(int n, double a) {
  std::vector<double> c(std::size_t(n) + 1, 0.0);
  c[std::size_t(n)] = a;
  return Polynomial(std::move(c));
}

void Polynomial::trim() {
  while (!c_.empty() && c_.back() == 0.0) c_.pop_back();
}

int Polynomial::degree() const { return c_.empty() ? -1 : int(c_.size()) - 1; }

double Polynomial::operator()(double x) const {
  double acc = 0.0;
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
  return acc;
}

Polynomial Polynomial::derivative(int k) const {
  if (k <= 0) return *this;
  if (int(c_.size()) <= k) return Polynomial();
  std::vector<double> d(c_.size() - std::size_t(k));
  for (std::size_t i = 0; i < d.size(); ++i) {
    double f = 1.0;
    for (int j = 0; j < k; ++j) f *= double(i + std::size_t(k) - std::size_t(j));
    d[i] = c_[i + std::size_t(k)] * f;
  }
  return Polynomial(std::move(d));
}

Polynomial Polynomial::scaled(double a) const {
  std::vector<double> d(c_);
  double p = 1.0;
  for (auto& x : d) {
    x *= p;
    p *= a;
  }
  return Polynomial(std::move(d));
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size(), 0.0);
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

Polynomial& Polynomial::operator*=(double s) {
  for (auto& x : c_) x *= s;
  trim();
  return *this;
}

Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
Polynomial operator*(double s, Polynomial a) { return a *= s; }

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  if (a.degree() < 0 || b.degree() < 0) return Polynomial();
  std::vector<double> c(a.coeffs().size() + b.coeffs().size() - 1, 0.0);
  for (std::size_t i = 0; i < a.coeffs().size(); ++i)
    for (std::size_t j = 0; j < b.coeffs().size(); ++j) c[i + j] += a.coeffs()[i] * b.coeffs()[j];
  return Polynomial(std::move(c));
}

}  // namespace phi4
