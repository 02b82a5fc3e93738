#include "phi4/potential.hpp"

#include "phi4/error.hpp"

namespace phi4 {

Potential::Potential(std::vector<double> even_coeffs) : v_(std::move(even_coeffs)) {
  while (!v_.empty() && v_.back() == 0.0) v_.pop_back();
  n_ = int(v_.size());
  if (n_ < 2) fail(ErrorKind::domain, "potential must be an even polynomial of degree >= 4");
  std::vector<double> c(std::size_t(2 * n_) + 1, 0.0);
  for (int j = 1; j <= n_; ++j) c[std::size_t(2 * j)] = v_[std::size_t(j - 1)];
  p_ = Polynomial(std::move(c));
}

Potential Potential::zero() { return Potential(); }

}  // namespace phi4
