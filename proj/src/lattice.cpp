#include "phi4/lattice.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>

#include "phi4/error.hpp"

namespace phi4 {

double norm2(const Mode& k) {
  return std::sqrt(double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2]);
}

int norm_inf(const Mode& k) {
  return std::max({std::abs(k[0]), std::abs(k[1]), std::abs(k[2])});
}

FrequencyLattice::FrequencyLattice(int K, int M) : K_(K), M_(M) {
  if (K < 0) fail(ErrorKind::domain, "negative cutoff K=" + std::to_string(K));
  if (M < 2 * K + 1)
    fail(ErrorKind::domain, "grid M=" + std::to_string(M) + " below 2K+1 for K=" + std::to_string(K));
  const std::size_t n = std::size_t(2 * K + 1);
  size_ = n * n * n;
}

bool FrequencyLattice::contains(const Mode& k) const { return norm_inf(k) <= K_; }

std::size_t FrequencyLattice::index(const Mode& k) const {
  const std::size_t n = std::size_t(side());
  return (std::size_t(k[0] + K_) * n + std::size_t(k[1] + K_)) * n + std::size_t(k[2] + K_);
}

Mode FrequencyLattice::mode(std::size_t i) const {
  const std::size_t n = std::size_t(side());
  const int c = int(i % n) - K_;
  i /= n;
  const int b = int(i % n) - K_;
  const int a = int(i / n) - K_;
  return {a, b, c};
}

}  // namespace phi4
