#pragma once

#include <array>
#include <cstddef>
#include <cstdint>

namespace phi4 {

using Mode = std::array<int, 3>;

double norm2(const Mode& k);
int norm_inf(const Mode& k);

// Modes k in {-K..K}^3 stored row-major with k1 slowest. Physical grids have
// M points per dimension. Index of -k is size()-1-index(k), so the zero mode
// sits in the middle and the first half of the indices is a half-lattice.
class FrequencyLattice {
 public:
  FrequencyLattice(int K, int M);
  static FrequencyLattice minimal(int K) { return FrequencyLattice(K, 2 * K + 1); }

  int K() const { return K_; }
  int M() const { return M_; }
  int side() const { return 2 * K_ + 1; }
  std::size_t size() const { return size_; }

  bool contains(const Mode& k) const;
  std::size_t index(const Mode& k) const;
  Mode mode(std::size_t i) const;
  std::size_t conj_index(std::size_t i) const { return size_ - 1 - i; }
  std::size_t zero_index() const { return size_ / 2; }

  bool operator==(const FrequencyLattice& o) const { return K_ == o.K_ && M_ == o.M_; }
  bool operator!=(const FrequencyLattice& o) const { return !(*this == o); }

 private:
  int K_;
  int M_;
  std::size_t size_;
};

}  // namespace phi4
