#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>

#include "phi4/field.hpp"
#include "phi4/lattice.hpp"
#include "phi4/snapshot.hpp"
#include "phi4/spectral.hpp"
#include "phi4/error.hpp"

using namespace phi4;

namespace {

FourierField random_field(const FrequencyLattice& grid, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  FourierField f(grid);
  for (auto& c : f.coeffs()) c = cplx(nd(rng), nd(rng));
  f.symmetrize();
  return f;
}

}  // namespace

TEST_CASE("lattice index, mode and conjugate agree") {
  const FrequencyLattice g = FrequencyLattice::minimal(3);
  CHECK(g.size() == 343);
  CHECK(g.mode(g.zero_index()) == Mode{0, 0, 0});
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Mode k = g.mode(i);
    CHECK(g.index(k) == i);
    CHECK(g.mode(g.conj_index(i)) == Mode{-k[0], -k[1], -k[2]});
  }
  CHECK_FALSE(g.contains({4, 0, 0}));
}

TEST_CASE("padded grid sizes are smooth and alias free") {
  CHECK(fft_size_at_least(11) == 12);
  CHECK(fft_size_at_least(13) == 14);
  for (int K : {1, 4, 8, 16})
    for (int d : {2, 3, 5}) {
      const int M = padded_size(K, d);
      CHECK(M >= (d + 1) * K + 1);
    }
}

TEST_CASE("physical round trip is the identity on the lattice") {
  std::mt19937_64 rng(1);
  const FrequencyLattice g = FrequencyLattice::minimal(4);
  const FourierField f = random_field(g, rng);
  for (int M : {9, 12, 20}) CHECK(max_abs_diff(from_physical(to_physical(f, M), M, g), f) < 1e-12);
}

TEST_CASE("Galerkin product matches direct convolution") {
  std::mt19937_64 rng(2);
  const FrequencyLattice g = FrequencyLattice::minimal(3);
  const FourierField f = random_field(g, rng), h = random_field(g, rng);
  FourierField want(g);
  for (std::size_t i = 0; i < g.size(); ++i)
    for (std::size_t j = 0; j < g.size(); ++j) {
      const Mode a = g.mode(i), b = g.mode(j);
      const Mode s{a[0] + b[0], a[1] + b[1], a[2] + b[2]};
      if (g.contains(s)) want.at(s) += f[i] * h[j];
    }
  CHECK(max_abs_diff(product(f, h), want) < 1e-11);
}

TEST_CASE("single modes multiply to the sum mode") {
  const FrequencyLattice g = FrequencyLattice::minimal(2);
  const FourierField p = product(FourierField::single_mode(g, {1, 0, 0}), FourierField::single_mode(g, {0, 1, -1}));
  CHECK(std::abs(p.at({1, 1, -1}) - cplx(1.0)) < 1e-13);
  CHECK(p.l2_sq() == doctest::Approx(1.0));
}

TEST_CASE("snapshot round trip and checksum") {
  std::mt19937_64 rng(3);
  const FrequencyLattice g = FrequencyLattice::minimal(2);
  const FourierField f = random_field(g, rng);
  const auto bytes = encode_snapshot(f);
  CHECK(max_abs_diff(decode_snapshot(bytes), f) == 0.0);
  auto truncated = bytes;
  truncated.pop_back();
  CHECK_THROWS_AS(decode_snapshot(truncated), Error);
  const std::string path = (std::filesystem::temp_directory_path() / "phi4_unit_snapshot.fld").string();
  const std::string sha = write_snapshot(path, f);
  CHECK(max_abs_diff(read_snapshot(path, sha), f) == 0.0);
  {
    std::fstream io(path, std::ios::in | std::ios::out | std::ios::binary);
    io.seekp(std::streamoff(bytes.size() / 2));
    io.put('\x55');
  }
  try {
    (void)read_snapshot(path, sha);
    FAIL("corruption not detected");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::checksum);
  }
  CHECK(sha256_hex(std::string("abc")) == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}
