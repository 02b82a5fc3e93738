#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "phi4/besov.hpp"
#include "phi4/dispersion.hpp"
#include "phi4/spectral.hpp"

using namespace phi4;
constexpr double pi = std::numbers::pi;

TEST_CASE("bracket at eps = 0 and eps > 0") {
  CHECK(bracket_eps(DispersionQ::bilaplacian(1.0), {1, 0, 0}) == doctest::Approx(6.362265131567328).epsilon(1e-12));
  const double eps = 0.1, r = 2.0 * pi * std::sqrt(5.0);
  CHECK(DispersionQ::bilaplacian(2.0, eps).bracket_sq(std::sqrt(5.0)) ==
        doctest::Approx(1.0 + r * r + 2.0 * eps * eps * std::pow(r, 4)));
  const auto poly = DispersionQ::polynomial({1.0, 2.0}, eps);
  CHECK(poly.bracket_sq(1.3) == doctest::Approx(DispersionQ::bilaplacian(2.0, eps).bracket_sq(1.3)));
}

TEST_CASE("symbol validation") {
  const ValidationReport ok = validate_symbol(DispersionQ::bilaplacian(1.0), 1e4, 200);
  CHECK(ok.pass());
  CHECK(ok.eta_hat == doctest::Approx(1.0).epsilon(0.05));
  const ValidationReport bad = validate_symbol(DispersionQ::laplacian(), 1e4, 200);
  CHECK_FALSE(bad.growth.pass);
  CHECK_THROWS(DispersionQ::from_family("nonsense", {}, 0.0));
}

TEST_CASE("dyadic partition sums to one") {
  for (double r = 0.0; r < 200.0; r += 0.137) {
    double s = 0.0;
    for (int j = -1; j < 12; ++j) s += DyadicPartition::weight(j, r);
    CHECK(s == doctest::Approx(1.0).epsilon(1e-14));
  }
  CHECK(DyadicPartition::chi(0.7) == 0.0);
  CHECK(DyadicPartition::chi(2.7) == 0.0);
  CHECK(DyadicPartition(16).jmax() == 6);
}

TEST_CASE("blocks reconstruct the field and paraproducts add up") {
  std::mt19937_64 rng(7);
  std::normal_distribution<double> nd;
  const FrequencyLattice g = FrequencyLattice::minimal(6);
  FourierField f(g), h(g);
  for (std::size_t i = 0; i < g.size(); ++i) f[i] = cplx(nd(rng), nd(rng)), h[i] = cplx(nd(rng), nd(rng));
  f.symmetrize();
  h.symmetrize();
  FourierField sum(g);
  for (int j = -1; j < DyadicPartition(6).nblocks() - 1; ++j) sum += block(f, j);
  CHECK(max_abs_diff(sum, f) < 1e-13);
  const ParaSplit s = para_split(f, h);
  CHECK(max_abs_diff(s.lt + s.gt + s.res, product(f, h)) < 1e-10);
  CHECK(max_abs_diff(s.lt, para_gt(h, f)) < 1e-12);
}

TEST_CASE("Besov norms of simple fields") {
  const FrequencyLattice g = FrequencyLattice::minimal(8);
  // Block -1 carries the weight 2^{-alpha}.
  CHECK(besov_norm(FourierField::constant(g, 2.5), 0.3) == doctest::Approx(2.5 * std::pow(2.0, -0.3)));
  // cos(2 pi x1) lives in block 0 with weight chi(1) = 1 - psi(1).
  const FourierField c = FourierField::real_mode(g, {1, 0, 0}, 0.5);
  const double w0 = DyadicPartition::weight(0, 1.0), wm = DyadicPartition::weight(-1, 1.0);
  CHECK(besov_norm(c, 0.0) == doctest::Approx(std::max(w0, wm)).epsilon(1e-10));
  CHECK(besov_norm(c, 1.0) == doctest::Approx(std::max(w0, 0.5 * wm)).epsilon(1e-10));
}

TEST_CASE("semigroup acts per mode") {
  const FrequencyLattice g = FrequencyLattice::minimal(3);
  const DispersionQ Q = DispersionQ::bilaplacian(1.0, 0.2);
  const Propagator P(Q, g);
  const FourierField e = FourierField::real_mode(g, {1, 2, 0}, 1.0);
  const double a = Q.bracket_sq(std::sqrt(5.0));
  CHECK(std::real(P.apply(e, 0.01).at({1, 2, 0})) == doctest::Approx(std::exp(-0.01 * a)));
  FourierField x = e;
  P.exp_euler(x, e, 0.01);
  CHECK(std::real(x.at({1, 2, 0})) == doctest::Approx(std::exp(-0.01 * a) + (1 - std::exp(-0.01 * a)) / a));
}
