#include <doctest.h>

#include <cmath>
#include <numbers>

#include "phi4/error.hpp"
#include "phi4/gaussian.hpp"
#include "phi4/kernels.hpp"
#include "phi4/renorm.hpp"

using namespace phi4;
constexpr double pi = std::numbers::pi;

TEST_CASE("limiting variance and growth violation") {
  CHECK(sigma2_limit(DispersionQ::bilaplacian(1.0)) == doctest::Approx(1.0 / (8.0 * pi)).epsilon(1e-10));
  try {
    (void)sigma2_limit(DispersionQ::laplacian());
    FAIL("expected growth violation");
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::growth_violation);
  }
}

TEST_CASE("lattice variance converges to the limit") {
  const DispersionQ Q = DispersionQ::bilaplacian(1.0);
  const double s = sigma2_limit(Q);
  const double e1 = std::abs(sigma2_eps(Q, 0.2, 20).value - s);
  const double e2 = std::abs(sigma2_eps(Q, 0.1, 40).value - s);
  CHECK(e2 < e1);
}

TEST_CASE("coupling and chaos coefficients of the quartic potential") {
  const Potential V = Potential::quartic();
  CHECK(coupling_lambda(V, 0.123) == doctest::Approx(1.0));
  const auto a = a_coeffs(V, 0.2, 1.0, 0.05);
  REQUIRE(a.size() == 1);
  CHECK(a[0] == doctest::Approx(1.0));
  CHECK(c1(V, 0.2, 1.0, 0.05) == doctest::Approx(0.05 / 0.2));
  CHECK(c3(DispersionQ::bilaplacian(1.0), V, 0.2, 1.0, 3) == 0.0);
}

TEST_CASE("sextic coupling of the example family") {
  const Potential V({0.0, 0.0, 1.0 / 6.0});
  CHECK(coupling_lambda(V, sigma2_limit(DispersionQ::bilaplacian(1.0))) == doctest::Approx(0.397887).epsilon(1e-5));
}

TEST_CASE("kernel sums at K = 0") {
  const DispersionQ Q = DispersionQ::bilaplacian(1.0, 0.2);
  // Single leg configuration: (2!/4) / (1 * 1 * (1 + 2)).
  CHECK(wick_resonance_mean(Q, 2, 0) == doctest::Approx(0.5 / 3.0));
  CHECK(g_kernel_time_integral(Q, 1, 0, {0, 0, 0}) == doctest::Approx(0.5));
  const double dt = 0.01;
  const double want = 0.5 * (1 - std::exp(-dt)) * std::exp(-2 * dt) / (1 - std::exp(-3 * dt));
  CHECK(wick_resonance_mean(Q, 2, 0, dt) == doctest::Approx(want).epsilon(1e-12));
}

TEST_CASE("direct and FFT kernel routes agree") {
  const DispersionQ Q = DispersionQ::bilaplacian(1.0, 0.2);
  for (int K : {2, 4}) {
    const kernels::BoxRates r = kernels::BoxRates::from_symbol(Q, K);
    for (double dt : {0.0, 1e-3}) {
      const double d = kernels::wick_resonance_direct_serial(r, 2, dt);
      CHECK(kernels::wick_resonance_fft_serial(r, 2, dt) == doctest::Approx(d).epsilon(1e-7));
    }
  }
  const kernels::BoxRates r3 = kernels::BoxRates::from_symbol(Q, 2);
  const double d3 = kernels::wick_resonance_direct_serial(r3, 3, 0.0);
  CHECK(kernels::wick_resonance_fft_serial(r3, 3, 0.0) == doctest::Approx(d3).epsilon(1e-7));
}

TEST_CASE("serial and OpenMP kernels agree") {
  const DispersionQ Q = DispersionQ::bilaplacian(1.0, 0.1);
  const kernels::BoxRates r = kernels::BoxRates::from_symbol(Q, 5);
  CHECK(kernels::wick_resonance_direct_omp(r, 2, 0.0) == kernels::wick_resonance_direct_serial(r, 2, 0.0));
  CHECK(kernels::wick_resonance_fft_omp(r, 2, 1e-3) == doctest::Approx(kernels::wick_resonance_fft_serial(r, 2, 1e-3)).epsilon(1e-13));
  const Polynomial P({1.0, -2.0, 0.5, 0.25});
  std::vector<double> in(1000), a(1000), b(1000);
  for (std::size_t i = 0; i < in.size(); ++i) in[i] = 0.01 * double(i) - 5.0;
  kernels::polynomial_map_serial(P, in.data(), a.data(), in.size());
  kernels::polynomial_map_omp(P, in.data(), b.data(), in.size());
  CHECK(a == b);
}

TEST_CASE("discrete-step constants approach the continuum") {
  const DispersionQ Q = DispersionQ::bilaplacian(1.0, 0.2);
  const double c = wick_resonance_mean(Q, 2, 3);
  const double e1 = std::abs(wick_resonance_mean(Q, 2, 3, 1e-3) - c);
  const double e2 = std::abs(wick_resonance_mean(Q, 2, 3, 5e-4) - c);
  CHECK(e2 < e1);
}

TEST_CASE("constants CSV layout") {
  const RenormSet r = compute_renorm(DispersionQ::bilaplacian(1.0), Potential::quartic(), 0.5, 8);
  CHECK(r.K == 8);
  CHECK(r.C3 == 0.0);
  CHECK(default_cutoff(0.141) == 29);
}

TEST_CASE("coupling ignores the quadratic coefficient") {
  CHECK(coupling_lambda(Potential({0.7, 0.25, 0.1}), 0.05) == doctest::Approx(coupling_lambda(Potential({0.0, 0.25, 0.1}), 0.05)));
  // V = x^2/2 + x^4/4: C1 = (1 + 3 s2) / (3 lambda eps)
  CHECK(c1(Potential({0.5, 0.25}), 0.2, 1.0, 0.05) == doctest::Approx((1 + 3 * 0.05) / (3 * 0.2)));
}

TEST_CASE("a_m agree with the chaos expansion of V'''") {
  const Potential V({0.3, 0.25, 0.2, 0.05});
  const double s2 = 0.07, lambda = coupling_lambda(V, 0.04);
  const auto a = a_coeffs(V, 0.2, lambda, s2);
  const auto c = chaos_coefficients((1.0 / (6.0 * lambda)) * V.derivative(3), s2);
  for (std::size_t m = 1; m <= a.size(); ++m) CHECK(a[m - 1] == doctest::Approx(c[2 * m - 1]).epsilon(1e-10));
}
