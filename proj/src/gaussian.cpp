#include "phi4/gaussian.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>
#include <numbers>

#include "phi4/error.hpp"

namespace phi4 {

ModeOUEnsemble::ModeOUEnsemble(const NoiseSeed& seed, const FrequencyLattice& grid, const DispersionQ& Q,
                               std::uint64_t sample, double t0)
    : seed_(seed),
      Q_(Q),
      rate_(std::make_shared<const std::vector<double>>(bracket_sq_table(Q, grid))),
      sample_(sample),
      t_(t0),
      x_(grid, true) {
  const auto& a = *rate_;
  const std::size_t half = grid.zero_index();
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i <= half; ++i) {
    const auto [z0, z1] = normal_pair(seed_, sample_, std::uint32_t(i), 0);
    if (i == half) {
      x_[i] = z0 * std::sqrt(1.0 / (2.0 * a[i]));
    } else {
      const double s = std::sqrt(1.0 / (4.0 * a[i]));
      x_[i] = cplx(s * z0, s * z1);
      x_[grid.conj_index(i)] = std::conj(x_[i]);
    }
  }
}

void ModeOUEnsemble::advance(double dt) {
  if (!(dt > 0.0)) fail(ErrorKind::domain, "OU step needs dt > 0");
  ++step_;
  const auto& a = *rate_;
  const FrequencyLattice& grid = x_.grid();
  const std::size_t half = grid.zero_index();
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i <= half; ++i) {
    const auto [z0, z1] = normal_pair(seed_, sample_, std::uint32_t(i), step_);
    const double decay = std::exp(-a[i] * dt);
    // Var of the increment: (1 - e^{-2 a dt}) / (2 a).
    const double var = -std::expm1(-2.0 * a[i] * dt) / (2.0 * a[i]);
    if (i == half) {
      x_[i] = decay * x_[i].real() + std::sqrt(var) * z0;
    } else {
      const double s = std::sqrt(0.5 * var);
      x_[i] = decay * x_[i] + cplx(s * z0, s * z1);
      x_[grid.conj_index(i)] = std::conj(x_[i]);
    }
  }
  t_ += dt;
}

ModeOUEnsemble sample_stationary(const NoiseSeed& seed, const FrequencyLattice& grid, const DispersionQ& Q,
                                 std::uint64_t sample, double t0) {
  return ModeOUEnsemble(seed, grid, Q, sample, t0);
}

ModeOUEnsemble advance(const ModeOUEnsemble& ens, double dt) {
  ModeOUEnsemble out = ens;
  out.advance(dt);
  return out;
}

double hermite(int n, double x, double nu) {
  if (n < 0) fail(ErrorKind::domain, "Hermite degree must be >= 0");
  if (n == 0) return 1.0;
  double hm = 1.0, h = x;
  for (int k = 1; k < n; ++k) {
    const double hn = x * h - k * nu * hm;
    hm = h;
    h = hn;
  }
  return h;
}

Polynomial hermite_polynomial(int n, double nu) {
  if (n < 0) fail(ErrorKind::domain, "Hermite degree must be >= 0");
  Polynomial hm({1.0});
  if (n == 0) return hm;
  Polynomial h({0.0, 1.0});
  const Polynomial x({0.0, 1.0});
  for (int k = 1; k < n; ++k) {
    Polynomial hn = x * h - double(k) * nu * hm;
    hm = h;
    h = hn;
  }
  return h;
}

std::vector<double> wick_power(const std::vector<double>& f, int n, double nu) {
  std::vector<double> out(f.size());
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = hermite(n, f[i], nu);
  return out;
}

double gaussian_moment(int k, double nu) {
  if (k < 0 || k % 2 == 1) return 0.0;
  double m = 1.0;
  for (int j = 1; j < k; j += 2) m *= j * nu;
  return m;
}

double gaussian_expectation(const Polynomial& f, double sigma2) {
  if (sigma2 < 0.0) fail(ErrorKind::domain, "negative variance");
  double s = 0.0;
  for (int k = 0; k <= f.degree(); k += 2) s += f.coeff(k) * gaussian_moment(k, sigma2);
  return s;
}

double gaussian_expectation(const std::function<double(double)>& f, double sigma2) {
  if (sigma2 < 0.0) fail(ErrorKind::domain, "negative variance");
  if (sigma2 == 0.0) return f(0.0);
  constexpr std::size_t n = 64;
  const double b = 1.0 / (2.0 * sigma2);
  gsl_integration_fixed_workspace* w =
      gsl_integration_fixed_alloc(gsl_integration_fixed_hermite, n, 0.0, b, 0.0, 0.0);
  const double* x = gsl_integration_fixed_nodes(w);
  const double* wt = gsl_integration_fixed_weights(w);
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += wt[i] * f(x[i]);
  gsl_integration_fixed_free(w);
  return s / std::sqrt(2.0 * std::numbers::pi * sigma2);
}

std::vector<double> chaos_coefficients(const Polynomial& f, double nu) {
  if (nu < 0.0) fail(ErrorKind::domain, "negative variance");
  std::vector<double> c(std::size_t(std::max(f.degree(), 0)) + 1, 0.0);
  double fact = 1.0;
  for (int k = 0; k <= f.degree(); ++k) {
    if (k > 0) fact *= k;
    c[std::size_t(k)] = gaussian_expectation(f.derivative(k), nu) / fact;
  }
  return c;
}

}  // namespace phi4
