// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.
// References are computed here independently of the library routes they check.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <boost/math/quadrature/exp_sinh.hpp>
#include <fmt/format.h>

#include "phi4/besov.hpp"
#include "phi4/diagrams.hpp"
#include "phi4/gaussian.hpp"
#include "phi4/renorm.hpp"
#include "phi4/rng.hpp"
#include "phi4/solver.hpp"
#include "phi4/spectral.hpp"

using namespace phi4;
constexpr double pi = std::numbers::pi;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double norm2(const Mode& k) { return double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2]; }

// <k>_eps^2 for Q(z) = z^2 + nu z^4, written out by hand.
double bracket_bilap(double nu, double eps, const Mode& k) {
  const double r2 = 4.0 * pi * pi * norm2(k);
  return 1.0 + r2 + nu * eps * eps * r2 * r2;
}

// Hermitian random field with coefficients N(0,1) / (1 + |k|^2)^{decay/2}.
FourierField random_field(const FrequencyLattice& grid, std::mt19937_64& rng, double decay) {
  std::normal_distribution<double> nd;
  FourierField f(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double w = std::pow(1.0 + norm2(grid.mode(i)), -0.5 * decay);
    f[i] = cplx(nd(rng), nd(rng)) * w;
  }
  f.symmetrize();
  return f;
}

double sup_physical(const FourierField& f) {
  const RealGrid g = to_physical(f, padded_size(f.grid().K(), 2));
  double m = 0.0;
  for (double x : g) m = std::max(m, std::abs(x));
  return m;
}

// Criterion 1
Outcome sigma2_closed_form() {
  double worst = 0.0;
  for (double nu : {0.25, 1.0, 4.0}) {
    const double got = sigma2_limit(DispersionQ::bilaplacian(nu));
    const double want = 1.0 / (8.0 * pi * std::sqrt(nu));
    worst = std::max(worst, std::abs(got - want));
  }
  return {worst < 1e-6, fmt::format("max |sigma2 - 1/(8 pi sqrt nu)| = {:.3e}", worst)};
}

// Criterion 2: lambda from E V''''/6 against quadrature of the radial integral.
Outcome lambda_cross_check() {
  boost::math::quadrature::exp_sinh<double> integrator;
  double worst = 0.0;
  for (auto [a, nu] : {std::pair{1.0, 1.0}, std::pair{2.0, 0.5}}) {
    const Potential V({0.0, 0.0, a / 6.0});
    const double got = coupling_lambda(V, sigma2_limit(DispersionQ::bilaplacian(nu)));
    // int_{R^3} dtheta / (|theta|^2 (1 + 4 pi^2 nu |theta|^2)) = 4 pi int_0^inf dr / (1 + 4 pi^2 nu r^2)
    const double radial = integrator.integrate([nu](double r) { return 1.0 / (1.0 + 4.0 * pi * pi * nu * r * r); });
    const double want = 5.0 * a / (4.0 * pi * pi) * 4.0 * pi * radial;
    worst = std::max(worst, std::abs(got - want) / want);
  }
  return {worst < 1e-4, fmt::format("max relative error = {:.3e}", worst)};
}

// Criterion 3
Outcome free_field_moments() {
  const double nu = 1.0;
  const DispersionQ Q = DispersionQ::bilaplacian(nu);
  const Potential V = Potential::quartic();
  const int K = 2;
  const std::size_t M = 10000;
  const NoiseSeed seed{20240611};
  double worst = 0.0;
  int tests = 0;
  for (double eps : {0.2, 0.1}) {
    for (const Mode& k : {Mode{0, 0, 0}, Mode{1, 0, 0}, Mode{2, 1, 0}}) {
      MomentSpec s{MomentSymbol::free, 1, k, 0.0};
      const MomentReport r = mc_moment(s, Q, V, eps, K, M, seed);
      const double want = 0.5 / bracket_bilap(nu, eps, k);
      worst = std::max(worst, std::abs(r.mean - want) / r.se.value());
      ++tests;
    }
    for (auto [k, lag] : {std::pair{Mode{0, 0, 0}, 0.5}, std::pair{Mode{1, 0, 0}, 0.02}}) {
      MomentSpec s{MomentSymbol::free, 1, k, lag};
      const MomentReport r = mc_moment(s, Q, V, eps, K, M, seed);
      const double a = bracket_bilap(nu, eps, k);
      const double want = 0.5 / a * std::exp(-lag * a);
      worst = std::max(worst, std::abs(r.mean - want) / r.se.value());
      ++tests;
    }
  }
  return {worst <= 3.0, fmt::format("{} z-tests, max |z| = {:.3f}", tests, worst)};
}

// Criterion 4
Outcome paraproduct_identity() {
  const FrequencyLattice grid = FrequencyLattice::minimal(16);
  std::mt19937_64 rng(4);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const FourierField f = random_field(grid, rng, 2.0);
    const FourierField g = random_field(grid, rng, 2.0);
    const ParaSplit s = para_split(f, g);
    FourierField d = product(f, g);
    d -= s.lt;
    d -= s.gt;
    d -= s.res;
    worst = std::max(worst, sup_physical(d));
  }
  return {worst < 1e-11, fmt::format("max sup-norm defect over 100 pairs = {:.3e}", worst)};
}

// Criterion 5
Outcome renorm_divergences() {
  const DispersionQ Q = DispersionQ::bilaplacian(1.0);
  const Potential V = Potential::quartic();
  const std::vector<double> eps{0.2, 0.141, 0.1, 0.071, 0.05};
  std::vector<double> x, y, err;
  bool c3_zero = true;
  for (double e : eps) {
    const RenormSet r = compute_renorm(Q, V, e, default_cutoff(e));
    x.push_back(std::log(1.0 / e));
    y.push_back(r.C2);
    err.push_back(std::abs(r.sigma2_eps - r.sigma2));
    c3_zero = c3_zero && r.C3 == 0.0;
  }
  const double n = double(x.size());
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < x.size(); ++i) mx += x[i] / n, my += y[i] / n;
  double sxy = 0, sxx = 0, syy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  const double r2 = sxy * sxy / (sxx * syy);
  bool decreasing = true;
  for (std::size_t i = 1; i < err.size(); ++i) decreasing = decreasing && err[i] < err[i - 1];
  return {r2 > 0.99 && c3_zero && decreasing,
          fmt::format("C2 ~ log(1/eps): R^2 = {:.5f}, slope = {:.4g}; C3 == 0: {}; sigma2 error decreasing: {} "
                      "({:.3e} .. {:.3e})",
                      r2, sxy / sxx, c3_zero, decreasing, err.front(), err.back())};
}

// Criterion 6
Outcome wick_machinery() {
  const double nu = 0.7;
  const std::size_t N = 100000;
  const NoiseSeed seed{77};
  std::vector<double> xs(N);
  for (std::size_t i = 0; i < N; i += 2) {
    const auto [a, b] = normal_pair(seed, i, 0, 0);
    xs[i] = std::sqrt(nu) * a;
    if (i + 1 < N) xs[i + 1] = std::sqrt(nu) * b;
  }
  double worst = 0.0;
  for (int p = 0; p <= 4; ++p) {
    for (int q = 0; q <= 4; ++q) {
      double s = 0, ss = 0;
      for (double x : xs) {
        const double v = hermite(p, x, nu) * hermite(q, x, nu);
        s += v;
        ss += v * v;
      }
      const double mean = s / double(N);
      const double var = ss / double(N) - mean * mean;
      double fact = 1.0;
      for (int j = 2; j <= p; ++j) fact *= j;
      const double want = p == q ? fact * std::pow(nu, p) : 0.0;
      if (var <= 1e-300) {
        if (std::abs(mean - want) > 1e-12) worst = std::max(worst, 1e9);
        continue;
      }
      worst = std::max(worst, std::abs(mean - want) / std::sqrt(var / double(N)));
    }
  }
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  double recon = 0.0;
  for (int deg = 0; deg <= 6; ++deg) {
    for (int rep = 0; rep < 20; ++rep) {
      std::vector<double> c(std::size_t(deg) + 1);
      for (double& v : c) v = u(rng);
      const Polynomial f(c);
      const std::vector<double> ck = chaos_coefficients(f, nu);
      for (double x = -3.0; x <= 3.0; x += 0.25) {
        double sum = 0.0;
        for (std::size_t k = 0; k < ck.size(); ++k) sum += ck[k] * hermite(int(k), x, nu);
        recon = std::max(recon, std::abs(sum - f(x)));
      }
    }
  }
  return {worst <= 3.0 && recon <= 1e-12,
          fmt::format("Hermite orthogonality max |z| = {:.3f}; chaos reconstruction error = {:.2e}", worst, recon)};
}

// Criterion 7
Outcome quartic_identities() {
  const DispersionQ Q = DispersionQ::bilaplacian(1.0);
  const Potential V = Potential::quartic();
  const double eps = 0.2;
  const int K = 5;
  const FrequencyLattice grid = FrequencyLattice::minimal(K);
  const RenormSet r = compute_renorm(Q, V, eps, K);
  const std::vector<double> t{0.0, 0.01, 0.02, 0.03};
  const EnhancedNoise U = build_upsilon(NoiseSeed{7}, 0, grid, Q, V, eps, t, r, BurnIn{0.5, 0.01});
  double nu = 0.0;
  for (std::size_t i = 0; i < grid.size(); ++i) nu += 0.5 / bracket_bilap(1.0, eps, grid.mode(i));
  const int M = padded_size(K, 2);
  double worst = 0.0;
  for (std::size_t n = 0; n < t.size(); ++n) {
    const RealGrid x = to_physical(U.free_field[n], M);
    RealGrid sq(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) sq[i] = x[i] * x[i] - nu;
    const FourierField wick2 = from_physical(sq, M, grid);
    const RealGrid zero = to_physical(U.at(Tree::zero, n), M);
    for (double z : zero) worst = std::max(worst, std::abs(z - 1.0));
    worst = std::max(worst, sup_physical(U.at(Tree::one, n) - U.free_field[n]));
    worst = std::max(worst, sup_physical(U.at(Tree::two, n) - wick2));
  }
  return {worst <= 1e-10, fmt::format("max pointwise defect = {:.3e}", worst)};
}

// Criterion 8: remainder reconstruction against a brute-force integration of
// the renormalised equation on the same noise path.
double dpd_discrepancy(double dt) {
  const DispersionQ Q = DispersionQ::bilaplacian(1.0);
  const Potential V = Potential::quartic();
  const double eps = 0.2, T = 0.05;
  const int K = 8;
  const FrequencyLattice grid = FrequencyLattice::minimal(K);
  const auto N = std::size_t(std::llround(T / dt));
  std::vector<double> t(N + 1);
  for (std::size_t i = 0; i <= N; ++i) t[i] = double(i) * dt;
  const RenormSet r = compute_renorm(Q, V, eps, K, dt);
  const EnhancedNoise U = build_upsilon(NoiseSeed{8}, 0, grid, Q, V, eps, t, r, BurnIn{2.0, 0.01});
  SolverConfig cfg;
  cfg.lambda = r.lambda;
  cfg.dt = dt;
  cfg.T = T;
  const FourierField v0(grid);
  const FourierField w0 = FourierField::real_mode(grid, {1, 0, 0}, 0.2);
  const RemainderPair P = solve(cfg, U, v0, w0);
  const std::vector<FourierField> phi = reconstruct_phi(U, P, r.lambda);
  const std::vector<FourierField> ref = brute_force_reference(U, V, r.C_total, phi.front(), T);
  return relative_l2(phi, ref);
}

Outcome dpd_consistency() {
  const double d1 = dpd_discrepancy(1e-4);
  const double d2 = dpd_discrepancy(5e-5);
  return {d1 < 1e-2 && d2 <= 0.5 * d1,
          fmt::format("relative L2 discrepancy {:.3e} at dt = 1e-4, {:.3e} at dt = 5e-5 (ratio {:.3f})", d1, d2,
                      d2 / d1)};
}

// Criterion 9
Outcome linear_exactness() {
  const FrequencyLattice grid = FrequencyLattice::minimal(6);
  const DispersionQ Qe = DispersionQ::bilaplacian(1.0, 0.1);
  const double dt = 1e-3;
  std::vector<double> t(101);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = double(i) * dt;
  const EnhancedNoise U = zero_noise(grid, t, Qe);
  SolverConfig cfg;
  cfg.lambda = 0.0;
  cfg.dt = dt;
  cfg.T = 0.1;
  std::mt19937_64 rng(9);
  const FourierField w0 = random_field(grid, rng, 0.0);
  const RemainderPair P = solve(cfg, U, FourierField(grid), w0);
  double worst = 0.0;
  for (std::size_t n = 0; n < P.w.size(); ++n) {
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double a = bracket_bilap(1.0, 0.1, grid.mode(i));
      const cplx want = std::exp(-P.t_grid[n] * a) * w0[i];
      worst = std::max(worst, std::abs(P.w[n][i] - want) / std::max(1.0, std::abs(w0[i])));
      worst = std::max(worst, std::abs(P.v[n][i]));
    }
  }
  return {worst <= 1e-12, fmt::format("max per-mode deviation = {:.3e}", worst)};
}

// Criterion 10
Outcome semigroup_smoothing() {
  const FrequencyLattice grid = FrequencyLattice::minimal(16);
  std::mt19937_64 rng(10);
  double worst = 0.0;
  for (double eps : {0.0, 0.1}) {
    const DispersionQ Q = DispersionQ::bilaplacian(1.0, eps);
    const Propagator P(Q, grid);
    for (int i = 0; i < 20; ++i) {
      const FourierField f = random_field(grid, rng, 1.0 + 0.1 * i);
      const double base = besov_norm(f, 0.0);
      for (double t = 1.0; t >= 1e-4; t *= 0.5) worst = std::max(worst, std::sqrt(t) * besov_norm(P.apply(f, t), 1.0) / base);
    }
  }
  return {worst <= 10.0, fmt::format("largest observed constant = {:.4f}", worst)};
}

// Criterion 11: Y distance of the eps remainders to the eps = 0 remainders.
Outcome coupled_trend() {
  const DispersionQ Q = DispersionQ::bilaplacian(1.0);
  const Potential V = Potential::quartic();
  const int K = 8;
  const double dt = 1e-3, T = 0.05;
  const FrequencyLattice grid = FrequencyLattice::minimal(K);
  std::vector<double> t(std::size_t(std::llround(T / dt)) + 1);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = double(i) * dt;
  const NoiseSeed seed{11};
  const BurnIn burn{2.0, 0.01};
  SolverConfig cfg;
  cfg.dt = dt;
  cfg.T = T;
  const SolverConfig rc = resolved(cfg, 2);
  const FourierField v0(grid);
  const FourierField w0 = FourierField::real_mode(grid, {1, 0, 0}, 0.2);

  const double lambda = coupling_lambda(V, sigma2_limit(Q));
  const EnhancedNoise L = build_limit_upsilon(seed, 0, grid, 0.0, t, burn);
  cfg.lambda = lambda;
  const RemainderPair limit = solve(cfg, L, v0, w0);
  std::vector<double> d;
  for (double eps : {0.2, 0.1}) {
    const RenormSet r = compute_renorm(Q, V, eps, K, dt);
    const EnhancedNoise U = build_upsilon(seed, 0, grid, Q, V, eps, t, r, burn);
    cfg.lambda = r.lambda;
    const RemainderPair P = solve(cfg, U, v0, w0);
    d.push_back(y_norm(difference(P, limit), eps, T, rc.kappa, rc.delta0));
  }
  return {d[1] < d[0], fmt::format("Y distance {:.4e} at eps = 0.2, {:.4e} at eps = 0.1", d[0], d[1])};
}

struct Criterion {
  int id;
  const char* name;
  double budget_s;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> all{
      {1, "sigma2 closed form", 1.0, sigma2_closed_form},
      {2, "lambda cross-check", 1.0, lambda_cross_check},
      {3, "free-field moments", 30.0, free_field_moments},
      {4, "paraproduct identity", 10.0, paraproduct_identity},
      {5, "renormalisation divergences", 300.0, renorm_divergences},
      {6, "Wick machinery", 10.0, wick_machinery},
      {7, "quartic identities", 5.0, quartic_identities},
      {8, "remainder vs brute force", 300.0, dpd_consistency},
      {9, "linear exactness", 1.0, linear_exactness},
      {10, "semigroup smoothing", 30.0, semigroup_smoothing},
      {11, "coupled eps trend", 600.0, coupled_trend},
  };
  int failures = 0;
  for (const Criterion& c : all) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.budget_s;
    const bool pass = o.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("%s criterion %d (%s): %s [%.2f s, budget %.0f s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name,
                o.detail.c_str(), secs, c.budget_s, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", int(all.size()) - failures, all.size());
  return failures == 0 ? 0 : 1;
}
