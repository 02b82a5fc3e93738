#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "phi4/besov.hpp"
#include "phi4/diagrams.hpp"
#include "phi4/gaussian.hpp"
#include "phi4/harness.hpp"
#include "phi4/parallel.hpp"
#include "phi4/solver.hpp"
#include "phi4/spectral.hpp"

using namespace phi4;

namespace {

double norm2(const Mode& k) { return double(k[0]) * k[0] + double(k[1]) * k[1] + double(k[2]) * k[2]; }

// Random real field with |f^(k)| ~ (1 + |k|)^{-decay}, optionally without low modes.
FourierField shaped_field(const FrequencyLattice& g, std::mt19937_64& rng, double decay, double min_norm = 0.0) {
  std::normal_distribution<double> nd;
  FourierField f(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = std::sqrt(norm2(g.mode(i)));
    if (r < min_norm) continue;
    f[i] = cplx(nd(rng), nd(rng)) * std::pow(1.0 + r, -decay);
  }
  f.symmetrize();
  return f;
}

double mean_z(const std::vector<double>& x, double target) {
  const double n = double(x.size());
  double m = 0, v = 0;
  for (double a : x) m += a / n;
  for (double a : x) v += (a - m) * (a - m) / (n - 1);
  return (m - target) / std::sqrt(v / n);
}

}  // namespace

TEST_CASE("hermitian fields are real in physical space") {
  std::mt19937_64 rng(11);
  const FrequencyLattice g = FrequencyLattice::minimal(4);
  const FourierField f = shaped_field(g, rng, 0.0);
  double im = 0.0;
  for (const cplx& z : to_physical_complex(f, 12)) im = std::max(im, std::abs(z.imag()));
  CHECK(im < 1e-12);
}

TEST_CASE("semigroup property and bracket bound") {
  std::mt19937_64 rng(12);
  const FrequencyLattice g = FrequencyLattice::minimal(5);
  for (double eps : {0.0, 0.1, 0.3}) {
    const DispersionQ Q = DispersionQ::bilaplacian(1.0, eps);
    const FourierField f = shaped_field(g, rng, 0.0);
    const FourierField a = apply_semigroup(apply_semigroup(f, Q, 0.013), Q, 0.004);
    CHECK(max_abs_diff(a, apply_semigroup(f, Q, 0.017)) < 1e-12);
    for (double x : bracket_sq_table(Q, g)) CHECK(x >= 1.0);
  }
  // eps = 0 is the analytic bracket, not a small-eps evaluation.
  CHECK(DispersionQ::bilaplacian(1.0, 0.0).bracket_sq(1.0) == 1.0 + 4.0 * M_PI * M_PI);
}

TEST_CASE("lattice sums respect k -> -k and axis permutations") {
  const FrequencyLattice g = FrequencyLattice::minimal(4);
  const std::vector<double> a = bracket_sq_table(DispersionQ::bilaplacian(0.7, 0.2), g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const Mode k = g.mode(i);
    CHECK(a[g.conj_index(i)] == a[i]);
    CHECK(a[g.index({k[2], k[0], k[1]})] == a[i]);
    CHECK(a[g.index({k[1], k[0], k[2]})] == a[i]);
  }
}

TEST_CASE("Besov norm is monotone in alpha away from the low block") {
  // Block -1 carries 2^{-alpha}, which decreases in alpha, so the property is
  // checked on fields without modes below |k| = 1.3.
  std::mt19937_64 rng(13);
  const FrequencyLattice g = FrequencyLattice::minimal(8);
  for (int i = 0; i < 5; ++i) {
    const FourierField f = shaped_field(g, rng, 1.0, 1.3);
    CHECK(besov_norm(f, -0.7) <= besov_norm(f, -0.3) + 1e-15);
    CHECK(besov_norm(f, -0.3) <= besov_norm(f, 0.0) + 1e-15);
  }
}

TEST_CASE("paraproduct bounds hold with moderate constants") {
  std::mt19937_64 rng(14);
  const FrequencyLattice g = FrequencyLattice::minimal(8);
  const double alpha = 0.6, beta = -0.4;
  double c_lt = 0, c_gt = 0, c_res = 0;
  for (int i = 0; i < 10; ++i) {
    const FourierField f = shaped_field(g, rng, 1.5 + alpha);
    const FourierField h = shaped_field(g, rng, 1.5 + beta);
    const ParaSplit s = para_split(f, h);
    double sup = 0.0;
    for (double x : to_physical(f, padded_size(8, 2))) sup = std::max(sup, std::abs(x));
    c_lt = std::max(c_lt, besov_norm(s.lt, beta) / (sup * besov_norm(h, beta)));
    c_gt = std::max(c_gt, besov_norm(s.gt, alpha + beta) / (besov_norm(f, alpha) * besov_norm(h, beta)));
    c_res = std::max(c_res, besov_norm(s.res, alpha + beta) / (besov_norm(f, alpha) * besov_norm(h, beta)));
  }
  CHECK(c_lt <= 10.0);
  CHECK(c_gt <= 10.0);
  CHECK(c_res <= 10.0);
}

TEST_CASE("Monte Carlo results do not depend on the thread count") {
  MomentSpec s{MomentSymbol::wick, 2, {1, 0, 0}, 0.0};
  const DispersionQ Q = DispersionQ::bilaplacian(1.0);
  set_threads(1);
  const MomentReport a = mc_moment(s, Q, Potential::quartic(), 0.3, 2, 64, NoiseSeed{3});
  set_threads(4);
  const MomentReport b = mc_moment(s, Q, Potential::quartic(), 0.3, 2, 64, NoiseSeed{3});
  set_threads(0);
  CHECK(a.mean == b.mean);
  CHECK(*a.se == *b.se);
}

TEST_CASE("pointwise variance of the scaled free field") {
  const DispersionQ Q = DispersionQ::bilaplacian(1.0);
  const double eps = 0.25;
  const int K = 3;
  const FrequencyLattice g = FrequencyLattice::minimal(K);
  std::vector<double> x;
  for (std::uint64_t s = 0; s < 3000; ++s) {
    const ModeOUEnsemble e = sample_stationary(NoiseSeed{21}, g, Q.with_eps(eps), s);
    double v = 0.0;
    for (const cplx& c : e.field().coeffs()) v += c.real();
    x.push_back(eps * v * v);
  }
  CHECK(std::abs(mean_z(x, sigma2_eps(Q, eps, K).value)) <= 3.0);
}

TEST_CASE("second-order objects are centred") {
  const DispersionQ Q = DispersionQ::bilaplacian(1.0);
  const Potential V({0.0, 0.25, 0.05});
  const double eps = 0.3, dt = 0.02;
  const int K = 2;
  const FrequencyLattice g = FrequencyLattice::minimal(K);
  const RenormSet r = compute_renorm(Q, V, eps, K, dt);
  const std::vector<double> t{0.0, dt};
  std::vector<double> two, two2, three1;
  for (std::uint64_t s = 0; s < 300; ++s) {
    const EnhancedNoise U = build_upsilon(NoiseSeed{31}, s, g, Q, V, eps, t, r, BurnIn{2.0, 0.0});
    const std::size_t z = g.zero_index();
    two.push_back(U.at(Tree::two, 1)[z].real());
    two2.push_back(U.at(Tree::two2, 1)[z].real());
    three1.push_back(U.at(Tree::three1, 1)[z].real());
  }
  CHECK(std::abs(mean_z(two, 0.0)) <= 3.0);
  CHECK(std::abs(mean_z(two2, 0.0)) <= 3.0);
  CHECK(std::abs(mean_z(three1, 0.0)) <= 3.0);
}

TEST_CASE("Picard and sequential schemes agree; reconstruction is the sum of its parts") {
  const DispersionQ Q = DispersionQ::bilaplacian(1.0);
  const Potential V = Potential::quartic();
  const double eps = 0.3, dt = 1e-3;
  const int K = 3;
  const FrequencyLattice g = FrequencyLattice::minimal(K);
  std::vector<double> t(21);
  for (std::size_t i = 0; i < t.size(); ++i) t[i] = dt * double(i);
  const RenormSet r = compute_renorm(Q, V, eps, K, dt);
  const EnhancedNoise U = build_upsilon(NoiseSeed{41}, 0, g, Q, V, eps, t, r, BurnIn{1.0, 0.01});
  SolverConfig c;
  c.lambda = r.lambda;
  c.dt = dt;
  c.T = 0.02;
  const FourierField w0 = FourierField::real_mode(g, {1, 0, 0}, 0.2);
  const RemainderPair a = solve(c, U, FourierField(g), w0);
  c.mode = SolverMode::picard;
  const RemainderPair b = solve(c, U, FourierField(g), w0);
  double d = 0.0;
  for (std::size_t n = 0; n < a.v.size(); ++n) d = std::max({d, max_abs_diff(a.v[n], b.v[n]), max_abs_diff(a.w[n], b.w[n])});
  CHECK(d <= 10.0 * dt);
  const auto phi = reconstruct_phi(U, a, r.lambda);
  for (std::size_t n = 0; n < phi.size(); ++n) {
    FourierField rest = phi[n] - U.free_field[n] - a.v[n] - a.w[n];
    rest.axpy(r.lambda, U.at(Tree::three0, n));
    CHECK(rest.max_abs() <= 1e-14);
  }
}

TEST_CASE("potential remainder shrinks with eps") {
  // -eps^{-3/2} (V'(sqrt(eps) X + sqrt(eps) y) - cubic Taylor part) for a
  // sextic V at a fixed smooth y and a free field sample.
  const DispersionQ Q = DispersionQ::bilaplacian(1.0);
  const Potential V({0.0, 0.25, 1.0 / 6.0});
  const int K = 4, M = padded_size(K, 5);
  const FrequencyLattice g = FrequencyLattice::minimal(K);
  const RealGrid y = to_physical(FourierField::real_mode(g, {1, 0, 0}, 0.5), M);
  std::vector<double> le, lr;
  for (double eps : {0.2, 0.1, 0.05}) {
    const RealGrid x = to_physical(sample_stationary(NoiseSeed{51}, g, Q.with_eps(eps)).field(), M);
    double sup = 0.0;
    const double se = std::sqrt(eps);
    for (std::size_t i = 0; i < x.size(); ++i)
      sup = std::max(sup, std::abs(taylor_remainder(V, se * x[i], se * y[i])) / (eps * se));
    le.push_back(std::log(eps));
    lr.push_back(std::log(sup));
  }
  const double slope = (lr[2] - lr[0]) / (le[2] - le[0]);
  CHECK(slope >= 0.2);
}

TEST_CASE("regenerated CSVs are byte-identical") {
  namespace fs = std::filesystem;
  const ExperimentConfig c = parse_config(
      "eps: [0.5]\nk_rule: {fixed: 2}\nburn_in: {T: 0.1, dt: 0.01}\nsolver: {dt: 0.001, T: 0.004}\n");
  const fs::path a = fs::temp_directory_path() / "phi4_unit_regen_a", b = fs::temp_directory_path() / "phi4_unit_regen_b";
  fs::remove_all(a);
  fs::remove_all(b);
  std::ostringstream log;
  REQUIRE(cmd_solve(c, {a.string()}, log) == 0);
  REQUIRE(cmd_solve(c, {b.string()}, log) == 0);
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  CHECK(slurp(a / "trajectory_0.csv") == slurp(b / "trajectory_0.csv"));
  CHECK(slurp(a / "manifest.yaml") == slurp(b / "manifest.yaml"));
}
