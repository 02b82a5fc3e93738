#include "phi4/diagrams.hpp"

#include <cmath>
#include <functional>
#include <ostream>

#include <fmt/format.h>

#include "phi4/besov.hpp"
#include "phi4/error.hpp"
#include "phi4/gaussian.hpp"
#include "phi4/spectral.hpp"

namespace phi4 {

const char* tree_tag(Tree t) {
  switch (t) {
    case Tree::zero: return "0'";
    case Tree::one: return "1'";
    case Tree::two: return "2'";
    case Tree::three0: return "3'0";
    case Tree::three1: return "3'1'";
    case Tree::two2: return "2'2'";
    case Tree::three2: return "3'2'";
  }
  return "?";
}

double tree_regularity(Tree t, double kappa) {
  switch (t) {
    case Tree::zero: return -kappa;
    case Tree::one: return -0.5 - kappa;
    case Tree::two: return -1.0 - kappa;
    case Tree::three0: return 0.5 - kappa;
    case Tree::three1: return -kappa;
    case Tree::two2: return -kappa;
    case Tree::three2: return -0.5 - kappa;
  }
  return 0.0;
}

namespace {

// Pointwise maps X -> <0'>, <1'>, <2'>, <3'> as polynomials in X.
struct ObjectMaps {
  Polynomial p[4];
  int degree[4] = {0, 1, 2, 3};
};

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// x -> s V^{(j)}(sqrt(eps) x) as a polynomial in x.
Polynomial scaled_derivative(const Potential& V, int j, double eps, double s) {
  return s * V.derivative(j).scaled(std::sqrt(eps));
}

ObjectMaps primed_maps(const Potential& V, double eps, double lambda, double C1) {
  ObjectMaps m;
  m.p[0] = scaled_derivative(V, 4, eps, 1.0 / (6.0 * lambda));
  m.p[1] = scaled_derivative(V, 3, eps, 1.0 / (6.0 * lambda * std::sqrt(eps)));
  m.p[2] = scaled_derivative(V, 2, eps, 1.0 / (3.0 * lambda * eps)) - Polynomial({C1});
  m.p[3] = scaled_derivative(V, 1, eps, 1.0 / (lambda * eps * std::sqrt(eps))) - Polynomial({0.0, 3.0 * C1});
  for (int i = 0; i < 4; ++i) m.degree[i] = std::max(0, m.p[i].degree());
  return m;
}

ObjectMaps standard_maps(double c1) {
  ObjectMaps m;
  m.p[0] = Polynomial({1.0});
  m.p[1] = Polynomial({0.0, 1.0});
  m.p[2] = hermite_polynomial(2, c1);
  m.p[3] = hermite_polynomial(3, c1);
  for (int i = 0; i < 4; ++i) m.degree[i] = std::max(0, m.p[i].degree());
  return m;
}

FourierField apply_map(const ObjectMaps& m, int i, const FourierField& x) {
  const Polynomial& p = m.p[i];
  if (p.degree() <= 0) return FourierField::constant(x.grid(), p.coeff(0));
  if (p.degree() == 1 && p.coeff(0) == 0.0) return p.coeff(1) * x;
  return map_pointwise(x, [&p](double v) { return p(v); }, m.degree[i]);
}

void add_constant(FourierField& f, double c) { f[f.grid().zero_index()] += c; }

double uniform_step(const std::vector<double>& t) {
  if (t.empty()) fail(ErrorKind::domain, "empty time grid");
  if (t.size() == 1) return 0.0;
  const double dt = t[1] - t[0];
  if (!(dt > 0.0)) fail(ErrorKind::domain, "time grid must increase");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (std::abs((t[i] - t[i - 1]) - dt) > 1e-9 * dt) fail(ErrorKind::domain, "time grid must be uniform");
  return dt;
}

struct Subtractions {
  double C2 = 0.0, C3 = 0.0, C32 = 0.0;  // <2'2'>, <3'1'> and the <1> coefficient in <3'2'>
};

// Shared construction: burn-in from t_grid[0] - T, then record all components.
void run_objects(EnhancedNoise& U, ModeOUEnsemble ens, const DispersionQ& Qe, const ObjectMaps& maps,
                 const Subtractions& sub, const std::function<FourierField(const FourierField&)>& observe) {
  const FrequencyLattice& grid = ens.grid();
  const Propagator P(Qe, grid);
  const double dt = uniform_step(U.t_grid);
  FourierField Y2(grid), Y3(grid);
  if (U.burn.T > 0.0) {
    double hb = U.burn.dt <= 0.0 ? dt : std::max(U.burn.dt, dt);
    if (!(hb > 0.0)) hb = U.burn.dt > 0.0 ? U.burn.dt : 0.01;
    const auto nb = std::size_t(std::ceil(U.burn.T / hb - 1e-9));
    const double h = U.burn.T / double(nb);
    for (std::size_t i = 0; i < nb; ++i) {
      const FourierField X = observe(ens.field());
      P.exp_euler(Y2, apply_map(maps, 2, X), h);
      P.exp_euler(Y3, apply_map(maps, 3, X), h);
      ens.advance(h);
    }
  }
  const std::size_t N = U.t_grid.size();
  for (auto& c : U.comp) c.reserve(N);
  U.free_field.reserve(N);
  U.c20.reserve(N);
  for (std::size_t n = 0; n < N; ++n) {
    const FourierField X = observe(ens.field());
    FourierField s0 = apply_map(maps, 0, X);
    FourierField s1 = apply_map(maps, 1, X);
    FourierField s2 = apply_map(maps, 2, X);
    FourierField r31 = resonance(Y3, s1);
    add_constant(r31, -sub.C3);
    FourierField r22 = resonance(Y2, s2);
    add_constant(r22, -sub.C2);
    FourierField r32 = resonance(Y3, s2);
    r32.axpy(-sub.C32, X);
    U.comp[std::size_t(Tree::zero)].push_back(std::move(s0));
    U.comp[std::size_t(Tree::one)].push_back(std::move(s1));
    U.comp[std::size_t(Tree::three0)].push_back(Y3);
    U.comp[std::size_t(Tree::three1)].push_back(std::move(r31));
    U.comp[std::size_t(Tree::two2)].push_back(std::move(r22));
    U.comp[std::size_t(Tree::three2)].push_back(std::move(r32));
    U.c20.push_back(Y2);
    U.free_field.push_back(X);
    if (n + 1 < N) {
      P.exp_euler(Y2, s2, dt);
      P.exp_euler(Y3, apply_map(maps, 3, X), dt);
      ens.advance(dt);
    }
    U.comp[std::size_t(Tree::two)].push_back(std::move(s2));
  }
}

}  // namespace

EnhancedNoise build_upsilon(const NoiseSeed& seed, std::uint64_t sample, const FrequencyLattice& grid,
                            const DispersionQ& Q, const Potential& V, double eps, const std::vector<double>& t_grid,
                            const RenormSet& renorm, const BurnIn& burn) {
  if (!(eps > 0.0)) fail(ErrorKind::domain, "build_upsilon needs eps > 0; use build_limit_upsilon for eps = 0");
  if (V.is_zero()) fail(ErrorKind::domain, "build_upsilon needs a nonzero potential");
  if (renorm.K != grid.K() || std::abs(renorm.eps - eps) > 1e-15)
    fail(ErrorKind::shape_mismatch,
         fmt::format("constants computed at (eps={}, K={}) but the grid has (eps={}, K={})", renorm.eps, renorm.K,
                     eps, grid.K()));
  const double dt = uniform_step(t_grid);
  if (renorm.dt > 0.0 && std::abs(renorm.dt - dt) > 1e-12 * dt)
    fail(ErrorKind::shape_mismatch, fmt::format("constants use dt={} but the grid step is {}", renorm.dt, dt));
  EnhancedNoise U;
  U.t_grid = t_grid;
  U.eps = eps;
  U.lambda = renorm.lambda;
  U.seed = seed;
  U.sample = sample;
  U.burn = burn;
  U.constants = renorm;
  U.Q = Q.with_eps(eps);
  U.potential = V.even_coeffs();
  const ObjectMaps maps = primed_maps(V, eps, renorm.lambda, renorm.C1);
  const Subtractions sub{renorm.C2, renorm.C3, 3.0 * renorm.C2 + 2.0 * renorm.C3};
  ModeOUEnsemble ens(seed, grid, U.Q, sample, t_grid.front() - std::max(0.0, burn.T));
  run_objects(U, std::move(ens), U.Q, maps, sub, [](const FourierField& x) { return x; });
  return U;
}

EnhancedNoise build_limit_upsilon(const NoiseSeed& seed, std::uint64_t sample, const FrequencyLattice& grid,
                                  double eps_cutoff, const std::vector<double>& t_grid, const BurnIn& burn) {
  const double dt = uniform_step(t_grid);
  EnhancedNoise U;
  U.t_grid = t_grid;
  U.eps = 0.0;
  U.lambda = 1.0;
  U.seed = seed;
  U.sample = sample;
  U.burn = burn;
  U.standard = standard_constants(eps_cutoff, grid.K(), burn.dt <= 0.0 ? dt : 0.0);
  U.Q = DispersionQ::laplacian(0.0);
  const int cut = U.standard->cutoff;
  const ObjectMaps maps = standard_maps(U.standard->c1);
  const Subtractions sub{U.standard->c2, 0.0, 3.0 * U.standard->c2};
  ModeOUEnsemble ens(seed, grid, U.Q, sample, t_grid.front() - std::max(0.0, burn.T));
  auto truncate = [cut](const FourierField& x) {
    FourierField y = x;
    const FrequencyLattice& g = y.grid();
    if (cut < g.K())
      for (std::size_t i = 0; i < y.size(); ++i)
        if (norm_inf(g.mode(i)) > cut) y[i] = 0.0;
    return y;
  };
  run_objects(U, std::move(ens), U.Q, maps, sub, truncate);
  return U;
}

const char* moment_tag(MomentSymbol s, int power) {
  switch (s) {
    case MomentSymbol::free: return "1";
    case MomentSymbol::wick: {
      static const char* tags[] = {"1^0", "1^1", "1^2", "1^3", "1^4", "1^5", "1^6", "1^7", "1^8"};
      return power >= 0 && power <= 8 ? tags[power] : "1^n";
    }
    case MomentSymbol::one_prime: return "1'";
    case MomentSymbol::two_prime: return "2'";
    case MomentSymbol::three0: return "3'0";
  }
  return "?";
}

ObjectConstants object_constants(const DispersionQ& Q, const Potential& V, double eps, int K) {
  ObjectConstants c;
  c.lambda = coupling_lambda(V, sigma2_limit(Q));
  c.a_m = a_coeffs(V, eps, c.lambda, sigma2_eps(Q, eps, K).value);
  return c;
}

namespace {

// sum over (l_1..l_n) in the box with l_1 + ... + l_n = k of prod 1/(2 a_j) g(S).
double contraction_sum(const FrequencyLattice& box, const std::vector<double>& a, int n, const Mode& k,
                       const std::function<double(double)>& g) {
  if (!box.contains(k)) return 0.0;
  if (n == 1) {
    const double ak = a[box.index(k)];
    return g(ak) / (2.0 * ak);
  }
  const double work = std::pow(double(box.size()), n - 1);
  if (work > 2e8)
    fail(ErrorKind::infeasible, fmt::format("contraction sum with {} legs at K = {} is infeasible", n, box.K()));
  std::vector<std::size_t> idx(std::size_t(n - 1), 0);
  double total = 0.0;
  while (true) {
    Mode rest = k;
    double S = 0.0, w = 1.0;
    for (std::size_t i : idx) {
      const Mode l = box.mode(i);
      for (int c = 0; c < 3; ++c) rest[c] -= l[c];
      S += a[i];
      w *= 0.5 / a[i];
    }
    if (box.contains(rest)) {
      const double al = a[box.index(rest)];
      total += w * (0.5 / al) * g(S + al);
    }
    std::size_t d = 0;
    for (; d < idx.size(); ++d) {
      if (++idx[d] < box.size()) break;
      idx[d] = 0;
    }
    if (d == idx.size()) break;
  }
  return total;
}

}  // namespace

double second_moment_oracle(const MomentSpec& spec, const DispersionQ& Q, double eps, int K,
                            const ObjectConstants& c, double dt) {
  const DispersionQ Qe = Q.with_eps(eps);
  const FrequencyLattice box = FrequencyLattice::minimal(K);
  const std::vector<double> a = bracket_sq_table(Qe, box);
  const double lag = spec.lag;
  if (lag < 0.0) fail(ErrorKind::domain, "negative lag");
  auto decay = [lag](double S) { return std::exp(-lag * S); };
  auto wick = [&](int n) { return factorial(n) * contraction_sum(box, a, n, spec.k, decay); };
  const bool primed = spec.symbol == MomentSymbol::one_prime || spec.symbol == MomentSymbol::two_prime ||
                      spec.symbol == MomentSymbol::three0;
  if (primed && !(eps > 0.0)) fail(ErrorKind::unsupported, "primed objects need eps > 0");
  switch (spec.symbol) {
    case MomentSymbol::free: return wick(1);
    case MomentSymbol::wick:
      if (spec.power < 0) fail(ErrorKind::domain, "negative Wick power");
      if (spec.power == 0) return spec.k == Mode{0, 0, 0} ? 1.0 : 0.0;
      return wick(spec.power);
    case MomentSymbol::one_prime: {
      double s = 0.0;
      for (std::size_t i = 0; i < c.a_m.size(); ++i) {
        const int m = int(i) + 1;
        s += c.a_m[i] * c.a_m[i] * std::pow(eps, 2 * m - 2) * wick(2 * m - 1);
      }
      return s;
    }
    case MomentSymbol::two_prime: {
      double s = 0.0;
      for (std::size_t i = 0; i < c.a_m.size(); ++i) {
        const int m = int(i) + 1;
        const double coef = c.a_m[i] / m;
        s += coef * coef * std::pow(eps, 2 * m - 2) * wick(2 * m);
      }
      return s;
    }
    case MomentSymbol::three0: {
      if (lag != 0.0) fail(ErrorKind::unsupported, "two-time moments of <3'0> are not implemented");
      if (!box.contains(spec.k)) return 0.0;
      const double ak = a[box.index(spec.k)];
      std::function<double(double)> g;
      if (dt == 0.0) {
        g = [ak](double S) { return 1.0 / (ak * (ak + S)); };
      } else {
        const double phi = -std::expm1(-dt * ak) / ak;
        const double q = std::exp(-dt * ak);
        g = [=](double S) {
          const double r = std::exp(-dt * S);
          return phi * phi * (1.0 + q * r) / ((1.0 - q * q) * (1.0 - q * r));
        };
      }
      double s = 0.0;
      for (std::size_t i = 0; i < c.a_m.size(); ++i) {
        const int m = int(i) + 1;
        const double coef = 3.0 * c.a_m[i] / (m * (2 * m + 1));
        s += coef * coef * std::pow(eps, 2 * m - 2) * factorial(2 * m + 1) *
             contraction_sum(box, a, 2 * m + 1, spec.k, g);
      }
      return s;
    }
  }
  fail(ErrorKind::unsupported, "unknown moment symbol");
}

MomentReport summarize_moment(std::string symbol, const Mode& k, const std::vector<double>& values, double oracle) {
  MomentReport r;
  r.symbol = std::move(symbol);
  r.k = k;
  r.samples = values.size();
  r.oracle = oracle;
  if (values.empty()) fail(ErrorKind::usage, "no samples");
  double sum = 0.0;
  for (double v : values) sum += v;
  const double M = double(values.size());
  r.mean = sum / M;
  if (values.size() < 2) return r;
  double ss = 0.0;
  for (double v : values) {
    const double loo = (sum - v) / (M - 1.0);
    ss += (loo - r.mean) * (loo - r.mean);
  }
  r.se = std::sqrt((M - 1.0) / M * ss);
  if (*r.se > 0.0) r.z = (r.mean - oracle) / *r.se;
  return r;
}

MomentReport mc_moment(const MomentSpec& spec, const DispersionQ& Q, const Potential& V, double eps, int K,
                       std::size_t M, const NoiseSeed& seed, const McOptions& opt) {
  if (M == 0) fail(ErrorKind::usage, "need at least one sample");
  const DispersionQ Qe = Q.with_eps(eps);
  const FrequencyLattice grid = FrequencyLattice::minimal(K);
  if (!grid.contains(spec.k)) fail(ErrorKind::domain, "mode outside the lattice");
  const bool primed = spec.symbol == MomentSymbol::one_prime || spec.symbol == MomentSymbol::two_prime ||
                      spec.symbol == MomentSymbol::three0;
  ObjectConstants oc;
  ObjectMaps maps;
  if (primed) {
    if (!(eps > 0.0)) fail(ErrorKind::unsupported, "primed objects need eps > 0");
    oc = object_constants(Q, V, eps, K);
    const double s2 = sigma2_eps(Q, eps, K).value;
    maps = primed_maps(V, eps, oc.lambda, c1(V, eps, oc.lambda, s2));
  }
  double nu = 0.0;
  for (double x : bracket_sq_table(Qe, grid)) nu += 0.5 / x;
  const Polynomial hn = hermite_polynomial(std::max(0, spec.power), nu);
  auto observe = [&](const FourierField& X) -> FourierField {
    switch (spec.symbol) {
      case MomentSymbol::free: return X;
      case MomentSymbol::wick:
        if (spec.power <= 1) return spec.power == 1 ? X : FourierField::constant(grid, 1.0);
        return map_pointwise(X, [&hn](double v) { return hn(v); }, spec.power);
      case MomentSymbol::one_prime: return apply_map(maps, 1, X);
      case MomentSymbol::two_prime: return apply_map(maps, 2, X);
      default: return X;
    }
  };
  const std::size_t ki = grid.index(spec.k);
  std::vector<double> values(M, 0.0);
  double oracle_dt = 0.0;
  if (spec.symbol == MomentSymbol::three0) {
    if (spec.lag != 0.0) fail(ErrorKind::unsupported, "two-time moments of <3'0> are not implemented");
    const double dt = opt.dt;
    const double hb = opt.burn.dt <= 0.0 ? dt : opt.burn.dt;
    if (hb != dt) fail(ErrorKind::usage, "the <3'0> oracle needs a uniform burn-in step");
    oracle_dt = dt;
    const auto nb = std::size_t(std::ceil(opt.burn.T / dt - 1e-9));
#pragma omp parallel for schedule(dynamic)
    for (std::size_t s = 0; s < M; ++s) {
      ModeOUEnsemble ens(seed, grid, Qe, s, -opt.burn.T);
      const Propagator P(Qe, grid);
      FourierField Y3(grid);
      for (std::size_t i = 0; i < nb; ++i) {
        P.exp_euler(Y3, apply_map(maps, 3, ens.field()), dt);
        ens.advance(dt);
      }
      values[s] = std::norm(Y3[ki]);
    }
  } else {
#pragma omp parallel for schedule(dynamic)
    for (std::size_t s = 0; s < M; ++s) {
      ModeOUEnsemble ens(seed, grid, Qe, s, 0.0);
      const FourierField a = observe(ens.field());
      if (spec.lag > 0.0) {
        ens.advance(spec.lag);
        const FourierField b = observe(ens.field());
        values[s] = std::real(a[ki] * std::conj(b[ki]));
      } else {
        values[s] = std::norm(a[ki]);
      }
    }
  }
  const double oracle = second_moment_oracle(spec, Q, eps, K, oc, oracle_dt);
  return summarize_moment(moment_tag(spec.symbol, spec.power), spec.k, values, oracle);
}

void write_moment_csv_header(std::ostream& os, const std::string& meta) {
  os << "# schema=1\n";
  if (!meta.empty()) os << "# " << meta << "\n";
  os << "symbol,k1,k2,k3,samples,mean,se,oracle,z\n";
}

void write_moment_csv_row(std::ostream& os, const MomentReport& r) {
  os << fmt::format("{},{},{},{},{},{:.12g},{},{:.12g},{}\n", r.symbol, r.k[0], r.k[1], r.k[2], r.samples, r.mean,
                    r.se ? fmt::format("{:.6g}", *r.se) : std::string("NA"), r.oracle,
                    r.z ? fmt::format("{:.4f}", *r.z) : std::string("NA"));
}

RegularityReport regularity_diagnostic(const FrequencyLattice& grid, const std::vector<double>& moments, double alpha,
                                       int d) {
  if (moments.size() != grid.size()) fail(ErrorKind::shape_mismatch, "one moment per lattice mode expected");
  RegularityReport r;
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const Mode k = grid.mode(i);
    const double k2 = norm2(k);
    const double weight = std::pow(1.0 + 4.0 * M_PI * M_PI * k2, 0.5 * (d + 2.0 * alpha));
    const double v = weight * moments[i];
    if (v > r.sup) {
      r.sup = v;
      r.argmax = k;
    }
    const std::size_t shell = k2 == 0.0 ? 0 : std::size_t(std::floor(std::log2(std::sqrt(k2)))) + 1;
    if (r.shells.size() <= shell) r.shells.resize(shell + 1, 0.0);
    r.shells[shell] = std::max(r.shells[shell], v);
  }
  double first = 0.0;
  for (double s : r.shells)
    if (s > 0.0) {
      first = s;
      break;
    }
  r.growth = 0.0;
  if (first > 0.0)
    for (double s : r.shells) r.growth = std::max(r.growth, s / first);
  r.consistent = r.growth <= 4.0;
  return r;
}

double x_norm(const EnhancedNoise& U, double T, double kappa) {
  if (U.t_grid.empty() || T > U.t_grid.back() + 1e-12 || T < U.t_grid.front())
    fail(ErrorKind::domain, "time grid does not cover [0, T]");
  std::size_t n_end = 0;
  while (n_end < U.t_grid.size() && U.t_grid[n_end] <= T + 1e-12) ++n_end;
  double total = 0.0;
  for (Tree t : all_trees) {
    double sup = 0.0;
    for (std::size_t n = 0; n < n_end; ++n) sup = std::max(sup, besov_norm(U.at(t, n), tree_regularity(t, kappa)));
    total += sup;
  }
  double holder = 0.0;
  const auto& z = U[Tree::three0];
  for (std::size_t j = 1; j < n_end; ++j)
    for (std::size_t i = 0; i < j; ++i)
      holder = std::max(holder, besov_norm(z[j] - z[i], 0.25 - kappa) /
                                    std::pow(U.t_grid[j] - U.t_grid[i], 0.125));
  return total + holder;
}

}  // namespace phi4
