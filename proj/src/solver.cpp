#include "phi4/solver.hpp"

#include <cmath>
#include <utility>

#include <fmt/format.h>

#include "phi4/besov.hpp"
#include "phi4/spectral.hpp"

namespace phi4 {

SolverConfig resolved(const SolverConfig& c, int n) {
  SolverConfig r = c;
  n = std::max(n, 2);
  if (!(r.dt > 0.0)) fail(ErrorKind::config, "solver dt must be positive");
  if (!(r.T > 0.0)) fail(ErrorKind::config, "solver horizon T must be positive");
  if (!(r.kappa > 0.0)) fail(ErrorKind::config, "kappa must be positive");
  if (r.delta0 == 0.0) r.delta0 = r.kappa / (2.0 * n);
  if (!(r.delta0 > 0.0 && r.delta0 < r.kappa / n))
    fail(ErrorKind::config, fmt::format("delta0 = {} must lie in (0, kappa/n) = (0, {})", r.delta0, r.kappa / n));
  if (r.picard_iters < 1) fail(ErrorKind::config, "picard_iters must be >= 1");
  return r;
}

BlowUp::BlowUp(double t, RemainderPair partial)
    : Error(ErrorKind::blow_up, fmt::format("non-finite solution at t = {}", t)), t_(t), partial_(std::move(partial)) {}

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

bool finite(const FourierField& f) {
  for (const cplx& c : f.coeffs())
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
  return true;
}

// Pointwise -eps^{-3/2} V'(sqrt(eps) x; sqrt(eps) y) on the alias-free grid.
FourierField remainder_term(const Potential& V, double eps, const FourierField& psi, const FourierField& y) {
  const int deg = V.degree() - 1;
  const FrequencyLattice& grid = y.grid();
  if (deg < 4) return FourierField(grid);
  const int M = padded_size(grid.K(), deg);
  const RealGrid px = to_physical(psi, M);
  RealGrid py = to_physical(y, M);
  const double se = std::sqrt(eps);
  const double scale = -1.0 / (eps * se);
  for (std::size_t i = 0; i < py.size(); ++i) py[i] = scale * taylor_remainder(V, se * px[i], se * py[i]);
  return from_physical(py, M, grid);
}

// Nonlinearities of one step: v source, A source (= y < <2'>) and w source.
struct StepSources {
  FourierField Nv, lt, Nw;
};

struct SolverContext {
  const SolverConfig& cfg;
  const EnhancedNoise& U;
  Propagator P;
  std::vector<double> decay;  // e^{-dt a}
  Potential V;
  bool remainder;
};

Potential potential_of(const EnhancedNoise& U) {
  return U.potential.empty() ? Potential::zero() : Potential(U.potential);
}

StepSources sources(const SolverContext& c, std::size_t n, const FourierField& v, const FourierField& w,
                    const FourierField& Pv0, const FourierField& h, const FourierField& A,
                    const std::array<FourierField, 4>& F) {
  const double lam = c.cfg.lambda;
  const EnhancedNoise& U = c.U;
  const FourierField u = v + w;
  FourierField y = u;
  y.axpy(-lam, U.at(Tree::three0, n));
  const FourierField& s2 = U.at(Tree::two, n);
  ParaSplit sp = para_split(y, s2);
  FourierField I2 = U.c20[n] - h;
  FourierField comm = A - para_lt(y, I2);
  const GContext ctx{c.remainder ? &U.free_field[n] : nullptr, h, std::move(I2), std::move(comm)};
  StepSources out{(-3.0 * lam) * sp.lt, std::move(sp.lt), FourierField(v.grid())};
  out.Nw = g_map(lam, U, n, u, F, ctx);
  out.Nw.axpy(-3.0 * lam, resonance(Pv0 + w, s2));
  return out;
}

double sup_dist(const std::vector<FourierField>& a, const std::vector<FourierField>& b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) d = std::max(d, max_abs_diff(a[i], b[i]));
  return d;
}

}  // namespace

double taylor_remainder(const Potential& V, double x, double y) {
  double s = 0.0;
  double yj = y * y * y * y;
  for (int j = 4; j <= V.degree() - 1; ++j) {
    s += V.derivative(j + 1)(x) * yj / factorial(j);
    yj *= y;
  }
  return s;
}

std::array<FourierField, 4> coeffs_F(double lambda, const EnhancedNoise& U, std::size_t n) {
  const FourierField& o0 = U.at(Tree::zero, n);
  const FourierField& o1 = U.at(Tree::one, n);
  const FourierField& Z = U.at(Tree::three0, n);
  const FourierField& r31 = U.at(Tree::three1, n);
  const FourierField& r22 = U.at(Tree::two2, n);
  const FourierField& r32 = U.at(Tree::three2, n);
  const FrequencyLattice& grid = Z.grid();
  const double l2 = lambda * lambda, l3 = l2 * lambda, l4 = l3 * lambda;
  std::array<FourierField, 4> F{FourierField(grid), FourierField(grid), FourierField(grid), FourierField(grid)};
  if (lambda == 0.0) return F;
  const FourierField Z2 = product(Z, Z);
  const FourierField o0Z = product(o0, Z);
  const FourierField o0Z2 = product(o0, Z2);
  F[3] = (-lambda) * o0;
  F[2] = (3.0 * l2) * o0Z;
  F[2].axpy(-3.0 * lambda, o1);
  const ParaSplit z1 = para_split(Z, o1);
  F[1] = (-3.0 * l3) * o0Z2;
  F[1].axpy(6.0 * l2, z1.lt).axpy(6.0 * l2, z1.gt).axpy(6.0 * l2, r31).axpy(9.0 * l2, r22);
  const ParaSplit z21 = para_split(Z2, o1);
  FourierField bracket = z21.lt + z21.gt;
  bracket += resonance(resonance(Z, Z), o1);
  bracket.axpy(2.0, product(r31, Z));
  bracket.axpy(2.0, commutator_com(Z, Z, o1));
  F[0] = l4 * product(o0Z2, Z);
  F[0].axpy(-3.0 * l3, bracket).axpy(3.0 * l2, r32).axpy(-9.0 * l3, product(r22, Z));
  return F;
}

FourierField g_map(double lambda, const EnhancedNoise& U, std::size_t n, const FourierField& u,
                   const std::array<FourierField, 4>& F, const GContext& ctx) {
  if (n >= U.steps()) fail(ErrorKind::domain, "time index outside the noise grid");
  require_same_grid(u, U.at(Tree::two, n));
  // Horner: ((F3 u + F2) u + F1) u + F0
  FourierField G = product(F[3], u);
  G += F[2];
  G = product(G, u);
  G += F[1];
  G = product(G, u);
  G += F[0];
  FourierField y = u;
  y.axpy(-lambda, U.at(Tree::three0, n));
  const FourierField& s2 = U.at(Tree::two, n);
  if (lambda != 0.0) {
    G.axpy(-3.0 * lambda, para_gt(y, s2));
    FourierField b = commutator_com(y, ctx.I2, s2);
    b += resonance(s2, ctx.comm);
    b.axpy(-1.0, product(resonance(s2, ctx.h), y));
    G.axpy(9.0 * lambda * lambda, b);
  }
  if (ctx.psi && U.eps > 0.0 && !U.potential.empty()) G += remainder_term(Potential(U.potential), U.eps, *ctx.psi, y);
  return G;
}

EnhancedNoise zero_noise(const FrequencyLattice& grid, const std::vector<double>& t_grid, const DispersionQ& Qe) {
  EnhancedNoise U;
  U.t_grid = t_grid;
  U.eps = Qe.eps();
  U.Q = Qe;
  U.lambda = 0.0;
  const FourierField z(grid);
  for (auto& c : U.comp) c.assign(t_grid.size(), z);
  U.free_field.assign(t_grid.size(), z);
  U.c20.assign(t_grid.size(), z);
  return U;
}

RemainderPair solve(const SolverConfig& config, const EnhancedNoise& U, const FourierField& v0,
                    const FourierField& w0) {
  const int n_pot = U.potential.empty() ? 2 : int(U.potential.size());
  const SolverConfig cfg = resolved(config, n_pot);
  if (U.steps() < 2) fail(ErrorKind::domain, "noise grid too short");
  const double dt = U.t_grid[1] - U.t_grid[0];
  if (std::abs(dt - cfg.dt) > 1e-12 * cfg.dt)
    fail(ErrorKind::shape_mismatch, fmt::format("solver dt {} differs from the noise grid step {}", cfg.dt, dt));
  if (cfg.T > U.t_grid.back() - U.t_grid.front() + 1e-12)
    fail(ErrorKind::domain, "horizon beyond the noise grid");
  const auto N = std::size_t(std::llround(cfg.T / dt)) + 1;
  require_same_grid(v0, U.at(Tree::two, 0));
  require_same_grid(w0, U.at(Tree::two, 0));

  SolverContext c{cfg, U, Propagator(U.Q, v0.grid()), {}, potential_of(U), U.eps > 0.0};
  c.decay.resize(c.P.rates().size());
  for (std::size_t i = 0; i < c.decay.size(); ++i) c.decay[i] = std::exp(-dt * c.P.rates()[i]);
  auto decay_step = [&](FourierField& f) {
    for (std::size_t i = 0; i < f.size(); ++i) f[i] *= c.decay[i];
  };
  // Linear parts e^{t(L-1)} v0 and h(t) on the grid.
  std::vector<FourierField> Pv0{v0}, H{U.c20[0]};
  for (std::size_t n = 1; n < N; ++n) {
    Pv0.push_back(Pv0.back());
    decay_step(Pv0.back());
    H.push_back(H.back());
    decay_step(H.back());
  }
  RemainderPair out;
  out.t_grid.assign(U.t_grid.begin(), U.t_grid.begin() + std::ptrdiff_t(N));

  if (cfg.mode == SolverMode::sequential) {
    FourierField v = v0, w = w0, A(v0.grid());
    out.v.push_back(v);
    out.w.push_back(w);
    for (std::size_t n = 0; n + 1 < N; ++n) {
      const auto F = coeffs_F(cfg.lambda, U, n);
      const StepSources s = sources(c, n, v, w, Pv0[n], H[n], A, F);
      c.P.exp_euler(v, s.Nv, dt);
      c.P.exp_euler(w, s.Nw, dt);
      c.P.exp_euler(A, s.lt, dt);
      if (!finite(v) || !finite(w)) {
        const double t = out.t_grid[n + 1];
        out.t_grid.resize(out.v.size());
        throw BlowUp(t, out);
      }
      out.v.push_back(v);
      out.w.push_back(w);
    }
    return out;
  }

  // Picard: evaluate all sources against the previous iterate, then integrate.
  const std::size_t steps = N - 1;
  const FourierField zero(v0.grid());
  std::vector<std::array<FourierField, 4>> F(steps, {zero, zero, zero, zero});
#pragma omp parallel for schedule(dynamic)
  for (std::size_t n = 0; n < steps; ++n) F[n] = coeffs_F(cfg.lambda, U, n);
  std::vector<FourierField> v(N, v0), w(N, w0);
  for (std::size_t n = 1; n < N; ++n) {
    v[n] = v[n - 1];
    decay_step(v[n]);
    w[n] = w[n - 1];
    decay_step(w[n]);
  }
  double prev = HUGE_VAL;
  int growth = 0;
  for (int sweep = 0; sweep < cfg.picard_iters; ++sweep) {
    // A on the previous iterate
    std::vector<FourierField> lt(steps, zero);
#pragma omp parallel for schedule(dynamic)
    for (std::size_t n = 0; n < steps; ++n) {
      FourierField y = v[n] + w[n];
      y.axpy(-cfg.lambda, U.at(Tree::three0, n));
      lt[n] = para_lt(y, U.at(Tree::two, n));
    }
    std::vector<FourierField> A(N, FourierField(v0.grid()));
    for (std::size_t n = 0; n + 1 < N; ++n) {
      A[n + 1] = A[n];
      c.P.exp_euler(A[n + 1], lt[n], dt);
    }
    std::vector<StepSources> S(steps, StepSources{zero, zero, zero});
#pragma omp parallel for schedule(dynamic)
    for (std::size_t n = 0; n < steps; ++n) S[n] = sources(c, n, v[n], w[n], Pv0[n], H[n], A[n], F[n]);
    std::vector<FourierField> vn(N, v0), wn(N, w0);
    for (std::size_t n = 0; n + 1 < N; ++n) {
      vn[n + 1] = vn[n];
      c.P.exp_euler(vn[n + 1], S[n].Nv, dt);
      wn[n + 1] = wn[n];
      c.P.exp_euler(wn[n + 1], S[n].Nw, dt);
      if (!finite(vn[n + 1]) || !finite(wn[n + 1])) {
        out.v.assign(vn.begin(), vn.begin() + std::ptrdiff_t(n + 1));
        out.w.assign(wn.begin(), wn.begin() + std::ptrdiff_t(n + 1));
        out.t_grid.resize(n + 1);
        throw BlowUp(U.t_grid[n + 1], out);
      }
    }
    const double d = std::max(sup_dist(vn, v), sup_dist(wn, w));
    v = std::move(vn);
    w = std::move(wn);
    if (d <= cfg.picard_tol) break;
    growth = d > prev ? growth + 1 : 0;
    if (growth >= 2)
      fail(ErrorKind::non_contraction,
           fmt::format("Picard distance grew in two consecutive sweeps (sweep {}, distance {:.3e})", sweep, d));
    prev = d;
  }
  out.v = std::move(v);
  out.w = std::move(w);
  return out;
}

RemainderPair difference(const RemainderPair& a, const RemainderPair& b) {
  if (a.v.size() != b.v.size()) fail(ErrorKind::shape_mismatch, "trajectories of different length");
  RemainderPair d;
  d.t_grid = a.t_grid;
  for (std::size_t i = 0; i < a.v.size(); ++i) {
    d.v.push_back(a.v[i] - b.v[i]);
    d.w.push_back(a.w[i] - b.w[i]);
  }
  return d;
}

double y_norm(const RemainderPair& P, double eps, double T, double kappa, double delta0,
              std::size_t max_holder_points) {
  if (P.t_grid.empty() || T > P.t_grid.back() + 1e-12) fail(ErrorKind::domain, "T exceeds the trajectory");
  std::size_t N = 0;
  while (N < P.t_grid.size() && P.t_grid[N] <= T + 1e-12) ++N;
  const double e2 = eps * eps;
  auto component = [&](const std::vector<FourierField>& f, double high) {
    double s = 0.0, lin = 0.0;
    std::vector<double> nk(N);
    for (std::size_t n = 0; n < N; ++n) {
      const double t = P.t_grid[n];
      const BesovProfile prof = besov_profile(f[n]);
      nk[n] = prof.norm(kappa);
      const double weight = (eps > 0.0 && t < e2) ? std::pow(std::sqrt(t) / eps, delta0) : 1.0;
      s = std::max(s, weight * nk[n]);
      lin = std::max(lin, std::pow(t, 2.0 / 3.0) * prof.norm(high));
    }
    std::vector<std::size_t> pts;
    const std::size_t stride = std::max<std::size_t>(1, (N + max_holder_points - 1) / std::max<std::size_t>(1, max_holder_points));
    for (std::size_t n = 0; n < N; n += stride) pts.push_back(n);
    if (pts.back() != N - 1) pts.push_back(N - 1);
    double hol = 0.0;
    for (std::size_t j = 1; j < pts.size(); ++j)
      for (std::size_t i = 0; i < j; ++i) {
        const double s0 = P.t_grid[pts[i]], t1 = P.t_grid[pts[j]];
        if (s0 == 0.0) continue;
        hol = std::max(hol, std::pow(s0, 0.25) * besov_norm(f[pts[j]] - f[pts[i]], kappa) / std::pow(t1 - s0, 0.125));
      }
    return s + lin + hol;
  };
  return component(P.v, 1.0 - 2.0 * kappa) + component(P.w, 1.0 + 2.0 * kappa);
}

std::vector<FourierField> reconstruct_phi(const EnhancedNoise& U, const RemainderPair& P, double lambda) {
  std::vector<FourierField> phi;
  phi.reserve(P.v.size());
  for (std::size_t n = 0; n < P.v.size(); ++n) {
    FourierField f = U.free_field[n];
    f.axpy(-lambda, U.at(Tree::three0, n));
    f += P.v[n];
    f += P.w[n];
    phi.push_back(std::move(f));
  }
  return phi;
}

std::vector<FourierField> brute_force_reference(const EnhancedNoise& U, const Potential& V, double C,
                                                const FourierField& phi0, double T) {
  if (!(U.eps > 0.0)) fail(ErrorKind::domain, "the reference integrates the eps > 0 equation");
  if (U.steps() < 2) fail(ErrorKind::domain, "noise grid too short");
  const double dt = U.t_grid[1] - U.t_grid[0];
  const auto N = std::size_t(std::llround(T / dt)) + 1;
  if (N > U.steps()) fail(ErrorKind::domain, "horizon beyond the noise grid");
  const Propagator P(U.Q, phi0.grid());
  const double se = std::sqrt(U.eps);
  const Polynomial dV = (1.0 / (U.eps * se)) * V.derivative(1).scaled(se);
  const int deg = std::max(1, dV.degree());
  std::vector<FourierField> phi{phi0};
  for (std::size_t n = 0; n + 1 < N; ++n) {
    const FourierField& cur = phi.back();
    FourierField drift = map_pointwise(cur, [&dV](double x) { return -dV(x); }, deg);
    drift.axpy(C, cur);
    FourierField next = cur;
    P.exp_euler(next, drift, dt);
    // OU increment of the shared free field: X_{n+1} - e^{-dt a} X_n
    next += U.free_field[n + 1];
    next -= P.apply(U.free_field[n], dt);
    if (!finite(next)) throw Error(ErrorKind::blow_up, fmt::format("reference blew up at t = {}", U.t_grid[n + 1]));
    phi.push_back(std::move(next));
  }
  return phi;
}

double relative_l2(const std::vector<FourierField>& a, const std::vector<FourierField>& b) {
  if (a.size() != b.size()) fail(ErrorKind::shape_mismatch, "trajectories of different length");
  double r = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double nb = std::sqrt(b[i].l2_sq());
    const double d = std::sqrt((a[i] - b[i]).l2_sq());
    r = std::max(r, nb > 0.0 ? d / nb : d);
  }
  return r;
}

}  // namespace phi4
