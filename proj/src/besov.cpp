#include "phi4/besov.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>

#include "phi4/error.hpp"
#include "phi4/spectral.hpp"

namespace phi4 {

DyadicPartition::DyadicPartition(int K) : jmax_(0) {
  while (double(1 << jmax_) < 8.0 * K / 3.0) ++jmax_;
}

double DyadicPartition::psi(double r) {
  if (r <= inner) return 1.0;
  if (r >= outer) return 0.0;
  const double t = (r - inner) / (outer - inner);
  return 1.0 - t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double DyadicPartition::weight(int j, double r) {
  if (j < -1) return 0.0;
  if (j == -1) return chi_tilde(r);
  return chi(std::ldexp(r, -j));
}

double BesovProfile::norm(double alpha) const {
  double m = 0.0;
  for (std::size_t i = 0; i < b.size(); ++i) m = std::max(m, std::exp2(alpha * (int(i) - 1)) * b[i]);
  return m;
}

void BesovProfile::write_csv(std::ostream& os) const {
  os << "j,b_j\n";
  for (std::size_t i = 0; i < b.size(); ++i) os << int(i) - 1 << ',' << b[i] << '\n';
}

namespace {

struct WeightTable {
  std::vector<std::vector<double>> w;  // [j+1][index]
};

const WeightTable& weight_table(const FrequencyLattice& grid) {
  static std::mutex mu;
  static std::map<int, std::unique_ptr<WeightTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[grid.K()];
  if (!slot) {
    slot = std::make_unique<WeightTable>();
    const DyadicPartition part(grid.K());
    const FrequencyLattice minimal = FrequencyLattice::minimal(grid.K());
    slot->w.assign(std::size_t(part.nblocks()), std::vector<double>(minimal.size()));
    for (std::size_t i = 0; i < minimal.size(); ++i) {
      const double r = norm2(minimal.mode(i));
      for (int j = -1; j <= part.jmax(); ++j) slot->w[std::size_t(j + 1)][i] = DyadicPartition::weight(j, r);
    }
  }
  return *slot;
}

int nblocks(const FrequencyLattice& grid) { return DyadicPartition(grid.K()).nblocks(); }

// Physical samples of every block of f on an M^3 grid.
template <class T>
std::vector<std::vector<T>> physical_blocks(const FourierField& f, int M) {
  const int nb = nblocks(f.grid());
  std::vector<std::vector<T>> out{};
  out.resize(std::size_t(nb));
  for (int j = -1; j < nb - 1; ++j) {
    const FourierField bj = block(f, j);
    if constexpr (std::is_same_v<T, double>)
      out[std::size_t(j + 1)] = to_physical(bj, M);
    else
      out[std::size_t(j + 1)] = to_physical_complex(bj, M);
  }
  return out;
}

template <class T>
ParaSplit split_impl(const FourierField& f, const FourierField& g) {
  const FrequencyLattice& grid = f.grid();
  const int M = padded_size(grid.K(), 2);
  const auto F = physical_blocks<T>(f, M);
  const auto G = physical_blocks<T>(g, M);
  const std::size_t nb = F.size();
  const std::size_t n3 = F[0].size();
  std::vector<T> lt(n3, T(0)), gt(n3, T(0)), res(n3, T(0));
  std::vector<T> Sf(n3, T(0)), Sg(n3, T(0));  // partial sums over blocks < j-1
  for (std::size_t j = 0; j < nb; ++j) {
    if (j >= 2) {
      for (std::size_t x = 0; x < n3; ++x) {
        Sf[x] += F[j - 2][x];
        Sg[x] += G[j - 2][x];
      }
    }
    const std::size_t lo = j == 0 ? 0 : j - 1;
    const std::size_t hi = std::min(nb - 1, j + 1);
    for (std::size_t x = 0; x < n3; ++x) {
      lt[x] += Sf[x] * G[j][x];
      gt[x] += F[j][x] * Sg[x];
      T r(0);
      for (std::size_t i = lo; i <= hi; ++i) r += F[i][x];
      res[x] += r * G[j][x];
    }
  }
  if constexpr (std::is_same_v<T, double>)
    return {from_physical(lt, M, grid), from_physical(gt, M, grid), from_physical(res, M, grid)};
  else
    return {from_physical_complex(lt, M, grid), from_physical_complex(gt, M, grid),
            from_physical_complex(res, M, grid)};
}

void check_grid(const std::vector<FourierField>& traj, const std::vector<double>& t_grid) {
  if (traj.size() != t_grid.size()) fail(ErrorKind::shape_mismatch, "trajectory length differs from time grid");
  for (std::size_t n = 1; n < t_grid.size(); ++n)
    if (!(t_grid[n] > t_grid[n - 1])) fail(ErrorKind::shape_mismatch, "time grid not increasing");
}

}  // namespace

const std::vector<double>& block_weights(const FrequencyLattice& grid, int j) {
  const auto& t = weight_table(grid);
  if (j < -1 || j + 1 >= int(t.w.size())) fail(ErrorKind::domain, "block index outside partition");
  return t.w[std::size_t(j + 1)];
}

FourierField block(const FourierField& f, int j) {
  if (j < -1) fail(ErrorKind::domain, "block index must be >= -1");
  FourierField out(f.grid(), f.hermitian());
  if (j > DyadicPartition(f.grid().K()).jmax()) return out;
  const auto& w = block_weights(f.grid(), j);
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = w[i] * f[i];
  return out;
}

BesovProfile besov_profile(const FourierField& f) {
  const int M = padded_size(f.grid().K(), 2);
  const int nb = nblocks(f.grid());
  BesovProfile p;
  p.b.assign(std::size_t(nb), 0.0);
  for (int j = -1; j < nb - 1; ++j) {
    const FourierField bj = block(f, j);
    double m = 0.0;
    if (bj.max_abs() == 0.0) {
      m = 0.0;
    } else if (f.hermitian()) {
      for (double x : to_physical(bj, M)) m = std::max(m, std::abs(x));
    } else {
      for (const cplx& x : to_physical_complex(bj, M)) m = std::max(m, std::abs(x));
    }
    p.b[std::size_t(j + 1)] = m;
  }
  return p;
}

double besov_norm(const FourierField& f, double alpha) { return besov_profile(f).norm(alpha); }

ParaSplit para_split(const FourierField& f, const FourierField& g) {
  require_same_grid(f, g);
  if (f.hermitian() && g.hermitian()) return split_impl<double>(f, g);
  return split_impl<cplx>(f, g);
}

FourierField para_lt(const FourierField& f, const FourierField& g) { return para_split(f, g).lt; }
FourierField para_gt(const FourierField& f, const FourierField& g) { return para_split(f, g).gt; }
FourierField resonance(const FourierField& f, const FourierField& g) { return para_split(f, g).res; }

FourierField commutator_com(const FourierField& f, const FourierField& g, const FourierField& h) {
  require_same_grid(f, g);
  require_same_grid(f, h);
  return resonance(para_lt(f, g), h) - product(f, resonance(g, h));
}

FourierField heat_para_commutator(const FourierField& f, const FourierField& g, const DispersionQ& Q, double t) {
  if (t < 0.0) fail(ErrorKind::domain, "negative time in heat commutator");
  const Propagator P(Q, f.grid());
  return P.apply(para_lt(f, g), t) - para_lt(f, P.apply(g, t));
}

std::vector<FourierField> duhamel_integral(const std::vector<FourierField>& f_traj, const DispersionQ& Q,
                                           const std::vector<double>& t_grid) {
  check_grid(f_traj, t_grid);
  std::vector<FourierField> out;
  if (f_traj.empty()) return out;
  const Propagator P(Q, f_traj[0].grid());
  FourierField acc(f_traj[0].grid(), f_traj[0].hermitian());
  out.reserve(f_traj.size());
  out.push_back(acc);
  for (std::size_t n = 0; n + 1 < f_traj.size(); ++n) {
    P.exp_euler(acc, f_traj[n], t_grid[n + 1] - t_grid[n]);
    out.push_back(acc);
  }
  return out;
}

std::vector<FourierField> duhamel_para_commutator(const std::vector<FourierField>& f_traj,
                                                  const std::vector<FourierField>& g_traj, const DispersionQ& Q,
                                                  const std::vector<double>& t_grid) {
  check_grid(f_traj, t_grid);
  check_grid(g_traj, t_grid);
  if (!t_grid.empty() && t_grid[0] != 0.0) fail(ErrorKind::shape_mismatch, "time grid must start at 0");
  std::vector<FourierField> fg;
  fg.reserve(f_traj.size());
  for (std::size_t n = 0; n < f_traj.size(); ++n) fg.push_back(para_lt(f_traj[n], g_traj[n]));
  const auto I_fg = duhamel_integral(fg, Q, t_grid);
  const auto I_g = duhamel_integral(g_traj, Q, t_grid);
  std::vector<FourierField> out;
  out.reserve(f_traj.size());
  for (std::size_t n = 0; n < f_traj.size(); ++n) out.push_back(I_fg[n] - para_lt(f_traj[n], I_g[n]));
  return out;
}

}  // namespace phi4
