#include "phi4/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "fft.hpp"
#include "phi4/error.hpp"
#include "phi4/spectral.hpp"

namespace phi4::kernels {

BoxRates BoxRates::from_symbol(const DispersionQ& Q, int K, int leg_cut) {
  if (leg_cut < 0 || leg_cut > K) leg_cut = K;
  return {K, leg_cut, bracket_sq_table(Q, FrequencyLattice::minimal(K))};
}

double resonance_kernel(double A, double S, double dt) {
  if (dt == 0.0) return 1.0 / (A + S);
  const double phi = -std::expm1(-dt * A) / A;
  return phi * std::exp(-dt * S) / -std::expm1(-dt * (A + S));
}

namespace {

// Sum over legs 2..p for a fixed first leg with index i1.
double direct_inner(const BoxRates& r, int p, double dt, std::size_t i1) {
  const int K = r.K;
  const int C = r.leg_cut;
  const int n = 2 * K + 1;
  const FrequencyLattice box = FrequencyLattice::minimal(K);
  const Mode l1 = box.mode(i1);
  if (norm_inf(l1) > C) return 0.0;
  auto at = [&](int a, int b, int c) {
    return r.a[(std::size_t(a + K) * n + std::size_t(b + K)) * n + std::size_t(c + K)];
  };
  // Middle legs 2..p-1 by odometer, last leg restricted so the total stays in the box.
  const int mid = p - 2;
  std::vector<Mode> legs(std::size_t(mid), Mode{-C, -C, -C});
  double total = 0.0;
  while (true) {
    Mode q = l1;
    double S = at(l1[0], l1[1], l1[2]);
    double prod = S;
    for (const Mode& l : legs) {
      for (int c = 0; c < 3; ++c) q[c] += l[c];
      const double al = at(l[0], l[1], l[2]);
      S += al;
      prod *= al;
    }
    int lo[3], hi[3];
    bool empty = false;
    for (int c = 0; c < 3; ++c) {
      lo[c] = std::max(-C, -K - q[c]);
      hi[c] = std::min(C, K - q[c]);
      if (lo[c] > hi[c]) empty = true;
    }
    if (!empty) {
      for (int x = lo[0]; x <= hi[0]; ++x)
        for (int y = lo[1]; y <= hi[1]; ++y)
          for (int z = lo[2]; z <= hi[2]; ++z) {
            const double al = at(x, y, z);
            const double A = at(q[0] + x, q[1] + y, q[2] + z);
            total += resonance_kernel(A, S + al, dt) / (prod * al);
          }
    }
    // advance odometer
    int leg = 0;
    for (; leg < mid; ++leg) {
      Mode& l = legs[std::size_t(leg)];
      int c = 2;
      for (; c >= 0; --c) {
        if (++l[c] <= C) break;
        l[c] = -C;
      }
      if (c >= 0) break;
    }
    if (leg == mid) break;
  }
  return total;
}

void check_p(int p) {
  if (p < 1 || p > 6) fail(ErrorKind::infeasible, "number of legs must lie in 1..6");
}

// Even 2,3,5,7-smooth length L > (p+1)K so the p-fold cyclic convolution does
// not wrap into the box.
int conv_length(int K, int p) {
  int L = fft_size_at_least((p + 1) * K + 1);
  while (L % 2) L = fft_size_at_least(L + 1);
  return L;
}

struct Octant {
  int K, n;
  std::vector<double> a;     // rates on [0,K]^3
  std::vector<char> leg;     // inside the leg cutoff
  std::vector<double> mult;  // 2^{number of nonzero coordinates}
  std::vector<std::size_t> pos;  // offset in the n^3 DCT grid
};

Octant make_octant(const BoxRates& r, int n) {
  const int K = r.K;
  const int side = 2 * K + 1;
  Octant o{K, n, {}, {}, {}, {}};
  for (int x = 0; x <= K; ++x)
    for (int y = 0; y <= K; ++y)
      for (int z = 0; z <= K; ++z) {
        o.a.push_back(r.a[(std::size_t(x + K) * side + std::size_t(y + K)) * side + std::size_t(z + K)]);
        o.leg.push_back(std::max({x, y, z}) <= r.leg_cut);
        o.mult.push_back(double((x ? 2 : 1) * (y ? 2 : 1) * (z ? 2 : 1)));
        o.pos.push_back((std::size_t(x) * n + std::size_t(y)) * n + std::size_t(z));
      }
  return o;
}

// sum_l w(l) (f^{*p})(l) over the box, where f and w are even functions given
// on the octant.
double conv_term(const Octant& o, int p, int L, const std::vector<double>& f, const std::vector<double>& w) {
  const std::size_t n3 = std::size_t(o.n) * o.n * o.n;
  auto buf = fft::alloc<double>(n3);
  auto spec = fft::alloc<double>(n3);
  std::memset(buf.get(), 0, sizeof(double) * n3);
  for (std::size_t i = 0; i < f.size(); ++i) buf[o.pos[i]] = f[i];
  fftw_execute_r2r(fft::plan_dct1(o.n), buf.get(), spec.get());
  for (std::size_t i = 0; i < n3; ++i) spec[i] = std::pow(spec[i], p);
  fftw_execute_r2r(fft::plan_dct1(o.n), spec.get(), buf.get());
  const double scale = 1.0 / (double(L) * L * L);
  double s = 0.0;
  for (std::size_t i = 0; i < f.size(); ++i) s += o.mult[i] * w[i] * buf[o.pos[i]] * scale;
  return s;
}

struct LaplaceNodes {
  std::vector<double> u, weight;
};

// Trapezoid nodes in s = log u for int_0^inf e^{-uA} du, A in [Amin, Amax];
// relative error about exp(-pi^2/h) from the strip |Im s| < pi/2.
LaplaceNodes laplace_nodes(double Amin, double Amax) {
  const double h = 0.35;
  const double smin = std::log(1e-13 / Amax);
  const double smax = std::log(40.0 / Amin);
  LaplaceNodes ln;
  for (double s = smin; s <= smax + h; s += h) {
    ln.u.push_back(std::exp(s));
    ln.weight.push_back(h * std::exp(s));
  }
  return ln;
}

double fft_continuum(const BoxRates& r, int p, bool parallel) {
  const int L = conv_length(r.K, p);
  const Octant o = make_octant(r, L / 2 + 1);
  double amax = 0.0;
  for (double x : o.a) amax = std::max(amax, x);
  const LaplaceNodes nodes = laplace_nodes(double(p + 1), double(p + 1) * amax);
  std::vector<double> part(nodes.u.size(), 0.0);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (std::size_t q = 0; q < nodes.u.size(); ++q) {
    const double u = nodes.u[q];
    std::vector<double> f(o.a.size()), w(o.a.size());
    for (std::size_t i = 0; i < o.a.size(); ++i) {
      w[i] = std::exp(-u * o.a[i]);
      f[i] = o.leg[i] ? w[i] / o.a[i] : 0.0;
    }
    part[q] = nodes.weight[q] * conv_term(o, p, L, f, w);
  }
  double s = 0.0;
  for (double x : part) s += x;
  return s;
}

double fft_discrete(const BoxRates& r, int p, double dt, bool parallel) {
  const int L = conv_length(r.K, p);
  const Octant o = make_octant(r, L / 2 + 1);
  const double ratio = std::exp(-dt * (p + 1));
  const double tail_factor = ratio / (1.0 - ratio);
  // Blocks of consecutive step indices; stop once the geometric tail bound is negligible.
  const std::size_t chunk = parallel ? 64 : 16;
  double total = 0.0;
  for (std::size_t j0 = 1;; j0 += chunk) {
    std::vector<double> part(chunk, 0.0);
#pragma omp parallel for schedule(dynamic) if (parallel)
    for (std::size_t jj = 0; jj < chunk; ++jj) {
      const double j = double(j0 + jj);
      std::vector<double> f(o.a.size()), w(o.a.size());
      for (std::size_t i = 0; i < o.a.size(); ++i) {
        const double A = o.a[i];
        f[i] = o.leg[i] ? std::exp(-j * dt * A) / A : 0.0;
        w[i] = -std::expm1(-dt * A) / A * std::exp(-(j - 1.0) * dt * A);
      }
      part[jj] = conv_term(o, p, L, f, w);
    }
    for (double x : part) total += x;
    if (part.back() * tail_factor < 1e-13 * total) break;
    if (j0 > 100000000) fail(ErrorKind::infeasible, "step series did not converge");
  }
  return total;
}

}  // namespace

double wick_resonance_direct_serial(const BoxRates& r, int p, double dt) {
  check_p(p);
  if (p == 1) {
    double s = 0.0;
    const FrequencyLattice box = FrequencyLattice::minimal(r.K);
    for (std::size_t i = 0; i < r.a.size(); ++i)
      if (norm_inf(box.mode(i)) <= r.leg_cut) s += resonance_kernel(r.a[i], r.a[i], dt) / r.a[i];
    return s;
  }
  double total = 0.0;
  for (std::size_t i = 0; i < r.a.size(); ++i) total += direct_inner(r, p, dt, i);
  return total;
}

double wick_resonance_direct_omp(const BoxRates& r, int p, double dt) {
  check_p(p);
  if (p == 1) return wick_resonance_direct_serial(r, p, dt);
  std::vector<double> part(r.a.size(), 0.0);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::size_t i = 0; i < r.a.size(); ++i) part[i] = direct_inner(r, p, dt, i);
  double total = 0.0;
  for (double x : part) total += x;
  return total;
}

double wick_resonance_fft_serial(const BoxRates& r, int p, double dt) {
  check_p(p);
  return dt == 0.0 ? fft_continuum(r, p, false) : fft_discrete(r, p, dt, false);
}

double wick_resonance_fft_omp(const BoxRates& r, int p, double dt) {
  check_p(p);
  return dt == 0.0 ? fft_continuum(r, p, true) : fft_discrete(r, p, dt, true);
}

void polynomial_map_serial(const Polynomial& P, const double* in, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = P(in[i]);
}

void polynomial_map_omp(const Polynomial& P, const double* in, double* out, std::size_t n) {
#pragma omp parallel for schedule(static)
  for (std::size_t i = 0; i < n; ++i) out[i] = P(in[i]);
}

}  // namespace phi4::kernels
