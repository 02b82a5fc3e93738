#include "phi4/spectral.hpp"

#include <cmath>
#include <cstring>

#include "fft.hpp"
#include "phi4/error.hpp"

namespace phi4 {

namespace {

int wrap(int k, int M) { return k >= 0 ? k : k + M; }

void check_size(const FourierField& f, int M) {
  if (M < f.grid().side()) fail(ErrorKind::shape_mismatch, "physical grid smaller than 2K+1");
}

}  // namespace

int fft_size_at_least(int n) {
  for (int m = std::max(n, 1);; ++m) {
    int r = m;
    for (int p : {2, 3, 5, 7})
      while (r % p == 0) r /= p;
    if (r == 1) return m;
  }
}

int padded_size(int K, int degree) {
  const int d = std::max(degree, 1);
  return fft_size_at_least(std::max((d + 1) * K + 1, 2 * K + 1));
}

RealGrid to_physical(const FourierField& f, int M) {
  check_size(f, M);
  if (!f.hermitian()) fail(ErrorKind::domain, "real physical field requested from non-hermitian coefficients");
  const int K = f.grid().K();
  const int H = M / 2 + 1;
  auto spec = fft::alloc<fftw_complex>(std::size_t(M) * M * H);
  std::memset(spec.get(), 0, sizeof(fftw_complex) * std::size_t(M) * M * H);
  for (int a = -K; a <= K; ++a)
    for (int b = -K; b <= K; ++b)
      for (int c = 0; c <= K; ++c) {
        const cplx v = f.at({a, b, c});
        auto& dst = spec[(std::size_t(wrap(a, M)) * M + std::size_t(wrap(b, M))) * H + std::size_t(c)];
        dst[0] = v.real();
        dst[1] = v.imag();
      }
  auto out = fft::alloc<double>(std::size_t(M) * M * M);
  fftw_execute_dft_c2r(fft::plan_c2r(M), spec.get(), out.get());
  return RealGrid(out.get(), out.get() + std::size_t(M) * M * M);
}

ComplexGrid to_physical_complex(const FourierField& f, int M) {
  check_size(f, M);
  const int K = f.grid().K();
  const std::size_t n3 = std::size_t(M) * M * M;
  auto spec = fft::alloc<fftw_complex>(n3);
  std::memset(spec.get(), 0, sizeof(fftw_complex) * n3);
  for (int a = -K; a <= K; ++a)
    for (int b = -K; b <= K; ++b)
      for (int c = -K; c <= K; ++c) {
        const cplx v = f.at({a, b, c});
        auto& dst = spec[(std::size_t(wrap(a, M)) * M + std::size_t(wrap(b, M))) * M + std::size_t(wrap(c, M))];
        dst[0] = v.real();
        dst[1] = v.imag();
      }
  auto out = fft::alloc<fftw_complex>(n3);
  fftw_execute_dft(fft::plan_c2c(M, FFTW_BACKWARD), spec.get(), out.get());
  ComplexGrid g(n3);
  for (std::size_t i = 0; i < n3; ++i) g[i] = cplx(out[i][0], out[i][1]);
  return g;
}

FourierField from_physical(const RealGrid& g, int M, const FrequencyLattice& grid) {
  const std::size_t n3 = std::size_t(M) * M * M;
  if (g.size() != n3) fail(ErrorKind::shape_mismatch, "physical array does not match M^3");
  if (M < grid.side()) fail(ErrorKind::shape_mismatch, "physical grid smaller than 2K+1");
  const int K = grid.K();
  const int H = M / 2 + 1;
  auto in = fft::alloc<double>(n3);
  std::memcpy(in.get(), g.data(), sizeof(double) * n3);
  auto spec = fft::alloc<fftw_complex>(std::size_t(M) * M * H);
  fftw_execute_dft_r2c(fft::plan_r2c(M), in.get(), spec.get());
  const double scale = 1.0 / double(n3);
  FourierField f(grid, true);
  for (int a = -K; a <= K; ++a)
    for (int b = -K; b <= K; ++b)
      for (int c = 0; c <= K; ++c) {
        const auto& s = spec[(std::size_t(wrap(a, M)) * M + std::size_t(wrap(b, M))) * H + std::size_t(c)];
        const cplx v(s[0] * scale, s[1] * scale);
        f.at({a, b, c}) = v;
        f.at({-a, -b, -c}) = std::conj(v);
      }
  // The c = 0 plane was written twice; enforce the conjugate pairing exactly.
  for (int a = -K; a <= K; ++a)
    for (int b = -K; b <= K; ++b) {
      const std::size_t i = grid.index({a, b, 0});
      const std::size_t j = grid.conj_index(i);
      if (i < j) f[j] = std::conj(f[i]);
    }
  f[grid.zero_index()] = f[grid.zero_index()].real();
  return f;
}

FourierField from_physical_complex(const ComplexGrid& g, int M, const FrequencyLattice& grid) {
  const std::size_t n3 = std::size_t(M) * M * M;
  if (g.size() != n3) fail(ErrorKind::shape_mismatch, "physical array does not match M^3");
  if (M < grid.side()) fail(ErrorKind::shape_mismatch, "physical grid smaller than 2K+1");
  const int K = grid.K();
  auto in = fft::alloc<fftw_complex>(n3);
  for (std::size_t i = 0; i < n3; ++i) {
    in[i][0] = g[i].real();
    in[i][1] = g[i].imag();
  }
  auto out = fft::alloc<fftw_complex>(n3);
  fftw_execute_dft(fft::plan_c2c(M, FFTW_FORWARD), in.get(), out.get());
  const double scale = 1.0 / double(n3);
  FourierField f(grid, false);
  for (int a = -K; a <= K; ++a)
    for (int b = -K; b <= K; ++b)
      for (int c = -K; c <= K; ++c) {
        const auto& s = out[(std::size_t(wrap(a, M)) * M + std::size_t(wrap(b, M))) * M + std::size_t(wrap(c, M))];
        f.at({a, b, c}) = cplx(s[0] * scale, s[1] * scale);
      }
  return f;
}

FourierField forward(const RealGrid& g, const FrequencyLattice& grid) { return from_physical(g, grid.M(), grid); }

RealGrid inverse(const FourierField& f) { return to_physical(f, f.grid().M()); }

FourierField product(const FourierField& f, const FourierField& g, int degree_hint) {
  require_same_grid(f, g);
  const int M = padded_size(f.grid().K(), std::max(degree_hint, 2));
  if (f.hermitian() && g.hermitian()) {
    RealGrid a = to_physical(f, M);
    const RealGrid b = to_physical(g, M);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
    return from_physical(a, M, f.grid());
  }
  ComplexGrid a = to_physical_complex(f, M);
  const ComplexGrid b = to_physical_complex(g, M);
  for (std::size_t i = 0; i < a.size(); ++i) a[i] *= b[i];
  return from_physical_complex(a, M, f.grid());
}

FourierField map_pointwise(const FourierField& f, const std::function<double(double)>& fn, int degree) {
  const int M = padded_size(f.grid().K(), degree);
  RealGrid a = to_physical(f, M);
  for (auto& x : a) x = fn(x);
  return from_physical(a, M, f.grid());
}

Propagator::Propagator(const DispersionQ& Q, const FrequencyLattice& grid)
    : grid_(grid), rate_(bracket_sq_table(Q, grid)) {}

FourierField Propagator::apply(const FourierField& f, double t) const {
  if (t < 0.0) fail(ErrorKind::domain, "negative time in semigroup");
  if (f.grid() != grid_) fail(ErrorKind::shape_mismatch, "propagator built for another lattice");
  FourierField out = f;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= std::exp(-t * rate_[i]);
  return out;
}

FourierField Propagator::phi1(const FourierField& f, double dt) const {
  if (dt < 0.0) fail(ErrorKind::domain, "negative time step");
  if (f.grid() != grid_) fail(ErrorKind::shape_mismatch, "propagator built for another lattice");
  FourierField out = f;
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= -std::expm1(-dt * rate_[i]) / rate_[i];
  return out;
}

void Propagator::exp_euler(FourierField& x, const FourierField& n, double dt) const {
  require_same_grid(x, n);
  if (x.grid() != grid_) fail(ErrorKind::shape_mismatch, "propagator built for another lattice");
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double a = rate_[i];
    x[i] = std::exp(-dt * a) * x[i] + (-std::expm1(-dt * a) / a) * n[i];
  }
  x.set_hermitian(x.hermitian() && n.hermitian());
}

FourierField apply_semigroup(const FourierField& f, const DispersionQ& Q, double t) {
  if (t < 0.0) fail(ErrorKind::domain, "negative time in semigroup");
  return Propagator(Q, f.grid()).apply(f, t);
}

}  // namespace phi4
