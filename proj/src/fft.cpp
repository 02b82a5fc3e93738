#include "fft.hpp"

#include <map>
#include <mutex>
#include <tuple>

namespace phi4::fft {

namespace {

std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

enum class Kind { c2r, r2c, c2c_fwd, c2c_bwd, dct1 };

std::map<std::tuple<Kind, int>, fftw_plan>& cache() {
  static std::map<std::tuple<Kind, int>, fftw_plan> c;
  return c;
}

fftw_plan make(Kind kind, int n) {
  const std::size_t n3 = std::size_t(n) * n * n;
  const std::size_t half = std::size_t(n) * n * (n / 2 + 1);
  switch (kind) {
    case Kind::c2r: {
      auto in = alloc<fftw_complex>(half);
      auto out = alloc<double>(n3);
      return fftw_plan_dft_c2r_3d(n, n, n, in.get(), out.get(), FFTW_ESTIMATE);
    }
    case Kind::r2c: {
      auto in = alloc<double>(n3);
      auto out = alloc<fftw_complex>(half);
      return fftw_plan_dft_r2c_3d(n, n, n, in.get(), out.get(), FFTW_ESTIMATE);
    }
    case Kind::c2c_fwd:
    case Kind::c2c_bwd: {
      auto in = alloc<fftw_complex>(n3);
      auto out = alloc<fftw_complex>(n3);
      return fftw_plan_dft_3d(n, n, n, in.get(), out.get(), kind == Kind::c2c_fwd ? FFTW_FORWARD : FFTW_BACKWARD,
                              FFTW_ESTIMATE);
    }
    case Kind::dct1: {
      auto in = alloc<double>(n3);
      auto out = alloc<double>(n3);
      return fftw_plan_r2r_3d(n, n, n, in.get(), out.get(), FFTW_REDFT00, FFTW_REDFT00, FFTW_REDFT00,
                              FFTW_ESTIMATE);
    }
  }
  return nullptr;
}

fftw_plan get(Kind kind, int n) {
  std::lock_guard<std::mutex> lock(plan_mutex());
  auto key = std::make_tuple(kind, n);
  auto it = cache().find(key);
  if (it != cache().end()) return it->second;
  fftw_plan p = make(kind, n);
  cache().emplace(key, p);
  return p;
}

}  // namespace

fftw_plan plan_c2r(int M) { return get(Kind::c2r, M); }
fftw_plan plan_r2c(int M) { return get(Kind::r2c, M); }
fftw_plan plan_c2c(int M, int sign) { return get(sign == FFTW_FORWARD ? Kind::c2c_fwd : Kind::c2c_bwd, M); }
fftw_plan plan_dct1(int n) { return get(Kind::dct1, n); }

}  // namespace phi4::fft
