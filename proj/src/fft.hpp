#pragma once

// Shared FFTW plans. Plans are created once per size under a mutex and executed
// through the new-array interface, which is safe from concurrent threads as
// long as every buffer comes from fftw_malloc.

#include <fftw3.h>

#include <cstddef>
#include <memory>

namespace phi4::fft {

template <class T>
struct FftwDeleter {
  void operator()(T* p) const { fftw_free(p); }
};

template <class T>
using Buffer = std::unique_ptr<T[], FftwDeleter<T>>;

template <class T>
Buffer<T> alloc(std::size_t n) {
  return Buffer<T>(static_cast<T*>(fftw_malloc(sizeof(T) * (n ? n : 1))));
}

// 3-D transforms on an M^3 grid; unnormalised.
fftw_plan plan_c2r(int M);
fftw_plan plan_r2c(int M);
fftw_plan plan_c2c(int M, int sign);
// 3-D REDFT00 (DCT-I) on an n^3 grid.
fftw_plan plan_dct1(int n);

}  // namespace phi4::fft
