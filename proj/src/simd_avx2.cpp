#include "simd_impl.hpp"

#if defined(__x86_64__) || defined(__i386__)
#include <immintrin.h>

#define KINLIM_AVX2 __attribute__((target("avx2,fma")))

namespace kinlim::simd::detail {

namespace {

KINLIM_AVX2 inline double hsum(__m256d v) {
  __m128d lo = _mm256_castpd256_pd128(v);
  __m128d hi = _mm256_extractf128_pd(v, 1);
  lo = _mm_add_pd(lo, hi);
  __m128d sh = _mm_unpackhi_pd(lo, lo);
  return _mm_cvtsd_f64(_mm_add_sd(lo, sh));
}

KINLIM_AVX2 void stencil(const double* x, std::size_t n, const double* taps, int R, double* out) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (int r = -R; r <= R; ++r) {
      const __m256d t = _mm256_broadcast_sd(taps + r + R);
      acc = _mm256_fmadd_pd(t, _mm256_loadu_pd(x + static_cast<std::ptrdiff_t>(i) + r), acc);
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) {
    double s = 0.0;
    for (int r = -R; r <= R; ++r) s += taps[r + R] * x[static_cast<std::ptrdiff_t>(i) + r];
    out[i] = s;
  }
}

KINLIM_AVX2 void noise(const double* a, const double* xi, std::size_t n, const double* w, int N,
                       double scale, double* out) {
  const __m256d vs = _mm256_set1_pd(scale);
  std::size_t ii = 0;
  for (; ii + 4 <= n; ii += 4) {
    const auto i = static_cast<std::ptrdiff_t>(ii);
    __m256d self = _mm256_setzero_pd(), cross = _mm256_setzero_pd();
    for (int d = -N; d <= N; ++d) {
      if (d == 0) continue;
      const __m256d wd = _mm256_broadcast_sd(w + d + N);
      const __m256d ad = _mm256_loadu_pd(a + i + d);
      self = _mm256_fmadd_pd(wd, ad, self);
      const __m256d diff = _mm256_sub_pd(ad, _mm256_loadu_pd(a + i + 2 * d));
      cross = _mm256_fmadd_pd(_mm256_mul_pd(wd, diff), _mm256_loadu_pd(xi + i + d), cross);
    }
    const __m256d v = _mm256_fmadd_pd(_mm256_loadu_pd(xi + i), self, cross);
    _mm256_storeu_pd(out + ii, _mm256_mul_pd(vs, v));
  }
  for (; ii < n; ++ii) {
    const auto i = static_cast<std::ptrdiff_t>(ii);
    double s = 0.0, c = 0.0;
    for (int d = -N; d <= N; ++d) {
      if (d == 0) continue;
      s += w[d + N] * a[i + d];
      c += w[d + N] * (a[i + d] - a[i + 2 * d]) * xi[i + d];
    }
    out[ii] = scale * (xi[i] * s + c);
  }
}

KINLIM_AVX2 void relax(const double* W, const double* S, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = W + i * n;
    const __m256d si = _mm256_set1_pd(S[i]);
    __m256d acc0 = _mm256_setzero_pd(), acc1 = _mm256_setzero_pd();
    std::size_t j = 0;
    for (; j + 8 <= n; j += 8) {
      acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(row + j), _mm256_sub_pd(_mm256_loadu_pd(S + j), si), acc0);
      acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(row + j + 4),
                             _mm256_sub_pd(_mm256_loadu_pd(S + j + 4), si), acc1);
    }
    double s = hsum(_mm256_add_pd(acc0, acc1));
    for (; j < n; ++j) s += row[j] * (S[j] - S[i]);
    out[i] = s;
  }
}

const KernelTable table{Backend::Avx2, &stencil, &noise, &relax};

}  // namespace

const KernelTable* avx2_table() { return &table; }

}  // namespace kinlim::simd::detail

#else

namespace kinlim::simd::detail {
const KernelTable* avx2_table() { return nullptr; }
}  // namespace kinlim::simd::detail

#endif
