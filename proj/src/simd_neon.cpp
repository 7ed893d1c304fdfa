#include "simd_impl.hpp"

#if defined(__aarch64__)
#include <arm_neon.h>

namespace kinlim::simd::detail {

namespace {

void stencil(const double* x, std::size_t n, const double* taps, int R, double* out) {
  std::size_t i = 0;
  for (; i + 2 <= n; i += 2) {
    float64x2_t acc = vdupq_n_f64(0.0);
    for (int r = -R; r <= R; ++r) {
      acc = vfmaq_n_f64(acc, vld1q_f64(x + static_cast<std::ptrdiff_t>(i) + r), taps[r + R]);
    }
    vst1q_f64(out + i, acc);
  }
  for (; i < n; ++i) {
    double s = 0.0;
    for (int r = -R; r <= R; ++r) s += taps[r + R] * x[static_cast<std::ptrdiff_t>(i) + r];
    out[i] = s;
  }
}

void noise(const double* a, const double* xi, std::size_t n, const double* w, int N, double scale,
           double* out) {
  std::size_t ii = 0;
  for (; ii + 2 <= n; ii += 2) {
    const auto i = static_cast<std::ptrdiff_t>(ii);
    float64x2_t self = vdupq_n_f64(0.0), cross = vdupq_n_f64(0.0);
    for (int d = -N; d <= N; ++d) {
      if (d == 0) continue;
      const double wd = w[d + N];
      const float64x2_t ad = vld1q_f64(a + i + d);
      self = vfmaq_n_f64(self, ad, wd);
      const float64x2_t diff = vmulq_n_f64(vsubq_f64(ad, vld1q_f64(a + i + 2 * d)), wd);
      cross = vfmaq_f64(cross, diff, vld1q_f64(xi + i + d));
    }
    const float64x2_t v = vfmaq_f64(cross, vld1q_f64(xi + i), self);
    vst1q_f64(out + ii, vmulq_n_f64(v, scale));
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

void relax(const double* W, const double* S, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = W + i * n;
    const float64x2_t si = vdupq_n_f64(S[i]);
    float64x2_t acc = vdupq_n_f64(0.0);
    std::size_t j = 0;
    for (; j + 2 <= n; j += 2) acc = vfmaq_f64(acc, vld1q_f64(row + j), vsubq_f64(vld1q_f64(S + j), si));
    double s = vaddvq_f64(acc);
    for (; j < n; ++j) s += row[j] * (S[j] - S[i]);
    out[i] = s;
  }
}

const KernelTable table{Backend::Neon, &stencil, &noise, &relax};

}  // namespace

const KernelTable* neon_table() { return &table; }

}  // namespace kinlim::simd::detail

#else

namespace kinlim::simd::detail {
const KernelTable* neon_table() { return nullptr; }
}  // namespace kinlim::simd::detail

#endif
