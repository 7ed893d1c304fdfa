#include "simd_impl.hpp"

namespace kinlim::simd::detail {

namespace {

void stencil(const double* x, std::size_t n, const double* taps, int R, double* out) {
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (int r = -R; r <= R; ++r) s += taps[r + R] * x[static_cast<std::ptrdiff_t>(i) + r];
    out[i] = s;
  }
}

void noise(const double* a, const double* xi, std::size_t n, const double* w, int N, double scale,
           double* out) {
  for (std::size_t ii = 0; ii < n; ++ii) {
    const auto i = static_cast<std::ptrdiff_t>(ii);
    double self = 0.0, cross = 0.0;
    for (int d = -N; d <= N; ++d) {
      if (d == 0) continue;
      const double wd = w[d + N];
      self += wd * a[i + d];
      cross += wd * (a[i + d] - a[i + 2 * d]) * xi[i + d];
    }
    out[ii] = scale * (xi[i] * self + cross);
  }
}

void relax(const double* W, const double* S, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = W + i * n;
    const double si = S[i];
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += row[j] * (S[j] - si);
    out[i] = s;
  }
}

}  // namespace

const KernelTable scalar_table{Backend::Scalar, &stencil, &noise, &relax};

}  // namespace kinlim::simd::detail
