#include <cmath>
#include <random>

#include "doctest.h"

#include "kinlim/simd.hpp"

using namespace kinlim;

namespace {

std::vector<double> random_vec(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<double> v(n);
  for (double& x : v) x = U(rng);
  return v;
}

void check_close(const std::vector<double>& a, const std::vector<double>& b) {
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-12).scale(1.0));
}

}  // namespace

TEST_CASE("backend names") {
  CHECK(simd::parse_backend("scalar") == simd::Backend::Scalar);
  CHECK(simd::parse_backend("avx2") == simd::Backend::Avx2);
  CHECK(simd::parse_backend("neon") == simd::Backend::Neon);
  CHECK(simd::parse_backend("auto") == simd::best_backend());
  CHECK_THROWS(simd::parse_backend("sse9"));
  CHECK(simd::supported(simd::Backend::Scalar));
  CHECK(simd::to_string(simd::Backend::Avx2) == "avx2");
}

TEST_CASE("vector backends agree with the scalar reference") {
  const auto& ref = simd::kernels(simd::Backend::Scalar);
  std::mt19937_64 rng(41);
  for (auto b : {simd::Backend::Avx2, simd::Backend::Neon}) {
    if (!simd::supported(b)) {
      CHECK_THROWS(simd::kernels(b));
      continue;
    }
    CAPTURE(simd::to_string(b));
    const auto& K = simd::kernels(b);
    for (std::size_t n : {1u, 3u, 4u, 7u, 33u, 128u}) {
      for (int R : {0, 1, 2, 6}) {
        const auto x = random_vec(n + 2 * R, rng), taps = random_vec(2 * R + 1, rng);
        std::vector<double> o1(n), o2(n);
        ref.stencil(x.data() + R, n, taps.data(), R, o1.data());
        K.stencil(x.data() + R, n, taps.data(), R, o2.data());
        check_close(o1, o2);
      }
      for (int N : {1, 2, 3}) {
        const auto a = random_vec(n + 4 * N, rng), xi = random_vec(n + 2 * N, rng);
        auto w = random_vec(2 * N + 1, rng);
        w[N] = 0.0;
        std::vector<double> o1(n), o2(n);
        ref.noise(a.data() + 2 * N, xi.data() + N, n, w.data(), N, 0.7, o1.data());
        K.noise(a.data() + 2 * N, xi.data() + N, n, w.data(), N, 0.7, o2.data());
        check_close(o1, o2);
      }
      const auto W = random_vec(n * n, rng), S = random_vec(n, rng);
      std::vector<double> o1(n), o2(n);
      ref.relax(W.data(), S.data(), o1.data(), n);
      K.relax(W.data(), S.data(), o2.data(), n);
      check_close(o1, o2);
    }
  }
}

TEST_CASE("scalar reference matches the defining sums") {
  const auto& ref = simd::kernels(simd::Backend::Scalar);
  std::mt19937_64 rng(43);
  const std::size_t n = 9;
  const int N = 2;
  const auto a = random_vec(n + 4 * N, rng), xi = random_vec(n + 2 * N, rng);
  auto w = random_vec(2 * N + 1, rng);
  w[N] = 0.0;
  std::vector<double> out(n);
  ref.noise(a.data() + 2 * N, xi.data() + N, n, w.data(), N, 1.5, out.data());
  const double* A = a.data() + 2 * N;
  const double* X = xi.data() + N;
  for (std::size_t i = 0; i < n; ++i) {
    double s1 = 0.0, s2 = 0.0;
    for (int d = -N; d <= N; ++d) {
      const long ii = static_cast<long>(i);
      s1 += w[d + N] * A[ii + d];
      s2 += w[d + N] * (A[ii + d] - A[ii + 2 * d]) * X[ii + d];
    }
    CHECK(out[i] == doctest::Approx(1.5 * (X[i] * s1 + s2)).epsilon(1e-13));
  }
}

TEST_CASE("active backend can be switched") {
  const auto before = simd::active_backend();
  simd::set_backend(simd::Backend::Scalar);
  CHECK(simd::kernels().backend == simd::Backend::Scalar);
  simd::set_backend(before);
  CHECK(simd::active_backend() == before);
}
