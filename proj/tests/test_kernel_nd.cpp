#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "kinlim/errors.hpp"
#include "kinlim/kernel1d.hpp"
#include "kinlim/kernel_nd.hpp"

using namespace kinlim;

namespace {

std::shared_ptr<const PathFamily> family(int d, int N) { return std::make_shared<const PathFamily>(d, N); }

bool all_zero(const KernelCoeffsND& c) {
  for (const auto& [key, v] : c.table)
    for (double x : v)
      if (x != 0.0) return false;
  return true;
}

double entry(const KernelCoeffsND& c, const LatticePoint& D, const LatticePoint& Dp, std::size_t idx = 0) {
  const auto* v = c.find(D, Dp);
  return v ? (*v)[idx] : 0.0;
}

}  // namespace

TEST_CASE("zero controls give zero tables") {
  const auto fam = family(2, 2);
  SimpleIndexControls s(fam);
  CHECK(validate(s).ok());
  CHECK(all_zero(simple_index_coeffs(s)));
  CHECK(all_zero(nd_coeffs_oracle(s, 17)));
  DualIndexControls q(fam);
  CHECK(all_zero(dual_index_coeffs(q, 0, 1)));
  CHECK(all_zero(nd_coeffs_oracle(q, 0, 1, 17)));
  for (double v : eval_kernel_nd(simple_index_coeffs(s), {0.1, 0.3}, {-0.2, 0.4})) CHECK(v == 0.0);
}

TEST_CASE("one dimension reduces to the scalar kernel") {
  std::mt19937_64 rng(7);
  for (int N = 1; N <= 4; ++N) {
    const auto fam = family(1, N);
    const auto m = oracle::random_simple(fam, rng);
    std::vector<double> mm(N);
    const std::size_t g = fam->canonical(0) ? 0 : 1;
    for (int k = 1; k <= N; ++k) mm[k - 1] = m.get(g, k)[0];
    const auto K = kernel_coeffs(ControlParams1D(N, mm));
    const auto c = simple_index_coeffs(m);
    // The scalar table is even in each index; the lattice table is the joint cosine form.
    for (int x = -2 * N; x <= 2 * N; ++x)
      for (int y = -2 * N; y <= 2 * N; ++y)
        CHECK(0.5 * (entry(c, {x}, {y}) + entry(c, {-x}, {y})) == doctest::Approx(K(x, y)).epsilon(1e-12).scale(1.0));
    for (double k : {0.05, 0.21, -0.37})
      for (double k2 : {0.11, -0.44})
        CHECK(0.5 * (eval_kernel_nd(c, {k}, {k2})[0] + eval_kernel_nd(c, {k}, {-k2})[0]) ==
              doctest::Approx(eval_kernel(K, k, k2)).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("single simple pair in two dimensions") {
  const auto fam = family(2, 2);
  SimpleIndexControls m(fam);
  const std::size_t g = fam->index_of(0, {0, 1});
  m.set(g, 2, {0.7, -1.3});
  CHECK(validate(m).ok());
  const auto c = simple_index_coeffs(m);
  CHECK(entry(c, {0, 0}, {0, 0}, 0) == doctest::Approx(3.0 * 0.49));
  CHECK(entry(c, {0, 0}, {0, 0}, 3) == doctest::Approx(3.0 * 1.69));
  CHECK(max_abs_difference(c, nd_coeffs_oracle(m, 17)) <= 1e-12);
}

TEST_CASE("single dual entry") {
  const auto fam = family(2, 2);
  DualIndexControls m(fam);
  const std::size_t g = fam->index_of(0, {1, 0});
  const double a = 0.8;
  m.set(0, 1, g, 2, a);
  m.set_sign(0, 1, g, -1);
  CHECK(validate(m).ok());
  const auto c = dual_index_coeffs(m, 0, 1);
  // Each path of the pair contributes (1/2)(a^2 + a^2)^2.
  CHECK(entry(c, {0, 0}, {0, 0}) == doctest::Approx(2 * 2 * std::pow(a, 4)));
  CHECK(max_abs_difference(c, nd_coeffs_oracle(m, 0, 1, 17)) <= 1e-12);
}

TEST_CASE("validation catches broken pairing and the product condition") {
  const auto fam = family(2, 3);
  SUBCASE("simple partner not negated") {
    SimpleIndexControls m(fam);
    m.set_unpaired(fam->index_of(0, {0, 0, 1}), 3, {1.0, 0.0});
    CHECK_FALSE(validate(m).ok());
    CHECK_THROWS_AS(simple_index_coeffs(m), InputError);
  }
  SUBCASE("simple entry below N/2") {
    SimpleIndexControls m(fam);
    m.set(fam->index_of(0, {0, 0, 1}), 1, {1.0, 0.0});
    CHECK_FALSE(validate(m).ok());
  }
  SUBCASE("dual product condition") {
    DualIndexControls m(fam);
    const std::size_t g = fam->index_of(0, {0, 1, 1});
    m.set(0, 1, g, 1, 1.0);
    m.set(0, 1, g, 2, 1.0);
    CHECK_FALSE(validate(m).ok());
    CHECK_THROWS_AS(dual_index_coeffs(m, 0, 1), InputError);
  }
  SUBCASE("dual partner mismatch") {
    DualIndexControls m(fam);
    const std::size_t g = fam->index_of(0, {0, 1, 1});
    m.set(0, 1, g, 3, 1.0);
    m.set_unpaired(0, 1, fam->partner(g), 3, 0.5);
    CHECK_FALSE(validate(m).ok());
  }
}

TEST_CASE("closed forms agree with the torus oracle") {
  std::mt19937_64 rng(13);
  for (auto [d, N] : std::vector<std::pair<int, int>>{{2, 1}, {2, 2}, {2, 3}, {3, 1}, {3, 2}}) {
    CAPTURE(d);
    CAPTURE(N);
    const auto fam = family(d, N);
    for (int t = 0; t < 2; ++t) {
      const auto s = oracle::random_simple(fam, rng);
      CHECK(max_abs_difference(simple_index_coeffs(s), nd_coeffs_oracle(s, 8 * N + 1)) <= 1e-10);
      const auto q = oracle::random_dual(fam, rng);
      CHECK(validate(q).ok());
      for (auto [i, j] : q.pairs()) CHECK(max_abs_difference(dual_index_coeffs(q, i, j), nd_coeffs_oracle(q, i, j, 8 * N + 1)) <= 1e-10);
    }
  }
  const auto fam = family(2, 2);
  SimpleIndexControls s(fam);
  CHECK_THROWS_AS(nd_coeffs_oracle(s, 16), InputError);
}

TEST_CASE("coefficients vanish beyond L1 radius 2N") {
  std::mt19937_64 rng(29);
  const auto fam = family(2, 3);
  const auto c = simple_index_coeffs(oracle::random_simple(fam, rng));
  for (const auto& [key, v] : c.table) {
    CHECK(l1_norm(key.first) <= 6);
    CHECK(l1_norm(key.second) <= 6);
  }
}

TEST_CASE("conservation residuals") {
  std::mt19937_64 rng(31);
  for (auto [d, N] : std::vector<std::pair<int, int>>{{1, 3}, {2, 2}, {2, 3}, {3, 2}}) {
    const auto fam = family(d, N);
    const auto s = oracle::random_simple(fam, rng);
    CHECK(conservation_check_simple(s, 4 * N + 1, 1, 100) <= 1e-12);
    if (d > 1) {
      const auto q = oracle::random_dual(fam, rng);
      CHECK(conservation_check_dual(q, 4 * N + 1, 2, 100) <= 1e-12);
      CHECK(conservation_check_dual(q, 4 * N + 1, 2, 20, 0.25) > 1e-3);
    }
  }
  SUBCASE("unpaired simple controls break conservation") {
    const auto fam = family(2, 2);
    SimpleIndexControls m(fam);
    m.set_unpaired(fam->index_of(0, {0, 1}), 2, {1.0, -0.5});
    CHECK(conservation_check_simple(m, 9, 3, 20) > 1e-3);
  }
  SUBCASE("window too small") {
    const auto fam = family(2, 2);
    CHECK_THROWS_AS(conservation_check_simple(SimpleIndexControls(fam), 8, 1), InputError);
  }
}

TEST_CASE("kernel evaluation symmetries") {
  std::mt19937_64 rng(37);
  std::uniform_real_distribution<double> U(-0.5, 0.5);
  const auto fam = family(2, 2);
  const auto s = simple_index_coeffs(oracle::random_simple(fam, rng));
  const auto q = dual_index_coeffs(oracle::random_dual(fam, rng), 0, 1);
  for (int t = 0; t < 20; ++t) {
    const std::vector<double> k{U(rng), U(rng)}, k2{U(rng), U(rng)};
    const std::vector<double> nk{-k[0], -k[1]}, nk2{-k2[0], -k2[1]};
    const auto a = eval_kernel_nd(s, k, k2), b = eval_kernel_nd(s, nk, nk2);
    REQUIRE(a.size() == 4);
    for (int e = 0; e < 4; ++e) CHECK(a[e] == doctest::Approx(b[e]).epsilon(1e-12).scale(1.0));
    const double v = eval_kernel_nd(q, k, k2)[0];
    CHECK(eval_kernel_nd(q, nk, k2)[0] == doctest::Approx(v).epsilon(1e-12).scale(1.0));
    CHECK(eval_kernel_nd(q, k, nk2)[0] == doctest::Approx(v).epsilon(1e-12).scale(1.0));
  }
}

TEST_CASE("free slot count") {
  for (int d = 1; d <= 3; ++d) {
    for (int N = 1; N <= 4; ++N) {
      std::size_t slots = 0;
      for (unsigned p = 0; p < (1u << d); ++p) {
        if (PartIndex(d, p).sign(0) < 0) continue;  // partner part carries the negated values
        slots += enumerate_paths(d, N, PartIndex(d, p)).size() * static_cast<std::size_t>(N - N / 2);
      }
      std::size_t formula = static_cast<std::size_t>(1) << (d - 1);
      for (int s = 0; s < N; ++s) formula *= d;
      formula *= N - N / 2;
      CHECK(slots == formula);
      CHECK(SimpleIndexControls(family(d, N)).free_slot_count() == formula);
    }
  }
}

TEST_CASE("json lines export") {
  const auto fam = family(2, 1);
  SimpleIndexControls m(fam);
  m.set(fam->index_of(0, {0}), 1, {1.0, 0.0});
  const auto text = to_json_lines(simple_index_coeffs(m));
  CHECK(text.find("\"variant\":\"simple\"") != std::string::npos);
  CHECK(text.find("\"Dprime\"") != std::string::npos);
  CHECK(text.back() == '\n');
}
