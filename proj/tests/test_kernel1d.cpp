#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "oracles.hpp"

#include "kinlim/dispersion.hpp"
#include "kinlim/errors.hpp"
#include "kinlim/kernel1d.hpp"

using namespace kinlim;

namespace {

ControlParams1D canonical() { return ControlParams1D(3, {0.0, 1.0, 2.0}); }

double row_sum(const KernelCoeffs1D& c, int dp) {
  double s = 0.0;
  for (int d = -c.extent(); d <= c.extent(); ++d) s += c(d, dp);
  return s;
}

double max_diff(const KernelCoeffs1D& a, const KernelCoeffs1D& b) {
  double mx = 0.0;
  for (int d = 0; d <= a.extent(); ++d)
    for (int dp = 0; dp <= a.extent(); ++dp) mx = std::max(mx, std::abs(a.quadrant(d, dp) - b.quadrant(d, dp)));
  return mx;
}

}  // namespace

TEST_CASE("validate_controls reports the vanishing condition") {
  CHECK(validate_controls(ControlParams1D(3, {0, 1, 2})).ok());
  const auto bad = validate_controls(ControlParams1D(3, {1, 1, 2}));
  CHECK_FALSE(bad.ok());
  REQUIRE(bad.offending.size() == 1);
  CHECK(bad.offending[0] == 1);
  CHECK(validate_controls(ControlParams1D(1, {5})).ok());
  CHECK_FALSE(validate_controls(ControlParams1D(2, {0, NAN})).ok());
  CHECK_THROWS_AS(ControlParams1D(3, {0, 1}), InputError);
}

TEST_CASE("controls are odd by construction") {
  const auto p = canonical();
  for (int d = -3; d <= 3; ++d) CHECK(p(-d) == -p(d));
  CHECK(p(4) == 0.0);
  CHECK(p.first_free() == 2);
  CHECK(p.free_count() == 2);
}

TEST_CASE("kernel_coeffs reproduces the worked N = 3 values") {
  const auto c = kernel_coeffs(canonical());
  CHECK(c(0, 0) == 15.0);
  CHECK(c(1, 1) == 1.0);
  CHECK(c(2, 1) == -1.0);
  CHECK(c(4, 2) == 0.5);
  CHECK(c(6, 6) == -1.0);
  CHECK_THROWS_AS(kernel_coeffs(ControlParams1D(3, {1, 1, 2})), InputError);
}

TEST_CASE("kernel_coeffs matches the appendix table in exact arithmetic") {
  for (auto [a, b] : std::vector<std::pair<int, int>>{{1, 2}, {-3, 5}, {7, -1}, {0, 4}}) {
    const auto c = kernel_coeffs(ExactControls1D(3, {Rational(0), Rational(a), Rational(b)}));
    for (int d = 1; d <= 6; ++d) {
      for (int dp = d; dp <= 6; ++dp) {
        const auto& cell = oracle::appendix_k_table().at({d, dp});
        CHECK(c(d, dp) == cell.at(a, b));
        CHECK(c(dp, d) == cell.at(a, b));
      }
    }
    CHECK(c(0, 0) == Rational(3 * (a * a + b * b)));
  }
}

TEST_CASE("zero controls give a zero table") {
  const auto c = kernel_coeffs(ControlParams1D(4, {0, 0, 0, 0}));
  for (double v : c.data()) CHECK(v == 0.0);
  const auto o = kernel_coeffs_oracle(ControlParams1D(4, {0, 0, 0, 0}), 33);
  for (double v : o.data()) CHECK(v == 0.0);
}

TEST_CASE("oracle agrees with the closed form") {
  SUBCASE("canonical N = 3, exact") {
    const ExactControls1D p(3, {Rational(0), Rational(1), Rational(2)});
    const auto a = kernel_coeffs(p);
    const auto b = kernel_coeffs_oracle(p, 25);
    CHECK(a.data() == b.data());
  }
  SUBCASE("canonical N = 3, double") { CHECK(max_diff(kernel_coeffs(canonical()), kernel_coeffs_oracle(canonical(), 25)) <= 1e-12); }
  SUBCASE("N = 2 oracle rows sum to zero") {
    const auto o = kernel_coeffs_oracle(ControlParams1D(2, {0, 1}), 17);
    for (int dp = -4; dp <= 4; ++dp) CHECK(std::abs(row_sum(o, dp)) <= 1e-12);
  }
  SUBCASE("random controls N <= 6") {
    std::mt19937_64 rng(11);
    for (int t = 0; t < 30; ++t) {
      const int N = 1 + t % 6;
      const auto p = oracle::random_controls(N, rng);
      CHECK(max_diff(kernel_coeffs(p), kernel_coeffs_oracle(p, 8 * N + 1)) <= 1e-10);
    }
  }
  SUBCASE("invalid controls are rejected") {
    CHECK_THROWS_AS(kernel_coeffs_oracle(ControlParams1D(4, {2, -1, 3, 1}), 33), InputError);
  }
  CHECK_THROWS_AS(kernel_coeffs_oracle(canonical(), 24), InputError);
}

TEST_CASE("table invariants hold for random controls") {
  std::mt19937_64 rng(5);
  for (int t = 0; t < 60; ++t) {
    const int N = 1 + t % 8;
    const auto p = oracle::random_controls(N, rng);
    const auto c = kernel_coeffs(p);
    for (int dp = -2 * N; dp <= 2 * N; ++dp) CHECK(std::abs(row_sum(c, dp)) <= 1e-10);
    for (int d = -2 * N; d <= 2 * N; ++d) {
      for (int dp = -2 * N; dp <= 2 * N; ++dp) {
        CHECK(c(d, dp) == c(-d, dp));
        CHECK(c(d, dp) == c(dp, d));
      }
    }
    // Quadratic homogeneity.
    std::vector<double> scaled = p.m;
    for (double& v : scaled) v *= 3.0;
    const auto c3 = kernel_coeffs(ControlParams1D(N, scaled));
    for (std::size_t i = 0; i < c.data().size(); ++i) CHECK(c3.data()[i] == doctest::Approx(9.0 * c.data()[i]).epsilon(1e-12));
  }
}

TEST_CASE("only the free slots influence the table") {
  // Constrained entries are projected to zero before use, so any value there is rejected
  // and the zero-projected controls give the same table as the free slots alone.
  std::mt19937_64 rng(9);
  for (int N = 2; N <= 7; ++N) {
    const auto p = oracle::random_controls(N, rng);
    std::vector<double> poked = p.m;
    poked[0] = 1.5;
    CHECK_FALSE(validate_controls(ControlParams1D(N, poked)).ok());
    poked[0] = 0.0;
    CHECK(kernel_coeffs(ControlParams1D(N, poked)).data() == kernel_coeffs(p).data());
  }
}

TEST_CASE("case classifier covers every cell once") {
  const int N = 3;
  CHECK(classify_kernel_case(N, 0, 0) == KernelCase::Origin);
  CHECK(classify_kernel_case(N, 0, -2) == KernelCase::AxisNear);
  CHECK(classify_kernel_case(N, 5, 0) == KernelCase::AxisFar);
  CHECK(classify_kernel_case(N, -2, 2) == KernelCase::Diagonal);
  CHECK(classify_kernel_case(N, 1, -3) == KernelCase::BothNear);
  CHECK(classify_kernel_case(N, 2, 6) == KernelCase::NearFar);
  CHECK(classify_kernel_case(N, 4, -6) == KernelCase::Zero);
}

TEST_CASE("eval_kernel") {
  const auto c = kernel_coeffs(canonical());
  SUBCASE("vanishes at k = 0") {
    for (double k2 : {-0.4, -0.1, 0.0, 0.23, 0.5}) CHECK(std::abs(eval_kernel(c, 0.0, k2)) <= 1e-12);
  }
  SUBCASE("symmetries") {
    std::mt19937_64 rng(2);
    std::uniform_real_distribution<double> U(-0.5, 0.5);
    for (int t = 0; t < 50; ++t) {
      const double k = U(rng), k2 = U(rng);
      const double v = eval_kernel(c, k, k2);
      CHECK(eval_kernel(c, -k, k2) == doctest::Approx(v).epsilon(1e-12));
      CHECK(eval_kernel(c, k2, k) == doctest::Approx(v).epsilon(1e-12));
    }
  }
  SUBCASE("quarter-period value from the appendix cells") {
    // cos(pi d / 2) kills odd d, leaving d, d' in {0, 2, 4, 6} with signs (-1)^{(d+d')/2}.
    // Entries on the axis follow from the row sums of the appendix table.
    const Rational a(1), b(2);
    auto cell = [&](int d, int dp) { return to_double(oracle::appendix_k_table().at({std::min(d, dp), std::max(d, dp)}).at(a, b)); };
    auto K = [&](int d, int dp) -> double {
      if (d > dp) std::swap(d, dp);
      if (dp == 0) return 15.0;
      if (d > 0) return cell(d, dp);
      double s = 0.0;  // rows sum to zero over d = -6..6
      for (int e = 1; e <= 6; ++e) s += cell(e, dp);
      return -2.0 * s;
    };
    double expect = 0.0;
    for (int d = -6; d <= 6; d += 2) {
      for (int dp = -6; dp <= 6; dp += 2) {
        const double sign = ((std::abs(d) + std::abs(dp)) / 2) % 2 ? -1.0 : 1.0;
        expect += sign * K(std::abs(d), std::abs(dp));
      }
    }
    CHECK(eval_kernel(c, 0.25, 0.25) == doctest::Approx(expect).epsilon(1e-12));
    CHECK(eval_kernel(c, 0.25, 0.25) == doctest::Approx(oracle::cosine_sum(c, 0.25, 0.25)).epsilon(1e-12));
  }
}

TEST_CASE("torus grid") {
  const TorusGrid g(8);
  CHECK(g.node(0) == doctest::Approx(-0.4375));
  for (int j = 0; j < 8; ++j) {
    CHECK(g.node(j) != 0.0);
    CHECK(g.node(j) == doctest::Approx(-g.node(7 - j)));
  }
  CHECK_THROWS_AS(TorusGrid(7), InputError);
  CHECK_THROWS_AS(TorusGrid(0), InputError);
}

TEST_CASE("collision_apply") {
  const auto c = kernel_coeffs(canonical());
  SUBCASE("constants are annihilated") {
    const TorusGrid g(64);
    const auto out = collision_apply(c, g, std::vector<double>(64, 2.5));
    for (double v : out) CHECK(std::abs(v) <= 1e-12);
  }
  SUBCASE("zero kernel") {
    const TorusGrid g(32);
    std::vector<double> S(32);
    for (int j = 0; j < 32; ++j) S[j] = std::cos(2 * std::numbers::pi * g.node(j));
    for (double v : collision_apply(kernel_coeffs(ControlParams1D(3, {0, 0, 0})), g, S)) CHECK(v == 0.0);
  }
  SUBCASE("midpoint rule is exact for the cosine modes") {
    // 2 int K(k,k') (cos 2 pi k' - cos 2 pi k) dk' in closed form.
    auto exact = [&](double k) {
      double a = 0.0, b = 0.0;
      for (int d = -6; d <= 6; ++d) {
        a += c(d, 1) * std::cos(2 * std::numbers::pi * d * k);
        b += c(d, 0) * std::cos(2 * std::numbers::pi * d * k);
      }
      return 2.0 * (a - std::cos(2 * std::numbers::pi * k) * b);
    };
    for (int G : {64, 128}) {
      const TorusGrid g(G);
      std::vector<double> S(G);
      for (int j = 0; j < G; ++j) S[j] = std::cos(2 * std::numbers::pi * g.node(j));
      const auto out = collision_apply(c, g, S);
      for (int j = 0; j < G; ++j) CHECK(std::abs(out[j] - exact(g.node(j))) <= 1e-12);
    }
  }
  CHECK_THROWS_AS(CollisionOperator(c, TorusGrid(16)), InputError);
}

TEST_CASE("bound_ratio") {
  SUBCASE("zero controls") {
    const Dispersion disp(Coupling::nearest_neighbor(1.0, 1.0));
    CHECK(bound_ratio(kernel_coeffs(ControlParams1D(3, {0, 0, 0})), disp, TorusGrid(64)) == 0.0);
  }
  SUBCASE("pinned ratio is bounded by max|K| / omega0") {
    const auto c = kernel_coeffs(canonical());
    const Dispersion disp(Coupling::nearest_neighbor(0.7, 1.0));
    const TorusGrid g(64);
    double kmax = 0.0;
    for (int i = 0; i < 64; ++i)
      for (int j = 0; j < 64; ++j) kmax = std::max(kmax, std::abs(eval_kernel(c, g.node(i), g.node(j))));
    CHECK(bound_ratio(c, disp, g) <= kmax / 0.7 + 1e-12);
  }
  SUBCASE("unpinned ratio is stable under refinement") {
    const auto c = kernel_coeffs(canonical());
    const Dispersion disp(Coupling::nearest_neighbor(0.0, 2.0));
    const double r1 = bound_ratio(c, disp, TorusGrid(128));
    const double r2 = bound_ratio(c, disp, TorusGrid(1024));
    CHECK(std::abs(r1 - r2) <= 0.05 * r2);
  }
}
