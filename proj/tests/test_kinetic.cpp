#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"

#include "kinlim/errors.hpp"
#include "kinlim/kinetic.hpp"

using namespace kinlim;

namespace {

const double kTau = 2.0 * std::numbers::pi;

KernelCoeffs1D canonical_kernel() { return kernel_coeffs(ControlParams1D(3, {0.0, 1.0, 2.0})); }

double bump(double k) {
  const double z = (std::abs(k) - 0.25) / 0.08;
  return std::exp(-0.5 * z * z);
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

PhaseSpaceDensity modulated(int X, double len, const TorusGrid& g, double mod) {
  PhaseSpaceDensity mu(X, len, g);
  for (int i = 0; i < X; ++i)
    for (int j = 0; j < g.size(); ++j) mu.at(i, j) = bump(g.node(j)) * (1.0 + mod * std::cos(kTau * (i + 0.5) * mu.dx() / len));
  return mu;
}

}  // namespace

TEST_CASE("spectral density basics") {
  const TorusGrid g(64);
  const auto nu = SpectralDensity::from_profile(g, [](double) { return 2.0; });
  CHECK(nu.mass() == doctest::Approx(2.0));
  CHECK_THROWS_AS(SpectralDensity(g, std::vector<double>(10, 0.0)), InputError);
}

TEST_CASE("constant densities are stationary") {
  const TorusGrid g(64);
  const auto nu = SpectralDensity::from_profile(g, [](double) { return 0.7; });
  const auto out = evolve_homogeneous(nu, canonical_kernel(), 2.0, 0.01);
  for (double v : out.values) CHECK(v == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(out.t == doctest::Approx(2.0));
}

TEST_CASE("zero kernel leaves the density unchanged") {
  const TorusGrid g(32);
  const auto nu = SpectralDensity::from_profile(g, bump);
  const auto out = evolve_homogeneous(nu, kernel_coeffs(ControlParams1D(3, {0, 0, 0})), 1.0, 0.1);
  CHECK(out.values == nu.values);
}

TEST_CASE("homogeneous evolution conserves mass, positivity and evenness") {
  const TorusGrid g(128);
  const auto c = canonical_kernel();
  const auto nu = SpectralDensity::from_profile(g, bump);
  const double dt = 1e-3;
  CHECK(dt <= positivity_dt(c, g));
  const auto series = evolve_homogeneous_series(nu, c, {1.0, 10.0}, dt);
  REQUIRE(series.size() == 2);
  for (const auto& s : series) {
    CHECK(std::abs(s.mass() - nu.mass()) <= 1e-8 * nu.mass());
    for (double v : s.values) CHECK(v >= -1e-12);
    for (int j = 0; j < 128; ++j) CHECK(s.values[j] == doctest::Approx(s.values[127 - j]).epsilon(1e-10));
  }
  // Relaxation flattens the profile towards its mean.
  const double mean = nu.mass();
  CHECK(max_abs_diff(series[1].values, std::vector<double>(128, mean)) < max_abs_diff(nu.values, std::vector<double>(128, mean)));
}

TEST_CASE("RK4 converges at fourth order") {
  const TorusGrid g(64);
  const auto c = canonical_kernel();
  const auto nu = SpectralDensity::from_profile(g, bump);
  const auto ref = evolve_homogeneous(nu, c, 0.5, 0.0005);
  const double e1 = max_abs_diff(evolve_homogeneous(nu, c, 0.5, 0.01).values, ref.values);
  const double e2 = max_abs_diff(evolve_homogeneous(nu, c, 0.5, 0.005).values, ref.values);
  CHECK(e1 / e2 == doctest::Approx(16.0).epsilon(0.25));
}

TEST_CASE("homogeneous input checks") {
  const TorusGrid g(32);
  const auto nu = SpectralDensity::from_profile(g, bump);
  CHECK_THROWS_AS(evolve_homogeneous(nu, canonical_kernel(), 1.0, 0.0), InputError);
  CHECK_THROWS_AS(evolve_homogeneous(nu, canonical_kernel(), 1.0, -0.1), InputError);
  CHECK_THROWS_AS(evolve_homogeneous_series(nu, canonical_kernel(), {0.5, 0.2}, 0.01), InputError);
}

TEST_CASE("advect_fiber") {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::vector<double> in(20), out(20);
  for (double& v : in) v = U(rng);
  SUBCASE("integer shifts permute exactly") {
    for (auto interp : {Interp::Linear, Interp::Cubic}) {
      advect_fiber(in.data(), out.data(), 20, 3.0, interp);
      for (int i = 0; i < 20; ++i) CHECK(out[i] == in[(i + 17) % 20]);
      advect_fiber(in.data(), out.data(), 20, -42.0, interp);
      for (int i = 0; i < 20; ++i) CHECK(out[i] == in[(i + 2) % 20]);
    }
  }
  SUBCASE("linear interpolation keeps positivity and mass") {
    advect_fiber(in.data(), out.data(), 20, 0.37, Interp::Linear);
    double a = 0.0, b = 0.0;
    for (int i = 0; i < 20; ++i) {
      CHECK(out[i] >= 0.0);
      a += in[i];
      b += out[i];
    }
    CHECK(a == doctest::Approx(b).epsilon(1e-13));
  }
  SUBCASE("cubic interpolation is exact on a low mode") {
    std::vector<double> s(64), o(64);
    for (int i = 0; i < 64; ++i) s[i] = std::sin(kTau * i / 64.0);
    advect_fiber(s.data(), o.data(), 64, 0.4, Interp::Cubic);
    for (int i = 0; i < 64; ++i) CHECK(o[i] == doctest::Approx(std::sin(kTau * (i - 0.4) / 64.0)).epsilon(1e-4).scale(1.0));
  }
}

TEST_CASE("free streaming follows the characteristics") {
  const TorusGrid g(32);
  const Dispersion disp(Coupling::nearest_neighbor(1.0, 1.0));
  const int X = 256;
  const auto mu0 = modulated(X, 1.0, g, 0.5);
  const double T = 1.0;
  const auto mu = evolve_transport(mu0, kernel_coeffs(ControlParams1D(3, {0, 0, 0})), disp, T, 0.002);
  double worst = 0.0;
  for (int j = 0; j < g.size(); ++j) {
    const double v = disp.omega_prime(g.node(j)) / kTau;
    for (int i = 0; i < X; ++i) {
      const double x = (i + 0.5) * mu.dx();
      const double exact = bump(g.node(j)) * (1.0 + 0.5 * std::cos(kTau * (x - v * T)));
      worst = std::max(worst, std::abs(mu.at(i, j) - exact));
    }
  }
  CHECK(worst <= 1e-3);
}

TEST_CASE("transport conserves mass and respects the CFL bound") {
  const TorusGrid g(32);
  const Dispersion disp(Coupling::nearest_neighbor(1.0, 1.0));
  const auto c = canonical_kernel();
  const auto mu0 = modulated(16, 1.0, g, 0.5);
  const auto mu = evolve_transport(mu0, c, disp, 5.0, 0.01);
  CHECK(mu.mass() == doctest::Approx(mu0.mass()).epsilon(1e-10));
  CHECK(mu.t == doctest::Approx(5.0));
  const auto lin = evolve_transport(mu0, c, disp, 1.0, 0.01, Interp::Linear);
  for (double v : lin.values) CHECK(v >= -1e-12);
  CHECK_THROWS_AS(evolve_transport(mu0, c, disp, 1.0, 1.0), InputError);
  CHECK_THROWS_AS(evolve_transport(mu0, c, disp, 1.0, 0.0), InputError);
  CHECK_THROWS_AS(PhaseSpaceDensity(3, 1.0, g), InputError);
}

TEST_CASE("uniform in x reduces to the homogeneous solver") {
  const TorusGrid g(32);
  const Dispersion disp(Coupling::nearest_neighbor(1.0, 1.0));
  const auto c = canonical_kernel();
  const auto mu = evolve_transport(modulated(8, 1.0, g, 0.0), c, disp, 1.0, 0.01);
  const auto nu = evolve_homogeneous(SpectralDensity::from_profile(g, bump), c, 1.0, 0.01);
  for (int i = 0; i < 8; ++i)
    for (int j = 0; j < 32; ++j) CHECK(mu.at(i, j) == doctest::Approx(nu.values[j]).epsilon(1e-12));
}

TEST_CASE("projection onto the kinetic grid") {
  const int L = 256;
  WignerEstimate w;
  w.L = L;
  for (int j = 0; j < L; ++j) {
    w.k.push_back(-0.5 + double(j) / L);
    w.value.push_back(std::cos(kTau * w.k.back()));
  }
  const TorusGrid g(16);
  const auto p = project_to_grid(w, g);
  for (int j = 0; j < 16; ++j) {
    const double a = g.node(j) - 1.0 / 32, b = g.node(j) + 1.0 / 32;
    const double avg = (std::sin(kTau * b) - std::sin(kTau * a)) / kTau * 16.0;
    CHECK(p[j] == doctest::Approx(avg).epsilon(1e-3).scale(1.0));
  }
  std::fill(w.value.begin(), w.value.end(), 3.0);
  for (double v : project_to_grid(w, g)) CHECK(v == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("comparison") {
  const TorusGrid g(16);
  const auto nu = SpectralDensity::from_profile(g, bump);
  const std::vector<std::vector<double>> a{nu.values};
  CHECK(compare_sampled({0.0}, a, {0.0}, a) == std::vector<double>{0.0});
  auto b = a;
  b[0][3] += 1.0;
  double norm = 0.0;
  for (double v : nu.values) norm += v;
  CHECK(compare_sampled({0.0}, b, {0.0}, a)[0] == doctest::Approx(1.0 / norm));
  CHECK_THROWS_AS(compare_sampled({0.5}, a, {0.0}, a), InputError);
  CHECK_THROWS_AS(compare_sampled({0.0}, {std::vector<double>(8)}, {0.0}, a), InputError);
  CHECK_THROWS_AS(compare_spectra({0.0}, {}, {}), InputError);
}
