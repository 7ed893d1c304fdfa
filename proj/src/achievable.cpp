#include "kinlim/achievable.hpp"

#include <cmath>
#include <numbers>

#include "kinlim/errors.hpp"

namespace kinlim {

template <class T>
BasicLCoeffs<T> l_coeffs(const BasicKernelCoeffs1D<T>& c) {
  const int N = c.N(), E = 2 * N;
  BasicLCoeffs<T> L;
  L.N = N;
  L.table.assign(static_cast<std::size_t>(E) * E, T(0));
  // Suffix sums over the quadrant, indices 1..2N.
  for (int d1 = E - 1; d1 >= 0; --d1) {
    for (int d2 = E - 1; d2 >= 0; --d2) {
      T v = c(d1 + 1, d2 + 1);
      if (d1 + 1 < E) v += L.table[(d1 + 1) * E + d2];
      if (d2 + 1 < E) v += L.table[d1 * E + d2 + 1];
      if (d1 + 1 < E && d2 + 1 < E) v -= L.table[(d1 + 1) * E + d2 + 1];
      L.table[d1 * E + d2] = v;
    }
  }
  return L;
}

template BasicLCoeffs<double> l_coeffs(const BasicKernelCoeffs1D<double>&);
template BasicLCoeffs<Rational> l_coeffs(const BasicKernelCoeffs1D<Rational>&);

double chebyshev_u(int d, double x) {
  if (d < 0) throw InputError("chebyshev_u: degree must be nonnegative");
  double u0 = 1.0;
  if (d == 0) return u0;
  double u1 = 2.0 * x;
  for (int n = 2; n <= d; ++n) {
    const double u2 = 2.0 * x * u1 - u0;
    u0 = u1;
    u1 = u2;
  }
  return u1;
}

std::pair<double, double> telescoping_check(int d, double theta) {
  if (d < 1) throw InputError("telescoping_check: d must be positive");
  const double s = std::sin(d * theta);
  double sum = 0.0;
  const double x = std::cos(theta);
  for (int d1 = 0; d1 < d; ++d1) sum += chebyshev_u(2 * d1, x);
  const double st = std::sin(theta);
  return {s * s, st * st * sum};
}

namespace {

// Clenshaw for sum_{n} a[n] U_{2n}(x): expand to the full U series with odd slots empty.
double clenshaw_even(const double* a, int n, std::ptrdiff_t stride, double x) {
  double b1 = 0.0, b2 = 0.0;
  for (int deg = 2 * (n - 1); deg >= 0; --deg) {
    const double coef = (deg % 2 == 0) ? a[(deg / 2) * stride] : 0.0;
    const double b0 = coef + 2.0 * x * b1 - b2;
    b2 = b1;
    b1 = b0;
  }
  return b1;
}

std::vector<double> u_monomials(int deg) {
  std::vector<double> u0{1.0}, u1{0.0, 2.0};
  if (deg == 0) return u0;
  for (int n = 2; n <= deg; ++n) {
    std::vector<double> u2(n + 1, 0.0);
    for (std::size_t i = 0; i < u1.size(); ++i) u2[i + 1] += 2.0 * u1[i];
    for (std::size_t i = 0; i < u0.size(); ++i) u2[i] -= u0[i];
    u0 = std::move(u1);
    u1 = std::move(u2);
  }
  return u1;
}

}  // namespace

double ChebTensor::operator()(double x, double y) const {
  if (n_ == 0) return 0.0;
  std::vector<double> g(n_);
  for (int d1 = 0; d1 < n_; ++d1) g[d1] = clenshaw_even(&c_[static_cast<std::size_t>(d1) * n_], n_, 1, y);
  return clenshaw_even(g.data(), n_, 1, x);
}

std::vector<std::vector<double>> ChebTensor::to_monomials() const {
  const int deg = n_ == 0 ? 0 : 2 * (n_ - 1);
  std::vector<std::vector<double>> m(deg + 1, std::vector<double>(deg + 1, 0.0));
  std::vector<std::vector<double>> u(n_);
  for (int d = 0; d < n_; ++d) u[d] = u_monomials(2 * d);
  for (int d1 = 0; d1 < n_; ++d1) {
    for (int d2 = 0; d2 < n_; ++d2) {
      const double c = at(d1, d2);
      if (c == 0.0) continue;
      for (std::size_t a = 0; a < u[d1].size(); ++a) {
        for (std::size_t b = 0; b < u[d2].size(); ++b) m[a][b] += c * u[d1][a] * u[d2][b];
      }
    }
  }
  return m;
}

ChebTensor ChebQuadraticForm::at(const std::vector<double>& C) const {
  if (static_cast<int>(C.size()) != nfree) {
    throw InputError("expected " + std::to_string(nfree) + " synthesis coefficients, got " +
                     std::to_string(C.size()));
  }
  ChebTensor v(2 * N);
  for (const auto& [ij, coef] : polys) {
    const double w = C[ij.first - 1] * C[ij.second - 1];
    if (w == 0.0) continue;
    for (int d1 = 0; d1 < 2 * N; ++d1) {
      for (int d2 = 0; d2 < 2 * N; ++d2) v.at(d1, d2) += w * to_double(coef[d1 * 2 * N + d2]);
    }
  }
  return v;
}

ChebQuadraticForm basis_polys(int N) {
  if (N < 1) throw InputError("basis_polys: N must be positive");
  ChebQuadraticForm form;
  form.N = N;
  form.nfree = N - N / 2;
  const int shift = N / 2;
  auto lco = [&](const std::vector<std::pair<int, long long>>& slots) {
    std::vector<Rational> m(N, Rational(0));
    for (auto [i, v] : slots) m[i + shift - 1] = Rational(v);
    return l_coeffs(kernel_coeffs(ExactControls1D(N, std::move(m)))).table;
  };
  std::vector<std::vector<Rational>> diag(form.nfree + 1);
  for (int i = 1; i <= form.nfree; ++i) {
    diag[i] = lco({{i, 1}});
    form.polys[{i, i}] = diag[i];
  }
  for (int i = 1; i <= form.nfree; ++i) {
    for (int j = i + 1; j <= form.nfree; ++j) {
      auto both = lco({{i, 1}, {j, 1}});
      for (std::size_t t = 0; t < both.size(); ++t) both[t] -= diag[i][t] + diag[j][t];
      form.polys[{i, j}] = std::move(both);
    }
  }
  return form;
}

ControlParams1D synthesize_controls(int N, const std::vector<double>& C) {
  if (N < 1) throw InputError("synthesize: N must be positive");
  const int nfree = N - N / 2;
  if (static_cast<int>(C.size()) != nfree) {
    throw InputError("synthesize: expected " + std::to_string(nfree) + " coefficients for N=" +
                     std::to_string(N) + ", got " + std::to_string(C.size()));
  }
  std::vector<double> m(N, 0.0);
  for (int i = 1; i <= nfree; ++i) m[i + N / 2 - 1] = C[i - 1];
  return ControlParams1D(N, std::move(m));
}

double verify_target(const ControlParams1D& p, const ChebTensor& v, const TorusGrid& grid) {
  if (grid.size() < 4 * p.N) throw InputError("verify_target: grid must resolve degree 4N");
  const KernelCoeffs1D c = kernel_coeffs(p);
  double worst = 0.0;
  for (double k : grid.nodes()) {
    const double sk = std::sin(std::numbers::pi * k);
    for (double k2 : grid.nodes()) {
      const double sk2 = std::sin(std::numbers::pi * k2);
      const double rhs = 16.0 * sk * sk * sk2 * sk2 *
                         v(std::cos(std::numbers::pi * k), std::cos(std::numbers::pi * k2));
      worst = std::max(worst, std::abs(eval_kernel(c, k, k2) - rhs));
    }
  }
  return worst;
}

}  // namespace kinlim
