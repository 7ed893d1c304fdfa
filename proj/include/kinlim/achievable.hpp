#pragma once

#include <map>
#include <utility>
#include <vector>

#include "kinlim/kernel1d.hpp"

namespace kinlim {

// L(d1,d2) = sum_{d > d1} sum_{d' > d2} K(d,d') for 0 <= d1, d2 <= 2N-1.
template <class T>
struct BasicLCoeffs {
  int N = 0;
  std::vector<T> table;  // (2N) x (2N), row-major
  int extent() const { return 2 * N; }
  const T& operator()(int d1, int d2) const { return table[d1 * 2 * N + d2]; }
};
using LCoeffs = BasicLCoeffs<double>;
using ExactLCoeffs = BasicLCoeffs<Rational>;

template <class T>
BasicLCoeffs<T> l_coeffs(const BasicKernelCoeffs1D<T>& c);

// Chebyshev polynomial of the second kind, sin((d+1) t) = sin t * U_d(cos t).
double chebyshev_u(int d, double x);

// (sin^2(d t), sin^2 t * sum_{d1 < d} U_{2 d1}(cos t)).
std::pair<double, double> telescoping_check(int d, double theta);

// Double series sum c(d1,d2) U_{2 d1}(x) U_{2 d2}(y), evaluated with Clenshaw per axis.
class ChebTensor {
 public:
  ChebTensor() = default;
  explicit ChebTensor(int n) : n_(n), c_(static_cast<std::size_t>(n) * n, 0.0) {}
  int extent() const { return n_; }
  double& at(int d1, int d2) { return c_[static_cast<std::size_t>(d1) * n_ + d2]; }
  double at(int d1, int d2) const { return c_[static_cast<std::size_t>(d1) * n_ + d2]; }
  double operator()(double x, double y) const;
  // Monomial coefficients m[a][b] of x^a y^b, for display only.
  std::vector<std::vector<double>> to_monomials() const;

 private:
  int n_ = 0;
  std::vector<double> c_;
};

// v = sum_{i <= j} C_i C_j P_{i,j}; diagonal P_{i,i} multiplies C_i^2 once.
class ChebQuadraticForm {
 public:
  int N = 0;
  int nfree = 0;
  // Exact U_{2 d1} x U_{2 d2} coefficients of P_{i,j}, 1 <= i <= j <= nfree, size (2N)^2.
  std::map<std::pair<int, int>, std::vector<Rational>> polys;

  const std::vector<Rational>& poly(int i, int j) const { return polys.at({i, j}); }
  ChebTensor at(const std::vector<double>& C) const;
};

ChebQuadraticForm basis_polys(int N);

// m(i + floor(N/2)) = C_i, zeros below.
ControlParams1D synthesize_controls(int N, const std::vector<double>& C);

// max over grid of |K(k,k') - 16 sin^2(pi k) sin^2(pi k') v(cos pi k, cos pi k')|.
double verify_target(const ControlParams1D& p, const ChebTensor& v, const TorusGrid& grid);

}  // namespace kinlim
