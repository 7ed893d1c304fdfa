#pragma once

#include <string>
#include <vector>

#include "kinlim/scalar.hpp"

namespace kinlim {

class Dispersion;

// Free parameters M_N(d) of the 1D control. Only d = 1..N is stored; the
// signed accessor supplies M_N(-d) = -M_N(d).
template <class T>
struct BasicControls1D {
  int N = 0;
  std::vector<T> m;  // m[d - 1] = M_N(d)

  BasicControls1D() = default;
  BasicControls1D(int n, std::vector<T> values);

  T operator()(int d) const {
    if (d == 0 || d > N || d < -N) return T(0);
    return d > 0 ? m[d - 1] : -m[-d - 1];
  }
  // Smallest unconstrained distance, floor(N/2) + 1.
  int first_free() const { return N / 2 + 1; }
  int free_count() const { return N - N / 2; }
};

using ControlParams1D = BasicControls1D<double>;
using ExactControls1D = BasicControls1D<Rational>;

struct ControlReport {
  bool odd_ok = true;              // structural, kept for reporting
  bool vanishing_ok = true;        // m(d) = 0 for 1 <= d <= N/2
  std::vector<int> offending;      // distances violating the vanishing condition
  std::vector<int> nonfinite;      // distances holding NaN or inf
  bool ok() const { return odd_ok && vanishing_ok && nonfinite.empty(); }
  std::string summary() const;
};

ControlReport validate_controls(const ControlParams1D& p);
ControlReport validate_controls(const ExactControls1D& p);

// Dense coefficient table over the nonnegative quadrant [0, 2N]^2; signed
// lookups expand by K(d,d') = K(-d,d') = K(d',d).
template <class T>
class BasicKernelCoeffs1D {
 public:
  BasicKernelCoeffs1D() = default;
  explicit BasicKernelCoeffs1D(int N) : N_(N), q_((2 * N + 1) * (2 * N + 1), T(0)) {}

  int N() const { return N_; }
  int extent() const { return 2 * N_; }

  T operator()(int d, int dp) const {
    if (d < 0) d = -d;
    if (dp < 0) dp = -dp;
    if (d > 2 * N_ || dp > 2 * N_) return T(0);
    return q_[d * (2 * N_ + 1) + dp];
  }
  T& quadrant(int a, int b) { return q_[a * (2 * N_ + 1) + b]; }
  const T& quadrant(int a, int b) const { return q_[a * (2 * N_ + 1) + b]; }
  const std::vector<T>& data() const { return q_; }

 private:
  int N_ = 0;
  std::vector<T> q_;
};

using KernelCoeffs1D = BasicKernelCoeffs1D<double>;
using ExactKernelCoeffs1D = BasicKernelCoeffs1D<Rational>;

// Mutually exclusive cases of the closed form, keyed on (|d|, |d'|, |d-d'|, |d+d'|).
enum class KernelCase {
  Origin,        // d = d' = 0
  AxisNear,      // one index 0, other in 1..N
  AxisFar,       // one index 0, other in N+1..2N
  Diagonal,      // |d| = |d'| >= 1
  BothNear,      // 1 <= |d| != |d'| <= N
  NearFar,       // one index in 1..N, other in N+1..2N
  Zero,          // both in N+1..2N, distinct
};
KernelCase classify_kernel_case(int N, int d, int dp);

template <class T>
BasicKernelCoeffs1D<T> kernel_coeffs(const BasicControls1D<T>& p);

// Brute-force coefficients from the quadratic form on a ring of L sites.
template <class T>
BasicKernelCoeffs1D<T> kernel_coeffs_oracle(const BasicControls1D<T>& p, int L);

// Exact conversion for golden tests; rejects non-integer entries.
ExactControls1D to_exact(const ControlParams1D& p);
KernelCoeffs1D to_double(const ExactKernelCoeffs1D& c);

// Sum over all signed (d, d') of c(d,d') cos(2 pi d k) cos(2 pi d' k2).
double eval_kernel(const KernelCoeffs1D& c, double k, double k2);

// Midpoint grid k_j = (j + 1/2)/G - 1/2 on the torus.
class TorusGrid {
 public:
  explicit TorusGrid(int G);
  int size() const { return static_cast<int>(nodes_.size()); }
  double node(int j) const { return nodes_[j]; }
  double spacing() const { return 1.0 / size(); }
  const std::vector<double>& nodes() const { return nodes_; }

 private:
  std::vector<double> nodes_;
};

// Sampled collision operator 2 * int K(k,k') (S(k') - S(k)) dk' with midpoint
// quadrature; the matrix is assembled once and applied many times.
class CollisionOperator {
 public:
  CollisionOperator(const KernelCoeffs1D& c, const TorusGrid& grid);
  int size() const { return G_; }
  // out may not alias S.
  void apply(const double* S, double* out) const;
  // max_k of the loss rate 2 * int K(k,k') dk'.
  double max_loss_rate() const;
  const std::vector<double>& weights() const { return w_; }

 private:
  int G_;
  std::vector<double> w_;      // 2 K(k_i,k_j) / G, row-major
  std::vector<double> loss_;   // sum_j w_ij
};

std::vector<double> collision_apply(const KernelCoeffs1D& c, const TorusGrid& grid,
                                    const std::vector<double>& S);

// max over grid nodes of |K(k,k')| / omega(k).
double bound_ratio(const KernelCoeffs1D& c, const Dispersion& disp, const TorusGrid& grid);

}  // namespace kinlim
