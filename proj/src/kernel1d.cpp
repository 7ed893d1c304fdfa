#include "kinlim/kernel1d.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "kinlim/dispersion.hpp"
#include "kinlim/errors.hpp"
#include "kinlim/simd.hpp"

namespace kinlim {

template <class T>
BasicControls1D<T>::BasicControls1D(int n, std::vector<T> values) : N(n), m(std::move(values)) {
  if (N < 1) throw InputError("controls: N must be a positive integer");
  if (static_cast<int>(m.size()) != N) {
    throw InputError("controls: expected " + std::to_string(N) + " entries in m, got " +
                     std::to_string(m.size()));
  }
}

template struct BasicControls1D<double>;
template struct BasicControls1D<Rational>;

std::string ControlReport::summary() const {
  std::ostringstream os;
  os << "odd: " << (odd_ok ? "pass" : "fail") << "; vanishing below N/2: "
     << (vanishing_ok ? "pass" : "fail");
  if (!offending.empty()) {
    os << " (offending d =";
    for (int d : offending) os << ' ' << d;
    os << ')';
  }
  if (!nonfinite.empty()) {
    os << "; non-finite at d =";
    for (int d : nonfinite) os << ' ' << d;
  }
  return os.str();
}

namespace {

template <class T>
ControlReport validate_impl(const BasicControls1D<T>& p) {
  ControlReport r;
  for (int d = 1; d <= p.N; ++d) {
    if constexpr (std::is_same_v<T, double>) {
      if (!std::isfinite(p.m[d - 1])) r.nonfinite.push_back(d);
    }
    if (2 * d <= p.N && p.m[d - 1] != T(0)) r.offending.push_back(d);
  }
  r.vanishing_ok = r.offending.empty();
  return r;
}

template <class T>
void require_valid(const BasicControls1D<T>& p) {
  if (p.N < 1 || static_cast<int>(p.m.size()) != p.N) throw InputError("controls: malformed");
  auto r = validate_impl(p);
  if (!r.ok()) throw InputError("invalid controls: " + r.summary());
}

}  // namespace

ControlReport validate_controls(const ControlParams1D& p) { return validate_impl(p); }
ControlReport validate_controls(const ExactControls1D& p) { return validate_impl(p); }

KernelCase classify_kernel_case(int N, int d, int dp) {
  const int a = std::abs(d), b = std::abs(dp);
  const int lo = std::min(a, b), hi = std::max(a, b);
  if (hi == 0) return KernelCase::Origin;
  if (lo == 0) return hi <= N ? KernelCase::AxisNear : KernelCase::AxisFar;
  if (lo == hi) return KernelCase::Diagonal;
  if (hi <= N) return KernelCase::BothNear;
  if (lo <= N) return KernelCase::NearFar;
  return KernelCase::Zero;
}

template <class T>
BasicKernelCoeffs1D<T> kernel_coeffs(const BasicControls1D<T>& p) {
  require_valid(p);
  const int N = p.N;
  const T half = T(1) / T(2), quarter = T(1) / T(4);

  // S(x) = sum over d1 + d2 = x, 1 <= |d1|,|d2| <= N, of M(d1) M(d2).
  auto S = [&](int x) {
    T s(0);
    for (int d1 = -N; d1 <= N; ++d1) {
      const int d2 = x - d1;
      if (d1 == 0 || d2 == 0 || d2 > N || d2 < -N) continue;
      s += p(d1) * p(d2);
    }
    return s;
  };

  BasicKernelCoeffs1D<T> c(N);
  for (int a = 0; a <= 2 * N; ++a) {
    for (int b = 0; b <= 2 * N; ++b) {
      const int lo = std::min(a, b), hi = std::max(a, b);
      T v(0);
      switch (classify_kernel_case(N, a, b)) {
        case KernelCase::Origin:
          for (int d = 1; d <= N; ++d) v += T(3) * p(d) * p(d);
          break;
        case KernelCase::AxisNear:
          v = -p(hi) * p(hi) - half * S(hi);
          break;
        case KernelCase::AxisFar:
          v = -half * S(hi);
          break;
        case KernelCase::Diagonal:
          v = -quarter * S(lo);
          if (2 * lo <= N) v -= p(lo) * p(2 * lo);
          break;
        case KernelCase::BothNear:
          v = half * (p(hi) * p(lo - hi) + p(lo) * p(hi - lo));
          if (lo + hi <= N) v -= half * (p(hi) * p(lo + hi) + p(lo) * p(lo + hi));
          break;
        case KernelCase::NearFar:
          if (hi - lo <= N) v = half * p(lo) * p(hi - lo);
          break;
        case KernelCase::Zero:
          break;
      }
      c.quadrant(a, b) = v;
    }
  }
  return c;
}

template <class T>
BasicKernelCoeffs1D<T> kernel_coeffs_oracle(const BasicControls1D<T>& p, int L) {
  require_valid(p);
  const int N = p.N;
  if (L < 8 * N + 1) {
    throw InputError("oracle: ring size L=" + std::to_string(L) + " must be at least 8N+1=" +
                     std::to_string(8 * N + 1));
  }
  auto wrap = [L](long x) {
    long r = x % L;
    return static_cast<int>(r < 0 ? r + L : r);
  };
  auto centered = [L, &wrap](long x) {
    int r = wrap(x);
    return r > L / 2 ? r - L : r;
  };

  // Linear forms of lambda_n: coefficient of d/d alpha_m as a sparse vector in alpha.
  using Form = std::map<int, T>;
  auto forms_at = [&](int n) {
    std::map<int, Form> f;
    for (int d = -N; d <= N; ++d) {
      const T w = p(d);
      if (d == 0 || w == T(0)) continue;
      Form& g = f[wrap(long(n) - d)];
      g[wrap(n)] += w;
      g[wrap(long(n) + d)] -= w;
      f[wrap(n)][wrap(long(n) + d)] += w;
    }
    return f;
  };

  // Fix n' = 0 as the translation-class representative; raw[D'][D] collects the
  // coefficient of alpha_u alpha_{u+D} in the bilinear form with n'' = -D'.
  const int R = 4 * N;
  const int W = 2 * R + 1;
  std::vector<T> raw(W * W, T(0));
  const T half = T(1) / T(2);
  for (int n = 0; n < L; ++n) {
    auto f = forms_at(n);
    auto it0 = f.find(0);
    if (it0 == f.end()) continue;
    for (const auto& [m, fm] : f) {
      const int Dp = centered(-long(m));
      for (const auto& [u, cu] : it0->second) {
        for (const auto& [w, cw] : fm) {
          const T v = half * cu * cw;
          if (v == T(0)) continue;
          const int D = centered(long(w) - u);
          if (std::abs(Dp) > R || std::abs(D) > R) throw std::logic_error("oracle: offset overflow");
          raw[(Dp + R) * W + (D + R)] += v;
        }
      }
    }
  }

  // The kernel only sees the sign-even part of each coefficient, so average over
  // the four sign flips; anything beyond 2N must vanish.
  BasicKernelCoeffs1D<T> c(N);
  for (int Dp = -R; Dp <= R; ++Dp) {
    for (int D = -R; D <= R; ++D) {
      const T v = raw[(Dp + R) * W + (D + R)];
      if ((std::abs(Dp) > 2 * N || std::abs(D) > 2 * N) && v != T(0)) {
        throw std::logic_error("oracle: coefficient outside |d| <= 2N");
      }
    }
  }
  const T quarter = T(1) / T(4);
  for (int a = 0; a <= 2 * N; ++a) {
    for (int b = 0; b <= 2 * N; ++b) {
      T s(0);
      for (int s1 : {-1, 1}) {
        for (int s2 : {-1, 1}) s += raw[(s1 * a + R) * W + (s2 * b + R)];
      }
      c.quadrant(a, b) = quarter * s;
    }
  }
  return c;
}

template BasicKernelCoeffs1D<double> kernel_coeffs(const BasicControls1D<double>&);
template BasicKernelCoeffs1D<Rational> kernel_coeffs(const BasicControls1D<Rational>&);
template BasicKernelCoeffs1D<double> kernel_coeffs_oracle(const BasicControls1D<double>&, int);
template BasicKernelCoeffs1D<Rational> kernel_coeffs_oracle(const BasicControls1D<Rational>&, int);

ExactControls1D to_exact(const ControlParams1D& p) {
  std::vector<Rational> m;
  for (double v : p.m) {
    if (!std::isfinite(v) || v != std::nearbyint(v) || std::abs(v) > 1e9) {
      throw InputError("exact mode requires integer controls");
    }
    m.emplace_back(static_cast<long long>(v));
  }
  return ExactControls1D(p.N, std::move(m));
}

KernelCoeffs1D to_double(const ExactKernelCoeffs1D& c) {
  KernelCoeffs1D out(c.N());
  for (int a = 0; a <= c.extent(); ++a) {
    for (int b = 0; b <= c.extent(); ++b) out.quadrant(a, b) = to_double(c.quadrant(a, b));
  }
  return out;
}

double eval_kernel(const KernelCoeffs1D& c, double k, double k2) {
  const int E = c.extent();
  std::vector<double> ca(E + 1), cb(E + 1);
  for (int d = 0; d <= E; ++d) {
    const double w = d == 0 ? 1.0 : 2.0;
    ca[d] = w * std::cos(2.0 * std::numbers::pi * d * k);
    cb[d] = w * std::cos(2.0 * std::numbers::pi * d * k2);
  }
  double s = 0.0;
  for (int a = 0; a <= E; ++a) {
    double row = 0.0;
    for (int b = 0; b <= E; ++b) row += c.quadrant(a, b) * cb[b];
    s += ca[a] * row;
  }
  return s;
}

TorusGrid::TorusGrid(int G) {
  if (G <= 0 || G % 2 != 0) throw InputError("grid size must be a positive even integer");
  nodes_.resize(G);
  for (int j = 0; j < G; ++j) nodes_[j] = (j + 0.5) / G - 0.5;
}

CollisionOperator::CollisionOperator(const KernelCoeffs1D& c, const TorusGrid& grid)
    : G_(grid.size()), w_(static_cast<std::size_t>(G_) * G_), loss_(G_, 0.0) {
  if (G_ < 8 * c.N()) {
    throw InputError("collision grid size " + std::to_string(G_) + " below 8N=" +
                     std::to_string(8 * c.N()));
  }
  // K(k,k') = sum_a cos(2 pi a k) sum_b q(a,b) cos(2 pi b k'); tabulate the cosines once.
  const int E = c.extent();
  std::vector<double> cs(static_cast<std::size_t>(E + 1) * G_);
  for (int a = 0; a <= E; ++a) {
    const double w = a == 0 ? 1.0 : 2.0;
    for (int j = 0; j < G_; ++j) cs[a * G_ + j] = w * std::cos(2.0 * std::numbers::pi * a * grid.node(j));
  }
  std::vector<double> inner(static_cast<std::size_t>(E + 1) * G_, 0.0);
  for (int a = 0; a <= E; ++a) {
    for (int b = 0; b <= E; ++b) {
      const double q = c.quadrant(a, b);
      if (q == 0.0) continue;
      for (int j = 0; j < G_; ++j) inner[a * G_ + j] += q * cs[b * G_ + j];
    }
  }
  const double scale = 2.0 / G_;
  for (int i = 0; i < G_; ++i) {
    for (int j = 0; j < G_; ++j) {
      double v = 0.0;
      for (int a = 0; a <= E; ++a) v += cs[a * G_ + i] * inner[a * G_ + j];
      w_[static_cast<std::size_t>(i) * G_ + j] = scale * v;
    }
  }
  // Symmetrize so that the discrete operator conserves mass to rounding.
  for (int i = 0; i < G_; ++i) {
    for (int j = i + 1; j < G_; ++j) {
      double& x = w_[static_cast<std::size_t>(i) * G_ + j];
      double& y = w_[static_cast<std::size_t>(j) * G_ + i];
      x = y = 0.5 * (x + y);
    }
  }
  for (int i = 0; i < G_; ++i) {
    double s = 0.0;
    for (int j = 0; j < G_; ++j) s += w_[static_cast<std::size_t>(i) * G_ + j];
    loss_[i] = s;
  }
}

void CollisionOperator::apply(const double* S, double* out) const {
  simd::kernels().relax(w_.data(), S, out, G_);
}

double CollisionOperator::max_loss_rate() const {
  double m = 0.0;
  for (double v : loss_) m = std::max(m, v);
  return m;
}

std::vector<double> collision_apply(const KernelCoeffs1D& c, const TorusGrid& grid,
                                    const std::vector<double>& S) {
  if (static_cast<int>(S.size()) != grid.size()) throw InputError("collision_apply: size mismatch");
  CollisionOperator op(c, grid);
  std::vector<double> out(S.size());
  op.apply(S.data(), out.data());
  return out;
}

double bound_ratio(const KernelCoeffs1D& c, const Dispersion& disp, const TorusGrid& grid) {
  const int G = grid.size();
  std::vector<double> omega(G);
  for (int i = 0; i < G; ++i) {
    omega[i] = disp.omega(grid.node(i));
    if (!(omega[i] > 0.0)) throw InputError("bound_ratio: dispersion must be positive on the grid");
  }
  double best = 0.0;
  for (int i = 0; i < G; ++i) {
    for (int j = 0; j < G; ++j) {
      best = std::max(best, std::abs(eval_kernel(c, grid.node(i), grid.node(j))) / omega[i]);
    }
  }
  return best;
}

}  // namespace kinlim
