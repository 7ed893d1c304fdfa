#include "kinlim/kernel_nd.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

#include "kinlim/errors.hpp"

namespace kinlim {

// ---- controls ---------------------------------------------------------------

SimpleIndexControls::SimpleIndexControls(std::shared_ptr<const PathFamily> family)
    : fam_(std::move(family)) {
  if (!fam_) throw InputError("simple controls: null path family");
  v_.assign(fam_->size() * fam_->N() * fam_->dim(), 0.0);
}

void SimpleIndexControls::set_unpaired(std::size_t path, int dd, const std::vector<double>& value) {
  if (path >= fam_->size() || dd < 1 || dd > N()) throw InputError("simple controls: slot out of range");
  if (static_cast<int>(value.size()) != dim()) throw InputError("simple controls: vector has wrong dimension");
  double* dst = v_.data() + (path * N() + (dd - 1)) * dim();
  for (int c = 0; c < dim(); ++c) dst[c] = value[c];
}

void SimpleIndexControls::set(std::size_t path, int dd, const std::vector<double>& value) {
  set_unpaired(path, dd, value);
  std::vector<double> neg(value);
  for (double& x : neg) x = -x;
  set_unpaired(fam_->partner(path), dd, neg);
}

const double* SimpleIndexControls::get(std::size_t path, int dd) const {
  return v_.data() + (path * N() + (dd - 1)) * dim();
}

std::size_t SimpleIndexControls::free_slot_count() const {
  return fam_->size() / 2 * static_cast<std::size_t>(N() - N() / 2);
}

DualIndexControls::DualIndexControls(std::shared_ptr<const PathFamily> family)
    : fam_(std::move(family)) {
  if (!fam_) throw InputError("dual controls: null path family");
}

DualIndexControls::Slot& DualIndexControls::slot(int i, int j) {
  if (i < 0 || j < 0 || i >= dim() || j >= dim() || i == j) {
    throw InputError("dual controls: need distinct component indices in range");
  }
  auto [it, fresh] = slots_.try_emplace({i, j});
  if (fresh) {
    it->second.values.assign(fam_->size() * N(), 0.0);
    it->second.signs.assign(fam_->size(), 1);
  }
  return it->second;
}

const DualIndexControls::Slot* DualIndexControls::find(int i, int j) const {
  auto it = slots_.find({i, j});
  return it == slots_.end() ? nullptr : &it->second;
}

void DualIndexControls::set_unpaired(int i, int j, std::size_t path, int dd, double value) {
  if (path >= fam_->size() || dd < 1 || dd > N()) throw InputError("dual controls: slot out of range");
  slot(i, j).values[path * N() + dd - 1] = value;
}

void DualIndexControls::set(int i, int j, std::size_t path, int dd, double value) {
  if (path >= fam_->size() || dd < 1 || dd > N()) throw InputError("dual controls: slot out of range");
  Slot& s = slot(i, j);
  const std::size_t c = fam_->canonical(path) ? path : fam_->partner(path);
  const std::size_t q = fam_->partner(c);
  s.values[path * N() + dd - 1] = value;
  // s.signs[c] is +-1, so multiplying by it is its own inverse.
  if (path == c) {
    s.values[q * N() + dd - 1] = s.signs[c] * value;
  } else {
    s.values[c * N() + dd - 1] = s.signs[c] * value;
  }
}

void DualIndexControls::set_sign(int i, int j, std::size_t path, int sign) {
  if (path >= fam_->size()) throw InputError("dual controls: path out of range");
  if (sign != 1 && sign != -1) throw InputError("dual controls: sign must be +1 or -1");
  Slot& s = slot(i, j);
  const std::size_t c = fam_->canonical(path) ? path : fam_->partner(path);
  const std::size_t q = fam_->partner(c);
  s.signs[c] = sign;
  for (int dd = 0; dd < N(); ++dd) s.values[q * N() + dd] = sign * s.values[c * N() + dd];
}

double DualIndexControls::get(int i, int j, std::size_t path, int dd) const {
  const Slot* s = find(i, j);
  return s ? s->values[path * N() + dd - 1] : 0.0;
}

int DualIndexControls::sign(int i, int j, std::size_t path) const {
  const Slot* s = find(i, j);
  if (!s) return 1;
  return s->signs[fam_->canonical(path) ? path : fam_->partner(path)];
}

std::vector<std::pair<int, int>> DualIndexControls::pairs() const {
  std::vector<std::pair<int, int>> out;
  for (const auto& kv : slots_) out.push_back(kv.first);
  return out;
}

// ---- validation --------------------------------------------------------------

namespace {

std::string path_label(const PathFamily& fam, std::size_t idx) {
  std::ostringstream os;
  const auto& p = fam.path(idx);
  os << "p=" << p.part.value() << " moves=";
  for (int a : p.moves) os << a;
  return os.str();
}

void require(const NdReport& r, const char* what) {
  if (!r.ok()) throw InputError(std::string(what) + ": " + r.problems.front());
}

}  // namespace

NdReport validate(const SimpleIndexControls& m) {
  NdReport r;
  const auto& fam = m.family();
  for (std::size_t g = 0; g < fam.size(); ++g) {
    const std::size_t q = fam.partner(g);
    for (int dd = 1; dd <= m.N(); ++dd) {
      const double* a = m.get(g, dd);
      const double* b = m.get(q, dd);
      for (int c = 0; c < m.dim(); ++c) {
        if (!std::isfinite(a[c])) {
          r.problems.push_back("non-finite value at " + path_label(fam, g) + " d=" + std::to_string(dd));
        } else if (2 * dd <= m.N() && a[c] != 0.0) {
          r.problems.push_back("nonzero value below N/2 at " + path_label(fam, g) + " d=" +
                               std::to_string(dd));
        } else if (fam.canonical(g) && a[c] + b[c] != 0.0) {
          r.problems.push_back("reflected path does not carry the negated value at " +
                               path_label(fam, g) + " d=" + std::to_string(dd));
        } else {
          continue;
        }
        break;
      }
    }
  }
  return r;
}

NdReport validate(const DualIndexControls& m) {
  NdReport r;
  const auto& fam = m.family();
  const int N = m.N();
  for (auto [i, j] : m.pairs()) {
    const std::string tag = "(" + std::to_string(i) + "," + std::to_string(j) + ") ";
    for (std::size_t g = 0; g < fam.size(); ++g) {
      double pairsum = 0.0, scale = 0.0;
      for (int d1 = 1; d1 <= N; ++d1) {
        const double a = m.get(i, j, g, d1);
        if (!std::isfinite(a)) {
          r.problems.push_back(tag + "non-finite value at " + path_label(fam, g));
        }
        scale += std::abs(a);
        for (int d2 = d1 + 1; d2 <= N; ++d2) pairsum += a * m.get(i, j, g, d2);
      }
      if (std::abs(pairsum) > 1e-10 * scale * scale) {
        r.problems.push_back(tag + "pairwise product sum is nonzero at " + path_label(fam, g));
      }
      if (!fam.canonical(g)) continue;
      const std::size_t q = fam.partner(g);
      bool plus = true, minus = true;
      for (int dd = 1; dd <= N; ++dd) {
        const double a = m.get(i, j, g, dd), b = m.get(i, j, q, dd);
        plus = plus && (b == a);
        minus = minus && (b == -a);
      }
      if (!plus && !minus) {
        r.problems.push_back(tag + "reflected path is neither +M nor -M at " + path_label(fam, g));
      }
    }
  }
  return r;
}

// ---- closed forms ----------------------------------------------------------------

const std::vector<double>* KernelCoeffsND::find(const LatticePoint& D, const LatticePoint& Dp) const {
  auto it = table.find({D, Dp});
  return it == table.end() ? nullptr : &it->second;
}

namespace {

using PointMap = std::unordered_map<LatticePoint, std::vector<double>, LatticePointHash>;

LatticePoint add(const LatticePoint& a, const LatticePoint& b, int sb = 1) {
  LatticePoint r(a);
  for (std::size_t t = 0; t < r.size(); ++t) r[t] += sb * b[t];
  return r;
}

LatticePoint scaled(const LatticePoint& a, int s) {
  LatticePoint r(a);
  for (int& v : r) v *= s;
  return r;
}

// All points with ||x||_1 <= radius, in lexicographic order.
std::vector<LatticePoint> l1_ball(int dim, int radius) {
  std::vector<LatticePoint> out;
  LatticePoint x(dim, -radius);
  while (true) {
    if (l1_norm(x) <= radius) out.push_back(x);
    int t = dim - 1;
    while (t >= 0 && x[t] == radius) x[t--] = -radius;
    if (t < 0) break;
    ++x[t];
  }
  return out;
}

bool all_zero(const std::vector<double>& v) {
  for (double x : v) {
    if (x != 0.0) return false;
  }
  return true;
}

}  // namespace

KernelCoeffsND simple_index_coeffs(const SimpleIndexControls& m) {
  require(validate(m), "invalid simple-index controls");
  const int d = m.dim(), N = m.N();
  const auto& fam = m.family();

  // Aggregate weight per lattice point over every path that reaches it.
  PointMap W;
  for (std::size_t g = 0; g < fam.size(); ++g) {
    const auto& pts = fam.path(g).points;
    for (int k = 1; k <= N; ++k) {
      const double* v = m.get(g, k);
      auto& w = W.try_emplace(pts[k - 1], d, 0.0).first->second;
      for (int c = 0; c < d; ++c) w[c] += v[c];
    }
  }
  const std::vector<double> zero(d, 0.0);
  auto w_at = [&](const LatticePoint& x) -> const std::vector<double>& {
    auto it = W.find(x);
    return it == W.end() ? zero : it->second;
  };
  // out += s * (a outer b)
  auto outer = [d](std::vector<double>& out, const std::vector<double>& a, const std::vector<double>& b,
                   double s) {
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) out[i * d + j] += s * a[i] * b[j];
  };
  const auto near = l1_ball(d, N);
  auto conv = [&](std::vector<double>& out, const LatticePoint& D, double s) {
    for (const auto& u : near) {
      if (l1_norm(u) == 0) continue;
      outer(out, w_at(u), w_at(add(D, u, -1)), s);
    }
  };

  KernelCoeffsND res;
  res.variant = KernelCoeffsND::Variant::Simple;
  res.dim = d;
  const auto ball = l1_ball(d, 2 * N);
  for (const auto& D : ball) {
    for (const auto& Dp : ball) {
      std::vector<double> K(d * d, 0.0);
      const bool z = l1_norm(D) == 0, zp = l1_norm(Dp) == 0;
      if (z && zp) {
        for (const auto& u : near) outer(K, w_at(u), w_at(u), 1.5);
      } else if (z || zp || D == Dp) {
        const LatticePoint& E = z ? Dp : D;
        outer(K, w_at(E), w_at(E), -1.0);
        conv(K, E, -0.5);
      } else if (D == scaled(Dp, -1)) {
        const LatticePoint D2 = scaled(D, 2);
        outer(K, w_at(D), w_at(D), 1.0);
        outer(K, w_at(D), w_at(D2), -1.0);
        outer(K, w_at(D2), w_at(D), -1.0);
      } else {
        const LatticePoint a = add(Dp, D, -1), b = add(D, Dp, -1);
        outer(K, w_at(D), w_at(a), 0.5);
        outer(K, w_at(a), w_at(D), 0.5);
        outer(K, w_at(Dp), w_at(b), 0.5);
        outer(K, w_at(b), w_at(Dp), 0.5);
        outer(K, w_at(Dp), w_at(D), -0.5);
        outer(K, w_at(D), w_at(Dp), -0.5);
      }
      if (!all_zero(K)) res.table.emplace(std::make_pair(D, Dp), std::move(K));
    }
  }
  return res;
}

namespace {

// Weights of the field lambda^{i,j}_{n,gamma} relative to n: the base site carries
// -sum_d M(d) (+ bias), the point gamma_d carries M(d).
std::vector<std::pair<LatticePoint, double>> dual_weights(const DualIndexControls& m, int i, int j,
                                                          std::size_t g, double bias = 0.0) {
  const auto& pts = m.family().path(g).points;
  std::vector<std::pair<LatticePoint, double>> e;
  double total = 0.0;
  for (int k = 1; k <= m.N(); ++k) total += m.get(i, j, g, k);
  e.emplace_back(LatticePoint(m.dim(), 0), -total + bias);
  for (int k = 1; k <= m.N(); ++k) e.emplace_back(pts[k - 1], m.get(i, j, g, k));
  return e;
}

void check_pair(const DualIndexControls& m, int i, int j) {
  if (i < 0 || j < 0 || i >= m.dim() || j >= m.dim() || i == j) {
    throw InputError("dual kernel: need distinct component indices in range");
  }
}

}  // namespace

KernelCoeffsND dual_index_coeffs(const DualIndexControls& m, int i, int j) {
  check_pair(m, i, j);
  require(validate(m), "invalid dual-index controls");
  const auto& fam = m.family();
  std::map<std::pair<LatticePoint, LatticePoint>, double> acc;
  for (std::size_t g = 0; g < fam.size(); ++g) {
    const auto e = dual_weights(m, i, j, g);
    // Autocorrelation E(X) = sum over a, b with x_a - x_b = X of e_a e_b.
    std::map<LatticePoint, double> E;
    for (const auto& [xa, ea] : e)
      for (const auto& [xb, eb] : e) E[add(xa, xb, -1)] += ea * eb;
    for (const auto& [D, u] : E)
      for (const auto& [Dp, v] : E) acc[{D, Dp}] += 0.5 * u * v;
  }
  KernelCoeffsND res;
  res.variant = KernelCoeffsND::Variant::Dual;
  res.dim = m.dim();
  res.i = i;
  res.j = j;
  for (auto& [key, v] : acc) {
    if (v != 0.0) res.table.emplace(key, std::vector<double>{v});
  }
  return res;
}

// ---- brute-force oracle -----------------------------------------------------------------

namespace {

class Torus {
 public:
  Torus(int dim, int side) : dim_(dim), side_(side) {
    size_ = 1;
    for (int t = 0; t < dim; ++t) size_ *= side;
  }
  int size() const { return size_; }
  int index(const LatticePoint& x) const {
    int idx = 0;
    for (int t = dim_ - 1; t >= 0; --t) idx = idx * side_ + ((x[t] % side_) + side_) % side_;
    return idx;
  }
  LatticePoint coords(int idx) const {
    LatticePoint x(dim_);
    for (int t = 0; t < dim_; ++t) {
      x[t] = idx % side_;
      idx /= side_;
    }
    return x;
  }
  // Representative of (b - a) with every coordinate in (-side/2, side/2].
  LatticePoint offset(int a, int b) const {
    LatticePoint xa = coords(a), xb = coords(b), r(dim_);
    for (int t = 0; t < dim_; ++t) {
      int v = ((xb[t] - xa[t]) % side_ + side_) % side_;
      if (v > side_ / 2) v -= side_;
      r[t] = v;
    }
    return r;
  }

 private:
  int dim_, side_, size_;
};

// Linear form over alpha, keyed by (site, component).
using Form = std::map<std::pair<int, int>, double>;
// Field: coefficient of d/d alpha_{site, component} as a linear form.
using Field = std::map<std::pair<int, int>, Form>;

using RawTable = std::map<std::pair<LatticePoint, LatticePoint>, std::vector<double>>;

// Accumulates 1/2 f(0, c1) f(m, c2) into the (D, D') normal form with the monomial
// [alpha_0]_a [alpha_D]_b stored at entry a * dim + b, D' = 0 - m.
void accumulate(const Torus& T, int dim, const Field& F, bool dot_only, RawTable& raw) {
  for (const auto& [key1, f1] : F) {
    if (key1.first != 0) continue;
    for (const auto& [key2, f2] : F) {
      if (dot_only && key2.second != key1.second) continue;
      const LatticePoint Dp = T.offset(key2.first, 0);
      for (const auto& [u, cu] : f1) {
        for (const auto& [w, cw] : f2) {
          const LatticePoint D = T.offset(u.first, w.first);
          auto& cell = raw.try_emplace({D, Dp}, dim * dim, 0.0).first->second;
          cell[u.second * dim + w.second] += 0.5 * cu * cw;
        }
      }
    }
  }
}

void check_side(int N, int side) {
  if (side < 8 * N + 1) {
    throw InputError("oracle: torus side " + std::to_string(side) + " is below 8N+1 = " +
                     std::to_string(8 * N + 1));
  }
}

}  // namespace

KernelCoeffsND nd_coeffs_oracle(const SimpleIndexControls& m, int side) {
  require(validate(m), "invalid simple-index controls");
  const int d = m.dim(), N = m.N();
  check_side(N, side);
  const auto& fam = m.family();
  const Torus T(d, side);
  RawTable raw;
  for (int n = 0; n < T.size(); ++n) {
    const LatticePoint xn = T.coords(n);
    bool touches = n == 0;
    for (std::size_t g = 0; g < fam.size() && !touches; ++g)
      for (const auto& p : fam.path(g).points) touches = touches || T.index(add(xn, p, -1)) == 0;
    if (!touches) continue;
    // lambda_n = sum_gamma sum_k sum_c [M(k)]_c ((a_{n,c} - a_{n+g_k,c}) d_{n-g_k,c} + a_{n+g_k,c} d_{n,c})
    Field F;
    for (std::size_t g = 0; g < fam.size(); ++g) {
      const auto& pts = fam.path(g).points;
      for (int k = 1; k <= N; ++k) {
        const double* v = m.get(g, k);
        const int fwd = T.index(add(xn, pts[k - 1]));
        const int back = T.index(add(xn, pts[k - 1], -1));
        for (int c = 0; c < d; ++c) {
          if (v[c] == 0.0) continue;
          Form& fb = F[{back, c}];
          fb[{n, c}] += v[c];
          fb[{fwd, c}] -= v[c];
          F[{n, c}][{fwd, c}] += v[c];
        }
      }
    }
    accumulate(T, d, F, false, raw);
  }
  KernelCoeffsND res;
  res.variant = KernelCoeffsND::Variant::Simple;
  res.dim = d;
  for (auto& [key, v] : raw) {
    if (!all_zero(v)) res.table.emplace(key, std::move(v));
  }
  return res;
}

KernelCoeffsND nd_coeffs_oracle(const DualIndexControls& m, int i, int j, int side) {
  check_pair(m, i, j);
  require(validate(m), "invalid dual-index controls");
  const int d = m.dim(), N = m.N();
  check_side(N, side);
  const auto& fam = m.family();
  const Torus T(d, side);
  RawTable raw;
  for (int n = 0; n < T.size(); ++n) {
    const LatticePoint xn = T.coords(n);
    for (std::size_t g = 0; g < fam.size(); ++g) {
      const auto e = dual_weights(m, i, j, g);
      bool touches = false;
      for (const auto& [x, w] : e) touches = touches || T.index(add(xn, x)) == 0;
      if (!touches) continue;
      // lambda = A_j sum_s e_s d_{s,i} - A_i sum_s e_s d_{s,j}, A_c = sum_s e_s a_{s,c}
      Field F;
      for (const auto& [xs, es] : e) {
        const int s = T.index(add(xn, xs));
        for (const auto& [xt, et] : e) {
          const int t = T.index(add(xn, xt));
          F[{s, i}][{t, j}] += es * et;
          F[{s, j}][{t, i}] -= es * et;
        }
      }
      accumulate(T, d, F, true, raw);
    }
  }
  KernelCoeffsND res;
  res.variant = KernelCoeffsND::Variant::Dual;
  res.dim = d;
  res.i = i;
  res.j = j;
  for (auto& [key, v] : raw) {
    const double a = v[i * d + i], b = v[j * d + j];
    for (int t = 0; t < d * d; ++t) {
      if (t != i * d + i && t != j * d + j && v[t] != 0.0) {
        throw std::logic_error("dual oracle: unexpected mixed-component monomial");
      }
    }
    if (std::abs(a - b) > 1e-12 * (1.0 + std::abs(a))) {
      throw std::logic_error("dual oracle: components i and j disagree");
    }
    if (a != 0.0) res.table.emplace(key, std::vector<double>{a});
  }
  return res;
}

double max_abs_difference(const KernelCoeffsND& a, const KernelCoeffsND& b) {
  if (a.variant != b.variant || a.dim != b.dim) {
    throw InputError("coefficient tables have different shapes");
  }
  double mx = 0.0;
  auto scan = [&mx](const KernelCoeffsND& x, const KernelCoeffsND& y) {
    for (const auto& [key, v] : x.table) {
      const auto* w = y.find(key.first, key.second);
      for (std::size_t t = 0; t < v.size(); ++t) mx = std::max(mx, std::abs(v[t] - (w ? (*w)[t] : 0.0)));
    }
  };
  scan(a, b);
  scan(b, a);
  return mx;
}

// ---- conservation --------------------------------------------------------------------

namespace {

class Window {
 public:
  Window(int dim, int side) : dim_(dim), side_(side), center_(dim, side / 2) {
    size_ = 1;
    for (int t = 0; t < dim; ++t) size_ *= side;
  }
  int size() const { return size_; }
  int at(const LatticePoint& rel) const {
    int idx = 0;
    for (int t = dim_ - 1; t >= 0; --t) {
      const int x = center_[t] + rel[t];
      if (x < 0 || x >= side_) throw std::logic_error("window: point outside the box");
      idx = idx * side_ + x;
    }
    return idx;
  }

 private:
  int dim_, side_, size_;
  LatticePoint center_;
};

void check_window(int N, int window) {
  if (window < 4 * N + 1) throw InputError("conservation check: window side must be at least 4N+1");
}

}  // namespace

double conservation_check_simple(const SimpleIndexControls& m, int window, std::uint64_t seed,
                                 int draws) {
  const int d = m.dim(), N = m.N();
  check_window(N, window);
  const auto& fam = m.family();
  const Window W(d, window);
  const LatticePoint origin(d, 0);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<double> alpha(static_cast<std::size_t>(W.size()) * d);
  std::vector<double> coef(alpha.size());
  const int n = W.at(origin);
  double worst = 0.0;
  for (int draw = 0; draw < draws; ++draw) {
    for (double& a : alpha) a = U(rng);
    for (std::size_t g = 0; g < fam.size(); ++g) {
      if (!fam.canonical(g)) continue;
      std::fill(coef.begin(), coef.end(), 0.0);
      for (std::size_t h : {g, fam.partner(g)}) {
        const auto& pts = fam.path(h).points;
        for (int k = 1; k <= N; ++k) {
          const double* v = m.get(h, k);
          const int fwd = W.at(pts[k - 1]);
          const int back = W.at(scaled(pts[k - 1], -1));
          for (int c = 0; c < d; ++c) {
            coef[back * d + c] += v[c] * (alpha[n * d + c] - alpha[fwd * d + c]);
            coef[n * d + c] += v[c] * alpha[fwd * d + c];
          }
        }
      }
      double energy = 0.0;
      for (int c = 0; c < d; ++c) {
        double momentum = 0.0;
        for (int s = 0; s < W.size(); ++s) {
          momentum += coef[s * d + c];
          energy += 2.0 * alpha[s * d + c] * coef[s * d + c];
        }
        worst = std::max(worst, std::abs(momentum));
      }
      worst = std::max(worst, std::abs(energy));
    }
  }
  return worst;
}

double conservation_check_dual(const DualIndexControls& m, int window, std::uint64_t seed, int draws,
                               double anchor_bias) {
  const int d = m.dim(), N = m.N();
  check_window(N, window);
  const auto& fam = m.family();
  const Window W(d, window);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::vector<double> alpha(static_cast<std::size_t>(W.size()) * d);
  double worst = 0.0;
  for (int draw = 0; draw < draws; ++draw) {
    for (double& a : alpha) a = U(rng);
    for (auto [i, j] : m.pairs()) {
      for (std::size_t g = 0; g < fam.size(); ++g) {
        const auto e = dual_weights(m, i, j, g, anchor_bias);
        std::vector<int> sites;
        for (const auto& [x, w] : e) sites.push_back(W.at(x));
        double Ai = 0.0, Aj = 0.0;
        for (std::size_t s = 0; s < e.size(); ++s) {
          Ai += e[s].second * alpha[sites[s] * d + i];
          Aj += e[s].second * alpha[sites[s] * d + j];
        }
        // d/d alpha_{s,i} carries A_j e_s, d/d alpha_{s,j} carries -A_i e_s.
        double mom_i = 0.0, mom_j = 0.0;
        for (const auto& [x, w] : e) {
          mom_i += Aj * w;
          mom_j -= Ai * w;
        }
        worst = std::max({worst, std::abs(mom_i), std::abs(mom_j)});
        for (int order = 0; order < 2; ++order) {
          double ti = 0.0, tj = 0.0;
          for (std::size_t r = 0; r < e.size(); ++r) {
            const std::size_t s = order == 0 ? r : e.size() - 1 - r;
            ti += 2.0 * alpha[sites[s] * d + i] * Aj * e[s].second;
            tj += 2.0 * alpha[sites[s] * d + j] * Ai * e[s].second;
          }
          worst = std::max(worst, std::abs(ti - tj));
        }
      }
    }
  }
  return worst;
}

// ---- evaluation and export ----------------------------------------------------------------

std::vector<double> eval_kernel_nd(const KernelCoeffsND& c, const std::vector<double>& k,
                                   const std::vector<double>& k2) {
  if (static_cast<int>(k.size()) != c.dim || static_cast<int>(k2.size()) != c.dim) {
    throw InputError("eval_kernel_nd: wavevector dimension mismatch");
  }
  const double tau = 2.0 * std::numbers::pi;
  auto dot = [](const LatticePoint& D, const std::vector<double>& x) {
    double s = 0.0;
    for (std::size_t t = 0; t < D.size(); ++t) s += D[t] * x[t];
    return s;
  };
  const bool simple = c.variant == KernelCoeffsND::Variant::Simple;
  std::vector<double> out(simple ? c.dim * c.dim : 1, 0.0);
  for (const auto& [key, v] : c.table) {
    const double w = simple ? std::cos(tau * (dot(key.first, k) + dot(key.second, k2)))
                            : std::cos(tau * dot(key.first, k)) * std::cos(tau * dot(key.second, k2));
    for (std::size_t t = 0; t < v.size(); ++t) out[t] += v[t] * w;
  }
  return out;
}

std::string to_json_lines(const KernelCoeffsND& c) {
  std::string out;
  const bool simple = c.variant == KernelCoeffsND::Variant::Simple;
  for (const auto& [key, v] : c.table) {
    nlohmann::json j;
    j["variant"] = simple ? "simple" : "dual";
    if (!simple) {
      j["i"] = c.i;
      j["j"] = c.j;
    }
    j["D"] = key.first;
    j["Dprime"] = key.second;
    if (simple) {
      nlohmann::json mat = nlohmann::json::array();
      for (int a = 0; a < c.dim; ++a) {
        mat.push_back(std::vector<double>(v.begin() + a * c.dim, v.begin() + (a + 1) * c.dim));
      }
      j["matrix"] = mat;
    } else {
      j["value"] = v[0];
    }
    out += j.dump();
    out += '\n';
  }
  return out;
}

}  // namespace kinlim
