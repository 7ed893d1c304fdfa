#include "kinlim/kinetic.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "kinlim/errors.hpp"
#include "kinlim/simd.hpp"

namespace kinlim {

SpectralDensity::SpectralDensity(TorusGrid g, std::vector<double> v, double time)
    : grid(std::move(g)), values(std::move(v)), t(time) {
  if (static_cast<int>(values.size()) != grid.size()) throw InputError("density: size does not match grid");
}

SpectralDensity SpectralDensity::from_profile(const TorusGrid& g, const Profile& f) {
  std::vector<double> v(g.size());
  for (int j = 0; j < g.size(); ++j) v[j] = f(g.node(j));
  return SpectralDensity(g, std::move(v));
}

double SpectralDensity::mass() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * grid.spacing();
}

double positivity_dt(const KernelCoeffs1D& c, const TorusGrid& grid) {
  const double loss = CollisionOperator(c, grid).max_loss_rate();
  return loss > 0.0 ? 1.0 / (4.0 * loss) : INFINITY;
}

namespace {

class Rk4 {
 public:
  explicit Rk4(int n) : k1(n), k2(n), k3(n), k4(n), tmp(n) {}
  void step(const CollisionOperator& op, double* y, double h) {
    const int n = static_cast<int>(k1.size());
    op.apply(y, k1.data());
    for (int i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k1[i];
    op.apply(tmp.data(), k2.data());
    for (int i = 0; i < n; ++i) tmp[i] = y[i] + 0.5 * h * k2[i];
    op.apply(tmp.data(), k3.data());
    for (int i = 0; i < n; ++i) tmp[i] = y[i] + h * k3[i];
    op.apply(tmp.data(), k4.data());
    for (int i = 0; i < n; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  }

 private:
  std::vector<double> k1, k2, k3, k4, tmp;
};

long long step_count(double span, double dt) {
  return span > 0.0 ? static_cast<long long>(std::ceil(span / dt - 1e-9)) : 0;
}

}  // namespace

std::vector<SpectralDensity> evolve_homogeneous_series(const SpectralDensity& nu0, const KernelCoeffs1D& c,
                                                       const std::vector<double>& times, double dt) {
  if (!(dt > 0.0)) throw InputError("evolve_homogeneous: dt must be positive");
  const CollisionOperator op(c, nu0.grid);
  Rk4 rk(nu0.grid.size());
  std::vector<SpectralDensity> out;
  SpectralDensity cur = nu0;
  for (double T : times) {
    if (T < cur.t - 1e-12) throw InputError("evolve_homogeneous: times must be ascending");
    const long long n = step_count(T - cur.t, dt);
    const double h = n > 0 ? (T - cur.t) / n : 0.0;
    for (long long s = 0; s < n; ++s) rk.step(op, cur.values.data(), h);
    cur.t = T;
    out.push_back(cur);
  }
  return out;
}

SpectralDensity evolve_homogeneous(const SpectralDensity& nu0, const KernelCoeffs1D& c, double T, double dt) {
  return evolve_homogeneous_series(nu0, c, {T}, dt).front();
}

PhaseSpaceDensity::PhaseSpaceDensity(int nx, double len, TorusGrid g)
    : X(nx), length(len), grid(std::move(g)), values(static_cast<std::size_t>(nx) * grid.size(), 0.0) {
  if (nx < 4) throw InputError("phase-space density: need at least 4 x-cells");
  if (!(len > 0.0)) throw InputError("phase-space density: length must be positive");
}

double PhaseSpaceDensity::mass() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * dx() * grid.spacing();
}

void advect_fiber(const double* in, double* out, int n, double shift, Interp interp) {
  // out(i) = in(i - shift); split -shift = o + t with integer o and t in [0, 1).
  const double back = -shift;
  const double fl = std::floor(back);
  double t = back - fl;
  long long o = static_cast<long long>(fl) % n;
  if (o < 0) o += n;
  double taps[5] = {0, 0, 0, 0, 0};  // offsets -2..2 around i + o
  if (interp == Interp::Linear) {
    taps[2] = 1.0 - t;
    taps[3] = t;
  } else {
    taps[1] = -t * (t - 1.0) * (t - 2.0) / 6.0;
    taps[2] = (t + 1.0) * (t - 1.0) * (t - 2.0) / 2.0;
    taps[3] = -(t + 1.0) * t * (t - 2.0) / 2.0;
    taps[4] = (t + 1.0) * t * (t - 1.0) / 6.0;
  }
  const int R = 2;
  std::vector<double> buf(n + 2 * R);
  for (int i = -R; i < n + R; ++i) buf[i + R] = in[((i + o) % n + n) % n];
  simd::kernels().stencil(buf.data() + R, static_cast<std::size_t>(n), taps, R, out);
}

PhaseSpaceDensity evolve_transport(const PhaseSpaceDensity& mu0, const KernelCoeffs1D& c, const Dispersion& disp,
                                   double T, double dt, Interp interp) {
  if (!(dt > 0.0)) throw InputError("evolve_transport: dt must be positive");
  if (!(T >= 0.0)) throw InputError("evolve_transport: T must be nonnegative");
  const int G = mu0.grid.size(), X = mu0.X;
  std::vector<double> speed(G);
  double vmax = 0.0;
  for (int j = 0; j < G; ++j) {
    speed[j] = disp.omega_prime(mu0.grid.node(j)) / (2.0 * std::numbers::pi);
    vmax = std::max(vmax, std::abs(speed[j]));
  }
  if (dt * vmax > mu0.dx() * (1.0 + 1e-12)) {
    throw InputError("evolve_transport: CFL violated (dt * max|omega'| / 2pi exceeds dx)");
  }
  const CollisionOperator op(c, mu0.grid);
  Rk4 rk(G);
  PhaseSpaceDensity mu = mu0;
  const long long n = step_count(T, dt);
  const double h = n > 0 ? T / n : 0.0;
  std::vector<double> fiber(X), moved(X);
  auto advect = [&](double tau) {
    for (int j = 0; j < G; ++j) {
      for (int i = 0; i < X; ++i) fiber[i] = mu.at(i, j);
      advect_fiber(fiber.data(), moved.data(), X, speed[j] * tau / mu.dx(), interp);
      for (int i = 0; i < X; ++i) mu.at(i, j) = moved[i];
    }
  };
  for (long long s = 0; s < n; ++s) {
    advect(0.5 * h);
    for (int i = 0; i < X; ++i) rk.step(op, mu.values.data() + static_cast<std::size_t>(i) * G, h);
    advect(0.5 * h);
  }
  mu.t = mu0.t + T;
  return mu;
}

std::vector<double> project_to_grid(const WignerEstimate& mc, const TorusGrid& grid) {
  const int M = static_cast<int>(mc.k.size());
  if (M < 2) throw InputError("project: estimate needs at least two modes");
  // Periodic extension: one point before and after the fundamental interval.
  std::vector<double> x, y;
  x.push_back(mc.k[M - 1] - 1.0);
  y.push_back(mc.value[M - 1]);
  for (int m = 0; m < M; ++m) {
    x.push_back(mc.k[m]);
    y.push_back(mc.value[m]);
  }
  x.push_back(mc.k[0] + 1.0);
  y.push_back(mc.value[0]);
  auto value = [&](double q) {
    auto it = std::upper_bound(x.begin(), x.end(), q);
    const std::size_t b = std::clamp<std::size_t>(it - x.begin(), 1, x.size() - 1);
    const double w = (q - x[b - 1]) / (x[b] - x[b - 1]);
    return (1.0 - w) * y[b - 1] + w * y[b];
  };
  std::vector<double> out(grid.size());
  const double h = grid.spacing();
  for (int j = 0; j < grid.size(); ++j) {
    const double a = grid.node(j) - 0.5 * h, b = grid.node(j) + 0.5 * h;
    std::vector<double> cuts{a};
    for (double q : x) {
      if (q > a && q < b) cuts.push_back(q);
    }
    cuts.push_back(b);
    double integral = 0.0;
    for (std::size_t s = 1; s < cuts.size(); ++s) {
      integral += 0.5 * (value(cuts[s - 1]) + value(cuts[s])) * (cuts[s] - cuts[s - 1]);
    }
    out[j] = integral / h;
  }
  return out;
}

std::vector<double> compare_sampled(const std::vector<double>& mc_times, const std::vector<std::vector<double>>& mc,
                                    const std::vector<double>& kin_times, const std::vector<std::vector<double>>& kin) {
  if (mc_times.size() != mc.size() || kin_times.size() != kin.size()) {
    throw InputError("compare: series and time stamps have different lengths");
  }
  std::vector<double> out;
  for (std::size_t s = 0; s < mc_times.size(); ++s) {
    std::size_t q = 0;
    while (q < kin_times.size() && std::abs(kin_times[q] - mc_times[s]) > 1e-9) ++q;
    if (q == kin_times.size()) throw InputError("compare: no kinetic snapshot at t = " + std::to_string(mc_times[s]));
    if (mc[s].size() != kin[q].size()) throw InputError("compare: grid sizes differ");
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < mc[s].size(); ++j) {
      num += std::abs(mc[s][j] - kin[q][j]);
      den += std::abs(kin[q][j]);
    }
    out.push_back(den > 0.0 ? num / den : num);
  }
  return out;
}

std::vector<double> compare_spectra(const std::vector<double>& mc_times, const std::vector<WignerEstimate>& mc,
                                    const std::vector<SpectralDensity>& kin) {
  if (kin.empty()) throw InputError("compare: empty kinetic series");
  std::vector<std::vector<double>> a, b;
  std::vector<double> kt;
  for (const auto& w : mc) a.push_back(project_to_grid(w, kin.front().grid));
  for (const auto& k : kin) {
    if (k.grid.size() != kin.front().grid.size()) throw InputError("compare: kinetic grids differ");
    b.push_back(k.values);
    kt.push_back(k.t);
  }
  return compare_sampled(mc_times, a, kt, b);
}

}  // namespace kinlim
