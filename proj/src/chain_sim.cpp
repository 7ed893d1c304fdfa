#include "kinlim/chain_sim.hpp"

#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <complex>
#include <mutex>
#include <numbers>
#include <thread>

#include "kinlim/errors.hpp"
#include "kinlim/simd.hpp"

namespace kinlim {

namespace {

int wrap(int i, int L) { return ((i % L) + L) % L; }

// FFTW planning is not thread-safe.
std::mutex& plan_mutex() {
  static std::mutex m;
  return m;
}

double uniform53(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

double ring_k(int j, int L) {
  const int jj = 2 * j >= L ? j - L : j;
  return static_cast<double>(jj) / L;
}

}  // namespace

void fill_normals(std::mt19937_64& rng, double* out, std::size_t n, double scale) {
  std::size_t i = 0;
  while (i < n) {
    double u, v, s;
    do {
      u = 2.0 * uniform53(rng) - 1.0;
      v = 2.0 * uniform53(rng) - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double f = scale * std::sqrt(-2.0 * std::log(s) / s);
    out[i++] = u * f;
    if (i < n) out[i++] = v * f;
  }
}

std::vector<double> apply_vector_field_weights(const std::vector<double>& w, const std::vector<double>& alpha,
                                               int n) {
  if (w.size() % 2 == 0) throw InputError("vector field: weight count must be odd");
  const int N = static_cast<int>(w.size()) / 2;
  const int L = static_cast<int>(alpha.size());
  if (L < 1) throw InputError("vector field: empty ring");
  std::vector<double> out(L, 0.0);
  // lambda_n = sum_d M(d) ((a_n - a_{n+d}) d/da_{n-d} + a_{n+d} d/da_n)
  for (int d = -N; d <= N; ++d) {
    const double m = w[d + N];
    if (d == 0 || m == 0.0) continue;
    const double an = alpha[wrap(n, L)], ad = alpha[wrap(n + d, L)];
    out[wrap(n - d, L)] += m * (an - ad);
    out[wrap(n, L)] += m * ad;
  }
  return out;
}

std::vector<double> apply_vector_field(const ControlParams1D& p, const std::vector<double>& alpha, int n) {
  std::vector<double> w(2 * p.N + 1, 0.0);
  for (int d = -p.N; d <= p.N; ++d) w[d + p.N] = p(d);
  return apply_vector_field_weights(w, alpha, n);
}

double total_momentum(const ChainState& s) {
  double m = 0.0;
  for (double a : s.alpha) m += a;
  return m;
}

double total_energy(const ChainState& s, const Coupling& c) {
  const int L = s.L, R = c.radius();
  const auto& taps = c.taps();
  double kin = 0.0, pot = 0.0;
  for (int n = 0; n < L; ++n) {
    kin += s.alpha[n] * s.alpha[n];
    double conv = taps[0] * s.beta[n];
    for (int r = 1; r <= R; ++r) conv += taps[r] * (s.beta[wrap(n + r, L)] + s.beta[wrap(n - r, L)]);
    pot += s.beta[n] * conv;
  }
  return 0.5 * (kin + pot);
}

ChainStepper::ChainStepper(const ControlParams1D& p, const KernelCoeffs1D& c, const Coupling& coupling, int L)
    : L_(L), N_(p.N), R_(coupling.radius()) {
  if (c.N() != p.N) throw InputError("stepper: kernel table and controls disagree on N");
  if (L < 8 * p.N + 1) throw InputError("stepper: ring size must be at least 8N+1");
  if (R_ >= L) throw InputError("stepper: coupling radius exceeds the ring");
  ghost_ = std::max(R_, 2 * N_);
  sigma_taps_.assign(2 * R_ + 1, 0.0);
  for (int r = -R_; r <= R_; ++r) sigma_taps_[r + R_] = coupling.taps()[std::abs(r)];
  k0_.assign(4 * N_ + 1, 0.0);
  for (int d = -2 * N_; d <= 2 * N_; ++d) k0_[d + 2 * N_] = c(d, 0);
  w_.assign(2 * N_ + 1, 0.0);
  for (int d = -N_; d <= N_; ++d) w_[d + N_] = p(d);
  pad_beta_.assign(L + 2 * ghost_, 0.0);
  pad_alpha_.assign(L + 2 * ghost_, 0.0);
  pad_xi_.assign(L + 2 * ghost_, 0.0);
  force_.assign(L, 0.0);
  drift_.assign(L, 0.0);
  noise_.assign(L, 0.0);
}

void ChainStepper::fill_ghosts(std::vector<double>& buf) const {
  double* core = buf.data() + ghost_;
  for (int g = 1; g <= ghost_; ++g) {
    core[-g] = core[wrap(-g, L_)];
    core[L_ - 1 + g] = core[wrap(L_ - 1 + g, L_)];
  }
}

void ChainStepper::step(ChainState& s, double dt, std::mt19937_64& rng, StepParts parts) {
  if (s.L != L_) throw InputError("stepper: state has a different ring size");
  const auto& K = simd::kernels();
  const auto n = static_cast<std::size_t>(L_);
  double* b = pad_beta_.data() + ghost_;
  double* a = pad_alpha_.data() + ghost_;
  double* xi = pad_xi_.data() + ghost_;

  std::copy(s.alpha.begin(), s.alpha.end(), a);
  fill_ghosts(pad_alpha_);
  if (parts.hamiltonian) {
    for (int i = 0; i < L_; ++i) b[i] = s.beta[i] + dt * a[i];
    fill_ghosts(pad_beta_);
    K.stencil(b, n, sigma_taps_.data(), R_, force_.data());
  } else {
    std::copy(s.beta.begin(), s.beta.end(), b);
    std::fill(force_.begin(), force_.end(), 0.0);
  }
  if (s.epsilon != drift_eps_ || drift_taps_.empty()) {
    drift_eps_ = s.epsilon;
    drift_taps_.resize(k0_.size());
    for (std::size_t t = 0; t < k0_.size(); ++t) drift_taps_[t] = -2.0 * s.epsilon * k0_[t];
  }
  if (parts.drift) {
    K.stencil(a, n, drift_taps_.data(), 2 * N_, drift_.data());
  } else {
    std::fill(drift_.begin(), drift_.end(), 0.0);
  }
  if (parts.noise && s.epsilon > 0.0) {
    fill_normals(rng, xi, n, std::sqrt(dt));
    fill_ghosts(pad_xi_);
    K.noise(a, xi, n, w_.data(), N_, std::sqrt(2.0 * s.epsilon), noise_.data());
  } else {
    std::fill(noise_.begin(), noise_.end(), 0.0);
  }
  for (int i = 0; i < L_; ++i) {
    s.beta[i] = b[i];
    s.alpha[i] = a[i] + (drift_[i] - force_[i]) * dt + noise_[i];
  }
  s.t += dt;
}

ChainState sde_step(const ChainState& s, const ControlParams1D& p, const KernelCoeffs1D& c,
                    const Coupling& coupling, double dt, std::mt19937_64& rng) {
  if (!(dt > 0.0)) throw InputError("sde_step: dt must be positive");
  ChainStepper stepper(p, c, coupling, s.L);
  ChainState out = s;
  stepper.step(out, dt, rng);
  return out;
}

// ---- initial data and spectra --------------------------------------------------------

ChainState sample_initial(const Profile& profile, double eps, int L, std::uint64_t seed,
                          const Coupling& coupling, std::vector<std::string>* warnings) {
  if (!(eps > 0.0)) throw InputError("sample_initial: epsilon must be positive");
  if (L < 2) throw InputError("sample_initial: ring too small");
  const Dispersion disp(coupling);
  std::mt19937_64 rng(seed);
  std::vector<std::complex<double>> phi(L);
  bool zero_mode = false;
  for (int j = 0; j < L; ++j) {
    const double k = ring_k(j, L);
    const double prof = profile ? profile(k) : 0.0;
    if (!(prof >= 0.0) || !std::isfinite(prof)) throw InputError("sample_initial: profile must be finite and >= 0");
    const double theta = 2.0 * std::numbers::pi * uniform53(rng);
    phi[j] = std::polar(std::sqrt(prof / eps), theta);
    if (j == 0 && prof > 0.0 && !coupling.pinned()) zero_mode = true;
  }
  if (zero_mode && warnings) {
    warnings->push_back("unpinned coupling with a profile that does not vanish at k = 0; the k = 0 mode is dropped");
  }
  const int H = L / 2 + 1;
  std::vector<std::complex<double>> bh(H), ah(H);
  const double r2 = std::numbers::sqrt2;
  for (int j = 0; j < H; ++j) {
    const auto p = phi[j];
    const auto q = std::conj(phi[wrap(-j, L)]);
    const double w = disp.omega(ring_k(j, L));
    bh[j] = w > 0.0 ? (p + q) / (r2 * w) : std::complex<double>(0.0);
    ah[j] = std::complex<double>(0.0, -1.0) * (p - q) / r2;
    if (j == 0 && w == 0.0) ah[j] = 0.0;
  }
  ChainState s;
  s.L = L;
  s.epsilon = eps;
  s.seed = seed;
  s.beta.assign(L, 0.0);
  s.alpha.assign(L, 0.0);
  {
    std::vector<double> tmp(L);
    std::lock_guard<std::mutex> lock(plan_mutex());
    fftw_plan pb = fftw_plan_dft_c2r_1d(L, reinterpret_cast<fftw_complex*>(bh.data()), tmp.data(),
                                         FFTW_ESTIMATE | FFTW_UNALIGNED);
    fftw_execute(pb);
    for (int n = 0; n < L; ++n) s.beta[n] = tmp[n] / L;
    fftw_execute_dft_c2r(pb, reinterpret_cast<fftw_complex*>(ah.data()), tmp.data());
    for (int n = 0; n < L; ++n) s.alpha[n] = tmp[n] / L;
    fftw_destroy_plan(pb);
  }
  return s;
}

SpectrumAccumulator::SpectrumAccumulator(int L, const Coupling& coupling) : L_(L) {
  if (L < 2) throw InputError("spectrum: ring too small");
  const Dispersion disp(coupling);
  omega_.resize(L);
  for (int j = 0; j < L; ++j) omega_[j] = disp.omega(ring_k(j, L));
  in_ = fftw_alloc_real(L);
  out_ = fftw_alloc_complex(L / 2 + 1);
  std::lock_guard<std::mutex> lock(plan_mutex());
  plan_ = fftw_plan_dft_r2c_1d(L, in_, static_cast<fftw_complex*>(out_), FFTW_ESTIMATE);
}

SpectrumAccumulator::~SpectrumAccumulator() {
  std::lock_guard<std::mutex> lock(plan_mutex());
  fftw_destroy_plan(static_cast<fftw_plan>(plan_));
  fftw_free(in_);
  fftw_free(out_);
}

void SpectrumAccumulator::add(const ChainState& s, std::vector<double>& sums) {
  if (s.L != L_) throw InputError("spectrum: state has a different ring size");
  const int H = L_ / 2 + 1;
  auto* out = reinterpret_cast<std::complex<double>*>(out_);
  std::vector<std::complex<double>> bh(H), ah(H);
  std::copy(s.beta.begin(), s.beta.end(), in_);
  fftw_execute(static_cast<fftw_plan>(plan_));
  std::copy(out, out + H, bh.begin());
  std::copy(s.alpha.begin(), s.alpha.end(), in_);
  fftw_execute(static_cast<fftw_plan>(plan_));
  std::copy(out, out + H, ah.begin());
  const std::complex<double> I(0.0, 1.0);
  for (int j = 0; j < L_; ++j) {
    const bool upper = j >= H;
    const auto b = upper ? std::conj(bh[L_ - j]) : bh[j];
    const auto a = upper ? std::conj(ah[L_ - j]) : ah[j];
    sums[j] += std::norm((omega_[j] * b + I * a) / std::numbers::sqrt2);
  }
}

double WignerEstimate::mass() const {
  double s = 0.0;
  for (double v : value) s += v;
  return L > 0 ? s / L : 0.0;
}

WignerEstimate finish_spectrum(const std::vector<double>& sums, int count, double eps, int L,
                               const Coupling& coupling) {
  if (count < 1) throw InputError("spectrum: empty ensemble");
  WignerEstimate w;
  w.L = L;
  // Ascending k: j = L - L/2 .. L-1 (negative), then 0 .. (L-1)/2.
  for (int t = 0; t < L; ++t) {
    const int j = wrap(t - L / 2, L);
    if (j == 0 && !coupling.pinned()) continue;
    w.k.push_back(ring_k(j, L));
    w.value.push_back(0.5 * eps * sums[j] / count);
  }
  return w;
}

WignerEstimate energy_spectrum(const std::vector<ChainState>& ensemble, const Coupling& coupling) {
  if (ensemble.empty()) throw InputError("spectrum: empty ensemble");
  const int L = ensemble.front().L;
  SpectrumAccumulator acc(L, coupling);
  std::vector<double> sums(L, 0.0);
  for (const auto& s : ensemble) acc.add(s, sums);
  return finish_spectrum(sums, static_cast<int>(ensemble.size()), ensemble.front().epsilon, L, coupling);
}

// ---- experiments -------------------------------------------------------------------------

double default_dt(const ControlParams1D& p, const KernelCoeffs1D& c, const Coupling& coupling, double eps) {
  const Dispersion disp(coupling);
  double wmax = 0.0;
  for (int j = 0; j <= 1024; ++j) wmax = std::max(wmax, disp.omega(-0.5 + j / 1024.0));
  double kmax = 0.0;
  for (double v : c.data()) kmax = std::max(kmax, std::abs(v));
  double dt = wmax > 0.0 ? 0.05 / wmax : 0.05;
  if (eps > 0.0 && kmax > 0.0) dt = std::min(dt, 0.1 / (eps * kmax * p.N));
  return dt;
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  if (cfg.L < 8 * cfg.controls.N + 1) throw InputError("L must be at least 8N+1");
  if (!(cfg.epsilon > 0.0)) throw InputError("epsilon must be positive");
  if (!(cfg.T >= 0.0)) throw InputError("T must be nonnegative");
  if (cfg.ensemble < 1) throw InputError("ensemble must be at least 1");
  if (cfg.dt < 0.0) throw InputError("dt must be positive (or 0 for the default)");
  const KernelCoeffs1D kc = kernel_coeffs(cfg.controls);

  std::vector<double> times = cfg.snapshot_times;
  times.push_back(cfg.T);
  times.push_back(0.0);
  for (double t : times) {
    if (!(t >= 0.0) || t > cfg.T) throw InputError("snapshot times must lie in [0, T]");
  }
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  ExperimentResult res;
  res.times = times;
  res.dt = cfg.dt > 0.0 ? cfg.dt : default_dt(cfg.controls, kc, cfg.coupling, cfg.epsilon);
  // Microscopic step counts per snapshot interval, with the step shrunk to land exactly.
  std::vector<long long> steps(times.size(), 0);
  std::vector<double> dts(times.size(), 0.0);
  for (std::size_t s = 1; s < times.size(); ++s) {
    const double span = (times[s] - times[s - 1]) / cfg.epsilon;
    steps[s] = static_cast<long long>(std::ceil(span / res.dt - 1e-9));
    dts[s] = steps[s] > 0 ? span / steps[s] : 0.0;
  }

  const int L = cfg.L;
  const std::size_t S = times.size();
  const int M = cfg.ensemble;
  std::vector<std::vector<double>> sums(static_cast<std::size_t>(M) * S);
  std::vector<double> energy(static_cast<std::size_t>(M) * S), momentum(energy.size());
  std::vector<std::vector<std::string>> warn(M);

  auto trajectory = [&](int m) {
    std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed), static_cast<std::uint32_t>(cfg.seed >> 32),
                      static_cast<std::uint32_t>(m), 0x6b696e6cu};
    std::mt19937_64 rng(seq);
    ChainState st = sample_initial(cfg.profile, cfg.epsilon, L, rng(), cfg.coupling, &warn[m]);
    ChainStepper stepper(cfg.controls, kc, cfg.coupling, L);
    SpectrumAccumulator acc(L, cfg.coupling);
    for (std::size_t s = 0; s < S; ++s) {
      for (long long q = 0; q < steps[s]; ++q) stepper.step(st, dts[s], rng);
      auto& slot = sums[m * S + s];
      slot.assign(L, 0.0);
      acc.add(st, slot);
      energy[m * S + s] = total_energy(st, cfg.coupling);
      momentum[m * S + s] = total_momentum(st);
    }
  };

  int threads = cfg.threads > 0 ? cfg.threads : static_cast<int>(std::thread::hardware_concurrency());
  threads = std::clamp(threads, 1, M);
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (int m = next++; m < M; m = next++) {
      try {
        trajectory(m);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);

  // Reduction in trajectory order keeps the sums independent of scheduling.
  for (std::size_t s = 0; s < S; ++s) {
    std::vector<double> total(L, 0.0);
    double e = 0.0, p = 0.0;
    for (int m = 0; m < M; ++m) {
      const auto& slot = sums[m * S + s];
      for (int j = 0; j < L; ++j) total[j] += slot[j];
      e += energy[m * S + s];
      p += momentum[m * S + s];
    }
    res.spectra.push_back(finish_spectrum(total, M, cfg.epsilon, L, cfg.coupling));
    res.trace.push_back({times[s], e / M, p / M});
  }
  if (!warn.empty() && !warn[0].empty()) res.warnings = warn[0];
  return res;
}

}  // namespace kinlim
