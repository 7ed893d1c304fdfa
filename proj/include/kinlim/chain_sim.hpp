#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "kinlim/dispersion.hpp"
#include "kinlim/kernel1d.hpp"

namespace kinlim {

// Displacements beta and momenta alpha on a periodic ring of L sites.
struct ChainState {
  int L = 0;
  std::vector<double> beta, alpha;
  double t = 0.0;  // microscopic time
  double epsilon = 0.0;
  std::uint64_t seed = 0;
};

// Column of lambda_n applied to every alpha_m: out[m] = lambda_n(alpha_m) on the ring.
std::vector<double> apply_vector_field(const ControlParams1D& p, const std::vector<double>& alpha, int n);
// Same field built from arbitrary weights w[d + N], d = -N..N, with no oddness imposed.
std::vector<double> apply_vector_field_weights(const std::vector<double>& w, const std::vector<double>& alpha,
                                               int n);

double total_energy(const ChainState& s, const Coupling& c);
double total_momentum(const ChainState& s);

// Terms of the update that are switched on; all by default.
struct StepParts {
  bool hamiltonian = true;  // beta update and -sigma*beta force
  bool drift = true;        // -2 eps sum_d K(d,0) alpha_{.+d}
  bool noise = true;
};

// Symplectic Euler-Maruyama stepper with preallocated ghost-padded buffers.
// Not thread-safe; use one per trajectory.
class ChainStepper {
 public:
  ChainStepper(const ControlParams1D& p, const KernelCoeffs1D& c, const Coupling& coupling, int L);
  int L() const { return L_; }
  // beta += alpha dt, then alpha += (-sigma*beta - 2 eps sum_d K(d,0) alpha_{.+d}) dt + noise.
  void step(ChainState& s, double dt, std::mt19937_64& rng, StepParts parts = {});

 private:
  void fill_ghosts(std::vector<double>& buf) const;

  int L_, N_, R_, ghost_;
  std::vector<double> sigma_taps_;  // 2R+1, centered
  std::vector<double> k0_;          // K(d,0) for d = -2N..2N
  std::vector<double> w_;           // M(d) for d = -N..N
  std::vector<double> drift_taps_;  // -2 eps K(d,0)
  double drift_eps_ = 0.0;
  std::vector<double> pad_beta_, pad_alpha_, pad_xi_, force_, drift_, noise_;
};

ChainState sde_step(const ChainState& s, const ControlParams1D& p, const KernelCoeffs1D& c,
                    const Coupling& coupling, double dt, std::mt19937_64& rng);

using Profile = std::function<double(double)>;

// Random-phase initial state with |phi_hat(k_j)|^2 = profile(k_j) / eps. Warnings
// (e.g. an unpinned coupling with mass at k = 0) are appended when the sink is given.
ChainState sample_initial(const Profile& profile, double eps, int L, std::uint64_t seed,
                          const Coupling& coupling, std::vector<std::string>* warnings = nullptr);

// Ring wave field phi_hat_j = (omega beta_hat_j + i alpha_hat_j) / sqrt 2 for j = 0..L-1.
struct WignerEstimate {
  std::vector<double> k;      // ascending in [-1/2, 1/2); k = 0 omitted when unpinned
  std::vector<double> value;  // (eps/2) * ensemble mean |phi_hat(k)|^2
  double mass() const;        // (1/L) * sum of values
  int L = 0;
};

WignerEstimate energy_spectrum(const std::vector<ChainState>& ensemble, const Coupling& coupling);

// Accumulates |phi_hat|^2 of one state into sums indexed by j = 0..L-1.
class SpectrumAccumulator {
 public:
  SpectrumAccumulator(int L, const Coupling& coupling);
  ~SpectrumAccumulator();
  SpectrumAccumulator(const SpectrumAccumulator&) = delete;
  SpectrumAccumulator& operator=(const SpectrumAccumulator&) = delete;
  // Adds |phi_hat_j|^2 of s into sums[j].
  void add(const ChainState& s, std::vector<double>& sums);

 private:
  int L_;
  std::vector<double> omega_;
  double* in_;
  void* out_;  // fftw_complex*
  void* plan_;
};
WignerEstimate finish_spectrum(const std::vector<double>& sums, int count, double eps, int L,
                               const Coupling& coupling);

struct ExperimentConfig {
  int L = 512;
  ControlParams1D controls;
  Coupling coupling = Coupling::nearest_neighbor(1.0, 1.0);
  double epsilon = 0.1;
  double T = 1.0;                     // macroscopic horizon
  std::vector<double> snapshot_times; // macroscopic; T is always included
  int ensemble = 100;
  double dt = 0.0;                    // microscopic step; 0 picks the default
  std::uint64_t seed = 1;
  Profile profile;
  int threads = 0;                    // 0 uses the hardware concurrency
};

struct TracePoint {
  double time;  // macroscopic
  double energy;
  double momentum;
};

struct ExperimentResult {
  std::vector<double> times;
  std::vector<WignerEstimate> spectra;
  std::vector<TracePoint> trace;  // ensemble means at the snapshot times
  double dt = 0.0;
  std::vector<std::string> warnings;
};

// min(0.05 / max omega, 0.1 / (eps * max|K| * N)).
double default_dt(const ControlParams1D& p, const KernelCoeffs1D& c, const Coupling& coupling, double eps);

ExperimentResult run_experiment(const ExperimentConfig& cfg);

// Fills out[0..n) with independent N(0, scale^2) draws (polar method on 53-bit
// uniforms), so replays do not depend on the standard library's distributions.
void fill_normals(std::mt19937_64& rng, double* out, std::size_t n, double scale);

}  // namespace kinlim
