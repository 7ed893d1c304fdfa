#pragma once

#include <vector>

#include "kinlim/chain_sim.hpp"
#include "kinlim/dispersion.hpp"
#include "kinlim/kernel1d.hpp"

namespace kinlim {

struct SpectralDensity {
  TorusGrid grid;
  std::vector<double> values;  // nu(k_j)
  double t = 0.0;

  SpectralDensity(TorusGrid g, std::vector<double> v, double time = 0.0);
  static SpectralDensity from_profile(const TorusGrid& g, const Profile& f);
  double mass() const;  // midpoint rule for the integral of nu over the torus
};

// Largest step for which one forward Euler substep cannot go negative:
// 1 / (4 * max_k 2 int K(k,k') dk').
double positivity_dt(const KernelCoeffs1D& c, const TorusGrid& grid);

// RK4 for d nu / dt = 2 int K(k,k') (nu(k') - nu(k)) dk'. The last step is shortened
// to land on T.
SpectralDensity evolve_homogeneous(const SpectralDensity& nu0, const KernelCoeffs1D& c, double T, double dt);
// Snapshots at each requested time (ascending, >= nu0.t).
std::vector<SpectralDensity> evolve_homogeneous_series(const SpectralDensity& nu0, const KernelCoeffs1D& c,
                                                       const std::vector<double>& times, double dt);

enum class Interp { Linear, Cubic };

// mu(x_i, k_j) on a periodic x-interval of the given length, x_i = (i + 1/2) * dx.
struct PhaseSpaceDensity {
  int X = 0;
  double length = 1.0;
  TorusGrid grid;
  std::vector<double> values;  // [i * G + j]
  double t = 0.0;

  PhaseSpaceDensity(int nx, double len, TorusGrid g);
  double dx() const { return length / X; }
  double& at(int i, int j) { return values[static_cast<std::size_t>(i) * grid.size() + j]; }
  double at(int i, int j) const { return values[static_cast<std::size_t>(i) * grid.size() + j]; }
  double mass() const;
};

// Strang splitting: half-step semi-Lagrangian advection at speed omega'(k)/(2 pi), a
// full RK4 collision step per x-cell, another half-step advection.
PhaseSpaceDensity evolve_transport(const PhaseSpaceDensity& mu0, const KernelCoeffs1D& c, const Dispersion& disp,
                                   double T, double dt, Interp interp = Interp::Cubic);

// Shifts one periodic fiber by `shift` cells (positive moves mass to larger x).
void advect_fiber(const double* in, double* out, int n, double shift, Interp interp);

// Cell average of the periodic piecewise-linear interpolant of the estimate over
// each kinetic grid cell.
std::vector<double> project_to_grid(const WignerEstimate& mc, const TorusGrid& grid);

// ||mc(t) - nu(t)||_1 / ||nu(t)||_1 per time; times must match within 1e-9.
std::vector<double> compare_spectra(const std::vector<double>& mc_times, const std::vector<WignerEstimate>& mc,
                                    const std::vector<SpectralDensity>& kin);
// Same for values already sampled on the kinetic grid.
std::vector<double> compare_sampled(const std::vector<double>& mc_times, const std::vector<std::vector<double>>& mc,
                                    const std::vector<double>& kin_times, const std::vector<std::vector<double>>& kin);

}  // namespace kinlim
