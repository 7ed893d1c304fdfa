#include "kinlim/dispersion.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "kinlim/errors.hpp"

namespace kinlim {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

Coupling Coupling::nearest_neighbor(double omega0, double A) {
  if (!(omega0 >= 0.0) || !(A > 0.0) || !std::isfinite(omega0) || !std::isfinite(A)) {
    throw InputError("coupling: need omega0 >= 0 and A > 0");
  }
  return Coupling({omega0 * omega0 + A, -0.5 * A});
}

Coupling Coupling::from_taps(std::vector<double> taps) { return Coupling(std::move(taps)); }

Coupling::Coupling(std::vector<double> taps) : taps_(std::move(taps)) {
  if (taps_.size() < 2) throw InputError("coupling: taps must include sigma_0 and at least sigma_1");
  bool offsite = false;
  double scale = 0.0;
  for (std::size_t n = 0; n < taps_.size(); ++n) {
    if (!std::isfinite(taps_[n])) throw InputError("coupling: non-finite tap " + std::to_string(n));
    if (n > 0 && taps_[n] != 0.0) offsite = true;
    scale += std::abs(taps_[n]);
  }
  if (!offsite) throw InputError("coupling: some sigma_n with n != 0 must be nonzero");
  const double s0 = sigma_hat(0.0);
  const double tol = 1e-12 * scale;
  if (s0 < -tol) throw InputError("coupling: sigma_hat(0) is negative");
  pinned_ = s0 > tol;
  if (!pinned_ && !(sigma_hat_second(0.0) > 0.0)) {
    throw InputError("coupling: unpinned coupling needs a positive second derivative at k=0");
  }
  const int G = 4096;
  for (int j = 0; j < G; ++j) {
    const double k = (j + 0.5) / G - 0.5;
    if (!(sigma_hat(k) > 0.0)) throw InputError("coupling: sigma_hat must be positive away from 0");
  }
}

double Coupling::sigma_hat(double k) const {
  double s = taps_[0];
  for (std::size_t n = 1; n < taps_.size(); ++n) s += 2.0 * taps_[n] * std::cos(kTwoPi * n * k);
  return s;
}

double Coupling::sigma_hat_prime(double k) const {
  double s = 0.0;
  for (std::size_t n = 1; n < taps_.size(); ++n) s -= 2.0 * taps_[n] * kTwoPi * n * std::sin(kTwoPi * n * k);
  return s;
}

double Coupling::sigma_hat_second(double k) const {
  double s = 0.0;
  for (std::size_t n = 1; n < taps_.size(); ++n) {
    const double w = kTwoPi * n;
    s -= 2.0 * taps_[n] * w * w * std::cos(w * k);
  }
  return s;
}

double Dispersion::omega(double k) const { return std::sqrt(std::max(0.0, c_.sigma_hat(k))); }

double Dispersion::omega_prime(double k) const { return c_.sigma_hat_prime(k) / (2.0 * omega(k)); }

}  // namespace kinlim
