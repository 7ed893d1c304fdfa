#pragma once

#include <vector>

namespace kinlim {

// Even, finitely supported harmonic coupling sigma_n, stored for n = 0..R.
class Coupling {
 public:
  // omega^2(k) = omega0^2 + A (1 - cos 2 pi k).
  static Coupling nearest_neighbor(double omega0, double A);
  // taps[n] = sigma_n for n = 0..R.
  static Coupling from_taps(std::vector<double> taps);

  int radius() const { return static_cast<int>(taps_.size()) - 1; }
  const std::vector<double>& taps() const { return taps_; }
  bool pinned() const { return pinned_; }

  double sigma_hat(double k) const;
  double sigma_hat_prime(double k) const;
  double sigma_hat_second(double k) const;

 private:
  explicit Coupling(std::vector<double> taps);
  std::vector<double> taps_;
  bool pinned_ = false;
};

class Dispersion {
 public:
  explicit Dispersion(Coupling c) : c_(std::move(c)) {}
  const Coupling& coupling() const { return c_; }
  double omega(double k) const;
  // Exact derivative of the cosine sum; undefined at k = 0 when unpinned.
  double omega_prime(double k) const;

 private:
  Coupling c_;
};

}  // namespace kinlim
