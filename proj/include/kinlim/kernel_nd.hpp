#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "kinlim/lattice_nd.hpp"

namespace kinlim {

struct NdReport {
  std::vector<std::string> problems;
  bool ok() const { return problems.empty(); }
};

// Simple-index controls M_gamma(dd) in R^d for every path of every part. The
// reflected path always carries the negated vector when written through set().
class SimpleIndexControls {
 public:
  explicit SimpleIndexControls(std::shared_ptr<const PathFamily> family);

  const PathFamily& family() const { return *fam_; }
  std::shared_ptr<const PathFamily> family_ptr() const { return fam_; }
  int dim() const { return fam_->dim(); }
  int N() const { return fam_->N(); }

  void set(std::size_t path, int dd, const std::vector<double>& value);
  // Writes a single slot and leaves the partner alone (used to probe the checks).
  void set_unpaired(std::size_t path, int dd, const std::vector<double>& value);
  const double* get(std::size_t path, int dd) const;

  // Canonical paths times (N - floor(N/2)) vector slots.
  std::size_t free_slot_count() const;

 private:
  std::shared_ptr<const PathFamily> fam_;
  std::vector<double> v_;  // [path][dd-1][component]
};

// Dual-index controls M^{i,j}_gamma(dd) per ordered component pair. The partner
// path holds sign * value, with one sign per (i, j, canonical path).
class DualIndexControls {
 public:
  explicit DualIndexControls(std::shared_ptr<const PathFamily> family);

  const PathFamily& family() const { return *fam_; }
  int dim() const { return fam_->dim(); }
  int N() const { return fam_->N(); }

  void set(int i, int j, std::size_t path, int dd, double value);
  void set_sign(int i, int j, std::size_t path, int sign);
  void set_unpaired(int i, int j, std::size_t path, int dd, double value);
  double get(int i, int j, std::size_t path, int dd) const;
  int sign(int i, int j, std::size_t path) const;
  // Ordered pairs that have been written.
  std::vector<std::pair<int, int>> pairs() const;

 private:
  struct Slot {
    std::vector<double> values;  // [path][dd-1]
    std::vector<int> signs;      // per path, meaningful on canonical paths
  };
  Slot& slot(int i, int j);
  const Slot* find(int i, int j) const;

  std::shared_ptr<const PathFamily> fam_;
  std::map<std::pair<int, int>, Slot> slots_;
};

NdReport validate(const SimpleIndexControls& m);
NdReport validate(const DualIndexControls& m);

// Sparse coefficient table keyed by (D, D').
// Simple: a d x d row-major matrix whose entry (a, b) multiplies
//   [alpha_{n'}]_a [alpha_{n'+D}]_b with n' - n'' = D'
// (a indexes the first field factor, b the second).
// Dual: a single value multiplying [alpha_{n'}]_c [alpha_{n'+D}]_c for c in {i, j}.
struct KernelCoeffsND {
  enum class Variant { Simple, Dual };
  Variant variant = Variant::Simple;
  int dim = 0;
  int i = -1, j = -1;
  std::map<std::pair<LatticePoint, LatticePoint>, std::vector<double>> table;

  const std::vector<double>* find(const LatticePoint& D, const LatticePoint& Dp) const;
};

KernelCoeffsND simple_index_coeffs(const SimpleIndexControls& m);
KernelCoeffsND dual_index_coeffs(const DualIndexControls& m, int i, int j);

// Brute-force coefficients from the quadratic forms on a torus of the given side.
KernelCoeffsND nd_coeffs_oracle(const SimpleIndexControls& m, int side);
KernelCoeffsND nd_coeffs_oracle(const DualIndexControls& m, int i, int j, int side);

// Largest entrywise difference over the union of keys (missing entries are zero).
double max_abs_difference(const KernelCoeffsND& a, const KernelCoeffsND& b);

// Local momentum / energy residuals of lambda^{M_gamma} + lambda^{M_{-gamma}} over
// every canonical pair, for random alpha on a box of the given side.
double conservation_check_simple(const SimpleIndexControls& m, int window, std::uint64_t seed,
                                 int draws = 100);
// Residuals of every lambda^{i,j}_{n,gamma}; anchor_bias shifts the base-site
// weight away from -sum_d M(d), which breaks the balance on purpose.
double conservation_check_dual(const DualIndexControls& m, int window, std::uint64_t seed,
                               int draws = 100, double anchor_bias = 0.0);

// Simple: d x d matrix (row-major, same layout as the table) of
//   sum K(D,D') cos(2 pi (D.k + D'.k2)).
// Dual: single value sum K(D,D') cos(2 pi D.k) cos(2 pi D'.k2).
std::vector<double> eval_kernel_nd(const KernelCoeffsND& c, const std::vector<double>& k,
                                   const std::vector<double>& k2);

std::string to_json_lines(const KernelCoeffsND& c);

}  // namespace kinlim
