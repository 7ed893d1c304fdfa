#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace kinlim {

using LatticePoint = std::vector<int>;

struct LatticePointHash {
  std::size_t operator()(const LatticePoint& p) const noexcept;
};

int l1_norm(const LatticePoint& p);

// Orthant p in [0, 2^d); the bit for axis i (0-based) is bit d-1-i, so the
// first axis is the most significant digit. A set bit means a negative sign.
class PartIndex {
 public:
  PartIndex(int dim, unsigned p);
  int dim() const { return dim_; }
  unsigned value() const { return p_; }
  int sign(int axis) const { return (p_ >> (dim_ - 1 - axis)) & 1u ? -1 : 1; }
  PartIndex complement() const { return PartIndex(dim_, ((1u << dim_) - 1u) ^ p_); }
  bool contains(const LatticePoint& x) const;

 private:
  int dim_;
  unsigned p_;
};

struct LatticePath {
  PartIndex part;
  std::vector<int> moves;            // axis per step, 0-based
  std::vector<LatticePoint> points;  // gamma_1..gamma_N
};

// All d^N paths of the part, in lexicographic order of the move sequence.
std::vector<LatticePath> enumerate_paths(int dim, int N, PartIndex part);

// ||D||! / prod |D_i|! * d^(N - ||D||).
std::uint64_t count_paths_through(int dim, int N, PartIndex part, const LatticePoint& D);

LatticePath reflect(const LatticePath& path);

// Every path of every part, indexed as part * d^N + (moves read in base d).
class PathFamily {
 public:
  struct Hit {
    std::size_t path;
    int k;  // gamma_k = D, k = ||D||_1
  };

  PathFamily(int dim, int N);
  int dim() const { return dim_; }
  int N() const { return N_; }
  std::size_t size() const { return paths_.size(); }
  std::size_t per_part() const { return per_part_; }
  const LatticePath& path(std::size_t idx) const { return paths_[idx]; }
  std::size_t index_of(unsigned part, const std::vector<int>& moves) const;
  // Index of the reflected path -gamma (same moves, complement part).
  std::size_t partner(std::size_t idx) const;
  // One representative per {gamma, -gamma}: the part whose first-axis bit is clear.
  bool canonical(std::size_t idx) const;
  const std::vector<Hit>& through(const LatticePoint& D) const;

 private:
  int dim_, N_;
  std::size_t per_part_;
  std::vector<LatticePath> paths_;
  std::unordered_map<LatticePoint, std::vector<Hit>, LatticePointHash> endpoints_;
};

std::string to_json_line(const LatticePath& path);

}  // namespace kinlim
