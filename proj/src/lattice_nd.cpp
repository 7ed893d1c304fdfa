#include "kinlim/lattice_nd.hpp"

#include <cstdlib>
#include "json.hpp"

#include "kinlim/errors.hpp"

namespace kinlim {

std::size_t LatticePointHash::operator()(const LatticePoint& p) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (int v : p) {
    h ^= static_cast<std::size_t>(static_cast<unsigned>(v));
    h *= 1099511628211ull;
  }
  return h;
}

int l1_norm(const LatticePoint& p) {
  int s = 0;
  for (int v : p) s += std::abs(v);
  return s;
}

PartIndex::PartIndex(int dim, unsigned p) : dim_(dim), p_(p) {
  if (dim < 1 || dim > 16) throw InputError("part: dimension must be in 1..16");
  if (p >= (1u << dim)) throw InputError("part: index out of range for dimension");
}

bool PartIndex::contains(const LatticePoint& x) const {
  if (static_cast<int>(x.size()) != dim_) return false;
  for (int i = 0; i < dim_; ++i) {
    if (sign(i) * x[i] < 0) return false;
  }
  return true;
}

std::vector<LatticePath> enumerate_paths(int dim, int N, PartIndex part) {
  if (dim < 1 || N < 1) throw InputError("enumerate_paths: need d >= 1 and N >= 1");
  if (part.dim() != dim) throw InputError("enumerate_paths: part dimension mismatch");
  std::size_t total = 1;
  for (int s = 0; s < N; ++s) total *= static_cast<std::size_t>(dim);
  std::vector<LatticePath> out;
  out.reserve(total);
  std::vector<int> moves(N, 0);
  for (std::size_t code = 0; code < total; ++code) {
    std::size_t c = code;
    for (int s = N - 1; s >= 0; --s) {
      moves[s] = static_cast<int>(c % dim);
      c /= dim;
    }
    LatticePath p{part, moves, {}};
    LatticePoint x(dim, 0);
    for (int a : moves) {
      x[a] += part.sign(a);
      p.points.push_back(x);
    }
    out.push_back(std::move(p));
  }
  return out;
}

std::uint64_t count_paths_through(int dim, int N, PartIndex part, const LatticePoint& D) {
  if (static_cast<int>(D.size()) != dim || part.dim() != dim) {
    throw InputError("count_paths_through: dimension mismatch");
  }
  const int n = l1_norm(D);
  if (!part.contains(D)) throw InputError("count_paths_through: point outside the part");
  if (n < 1 || n > N) throw InputError("count_paths_through: norm must be in 1..N");
  // Multinomial built incrementally to stay exact.
  std::uint64_t multi = 1;
  int placed = 0;
  for (int v : D) {
    for (int t = 1; t <= std::abs(v); ++t) {
      ++placed;
      multi = multi * placed / t;
    }
  }
  std::uint64_t tail = 1;
  for (int s = n; s < N; ++s) tail *= static_cast<std::uint64_t>(dim);
  return multi * tail;
}

LatticePath reflect(const LatticePath& path) {
  LatticePath r{path.part.complement(), path.moves, path.points};
  for (auto& x : r.points) {
    for (int& v : x) v = -v;
  }
  return r;
}

PathFamily::PathFamily(int dim, int N) : dim_(dim), N_(N), per_part_(1) {
  if (dim < 1 || N < 1) throw InputError("path family: need d >= 1 and N >= 1");
  for (int s = 0; s < N; ++s) per_part_ *= static_cast<std::size_t>(dim);
  for (unsigned p = 0; p < (1u << dim); ++p) {
    auto part = enumerate_paths(dim, N, PartIndex(dim, p));
    for (auto& path : part) paths_.push_back(std::move(path));
  }
  for (std::size_t i = 0; i < paths_.size(); ++i) {
    for (int k = 1; k <= N; ++k) endpoints_[paths_[i].points[k - 1]].push_back({i, k});
  }
}

std::size_t PathFamily::index_of(unsigned part, const std::vector<int>& moves) const {
  if (part >= (1u << dim_) || static_cast<int>(moves.size()) != N_) {
    throw InputError("path: bad part or move count");
  }
  std::size_t code = 0;
  for (int a : moves) {
    if (a < 0 || a >= dim_) throw InputError("path: move axis out of range");
    code = code * dim_ + static_cast<std::size_t>(a);
  }
  return part * per_part_ + code;
}

std::size_t PathFamily::partner(std::size_t idx) const {
  const unsigned p = static_cast<unsigned>(idx / per_part_);
  const unsigned q = ((1u << dim_) - 1u) ^ p;
  return q * per_part_ + idx % per_part_;
}

bool PathFamily::canonical(std::size_t idx) const {
  const unsigned p = static_cast<unsigned>(idx / per_part_);
  return ((p >> (dim_ - 1)) & 1u) == 0;
}

const std::vector<PathFamily::Hit>& PathFamily::through(const LatticePoint& D) const {
  static const std::vector<Hit> none;
  auto it = endpoints_.find(D);
  return it == endpoints_.end() ? none : it->second;
}

std::string to_json_line(const LatticePath& path) {
  nlohmann::json j;
  j["p"] = path.part.value();
  j["moves"] = path.moves;
  j["points"] = path.points;
  return j.dump();
}

}  // namespace kinlim
