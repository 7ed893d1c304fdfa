#pragma once

// Reference data and generators shared by the unit and acceptance tests. Nothing
// here calls the library code it is used to check.

#include <array>
#include <cstdint>
#include <map>
#include <random>
#include <utility>
#include <vector>

#include "kinlim/kernel1d.hpp"
#include "kinlim/kernel_nd.hpp"
#include "kinlim/lattice_nd.hpp"
#include "kinlim/scalar.hpp"

namespace oracle {

using kinlim::Rational;

// A quadratic a^2 * c[0] + a b * c[1] + b^2 * c[2] in the free slots a = m(2), b = m(3).
struct Quad {
  Rational a2, ab, b2;
  Rational at(const Rational& a, const Rational& b) const { return a2 * a * a + ab * a * b + b2 * b * b; }
};

// N = 3 coefficient table for 1 <= d <= d' <= 6, as printed.
const std::map<std::pair<int, int>, Quad>& appendix_k_table();
// N = 3 L table for 0 <= d1 <= d2 <= 5, as printed.
const std::map<std::pair<int, int>, Quad>& appendix_l_table();

// Printed polynomials as coefficient maps over U_{2 d1}(x) U_{2 d2}(y).
using ChebTerms = std::map<std::pair<int, int>, Rational>;
ChebTerms appendix_p();
ChebTerms appendix_q();
ChebTerms appendix_r();
// Cells where the printed R disagrees with the printed L table.
std::vector<std::pair<int, int>> appendix_r_misprints();

// Random valid 1D controls with entries uniform in [-2, 2].
kinlim::ControlParams1D random_controls(int N, std::mt19937_64& rng);
// Random valid simple-index controls (entries in [-1, 1]) on a shared family.
kinlim::SimpleIndexControls random_simple(std::shared_ptr<const kinlim::PathFamily> fam, std::mt19937_64& rng);
// Random valid dual-index controls for every ordered pair; the last entry is
// solved from the pairwise-product condition and draws with |M(N)| > 2 are redrawn.
kinlim::DualIndexControls random_dual(std::shared_ptr<const kinlim::PathFamily> fam, std::mt19937_64& rng);

// Paths of the part that visit D, counted by scanning every move sequence.
std::uint64_t brute_count_through(int dim, int N, unsigned part, const std::vector<int>& D);

// Direct cosine double sum over a coefficient accessor.
double cosine_sum(const kinlim::KernelCoeffs1D& c, double k, double k2);

// U_n(x) from sin((n+1) t) / sin t with x = cos t (|x| < 1).
double chebyshev_u_trig(int n, double x);

}  // namespace oracle
