#pragma once

#include <cstddef>
#include <string>

// Hot loops of the chain simulator and the collision operator, with a scalar
// reference and vector variants chosen at runtime.
namespace kinlim::simd {

enum class Backend { Scalar, Avx2, Neon };

struct KernelTable {
  Backend backend;
  // out[i] = sum_{r=-R..R} taps[r+R] * x[i+r], i in [0,n); x readable on [-R, n+R).
  void (*stencil)(const double* x, std::size_t n, const double* taps, int R, double* out);
  // Diffusion increment of the controlled noise on a padded ring:
  //   out[i] = scale * ( xi[i] * sum_d w[d] a[i+d] + sum_d w[d] (a[i+d] - a[i+2d]) xi[i+d] )
  // with d over -N..N, w centered (w[N] is the d=0 slot and must be 0),
  // a readable on [-2N, n+2N), xi on [-N, n+N).
  void (*noise)(const double* a, const double* xi, std::size_t n, const double* w, int N,
                double scale, double* out);
  // out[i] = sum_j W[i*n+j] * (S[j] - S[i]).
  void (*relax)(const double* W, const double* S, double* out, std::size_t n);
};

bool supported(Backend b);
Backend best_backend();
// Table for a specific backend; throws std::runtime_error if unsupported here.
const KernelTable& kernels(Backend b);
// Process-wide active table (best available unless overridden).
const KernelTable& kernels();
void set_backend(Backend b);
Backend active_backend();

std::string to_string(Backend b);
// Accepts "scalar", "avx2", "neon"; "auto" maps to best_backend().
Backend parse_backend(const std::string& name);

}  // namespace kinlim::simd
