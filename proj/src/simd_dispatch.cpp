#include <atomic>
#include <stdexcept>

#include "kinlim/errors.hpp"

#include "simd_impl.hpp"

namespace kinlim::simd {

namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(__i386__)
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

std::atomic<int>& active_slot() {
  static std::atomic<int> slot{static_cast<int>(best_backend())};
  return slot;
}

}  // namespace

bool supported(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return true;
    case Backend::Avx2:
      return detail::avx2_table() != nullptr && cpu_has_avx2();
    case Backend::Neon:
      return detail::neon_table() != nullptr;
  }
  return false;
}

Backend best_backend() {
  if (supported(Backend::Avx2)) return Backend::Avx2;
  if (supported(Backend::Neon)) return Backend::Neon;
  return Backend::Scalar;
}

const KernelTable& kernels(Backend b) {
  if (!supported(b)) throw std::runtime_error("simd backend " + to_string(b) + " not available");
  switch (b) {
    case Backend::Avx2:
      return *detail::avx2_table();
    case Backend::Neon:
      return *detail::neon_table();
    case Backend::Scalar:
      break;
  }
  return detail::scalar_table;
}

const KernelTable& kernels() { return kernels(active_backend()); }

void set_backend(Backend b) {
  if (!supported(b)) throw std::runtime_error("simd backend " + to_string(b) + " not available");
  active_slot().store(static_cast<int>(b));
}

Backend active_backend() { return static_cast<Backend>(active_slot().load()); }

std::string to_string(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
    case Backend::Neon:
      return "neon";
  }
  return "unknown";
}

Backend parse_backend(const std::string& name) {
  if (name == "auto") return best_backend();
  if (name == "scalar") return Backend::Scalar;
  if (name == "avx2") return Backend::Avx2;
  if (name == "neon") return Backend::Neon;
  throw InputError("unknown simd backend '" + name + "'");
}

}  // namespace kinlim::simd
