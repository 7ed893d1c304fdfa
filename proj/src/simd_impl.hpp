#pragma once

#include "kinlim/simd.hpp"

namespace kinlim::simd::detail {

extern const KernelTable scalar_table;
// Null when the variant is not compiled for this architecture.
const KernelTable* avx2_table();
const KernelTable* neon_table();

}  // namespace kinlim::simd::detail
