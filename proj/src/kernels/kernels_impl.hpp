#pragma once

#include "simlr/kernels.hpp"

namespace simlr::kernels::detail {

const KernelTable& avx2_table();
const KernelTable& neon_table();

}  // namespace simlr::kernels::detail
