#include <cstdlib>
#include <stdexcept>
#include <string>

#include "kernels_impl.hpp"

namespace simlr::kernels {

std::string_view isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
    case Isa::neon: return "neon";
  }
  return "unknown";
}

bool isa_available(Isa isa) {
  switch (isa) {
    case Isa::scalar: return true;
    case Isa::avx2:
#if defined(SIMLR_HAVE_AVX2)
      __builtin_cpu_init();
      return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
      return false;
#endif
    case Isa::neon:
#if defined(SIMLR_HAVE_NEON)
      return true;
#else
      return false;
#endif
  }
  return false;
}

const KernelTable& table_for(Isa isa) {
  if (!isa_available(isa)) {
    throw std::invalid_argument("kernel ISA not available: " + std::string(isa_name(isa)));
  }
  switch (isa) {
#if defined(SIMLR_HAVE_AVX2)
    case Isa::avx2: return detail::avx2_table();
#endif
#if defined(SIMLR_HAVE_NEON)
    case Isa::neon: return detail::neon_table();
#endif
    default: return scalar_table();
  }
}

namespace {

const KernelTable& select() {
  if (const char* forced = std::getenv("SIMLR_KERNELS")) {
    const std::string_view name(forced);
    for (Isa isa : {Isa::scalar, Isa::avx2, Isa::neon}) {
      if (name == isa_name(isa) && isa_available(isa)) return table_for(isa);
    }
  }
  if (isa_available(Isa::avx2)) return table_for(Isa::avx2);
  if (isa_available(Isa::neon)) return table_for(Isa::neon);
  return scalar_table();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& table = select();
  return table;
}

}  // namespace simlr::kernels
