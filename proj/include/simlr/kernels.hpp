#pragma once

// Data-parallel inner loops used by the network trainer and the rate fit.
//
// Every kernel has a scalar reference implementation. Vector variants
// (AVX2+FMA on x86-64, NEON on aarch64) are compiled into separate
// translation units and picked once per process from the CPU's feature
// bits. Set SIMLR_KERNELS=scalar in the environment to force the reference
// path. Variants differ only in summation order.

#include <cstddef>
#include <span>
#include <string_view>

namespace simlr::kernels {

enum class Isa { scalar, avx2, neon };

std::string_view isa_name(Isa isa);

// Sufficient statistics of the two-parameter SIR least-squares problem over a
// run of consecutive states. With p = S*I/N at the earlier state and
// (dS, dI) the observed increments, each transition contributes
//   ata_bb += 2 p^2      ata_bg += -p I      ata_gg += I^2
//   atb_b  += p (dI - dS)                    atb_g  += -I dI
struct SirMoments {
  double ata_bb = 0.0;
  double ata_bg = 0.0;
  double ata_gg = 0.0;
  double atb_b = 0.0;
  double atb_g = 0.0;
};

struct KernelTable {
  Isa isa;
  double (*dot)(const double* x, const double* y, std::size_t n);
  // y += a * x
  void (*axpy)(double a, const double* x, double* y, std::size_t n);
  // out = upstream * h * (1 - h); h are sigmoid activations
  void (*sigmoid_backprop)(const double* h, const double* upstream, double* out, std::size_t n);
  // s and i hold n_states consecutive values; n_states - 1 transitions
  SirMoments (*sir_moments)(const double* s, const double* i, std::size_t n_states,
                            double population);
};

const KernelTable& scalar_table();
bool isa_available(Isa isa);
// Throws std::invalid_argument when the ISA was not compiled in or the CPU lacks it.
const KernelTable& table_for(Isa isa);
const KernelTable& active();

inline double dot(std::span<const double> x, std::span<const double> y) {
  return active().dot(x.data(), y.data(), x.size());
}

inline void axpy(double a, std::span<const double> x, std::span<double> y) {
  active().axpy(a, x.data(), y.data(), x.size());
}

inline void sigmoid_backprop(std::span<const double> h, std::span<const double> upstream,
                             std::span<double> out) {
  active().sigmoid_backprop(h.data(), upstream.data(), out.data(), h.size());
}

inline SirMoments sir_moments(std::span<const double> s, std::span<const double> i,
                              double population) {
  return active().sir_moments(s.data(), i.data(), s.size(), population);
}

}  // namespace simlr::kernels
