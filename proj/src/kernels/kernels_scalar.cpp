#include "simlr/kernels.hpp"

namespace simlr::kernels {
namespace {

double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc += x[k] * y[k];
  return acc;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) y[k] += a * x[k];
}

void sigmoid_backprop_scalar(const double* h, const double* upstream, double* out,
                             std::size_t n) {
  for (std::size_t k = 0; k < n; ++k) out[k] = upstream[k] * h[k] * (1.0 - h[k]);
}

SirMoments sir_moments_scalar(const double* s, const double* i, std::size_t n_states,
                              double population) {
  SirMoments m;
  for (std::size_t k = 1; k < n_states; ++k) {
    const double p = s[k - 1] * i[k - 1] / population;
    const double ds = s[k] - s[k - 1];
    const double di = i[k] - i[k - 1];
    m.ata_bb += 2.0 * p * p;
    m.ata_bg += -p * i[k - 1];
    m.ata_gg += i[k - 1] * i[k - 1];
    m.atb_b += p * (di - ds);
    m.atb_g += -i[k - 1] * di;
  }
  return m;
}

}  // namespace

const KernelTable& scalar_table() {
  static const KernelTable table{Isa::scalar, dot_scalar, axpy_scalar, sigmoid_backprop_scalar,
                                 sir_moments_scalar};
  return table;
}

}  // namespace simlr::kernels
