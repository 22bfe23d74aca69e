// NEON variants for aarch64, where Advanced SIMD is architecturally guaranteed.

#include <arm_neon.h>

#include "kernels_impl.hpp"

namespace simlr::kernels::detail {
namespace {

double dot_neon(const double* x, const double* y, std::size_t n) {
  float64x2_t acc0 = vdupq_n_f64(0.0);
  float64x2_t acc1 = vdupq_n_f64(0.0);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    acc0 = vfmaq_f64(acc0, vld1q_f64(x + k), vld1q_f64(y + k));
    acc1 = vfmaq_f64(acc1, vld1q_f64(x + k + 2), vld1q_f64(y + k + 2));
  }
  double acc = vaddvq_f64(vaddq_f64(acc0, acc1));
  for (; k < n; ++k) acc += x[k] * y[k];
  return acc;
}

void axpy_neon(double a, const double* x, double* y, std::size_t n) {
  const float64x2_t va = vdupq_n_f64(a);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) vst1q_f64(y + k, vfmaq_f64(vld1q_f64(y + k), va, vld1q_f64(x + k)));
  for (; k < n; ++k) y[k] += a * x[k];
}

void sigmoid_backprop_neon(const double* h, const double* upstream, double* out,
                           std::size_t n) {
  const float64x2_t one = vdupq_n_f64(1.0);
  std::size_t k = 0;
  for (; k + 2 <= n; k += 2) {
    const float64x2_t vh = vld1q_f64(h + k);
    vst1q_f64(out + k, vmulq_f64(vmulq_f64(vld1q_f64(upstream + k), vh), vsubq_f64(one, vh)));
  }
  for (; k < n; ++k) out[k] = upstream[k] * h[k] * (1.0 - h[k]);
}

SirMoments sir_moments_neon(const double* s, const double* i, std::size_t n_states,
                            double population) {
  SirMoments m;
  if (n_states < 2) return m;
  const std::size_t transitions = n_states - 1;
  const float64x2_t inv_n = vdupq_n_f64(1.0 / population);
  float64x2_t bb = vdupq_n_f64(0.0), bg = bb, gg = bb, rb = bb, rg = bb;
  std::size_t k = 0;
  for (; k + 2 <= transitions; k += 2) {
    const float64x2_t s0 = vld1q_f64(s + k);
    const float64x2_t i0 = vld1q_f64(i + k);
    const float64x2_t p = vmulq_f64(vmulq_f64(s0, i0), inv_n);
    const float64x2_t ds = vsubq_f64(vld1q_f64(s + k + 1), s0);
    const float64x2_t di = vsubq_f64(vld1q_f64(i + k + 1), i0);
    bb = vfmaq_f64(bb, vaddq_f64(p, p), p);
    bg = vfmsq_f64(bg, p, i0);
    gg = vfmaq_f64(gg, i0, i0);
    rb = vfmaq_f64(rb, p, vsubq_f64(di, ds));
    rg = vfmsq_f64(rg, i0, di);
  }
  m.ata_bb = vaddvq_f64(bb);
  m.ata_bg = vaddvq_f64(bg);
  m.ata_gg = vaddvq_f64(gg);
  m.atb_b = vaddvq_f64(rb);
  m.atb_g = vaddvq_f64(rg);
  for (; k < transitions; ++k) {
    const double p = s[k] * i[k] / population;
    const double ds = s[k + 1] - s[k];
    const double di = i[k + 1] - i[k];
    m.ata_bb += 2.0 * p * p;
    m.ata_bg += -p * i[k];
    m.ata_gg += i[k] * i[k];
    m.atb_b += p * (di - ds);
    m.atb_g += -i[k] * di;
  }
  return m;
}

}  // namespace

const KernelTable& neon_table() {
  static const KernelTable table{Isa::neon, dot_neon, axpy_neon, sigmoid_backprop_neon,
                                 sir_moments_neon};
  return table;
}

}  // namespace simlr::kernels::detail
