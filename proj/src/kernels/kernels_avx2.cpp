// AVX2 + FMA variants. This translation unit is built with -mavx2 -mfma and
// must only be entered after a runtime CPU check.

#include <immintrin.h>

#include "kernels_impl.hpp"

namespace simlr::kernels::detail {
namespace {

inline double hsum(__m256d v) {
  const __m128d lo = _mm256_castpd256_pd128(v);
  const __m128d hi = _mm256_extractf128_pd(v, 1);
  const __m128d pair = _mm_add_pd(lo, hi);
  return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

double dot_avx2(const double* x, const double* y, std::size_t n) {
  __m256d acc0 = _mm256_setzero_pd();
  __m256d acc1 = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 8 <= n; k += 8) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k), acc0);
    acc1 = _mm256_fmadd_pd(_mm256_loadu_pd(x + k + 4), _mm256_loadu_pd(y + k + 4), acc1);
  }
  for (; k + 4 <= n; k += 4) {
    acc0 = _mm256_fmadd_pd(_mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k), acc0);
  }
  double acc = hsum(_mm256_add_pd(acc0, acc1));
  for (; k < n; ++k) acc += x[k] * y[k];
  return acc;
}

void axpy_avx2(double a, const double* x, double* y, std::size_t n) {
  const __m256d va = _mm256_set1_pd(a);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    _mm256_storeu_pd(y + k, _mm256_fmadd_pd(va, _mm256_loadu_pd(x + k), _mm256_loadu_pd(y + k)));
  }
  for (; k < n; ++k) y[k] += a * x[k];
}

void sigmoid_backprop_avx2(const double* h, const double* upstream, double* out,
                           std::size_t n) {
  const __m256d one = _mm256_set1_pd(1.0);
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    const __m256d vh = _mm256_loadu_pd(h + k);
    const __m256d vu = _mm256_loadu_pd(upstream + k);
    _mm256_storeu_pd(out + k, _mm256_mul_pd(_mm256_mul_pd(vu, vh), _mm256_sub_pd(one, vh)));
  }
  for (; k < n; ++k) out[k] = upstream[k] * h[k] * (1.0 - h[k]);
}

SirMoments sir_moments_avx2(const double* s, const double* i, std::size_t n_states,
                            double population) {
  SirMoments m;
  if (n_states < 2) return m;
  const std::size_t transitions = n_states - 1;
  const __m256d inv_n = _mm256_set1_pd(1.0 / population);
  const __m256d two = _mm256_set1_pd(2.0);
  __m256d bb = _mm256_setzero_pd();
  __m256d bg = _mm256_setzero_pd();
  __m256d gg = _mm256_setzero_pd();
  __m256d rb = _mm256_setzero_pd();
  __m256d rg = _mm256_setzero_pd();
  std::size_t k = 0;
  for (; k + 4 <= transitions; k += 4) {
    const __m256d s0 = _mm256_loadu_pd(s + k);
    const __m256d s1 = _mm256_loadu_pd(s + k + 1);
    const __m256d i0 = _mm256_loadu_pd(i + k);
    const __m256d i1 = _mm256_loadu_pd(i + k + 1);
    const __m256d p = _mm256_mul_pd(_mm256_mul_pd(s0, i0), inv_n);
    const __m256d ds = _mm256_sub_pd(s1, s0);
    const __m256d di = _mm256_sub_pd(i1, i0);
    bb = _mm256_fmadd_pd(_mm256_mul_pd(two, p), p, bb);
    bg = _mm256_fnmadd_pd(p, i0, bg);
    gg = _mm256_fmadd_pd(i0, i0, gg);
    rb = _mm256_fmadd_pd(p, _mm256_sub_pd(di, ds), rb);
    rg = _mm256_fnmadd_pd(i0, di, rg);
  }
  m.ata_bb = hsum(bb);
  m.ata_bg = hsum(bg);
  m.ata_gg = hsum(gg);
  m.atb_b = hsum(rb);
  m.atb_g = hsum(rg);
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

const KernelTable& avx2_table() {
  static const KernelTable table{Isa::avx2, dot_avx2, axpy_avx2, sigmoid_backprop_avx2,
                                 sir_moments_avx2};
  return table;
}

}  // namespace simlr::kernels::detail
