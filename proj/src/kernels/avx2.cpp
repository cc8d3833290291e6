#include <immintrin.h>

#include <bit>
#include <cmath>
#include <cstdint>

#include "kernel_table.hpp"

namespace risssk::kernels::detail {
namespace {

struct d4 {
  __m256d v;
  d4() = default;
  d4(__m256d x) : v(x) {}
  d4(double x) : v(_mm256_set1_pd(x)) {}
};

struct m4 {
  __m256d v;
};

inline d4 operator+(d4 a, d4 b) { return _mm256_add_pd(a.v, b.v); }
inline d4 operator-(d4 a, d4 b) { return _mm256_sub_pd(a.v, b.v); }
inline d4 operator*(d4 a, d4 b) { return _mm256_mul_pd(a.v, b.v); }
inline d4 operator/(d4 a, d4 b) { return _mm256_div_pd(a.v, b.v); }
inline d4 operator-(d4 a) { return _mm256_xor_pd(a.v, _mm256_set1_pd(-0.0)); }
inline m4 operator>(d4 a, d4 b) { return {_mm256_cmp_pd(a.v, b.v, _CMP_GT_OQ)}; }
inline m4 operator<(d4 a, d4 b) { return {_mm256_cmp_pd(a.v, b.v, _CMP_LT_OQ)}; }
inline m4 operator>=(d4 a, d4 b) { return {_mm256_cmp_pd(a.v, b.v, _CMP_GE_OQ)}; }
inline m4 operator==(d4 a, d4 b) { return {_mm256_cmp_pd(a.v, b.v, _CMP_EQ_OQ)}; }
inline m4 operator|(m4 a, m4 b) { return {_mm256_or_pd(a.v, b.v)}; }

inline d4 vsqrt(d4 x) { return _mm256_sqrt_pd(x.v); }
inline d4 vround(d4 x) { return _mm256_round_pd(x.v, _MM_FROUND_TO_NEAREST_INT | _MM_FROUND_NO_EXC); }
inline d4 vfloor(d4 x) { return _mm256_floor_pd(x.v); }
inline d4 select(m4 m, d4 a, d4 b) { return _mm256_blendv_pd(b.v, a.v, m.v); }
inline void split_exponent(d4 x, d4& m, d4& e);

#include "simd_math.hpp"

inline void split_exponent(d4 x, d4& m, d4& e) {
  const __m256i bits = _mm256_castpd_si256(x.v);
  // Exponent field as a double: place it in the mantissa of 2^52 and subtract.
  const __m256i biased_i = _mm256_srli_epi64(bits, 52);
  const d4 biased = _mm256_sub_pd(
      _mm256_castsi256_pd(_mm256_or_si256(biased_i, _mm256_set1_epi64x(0x4330000000000000ll))),
      _mm256_set1_pd(4503599627370496.0));
  const d4 mant = _mm256_castsi256_pd(
      _mm256_or_si256(_mm256_and_si256(bits, _mm256_set1_epi64x(static_cast<long long>(kMantissaMask))),
                      _mm256_set1_epi64x(static_cast<long long>(kOneBits))));
  const m4 big = mant > d4(kSqrt2);
  m = select(big, mant * d4(0.5), mant);
  e = (biased + select(big, d4(1.0), d4(0.0))) - d4(1023.0);
}

struct Words4 {
  __m256i w0, w1, w2, w3;  // one 32-bit word per 64-bit lane, lanes = consecutive blocks
};

inline Words4 philox4(std::uint64_t key, std::uint64_t stream, std::uint64_t first_block) {
  const __m256i low32 = _mm256_set1_epi64x(0xFFFFFFFFll);
  const __m256i blocks = _mm256_add_epi64(_mm256_set1_epi64x(static_cast<long long>(first_block)),
                                          _mm256_setr_epi64x(0, 1, 2, 3));
  __m256i c0 = _mm256_and_si256(blocks, low32);
  __m256i c1 = _mm256_srli_epi64(blocks, 32);
  __m256i c2 = _mm256_set1_epi64x(static_cast<long long>(stream & 0xFFFFFFFFull));
  __m256i c3 = _mm256_set1_epi64x(static_cast<long long>(stream >> 32));
  const __m256i m0 = _mm256_set1_epi64x(kPhiloxM0);
  const __m256i m1 = _mm256_set1_epi64x(kPhiloxM1);
  std::uint32_t k0 = static_cast<std::uint32_t>(key);
  std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
  for (int round = 0; round < kPhiloxRounds; ++round) {
    if (round > 0) {
      k0 += kPhiloxW0;
      k1 += kPhiloxW1;
    }
    const __m256i p0 = _mm256_mul_epu32(c0, m0);
    const __m256i p1 = _mm256_mul_epu32(c2, m1);
    const __m256i n0 = _mm256_xor_si256(_mm256_xor_si256(_mm256_srli_epi64(p1, 32), c1),
                                        _mm256_set1_epi64x(k0));
    const __m256i n2 = _mm256_xor_si256(_mm256_xor_si256(_mm256_srli_epi64(p0, 32), c3),
                                        _mm256_set1_epi64x(k1));
    c1 = _mm256_and_si256(p1, low32);
    c3 = _mm256_and_si256(p0, low32);
    c0 = n0;
    c2 = n2;
  }
  return Words4{c0, c1, c2, c3};
}

inline d4 unit_from_words(__m256i lo, __m256i hi) {
  const __m256i bits = _mm256_or_si256(_mm256_slli_epi64(hi, 32), lo);
  const __m256i mant = _mm256_or_si256(_mm256_srli_epi64(bits, 12),
                                       _mm256_set1_epi64x(static_cast<long long>(kOneBits)));
  return _mm256_sub_pd(_mm256_castsi256_pd(mant), _mm256_set1_pd(1.0));
}

void complex_gaussian(std::uint64_t key, std::uint64_t stream, std::uint64_t first_block,
                      double scale, double* re, double* im, std::size_t n) {
  const d4 s(scale);
  std::size_t j = 0;
  for (; j + 4 <= n; j += 4) {
    const Words4 b = philox4(key, stream, first_block + j);
    d4 z0, z1;
    box_muller(unit_from_words(b.w0, b.w1), unit_from_words(b.w2, b.w3), z0, z1);
    _mm256_storeu_pd(re + j, (z0 * s).v);
    _mm256_storeu_pd(im + j, (z1 * s).v);
  }
  if (j < n) {
    const Words4 b = philox4(key, stream, first_block + j);
    d4 z0, z1;
    box_muller(unit_from_words(b.w0, b.w1), unit_from_words(b.w2, b.w3), z0, z1);
    alignas(32) double tr[4], ti[4];
    _mm256_store_pd(tr, (z0 * s).v);
    _mm256_store_pd(ti, (z1 * s).v);
    for (std::size_t k = 0; j + k < n; ++k) {
      re[j + k] = tr[k];
      im[j + k] = ti[k];
    }
  }
}

std::uint64_t von_mises_phasors(std::uint64_t key, std::uint64_t stream,
                                std::uint64_t first_block, const VonMisesParams& params,
                                double* cos_out, double* sin_out, std::size_t n) {
  const d4 s_env(params.s), kappa(params.kappa), turns(params.normal_turns);
  std::uint64_t base = 0;
  std::size_t filled = 0;
  alignas(32) double cs[4], sn[4], ok[4];
  while (filled < n) {
    const Words4 b = philox4(key, stream, first_block + base);
    const d4 u = unit_from_words(b.w0, b.w1);
    const d4 v = unit_from_words(b.w2, b.w3);
    d4 c{}, s{};
    m4 accept{_mm256_castsi256_pd(_mm256_set1_epi64x(-1))};
    switch (params.mode) {
      case VonMisesMode::uniform:
        sincos_turns(u - d4(0.5), s, c);
        break;
      case VonMisesMode::wrapped_normal: {
        d4 z0, z1;
        box_muller(u, v, z0, z1);
        sincos_turns(z0 * turns, s, c);
        break;
      }
      case VonMisesMode::rejection: {
        d4 w;
        accept = von_mises_candidate(u, v, s_env, kappa, w);
        const __m256i bit0 = _mm256_and_si256(b.w0, _mm256_set1_epi64x(1));
        const m4 negative{_mm256_castsi256_pd(_mm256_cmpeq_epi64(bit0, _mm256_setzero_si256()))};
        phasor_from_cosine(w, negative, c, s);
        break;
      }
    }
    _mm256_store_pd(cs, c.v);
    _mm256_store_pd(sn, s.v);
    _mm256_store_pd(ok, accept.v);
    for (int k = 0; k < 4; ++k) {
      if (std::bit_cast<std::uint64_t>(ok[k]) == 0) continue;
      cos_out[filled] = cs[k];
      sin_out[filled] = sn[k];
      if (++filled == n) return base + static_cast<std::uint64_t>(k) + 1;
    }
    base += 4;
  }
  return base;
}

void align_phases(const double* h_re, const double* h_im, const double* g_re, const double* g_im,
                  const double* err_cos, const double* err_sin, double* u_re, double* u_im,
                  std::size_t n) {
  std::size_t l = 0;
  for (; l + 4 <= n; l += 4) {
    const d4 hr = _mm256_loadu_pd(h_re + l), hi = _mm256_loadu_pd(h_im + l);
    const d4 gr = _mm256_loadu_pd(g_re + l), gi = _mm256_loadu_pd(g_im + l);
    const d4 mag = vsqrt(hr * hr + hi * hi) * vsqrt(gr * gr + gi * gi);
    const d4 pr = hr * gr - hi * gi;
    const d4 pi = -(hr * gi + hi * gr);
    const m4 zero = mag == d4(0.0);
    const d4 safe = select(zero, d4(1.0), mag);
    d4 ur = select(zero, d4(1.0), pr / safe);
    d4 ui = select(zero, d4(0.0), pi / safe);
    if (err_cos != nullptr) {
      const d4 ec = _mm256_loadu_pd(err_cos + l), es = _mm256_loadu_pd(err_sin + l);
      const d4 rr = ur * ec - ui * es;
      const d4 ri = ur * es + ui * ec;
      ur = rr;
      ui = ri;
    }
    _mm256_storeu_pd(u_re + l, ur.v);
    _mm256_storeu_pd(u_im + l, ui.v);
  }
  for (; l < n; ++l) {
    const double hr = h_re[l], hi = h_im[l], gr = g_re[l], gi = g_im[l];
    const double mag = std::sqrt(hr * hr + hi * hi) * std::sqrt(gr * gr + gi * gi);
    const double pr = hr * gr - hi * gi;
    const double pi = -(hr * gi + hi * gr);
    const bool zero = mag == 0.0;
    const double safe = zero ? 1.0 : mag;
    double ur = zero ? 1.0 : pr / safe;
    double ui = zero ? 0.0 : pi / safe;
    if (err_cos != nullptr) {
      const double ec = err_cos[l], es = err_sin[l];
      const double rr = ur * ec - ui * es;
      const double ri = ur * es + ui * ec;
      ur = rr;
      ui = ri;
    }
    u_re[l] = ur;
    u_im[l] = ui;
  }
}

void cascade_sum(const double* h_re, const double* h_im, const double* u_re, const double* u_im,
                 const double* g_re, const double* g_im, std::size_t n, double* out) {
  __m256d acc_r = _mm256_setzero_pd(), acc_i = _mm256_setzero_pd();
  std::size_t l = 0;
  for (; l + 4 <= n; l += 4) {
    const d4 hr = _mm256_loadu_pd(h_re + l), hi = _mm256_loadu_pd(h_im + l);
    const d4 ur = _mm256_loadu_pd(u_re + l), ui = _mm256_loadu_pd(u_im + l);
    const d4 gr = _mm256_loadu_pd(g_re + l), gi = _mm256_loadu_pd(g_im + l);
    const d4 tr = hr * ur - hi * ui;
    const d4 ti = hr * ui + hi * ur;
    acc_r = _mm256_add_pd(acc_r, (tr * gr - ti * gi).v);
    acc_i = _mm256_add_pd(acc_i, (tr * gi + ti * gr).v);
  }
  alignas(32) double ar[4], ai[4];
  _mm256_store_pd(ar, acc_r);
  _mm256_store_pd(ai, acc_i);
  for (; l < n; ++l) {
    const double tr = h_re[l] * u_re[l] - h_im[l] * u_im[l];
    const double ti = h_re[l] * u_im[l] + h_im[l] * u_re[l];
    ar[l & 3] += tr * g_re[l] - ti * g_im[l];
    ai[l & 3] += tr * g_im[l] + ti * g_re[l];
  }
  out[0] = (ar[0] + ar[1]) + (ar[2] + ar[3]);
  out[1] = (ai[0] + ai[1]) + (ai[2] + ai[3]);
}

void product_sum(const double* a_re, const double* a_im, const double* b_re, const double* b_im,
                 std::size_t n, double* out) {
  __m256d acc_r = _mm256_setzero_pd(), acc_i = _mm256_setzero_pd();
  std::size_t l = 0;
  for (; l + 4 <= n; l += 4) {
    const d4 ar = _mm256_loadu_pd(a_re + l), ai = _mm256_loadu_pd(a_im + l);
    const d4 br = _mm256_loadu_pd(b_re + l), bi = _mm256_loadu_pd(b_im + l);
    acc_r = _mm256_add_pd(acc_r, (ar * br - ai * bi).v);
    acc_i = _mm256_add_pd(acc_i, (ar * bi + ai * br).v);
  }
  alignas(32) double sr[4], si[4];
  _mm256_store_pd(sr, acc_r);
  _mm256_store_pd(si, acc_i);
  for (; l < n; ++l) {
    sr[l & 3] += a_re[l] * b_re[l] - a_im[l] * b_im[l];
    si[l & 3] += a_re[l] * b_im[l] + a_im[l] * b_re[l];
  }
  out[0] = (sr[0] + sr[1]) + (sr[2] + sr[3]);
  out[1] = (si[0] + si[1]) + (si[2] + si[3]);
}

}  // namespace

const KernelTable& avx2_table() noexcept {
  static const KernelTable table{complex_gaussian, von_mises_phasors, align_phases, cascade_sum,
                                 product_sum};
  return table;
}

}  // namespace risssk::kernels::detail
