#include <bit>
#include <cmath>
#include <cstdint>

#include "kernel_table.hpp"

namespace risssk::kernels::detail {
namespace {

inline double vsqrt(double x) { return std::sqrt(x); }
inline double vround(double x) { return std::nearbyint(x); }
inline double vfloor(double x) { return std::floor(x); }
inline double select(bool m, double a, double b) { return m ? a : b; }
inline void split_exponent(double x, double& m, double& e);

#include "simd_math.hpp"

inline void split_exponent(double x, double& m, double& e) {
  const auto bits = std::bit_cast<std::uint64_t>(x);
  const double biased = static_cast<double>(bits >> 52);
  const double mant = std::bit_cast<double>((bits & kMantissaMask) | kOneBits);
  const bool big = mant > kSqrt2;
  m = big ? mant * 0.5 : mant;
  e = (biased + (big ? 1.0 : 0.0)) - 1023.0;
}

struct Words {
  std::uint32_t w[4];
};

inline Words philox(std::uint64_t key, std::uint64_t stream, std::uint64_t block) {
  std::uint32_t c0 = static_cast<std::uint32_t>(block);
  std::uint32_t c1 = static_cast<std::uint32_t>(block >> 32);
  std::uint32_t c2 = static_cast<std::uint32_t>(stream);
  std::uint32_t c3 = static_cast<std::uint32_t>(stream >> 32);
  std::uint32_t k0 = static_cast<std::uint32_t>(key);
  std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
  for (int round = 0; round < kPhiloxRounds; ++round) {
    if (round > 0) {
      k0 += kPhiloxW0;
      k1 += kPhiloxW1;
    }
    const std::uint64_t p0 = static_cast<std::uint64_t>(kPhiloxM0) * c0;
    const std::uint64_t p1 = static_cast<std::uint64_t>(kPhiloxM1) * c2;
    const std::uint32_t n0 = static_cast<std::uint32_t>(p1 >> 32) ^ c1 ^ k0;
    const std::uint32_t n1 = static_cast<std::uint32_t>(p1);
    const std::uint32_t n2 = static_cast<std::uint32_t>(p0 >> 32) ^ c3 ^ k1;
    const std::uint32_t n3 = static_cast<std::uint32_t>(p0);
    c0 = n0;
    c1 = n1;
    c2 = n2;
    c3 = n3;
  }
  return Words{{c0, c1, c2, c3}};
}

inline double unit_from_words(std::uint32_t lo, std::uint32_t hi) {
  const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
  return std::bit_cast<double>((bits >> 12) | kOneBits) - 1.0;
}

void complex_gaussian(std::uint64_t key, std::uint64_t stream, std::uint64_t first_block,
                      double scale, double* re, double* im, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) {
    const Words b = philox(key, stream, first_block + j);
    double z0, z1;
    box_muller(unit_from_words(b.w[0], b.w[1]), unit_from_words(b.w[2], b.w[3]), z0, z1);
    re[j] = z0 * scale;
    im[j] = z1 * scale;
  }
}

// Phasor for one candidate block; returns false when the candidate is rejected.
inline bool von_mises_one(const VonMisesParams& p, const Words& b, double& c, double& s) {
  const double u = unit_from_words(b.w[0], b.w[1]);
  const double v = unit_from_words(b.w[2], b.w[3]);
  switch (p.mode) {
    case VonMisesMode::uniform:
      sincos_turns(u - 0.5, s, c);
      return true;
    case VonMisesMode::wrapped_normal: {
      double z0, z1;
      box_muller(u, v, z0, z1);
      sincos_turns(z0 * p.normal_turns, s, c);
      return true;
    }
    case VonMisesMode::rejection:
      break;
  }
  double w;
  if (!von_mises_candidate(u, v, p.s, p.kappa, w)) return false;
  phasor_from_cosine(w, (b.w[0] & 1u) == 0u, c, s);
  return true;
}

std::uint64_t von_mises_phasors(std::uint64_t key, std::uint64_t stream,
                                std::uint64_t first_block, const VonMisesParams& params,
                                double* cos_out, double* sin_out, std::size_t n) {
  std::uint64_t used = 0;
  for (std::size_t filled = 0; filled < n; ++used) {
    const Words b = philox(key, stream, first_block + used);
    if (von_mises_one(params, b, cos_out[filled], sin_out[filled])) ++filled;
  }
  return used;
}

void align_phases(const double* h_re, const double* h_im, const double* g_re, const double* g_im,
                  const double* err_cos, const double* err_sin, double* u_re, double* u_im,
                  std::size_t n) {
  for (std::size_t l = 0; l < n; ++l) {
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
  double acc_re[4] = {0.0, 0.0, 0.0, 0.0};
  double acc_im[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t l = 0; l < n; ++l) {
    const double tr = h_re[l] * u_re[l] - h_im[l] * u_im[l];
    const double ti = h_re[l] * u_im[l] + h_im[l] * u_re[l];
    acc_re[l & 3] += tr * g_re[l] - ti * g_im[l];
    acc_im[l & 3] += tr * g_im[l] + ti * g_re[l];
  }
  out[0] = (acc_re[0] + acc_re[1]) + (acc_re[2] + acc_re[3]);
  out[1] = (acc_im[0] + acc_im[1]) + (acc_im[2] + acc_im[3]);
}

void product_sum(const double* a_re, const double* a_im, const double* b_re, const double* b_im,
                 std::size_t n, double* out) {
  double acc_re[4] = {0.0, 0.0, 0.0, 0.0};
  double acc_im[4] = {0.0, 0.0, 0.0, 0.0};
  for (std::size_t l = 0; l < n; ++l) {
    acc_re[l & 3] += a_re[l] * b_re[l] - a_im[l] * b_im[l];
    acc_im[l & 3] += a_re[l] * b_im[l] + a_im[l] * b_re[l];
  }
  out[0] = (acc_re[0] + acc_re[1]) + (acc_re[2] + acc_re[3]);
  out[1] = (acc_im[0] + acc_im[1]) + (acc_im[2] + acc_im[3]);
}

}  // namespace

const KernelTable& scalar_table() noexcept {
  static const KernelTable table{complex_gaussian, von_mises_phasors, align_phases, cascade_sum,
                                 product_sum};
  return table;
}

}  // namespace risssk::kernels::detail
