#pragma once

#include <cstddef>
#include <cstdint>

namespace risssk::kernels::detail {

inline constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
inline constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
inline constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
inline constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;
inline constexpr int kPhiloxRounds = 10;

enum class VonMisesMode { uniform, rejection, wrapped_normal };

struct VonMisesParams {
  VonMisesMode mode = VonMisesMode::uniform;
  double kappa = 0.0;
  double s = 0.0;            // rejection envelope parameter
  double normal_turns = 0.0; // 1 / (2 pi sqrt(kappa)) for the wrapped-normal limit
};

VonMisesParams make_von_mises_params(double kappa);

struct KernelTable {
  void (*complex_gaussian)(std::uint64_t key, std::uint64_t stream, std::uint64_t first_block,
                           double scale, double* re, double* im, std::size_t n);
  // Returns the number of blocks consumed.
  std::uint64_t (*von_mises_phasors)(std::uint64_t key, std::uint64_t stream,
                                     std::uint64_t first_block, const VonMisesParams& params,
                                     double* cos_out, double* sin_out, std::size_t n);
  void (*align_phases)(const double* h_re, const double* h_im, const double* g_re,
                       const double* g_im, const double* err_cos, const double* err_sin,
                       double* u_re, double* u_im, std::size_t n);
  void (*cascade_sum)(const double* h_re, const double* h_im, const double* u_re,
                      const double* u_im, const double* g_re, const double* g_im, std::size_t n,
                      double* out);
  void (*product_sum)(const double* a_re, const double* a_im, const double* b_re,
                      const double* b_im, std::size_t n, double* out);
};

const KernelTable& scalar_table() noexcept;
#if defined(RISSSK_HAVE_AVX2)
const KernelTable& avx2_table() noexcept;
#endif

}  // namespace risssk::kernels::detail
