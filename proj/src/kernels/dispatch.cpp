#include <atomic>
#include <bit>
#include <cmath>
#include <cstdlib>
#include <numbers>
#include <stdexcept>
#include <string>

#include "kernel_table.hpp"
#include "risssk/kernels.hpp"

namespace risssk::kernels {
namespace detail {

VonMisesParams make_von_mises_params(double kappa) {
  VonMisesParams p;
  p.kappa = kappa;
  if (!(kappa >= 1e-8)) {
    p.mode = VonMisesMode::uniform;
  } else if (kappa < 1e-5) {
    // second-order expansion of the envelope parameter around kappa = 0
    p.mode = VonMisesMode::rejection;
    p.s = 1.0 / kappa + kappa;
  } else if (kappa <= 1e6) {
    p.mode = VonMisesMode::rejection;
    const double r = 1.0 + std::sqrt(1.0 + 4.0 * kappa * kappa);
    const double rho = (r - std::sqrt(2.0 * r)) / (2.0 * kappa);
    p.s = (1.0 + rho * rho) / (2.0 * rho);
  } else {
    // von Mises(kappa) and N(0, 1/kappa) agree to O(1/kappa) here
    p.mode = VonMisesMode::wrapped_normal;
    p.normal_turns = 1.0 / (2.0 * std::numbers::pi * std::sqrt(kappa));
  }
  return p;
}

}  // namespace detail

namespace {

Isa detect_best() noexcept {
#if defined(RISSSK_HAVE_AVX2)
  if (__builtin_cpu_supports("avx2")) return Isa::avx2;
#endif
  return Isa::scalar;
}

Isa initial_isa() noexcept {
  Isa isa = detect_best();
  if (const char* env = std::getenv("RISSSK_ISA"); env != nullptr) {
    if (std::string(env) == "scalar") isa = Isa::scalar;
  }
  return isa;
}

std::atomic<Isa>& current() noexcept {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

const detail::KernelTable& table() noexcept {
#if defined(RISSSK_HAVE_AVX2)
  if (current().load(std::memory_order_relaxed) == Isa::avx2) return detail::avx2_table();
#endif
  return detail::scalar_table();
}

void require_same_size(std::size_t a, std::size_t b, const char* what) {
  if (a != b) throw std::invalid_argument(std::string(what) + ": span sizes differ");
}

}  // namespace

Isa active_isa() noexcept { return current().load(std::memory_order_relaxed); }

bool isa_supported(Isa isa) noexcept {
  if (isa == Isa::scalar) return true;
  return detect_best() == Isa::avx2;
}

void set_isa(Isa isa) {
  if (!isa_supported(isa)) {
    throw std::invalid_argument("ISA not supported on this host: " + std::string(isa_name(isa)));
  }
  current().store(isa, std::memory_order_relaxed);
}

std::string_view isa_name(Isa isa) noexcept { return isa == Isa::avx2 ? "avx2" : "scalar"; }

Block philox4x32(Block counter, std::array<std::uint32_t, 2> key) noexcept {
  for (int round = 0; round < detail::kPhiloxRounds; ++round) {
    if (round > 0) {
      key[0] += detail::kPhiloxW0;
      key[1] += detail::kPhiloxW1;
    }
    const std::uint64_t p0 = static_cast<std::uint64_t>(detail::kPhiloxM0) * counter[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(detail::kPhiloxM1) * counter[2];
    counter = {static_cast<std::uint32_t>(p1 >> 32) ^ counter[1] ^ key[0],
               static_cast<std::uint32_t>(p1),
               static_cast<std::uint32_t>(p0 >> 32) ^ counter[3] ^ key[1],
               static_cast<std::uint32_t>(p0)};
  }
  return counter;
}

Block stream_block(std::uint64_t key, std::uint64_t stream, std::uint64_t block) noexcept {
  return philox4x32({static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32),
                     static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)},
                    {static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32)});
}

double block_uniform(const Block& b) noexcept {
  const std::uint64_t bits = (static_cast<std::uint64_t>(b[1]) << 32) | b[0];
  return std::bit_cast<double>((bits >> 12) | 0x3FF0000000000000ull) - 1.0;
}

void complex_gaussian(StreamCursor& cursor, double scale, std::span<double> re,
                      std::span<double> im) {
  require_same_size(re.size(), im.size(), "complex_gaussian");
  table().complex_gaussian(cursor.key, cursor.stream, cursor.block, scale, re.data(), im.data(),
                           re.size());
  cursor.block += re.size();
}

void von_mises_phasors(StreamCursor& cursor, double kappa, std::span<double> cos_out,
                       std::span<double> sin_out) {
  require_same_size(cos_out.size(), sin_out.size(), "von_mises_phasors");
  if (!(kappa >= 0.0)) throw std::invalid_argument("von Mises concentration must be >= 0");
  const detail::VonMisesParams params = detail::make_von_mises_params(kappa);
  cursor.block += table().von_mises_phasors(cursor.key, cursor.stream, cursor.block, params,
                                            cos_out.data(), sin_out.data(), cos_out.size());
}

void align_phases(std::span<const double> h_re, std::span<const double> h_im,
                  std::span<const double> g_re, std::span<const double> g_im,
                  std::span<const double> err_cos, std::span<const double> err_sin,
                  std::span<double> u_re, std::span<double> u_im) {
  const std::size_t n = h_re.size();
  require_same_size(n, h_im.size(), "align_phases");
  require_same_size(n, g_re.size(), "align_phases");
  require_same_size(n, g_im.size(), "align_phases");
  require_same_size(n, u_re.size(), "align_phases");
  require_same_size(n, u_im.size(), "align_phases");
  const bool with_error = !err_cos.empty();
  if (with_error) {
    require_same_size(n, err_cos.size(), "align_phases");
    require_same_size(n, err_sin.size(), "align_phases");
  }
  table().align_phases(h_re.data(), h_im.data(), g_re.data(), g_im.data(),
                       with_error ? err_cos.data() : nullptr,
                       with_error ? err_sin.data() : nullptr, u_re.data(), u_im.data(), n);
}

std::complex<double> cascade_sum(std::span<const double> h_re, std::span<const double> h_im,
                                 std::span<const double> u_re, std::span<const double> u_im,
                                 std::span<const double> g_re, std::span<const double> g_im) {
  const std::size_t n = h_re.size();
  require_same_size(n, h_im.size(), "cascade_sum");
  require_same_size(n, u_re.size(), "cascade_sum");
  require_same_size(n, u_im.size(), "cascade_sum");
  require_same_size(n, g_re.size(), "cascade_sum");
  require_same_size(n, g_im.size(), "cascade_sum");
  double out[2];
  table().cascade_sum(h_re.data(), h_im.data(), u_re.data(), u_im.data(), g_re.data(),
                      g_im.data(), n, out);
  return {out[0], out[1]};
}

std::complex<double> product_sum(std::span<const double> a_re, std::span<const double> a_im,
                                 std::span<const double> b_re, std::span<const double> b_im) {
  const std::size_t n = a_re.size();
  require_same_size(n, a_im.size(), "product_sum");
  require_same_size(n, b_re.size(), "product_sum");
  require_same_size(n, b_im.size(), "product_sum");
  double out[2];
  table().product_sum(a_re.data(), a_im.data(), b_re.data(), b_im.data(), n, out);
  return {out[0], out[1]};
}

}  // namespace risssk::kernels
