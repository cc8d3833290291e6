#pragma once

// Data-parallel inner loops of the simulator with runtime ISA selection.
//
// Every kernel has a scalar reference and an AVX2 variant. The two produce
// bit-identical output: both evaluate the same operation sequence in the
// same order, and sums are accumulated in four interleaved partial sums
// (element l goes to partial l % 4) that are combined as (p0+p1)+(p2+p3).

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string_view>

namespace risssk::kernels {

enum class Isa { scalar, avx2 };

Isa active_isa() noexcept;
bool isa_supported(Isa isa) noexcept;
/// Throws std::invalid_argument when the host cannot execute `isa`.
void set_isa(Isa isa);
std::string_view isa_name(Isa isa) noexcept;

using Block = std::array<std::uint32_t, 4>;

/// Philox4x32-10 applied to `counter` under the 64-bit key split into two words.
Block philox4x32(Block counter, std::array<std::uint32_t, 2> key) noexcept;

/// Named position in a counter-based stream. (key, stream) identify the
/// stream; `block` is the index of the next unused 128-bit block.
struct StreamCursor {
  std::uint64_t key = 0;
  std::uint64_t stream = 0;
  std::uint64_t block = 0;
};

/// Block `block` of stream (key, stream); counter words are
/// {block lo, block hi, stream lo, stream hi}.
Block stream_block(std::uint64_t key, std::uint64_t stream, std::uint64_t block) noexcept;

/// Uniform in [0, 1) with 2^-52 resolution from the first 64 bits of a block.
double block_uniform(const Block& b) noexcept;

/// One block per element: Box-Muller on the block's two uniforms gives
/// (re, im) = scale * (z0, z1). Consumes re.size() blocks.
void complex_gaussian(StreamCursor& cursor, double scale, std::span<double> re,
                      std::span<double> im);

/// Unit phasors (cos e, sin e) of von Mises(0, kappa) angles e. One block per
/// rejection candidate; the cursor advances past the last candidate used.
void von_mises_phasors(StreamCursor& cursor, double kappa, std::span<double> cos_out,
                       std::span<double> sin_out);

/// u_l = conj(h_l) conj(g_l) / (|h_l| |g_l|), optionally rotated by the
/// phasor (err_cos_l, err_sin_l). Pass empty error spans for exact alignment.
void align_phases(std::span<const double> h_re, std::span<const double> h_im,
                  std::span<const double> g_re, std::span<const double> g_im,
                  std::span<const double> err_cos, std::span<const double> err_sin,
                  std::span<double> u_re, std::span<double> u_im);

/// sum_l h_l u_l g_l
std::complex<double> cascade_sum(std::span<const double> h_re, std::span<const double> h_im,
                                 std::span<const double> u_re, std::span<const double> u_im,
                                 std::span<const double> g_re, std::span<const double> g_im);

/// sum_l a_l b_l
std::complex<double> product_sum(std::span<const double> a_re, std::span<const double> a_im,
                                 std::span<const double> b_re, std::span<const double> b_im);

}  // namespace risssk::kernels
