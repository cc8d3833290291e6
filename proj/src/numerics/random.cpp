#include <cmath>
#include <numbers>
#include <stdexcept>

#include "risssk/numerics.hpp"

namespace risssk::numerics {

kernels::Block RngStream::next_block() noexcept {
  return kernels::stream_block(cursor_.key, cursor_.stream, cursor_.block++);
}

std::uint64_t RngStream::next_u64() noexcept {
  const kernels::Block b = next_block();
  return (static_cast<std::uint64_t>(b[1]) << 32) | b[0];
}

double RngStream::uniform() noexcept { return kernels::block_uniform(next_block()); }

void RngStream::complex_gaussian(double variance, std::span<double> re, std::span<double> im) {
  if (!(variance > 0.0)) throw std::invalid_argument("complex_gaussian: variance must be > 0");
  kernels::complex_gaussian(cursor_, std::sqrt(0.5 * variance), re, im);
}

void RngStream::von_mises_phasors(double kappa, std::span<double> cos_out,
                                  std::span<double> sin_out) {
  kernels::von_mises_phasors(cursor_, kappa, cos_out, sin_out);
}

Complex sample_complex_gaussian(RngStream& rng, double variance) {
  double re = 0.0, im = 0.0;
  rng.complex_gaussian(variance, {&re, 1}, {&im, 1});
  return {re, im};
}

double sample_von_mises(RngStream& rng, double kappa) {
  double c = 1.0, s = 0.0;
  rng.von_mises_phasors(kappa, {&c, 1}, {&s, 1});
  const double angle = std::atan2(s, c);
  return angle <= -std::numbers::pi ? std::numbers::pi : angle;
}

}  // namespace risssk::numerics
