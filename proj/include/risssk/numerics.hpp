#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "risssk/kernels.hpp"

namespace risssk::numerics {

using Complex = std::complex<double>;

/// Gaussian tail probability Q(x) = P(Z > x), evaluated through erfc so
/// that deep tails keep full relative accuracy until underflow.
double q_function(double x) noexcept;

/// Thrown when Gauss-Legendre node doubling hits the node cap first.
class NonConvergence : public std::runtime_error {
 public:
  explicit NonConvergence(const std::string& what) : std::runtime_error(what) {}
};

struct QuadratureOptions {
  double rel_tol = 1e-9;
  std::size_t initial_nodes = 64;
  std::size_t max_nodes = 4096;
};

/// Gauss-Legendre quadrature of f over [a, b], doubling the node count until
/// two successive estimates agree to rel_tol. f is evaluated only at interior
/// nodes, never at a or b.
double integrate(const std::function<double(double)>& f, double a, double b,
                 const QuadratureOptions& options = {});
double integrate(const std::function<double(double)>& f, double a, double b, double rel_tol);

/// Nodes and weights of the n-point Gauss-Legendre rule on [-1, 1].
struct GaussLegendreRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};
const GaussLegendreRule& gauss_legendre(std::size_t n);

/// Counter-based random stream (Philox4x32-10). Equal (seed, stream_id) give
/// identical sequences; different stream ids are independent streams, so a
/// stream can be handed to each Monte Carlo trial without coordination.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id) noexcept
      : cursor_{seed, stream_id, 0} {}

  std::uint64_t seed() const noexcept { return cursor_.key; }
  std::uint64_t stream_id() const noexcept { return cursor_.stream; }
  /// Number of 128-bit blocks consumed so far.
  std::uint64_t position() const noexcept { return cursor_.block; }

  RngStream fork(std::uint64_t stream_id) const noexcept { return {cursor_.key, stream_id}; }

  kernels::Block next_block() noexcept;
  std::uint64_t next_u64() noexcept;
  /// Uniform on [0, 1); consumes one block.
  double uniform() noexcept;

  /// Fills re/im with i.i.d. CN(0, variance) samples, one block per sample.
  void complex_gaussian(double variance, std::span<double> re, std::span<double> im);
  /// Fills (cos e, sin e) for i.i.d. von Mises(0, kappa) angles e.
  void von_mises_phasors(double kappa, std::span<double> cos_out, std::span<double> sin_out);

 private:
  kernels::StreamCursor cursor_;
};

/// Zero-mean circularly-symmetric complex Gaussian with E|z|^2 = variance.
Complex sample_complex_gaussian(RngStream& rng, double variance);

/// Zero-mean von Mises angle in (-pi, pi]; kappa = 0 is uniform.
double sample_von_mises(RngStream& rng, double kappa);

}  // namespace risssk::numerics
