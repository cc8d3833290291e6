#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "risssk/channel.hpp"
#include "risssk/numerics.hpp"
#include "risssk/scheme.hpp"

namespace risssk::link {

using channel::ChannelState;
using channel::DirectChannel;
using numerics::Complex;
using numerics::RngStream;

/// log2(N_t); throws std::invalid_argument unless N_t is a power of two >= 2.
std::size_t bits_per_symbol(std::size_t tx_antennas);

struct TxSymbol {
  std::size_t index = 0;
  std::vector<std::uint8_t> bits;  // most significant first
};

/// Natural-binary bits -> antenna index. Throws on a length mismatch or a
/// bit value other than 0/1.
TxSymbol map_bits(std::span<const std::uint8_t> bits, std::size_t tx_antennas);
std::vector<std::uint8_t> unmap_bits(std::size_t index, std::size_t tx_antennas);

/// Bit errors between the labels of two antenna indices.
inline unsigned bit_errors(std::size_t sent, std::size_t detected) noexcept {
  return static_cast<unsigned>(__builtin_popcountll(sent ^ detected));
}

struct PhaseErrorModel {
  double kappa = std::numeric_limits<double>::infinity();
  bool enabled = false;

  static PhaseErrorModel none() noexcept { return {}; }
  static PhaseErrorModel von_mises(double kappa) noexcept { return {kappa, true}; }
};

/// RIS reflection phasors u_l = e^{j phi_l}.
class PhaseProfile {
 public:
  PhaseProfile() = default;
  explicit PhaseProfile(std::size_t reflectors) : re_(reflectors, 1.0), im_(reflectors, 0.0) {}

  std::size_t size() const noexcept { return re_.size(); }
  std::span<const double> re() const noexcept { return re_; }
  std::span<const double> im() const noexcept { return im_; }
  std::span<double> re() noexcept { return re_; }
  std::span<double> im() noexcept { return im_; }
  Complex phasor(std::size_t l) const noexcept { return {re_[l], im_[l]}; }
  /// phi_l in (-pi, pi].
  double angle(std::size_t l) const noexcept;

 private:
  std::vector<double> re_, im_;
};

/// Reusable buffers for the von Mises draws of one trial.
struct PhaseScratch {
  std::vector<double> err_cos, err_sin;
};

/// phi_l = theta_{l,i} + psi_l (+ eps_l, eps_l ~ von Mises(0, kappa) when
/// enabled). Throws std::invalid_argument if N_r > 1.
PhaseProfile intelligent_phases(const ChannelState& ch, std::size_t antenna,
                                const PhaseErrorModel& err, RngStream& rng);
void intelligent_phases_into(const ChannelState& ch, std::size_t antenna,
                             const PhaseErrorModel& err, RngStream& rng, PhaseScratch& scratch,
                             PhaseProfile& out);

/// All-zero phases.
PhaseProfile blind_phases(std::size_t reflectors);

/// y_r = sqrt(E) sum_l h_{l,i} u_l g_{l,r} + n_r, n_r ~ CN(0, N0).
/// N0 = 0 gives the noiseless signal and draws nothing.
std::vector<Complex> synthesize_rx(const ChannelState& ch, const PhaseProfile& phases,
                                   std::size_t antenna, double energy, RngStream& rng,
                                   double noise_density);
void synthesize_rx_into(const ChannelState& ch, const PhaseProfile& phases, std::size_t antenna,
                        double energy, RngStream& rng, double noise_density,
                        std::span<Complex> y);

/// y_r = sqrt(E) h^dir_{i,r} + n_r.
void synthesize_direct_into(const DirectChannel& ch, std::size_t antenna, double energy,
                            RngStream& rng, double noise_density, std::span<Complex> y);

/// refs[q * N_r + r] = sum_l h_{l,q} u_l g_{l,r}.
void cascaded_references(const ChannelState& ch, const PhaseProfile& phases,
                         std::span<Complex> refs);

/// argmin_q sum_r |y_r - sqrt(E) refs[q * N_r + r]|^2, lowest index on ties.
std::size_t ml_decide(std::span<const Complex> y, std::span<const Complex> refs,
                      std::size_t candidates, double energy);

/// Single-Rx detector for intelligent phases: each candidate is compared
/// against its cascade through the applied phase profile.
std::size_t detect_intelligent(Complex y, const ChannelState& ch, const PhaseProfile& phases,
                               double energy);
std::size_t detect_blind(std::span<const Complex> y, const ChannelState& ch, double energy);
std::size_t detect_traditional(std::span<const Complex> y, const DirectChannel& ch,
                               double energy);

}  // namespace risssk::link
