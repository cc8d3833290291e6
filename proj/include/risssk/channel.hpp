#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <span>
#include <vector>

#include "risssk/numerics.hpp"
#include "risssk/scheme.hpp"

namespace risssk::channel {

using numerics::Complex;

/// One Rayleigh fading realization of the two RIS hops: h_{l,i} from Tx
/// antenna i to reflector l, and g_{l,r} from reflector l to Rx antenna r.
///
/// Coefficients are stored per antenna as contiguous real/imaginary arrays
/// over the reflectors. The polar accessors use the convention
/// h = alpha e^{-j theta} and g = beta e^{-j psi}, angles in (-pi, pi].
class ChannelState {
 public:
  ChannelState() = default;
  ChannelState(std::size_t reflectors, std::size_t tx_antennas, std::size_t rx_antennas);

  std::size_t reflectors() const noexcept { return reflectors_; }
  std::size_t tx_antennas() const noexcept { return tx_; }
  std::size_t rx_antennas() const noexcept { return rx_; }

  std::span<const double> h_re(std::size_t i) const noexcept { return row(h_re_, i); }
  std::span<const double> h_im(std::size_t i) const noexcept { return row(h_im_, i); }
  std::span<const double> g_re(std::size_t r) const noexcept { return row(g_re_, r); }
  std::span<const double> g_im(std::size_t r) const noexcept { return row(g_im_, r); }
  std::span<double> h_re(std::size_t i) noexcept { return row(h_re_, i); }
  std::span<double> h_im(std::size_t i) noexcept { return row(h_im_, i); }
  std::span<double> g_re(std::size_t r) noexcept { return row(g_re_, r); }
  std::span<double> g_im(std::size_t r) noexcept { return row(g_im_, r); }

  Complex h(std::size_t l, std::size_t i) const noexcept;
  Complex g(std::size_t l, std::size_t r = 0) const noexcept;
  void set_h(std::size_t l, std::size_t i, Complex value) noexcept;
  void set_g(std::size_t l, std::size_t r, Complex value) noexcept;

  double alpha(std::size_t l, std::size_t i) const noexcept;
  double theta(std::size_t l, std::size_t i) const noexcept;
  double beta(std::size_t l, std::size_t r = 0) const noexcept;
  double psi(std::size_t l, std::size_t r = 0) const noexcept;

  bool operator==(const ChannelState&) const = default;

 private:
  std::span<const double> row(const std::vector<double>& v, std::size_t k) const noexcept {
    return {v.data() + k * reflectors_, reflectors_};
  }
  std::span<double> row(std::vector<double>& v, std::size_t k) noexcept {
    return {v.data() + k * reflectors_, reflectors_};
  }

  std::size_t reflectors_ = 0, tx_ = 0, rx_ = 0;
  std::vector<double> h_re_, h_im_, g_re_, g_im_;
};

/// Draws all N*N_t + N*N_r coefficients i.i.d. CN(0, variance): the h rows
/// antenna by antenna, then the g rows. Throws std::invalid_argument on
/// N < 1, N_t < 2, N_r < 1 or variance <= 0.
ChannelState draw_channel(numerics::RngStream& rng, std::size_t reflectors,
                          std::size_t tx_antennas, std::size_t rx_antennas, double variance);
/// Same draw, reusing the storage of `state` (dimensions taken from it).
void redraw_channel(numerics::RngStream& rng, double variance, ChannelState& state);

/// Direct Tx->Rx channel of the conventional SSK baseline (no RIS).
class DirectChannel {
 public:
  DirectChannel() = default;
  DirectChannel(std::size_t tx_antennas, std::size_t rx_antennas);

  std::size_t tx_antennas() const noexcept { return tx_; }
  std::size_t rx_antennas() const noexcept { return rx_; }
  Complex h(std::size_t i, std::size_t r) const noexcept {
    return {re_[i * rx_ + r], im_[i * rx_ + r]};
  }
  std::span<double> re() noexcept { return re_; }
  std::span<double> im() noexcept { return im_; }

 private:
  std::size_t tx_ = 0, rx_ = 0;
  std::vector<double> re_, im_;
};

DirectChannel draw_direct_channel(numerics::RngStream& rng, std::size_t tx_antennas,
                                  std::size_t rx_antennas, double variance);
void redraw_direct_channel(numerics::RngStream& rng, double variance, DirectChannel& state);

inline constexpr double kSpeedOfLight = 299792458.0;

enum class PathLossMode {
  /// RIS route gets N^2 (lambda / 4 pi d)^2 on top of the coherent sum.
  literal_paper,
  /// Both schemes get (lambda / 4 pi d)^2; array gain comes from the sum.
  physical,
};

/// Carrier and geometry of a path-loss experiment.
struct LinkBudget {
  double carrier_freq_hz = 28e9;
  double wavelength_m = kSpeedOfLight / 28e9;
  double d1_m = 0.0;  // Tx to RIS centre
  double d2_m = 0.0;  // RIS centre to Rx
  double d_m = 0.0;   // total Tx to Rx distance, ~ d1 + d2
  std::size_t reflectors = 0;
  double element_spacing_m = 0.0;
  PathLossMode mode = PathLossMode::literal_paper;
  bool operator==(const LinkBudget&) const = default;
};

/// Budget with lambda = c / f, element spacing lambda / 2 and d = d1 + d2.
LinkBudget make_link_budget(double carrier_freq_hz, double d1_m, double d2_m,
                            std::size_t reflectors, PathLossMode mode);

/// Throws std::invalid_argument on non-positive distances or wavelength, or
/// when d is shorter than either hop.
void validate(const LinkBudget& budget);

/// 2A / lambda with A = N * spacing^2 (N lambda / 2 at half-wavelength spacing).
double far_field_boundary(const LinkBudget& budget);

/// Large-scale power scaling sigma^2 of one end-to-end path for `scheme`.
double path_loss_variance(const LinkBudget& budget, SchemeKind scheme);

/// P_r / P_t of the coherent RIS link, with or without the direct path.
double received_power_ratio(const LinkBudget& budget, bool include_direct);

struct LinkBudgetReport {
  double wavelength_m;
  double ris_area_m2;
  double far_field_boundary_m;
  bool tx_in_far_field;
  bool rx_in_far_field;
  double near_field_distance_sq;  // (d1 + d2)^2, specular near-field law
  double far_field_distance_sq;   // (d1 d2)^2, far-field product law
  double variance_ris;
  double variance_traditional;
};

LinkBudgetReport describe(const LinkBudget& budget);

std::string_view to_string(PathLossMode mode) noexcept;
std::optional<PathLossMode> parse_path_loss_mode(std::string_view name) noexcept;

}  // namespace risssk::channel
