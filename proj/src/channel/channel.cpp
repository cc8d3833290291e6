#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "risssk/channel.hpp"

namespace risssk {

std::string_view to_string(SchemeKind scheme) noexcept {
  switch (scheme) {
    case SchemeKind::intelligent_ris_ssk: return "intelligent";
    case SchemeKind::blind_ris_ssk: return "blind";
    case SchemeKind::traditional_ssk: return "traditional";
  }
  return "?";
}

std::optional<SchemeKind> parse_scheme(std::string_view name) noexcept {
  if (name == "intelligent" || name == "intelligent_ris_ssk") return SchemeKind::intelligent_ris_ssk;
  if (name == "blind" || name == "blind_ris_ssk") return SchemeKind::blind_ris_ssk;
  if (name == "traditional" || name == "traditional_ssk") return SchemeKind::traditional_ssk;
  return std::nullopt;
}

}  // namespace risssk

namespace risssk::channel {

namespace {

double angle_of(double re, double im) noexcept {
  // arg(z) with z = m e^{-j a}  ->  a = -arg(z), folded into (-pi, pi]
  double a = -std::atan2(im, re);
  if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

void check_dims(std::size_t n, std::size_t nt, std::size_t nr) {
  if (n < 1) throw std::invalid_argument("reflector count N must be >= 1");
  if (nt < 2) throw std::invalid_argument("transmit antenna count N_t must be >= 2");
  if (nr < 1) throw std::invalid_argument("receive antenna count N_r must be >= 1");
}

void check_variance(double variance) {
  if (!(variance > 0.0) || !std::isfinite(variance)) {
    throw std::invalid_argument("channel variance must be positive and finite");
  }
}

}  // namespace

ChannelState::ChannelState(std::size_t reflectors, std::size_t tx_antennas,
                           std::size_t rx_antennas)
    : reflectors_(reflectors),
      tx_(tx_antennas),
      rx_(rx_antennas),
      h_re_(reflectors * tx_antennas),
      h_im_(reflectors * tx_antennas),
      g_re_(reflectors * rx_antennas),
      g_im_(reflectors * rx_antennas) {}

Complex ChannelState::h(std::size_t l, std::size_t i) const noexcept {
  return {h_re_[i * reflectors_ + l], h_im_[i * reflectors_ + l]};
}
Complex ChannelState::g(std::size_t l, std::size_t r) const noexcept {
  return {g_re_[r * reflectors_ + l], g_im_[r * reflectors_ + l]};
}
void ChannelState::set_h(std::size_t l, std::size_t i, Complex value) noexcept {
  h_re_[i * reflectors_ + l] = value.real();
  h_im_[i * reflectors_ + l] = value.imag();
}
void ChannelState::set_g(std::size_t l, std::size_t r, Complex value) noexcept {
  g_re_[r * reflectors_ + l] = value.real();
  g_im_[r * reflectors_ + l] = value.imag();
}

double ChannelState::alpha(std::size_t l, std::size_t i) const noexcept { return std::abs(h(l, i)); }
double ChannelState::theta(std::size_t l, std::size_t i) const noexcept {
  const Complex z = h(l, i);
  return angle_of(z.real(), z.imag());
}
double ChannelState::beta(std::size_t l, std::size_t r) const noexcept { return std::abs(g(l, r)); }
double ChannelState::psi(std::size_t l, std::size_t r) const noexcept {
  const Complex z = g(l, r);
  return angle_of(z.real(), z.imag());
}

ChannelState draw_channel(numerics::RngStream& rng, std::size_t reflectors,
                          std::size_t tx_antennas, std::size_t rx_antennas, double variance) {
  check_dims(reflectors, tx_antennas, rx_antennas);
  ChannelState state(reflectors, tx_antennas, rx_antennas);
  redraw_channel(rng, variance, state);
  return state;
}

void redraw_channel(numerics::RngStream& rng, double variance, ChannelState& state) {
  check_variance(variance);
  for (std::size_t i = 0; i < state.tx_antennas(); ++i) {
    rng.complex_gaussian(variance, state.h_re(i), state.h_im(i));
  }
  for (std::size_t r = 0; r < state.rx_antennas(); ++r) {
    rng.complex_gaussian(variance, state.g_re(r), state.g_im(r));
  }
}

DirectChannel::DirectChannel(std::size_t tx_antennas, std::size_t rx_antennas)
    : tx_(tx_antennas),
      rx_(rx_antennas),
      re_(tx_antennas * rx_antennas),
      im_(tx_antennas * rx_antennas) {}

DirectChannel draw_direct_channel(numerics::RngStream& rng, std::size_t tx_antennas,
                                  std::size_t rx_antennas, double variance) {
  check_dims(1, tx_antennas, rx_antennas);
  DirectChannel state(tx_antennas, rx_antennas);
  redraw_direct_channel(rng, variance, state);
  return state;
}

void redraw_direct_channel(numerics::RngStream& rng, double variance, DirectChannel& state) {
  check_variance(variance);
  rng.complex_gaussian(variance, state.re(), state.im());
}

LinkBudget make_link_budget(double carrier_freq_hz, double d1_m, double d2_m,
                            std::size_t reflectors, PathLossMode mode) {
  LinkBudget b;
  b.carrier_freq_hz = carrier_freq_hz;
  b.wavelength_m = kSpeedOfLight / carrier_freq_hz;
  b.d1_m = d1_m;
  b.d2_m = d2_m;
  b.d_m = d1_m + d2_m;
  b.reflectors = reflectors;
  b.element_spacing_m = b.wavelength_m / 2.0;
  b.mode = mode;
  return b;
}

void validate(const LinkBudget& b) {
  auto positive = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
      throw std::invalid_argument(std::string(what) + " must be positive and finite");
    }
  };
  positive(b.carrier_freq_hz, "carrier frequency");
  positive(b.wavelength_m, "wavelength");
  positive(b.d1_m, "d1");
  positive(b.d2_m, "d2");
  positive(b.d_m, "d");
  positive(b.element_spacing_m, "element spacing");
  const double slack = 1e-9 * b.d_m;
  if (b.d_m + slack < b.d1_m || b.d_m + slack < b.d2_m) {
    throw std::invalid_argument("total distance d must not be shorter than d1 or d2");
  }
}

double far_field_boundary(const LinkBudget& b) {
  validate(b);
  const double area = static_cast<double>(b.reflectors) * b.element_spacing_m * b.element_spacing_m;
  return 2.0 * area / b.wavelength_m;
}

namespace {

double free_space_gain(const LinkBudget& b) {
  const double r = b.wavelength_m / (4.0 * std::numbers::pi * b.d_m);
  return r * r;
}

}  // namespace

double path_loss_variance(const LinkBudget& b, SchemeKind scheme) {
  validate(b);
  const double base = free_space_gain(b);
  if (b.mode == PathLossMode::physical || scheme == SchemeKind::traditional_ssk) return base;
  const double n = static_cast<double>(b.reflectors);
  return n * n * base;
}

double received_power_ratio(const LinkBudget& b, bool include_direct) {
  validate(b);
  const double n = static_cast<double>(b.reflectors) + (include_direct ? 1.0 : 0.0);
  return n * n * free_space_gain(b);
}

LinkBudgetReport describe(const LinkBudget& b) {
  validate(b);
  LinkBudgetReport r{};
  r.wavelength_m = b.wavelength_m;
  r.ris_area_m2 = static_cast<double>(b.reflectors) * b.element_spacing_m * b.element_spacing_m;
  r.far_field_boundary_m = far_field_boundary(b);
  r.tx_in_far_field = b.d1_m > r.far_field_boundary_m;
  r.rx_in_far_field = b.d2_m > r.far_field_boundary_m;
  r.near_field_distance_sq = (b.d1_m + b.d2_m) * (b.d1_m + b.d2_m);
  r.far_field_distance_sq = (b.d1_m * b.d2_m) * (b.d1_m * b.d2_m);
  r.variance_ris = path_loss_variance(b, SchemeKind::intelligent_ris_ssk);
  r.variance_traditional = path_loss_variance(b, SchemeKind::traditional_ssk);
  return r;
}

std::string_view to_string(PathLossMode mode) noexcept {
  return mode == PathLossMode::physical ? "physical" : "literal_paper";
}

std::optional<PathLossMode> parse_path_loss_mode(std::string_view name) noexcept {
  if (name == "literal_paper" || name == "literal") return PathLossMode::literal_paper;
  if (name == "physical") return PathLossMode::physical;
  return std::nullopt;
}

}  // namespace risssk::channel
