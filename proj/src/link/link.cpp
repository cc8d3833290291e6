#include <bit>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "risssk/link.hpp"

namespace risssk::link {

std::size_t bits_per_symbol(std::size_t tx_antennas) {
  if (tx_antennas < 2 || !std::has_single_bit(tx_antennas)) {
    throw std::invalid_argument("N_t must be a power of two >= 2");
  }
  return static_cast<std::size_t>(std::countr_zero(tx_antennas));
}

TxSymbol map_bits(std::span<const std::uint8_t> bits, std::size_t tx_antennas) {
  const std::size_t m = bits_per_symbol(tx_antennas);
  if (bits.size() != m) {
    throw std::invalid_argument("expected " + std::to_string(m) + " bits per symbol, got " +
                                std::to_string(bits.size()));
  }
  TxSymbol sym;
  for (std::uint8_t b : bits) {
    if (b > 1) throw std::invalid_argument("bit values must be 0 or 1");
    sym.index = (sym.index << 1) | b;
  }
  sym.bits.assign(bits.begin(), bits.end());
  return sym;
}

std::vector<std::uint8_t> unmap_bits(std::size_t index, std::size_t tx_antennas) {
  const std::size_t m = bits_per_symbol(tx_antennas);
  if (index >= tx_antennas) throw std::invalid_argument("antenna index out of range");
  std::vector<std::uint8_t> bits(m);
  for (std::size_t k = 0; k < m; ++k) bits[k] = (index >> (m - 1 - k)) & 1u;
  return bits;
}

double PhaseProfile::angle(std::size_t l) const noexcept {
  double a = std::atan2(im_[l], re_[l]);
  if (a <= -std::numbers::pi) a += 2.0 * std::numbers::pi;
  return a;
}

namespace {

bool has_errors(const PhaseErrorModel& err) noexcept {
  return err.enabled && !std::isinf(err.kappa);
}

}  // namespace

PhaseProfile intelligent_phases(const ChannelState& ch, std::size_t antenna,
                                const PhaseErrorModel& err, RngStream& rng) {
  PhaseScratch scratch;
  PhaseProfile out(ch.reflectors());
  intelligent_phases_into(ch, antenna, err, rng, scratch, out);
  return out;
}

void intelligent_phases_into(const ChannelState& ch, std::size_t antenna,
                             const PhaseErrorModel& err, RngStream& rng, PhaseScratch& scratch,
                             PhaseProfile& out) {
  if (ch.rx_antennas() != 1) {
    throw std::invalid_argument("intelligent RIS-SSK supports a single receive antenna only");
  }
  if (antenna >= ch.tx_antennas()) throw std::invalid_argument("antenna index out of range");
  const std::size_t n = ch.reflectors();
  if (out.size() != n) out = PhaseProfile(n);
  if (has_errors(err)) {
    scratch.err_cos.resize(n);
    scratch.err_sin.resize(n);
    rng.von_mises_phasors(err.kappa, scratch.err_cos, scratch.err_sin);
    kernels::align_phases(ch.h_re(antenna), ch.h_im(antenna), ch.g_re(0), ch.g_im(0),
                          scratch.err_cos, scratch.err_sin, out.re(), out.im());
  } else {
    kernels::align_phases(ch.h_re(antenna), ch.h_im(antenna), ch.g_re(0), ch.g_im(0), {}, {},
                          out.re(), out.im());
  }
}

PhaseProfile blind_phases(std::size_t reflectors) { return PhaseProfile(reflectors); }

namespace {

void add_noise(RngStream& rng, double noise_density, std::span<Complex> y) {
  if (noise_density == 0.0) return;
  double re[8], im[8];
  for (std::size_t r0 = 0; r0 < y.size(); r0 += 8) {
    const std::size_t m = std::min<std::size_t>(8, y.size() - r0);
    rng.complex_gaussian(noise_density, {re, m}, {im, m});
    for (std::size_t k = 0; k < m; ++k) y[r0 + k] += Complex(re[k], im[k]);
  }
}

void check_noise(double energy, double noise_density) {
  if (!(energy >= 0.0)) throw std::invalid_argument("symbol energy must be >= 0");
  if (!(noise_density >= 0.0)) throw std::invalid_argument("noise density must be >= 0");
}

}  // namespace

std::vector<Complex> synthesize_rx(const ChannelState& ch, const PhaseProfile& phases,
                                   std::size_t antenna, double energy, RngStream& rng,
                                   double noise_density) {
  std::vector<Complex> y(ch.rx_antennas());
  synthesize_rx_into(ch, phases, antenna, energy, rng, noise_density, y);
  return y;
}

void synthesize_rx_into(const ChannelState& ch, const PhaseProfile& phases, std::size_t antenna,
                        double energy, RngStream& rng, double noise_density,
                        std::span<Complex> y) {
  check_noise(energy, noise_density);
  if (phases.size() != ch.reflectors() || y.size() != ch.rx_antennas() ||
      antenna >= ch.tx_antennas()) {
    throw std::invalid_argument("synthesize_rx: dimension mismatch");
  }
  const double amp = std::sqrt(energy);
  for (std::size_t r = 0; r < ch.rx_antennas(); ++r) {
    y[r] = amp * kernels::cascade_sum(ch.h_re(antenna), ch.h_im(antenna), phases.re(),
                                      phases.im(), ch.g_re(r), ch.g_im(r));
  }
  add_noise(rng, noise_density, y);
}

void synthesize_direct_into(const DirectChannel& ch, std::size_t antenna, double energy,
                            RngStream& rng, double noise_density, std::span<Complex> y) {
  check_noise(energy, noise_density);
  if (y.size() != ch.rx_antennas() || antenna >= ch.tx_antennas()) {
    throw std::invalid_argument("synthesize_direct: dimension mismatch");
  }
  const double amp = std::sqrt(energy);
  for (std::size_t r = 0; r < ch.rx_antennas(); ++r) y[r] = amp * ch.h(antenna, r);
  add_noise(rng, noise_density, y);
}

void cascaded_references(const ChannelState& ch, const PhaseProfile& phases,
                         std::span<Complex> refs) {
  const std::size_t nr = ch.rx_antennas();
  if (phases.size() != ch.reflectors() || refs.size() != ch.tx_antennas() * nr) {
    throw std::invalid_argument("cascaded_references: dimension mismatch");
  }
  for (std::size_t q = 0; q < ch.tx_antennas(); ++q) {
    for (std::size_t r = 0; r < nr; ++r) {
      refs[q * nr + r] = kernels::cascade_sum(ch.h_re(q), ch.h_im(q), phases.re(), phases.im(),
                                              ch.g_re(r), ch.g_im(r));
    }
  }
}

std::size_t ml_decide(std::span<const Complex> y, std::span<const Complex> refs,
                      std::size_t candidates, double energy) {
  const std::size_t nr = y.size();
  if (refs.size() != candidates * nr || candidates == 0) {
    throw std::invalid_argument("ml_decide: dimension mismatch");
  }
  const double amp = std::sqrt(energy);
  std::size_t best = 0;
  double best_metric = std::numeric_limits<double>::infinity();
  for (std::size_t q = 0; q < candidates; ++q) {
    double metric = 0.0;
    for (std::size_t r = 0; r < nr; ++r) metric += std::norm(y[r] - amp * refs[q * nr + r]);
    if (metric < best_metric) {
      best_metric = metric;
      best = q;
    }
  }
  return best;
}

std::size_t detect_intelligent(Complex y, const ChannelState& ch, const PhaseProfile& phases,
                               double energy) {
  if (ch.rx_antennas() != 1) {
    throw std::invalid_argument("intelligent RIS-SSK supports a single receive antenna only");
  }
  std::vector<Complex> refs(ch.tx_antennas());
  cascaded_references(ch, phases, refs);
  return ml_decide({&y, 1}, refs, ch.tx_antennas(), energy);
}

std::size_t detect_blind(std::span<const Complex> y, const ChannelState& ch, double energy) {
  const std::size_t nr = ch.rx_antennas();
  if (y.size() != nr) throw std::invalid_argument("detect_blind: dimension mismatch");
  std::vector<Complex> refs(ch.tx_antennas() * nr);
  for (std::size_t q = 0; q < ch.tx_antennas(); ++q) {
    for (std::size_t r = 0; r < nr; ++r) {
      refs[q * nr + r] = kernels::product_sum(ch.h_re(q), ch.h_im(q), ch.g_re(r), ch.g_im(r));
    }
  }
  return ml_decide(y, refs, ch.tx_antennas(), energy);
}

std::size_t detect_traditional(std::span<const Complex> y, const DirectChannel& ch,
                               double energy) {
  const std::size_t nr = ch.rx_antennas();
  if (y.size() != nr) throw std::invalid_argument("detect_traditional: dimension mismatch");
  std::vector<Complex> refs(ch.tx_antennas() * nr);
  for (std::size_t q = 0; q < ch.tx_antennas(); ++q) {
    for (std::size_t r = 0; r < nr; ++r) refs[q * nr + r] = ch.h(q, r);
  }
  return ml_decide(y, refs, ch.tx_antennas(), energy);
}

}  // namespace risssk::link
