#include <gtest/gtest.h>

#include <cmath>

#include "risssk/analytics.hpp"
#include "risssk/link.hpp"

using namespace risssk;
using namespace risssk::link;

namespace {

ChannelState random_channel(std::uint64_t stream, std::size_t n, std::size_t nt, std::size_t nr) {
  numerics::RngStream rng(100, stream);
  return channel::draw_channel(rng, n, nt, nr, 1.0);
}

}  // namespace

TEST(BitMapping, NaturalBinary) {
  const std::vector<std::uint8_t> b00{0, 0}, b1{1}, b10{1, 0};
  EXPECT_EQ(map_bits(b00, 4).index, 0u);
  EXPECT_EQ(map_bits(b1, 2).index, 1u);
  EXPECT_EQ(map_bits(b10, 4).index, 2u);
  EXPECT_THROW(map_bits(b1, 4), std::invalid_argument);
  EXPECT_THROW(map_bits(b00, 3), std::invalid_argument);
}

TEST(BitMapping, RoundTrip) {
  for (std::size_t nt : {2u, 4u, 8u, 64u}) {
    for (std::size_t i = 0; i < nt; ++i) {
      const auto bits = unmap_bits(i, nt);
      EXPECT_EQ(bits.size(), bits_per_symbol(nt));
      EXPECT_EQ(map_bits(bits, nt).index, i);
    }
  }
  EXPECT_EQ(bit_errors(0b101, 0b011), 2u);
}

TEST(IntelligentPhases, ExactCancellation) {
  const ChannelState ch = random_channel(1, 32, 2, 1);
  numerics::RngStream rng(0, 0);
  for (std::size_t i = 0; i < 2; ++i) {
    const PhaseProfile p = intelligent_phases(ch, i, PhaseErrorModel::none(), rng);
    for (std::size_t l = 0; l < 32; ++l) {
      double residual = p.angle(l) - ch.theta(l, i) - ch.psi(l);
      residual = std::remainder(residual, 2.0 * std::numbers::pi);
      EXPECT_NEAR(residual, 0.0, 1e-12);
    }
  }
  EXPECT_EQ(rng.position(), 0u);  // no randomness without phase errors
}

TEST(IntelligentPhases, RejectsMultipleReceiveAntennas) {
  const ChannelState ch = random_channel(2, 8, 2, 2);
  numerics::RngStream rng(0, 0);
  EXPECT_THROW(intelligent_phases(ch, 0, PhaseErrorModel::none(), rng), std::invalid_argument);
}

TEST(Synthesis, NoiselessIntelligentIsRealSumOfMagnitudes) {
  for (std::uint64_t s = 0; s < 20; ++s) {
    const ChannelState ch = random_channel(10 + s, 64, 2, 1);
    numerics::RngStream rng(0, s);
    const PhaseProfile p = intelligent_phases(ch, 1, PhaseErrorModel::none(), rng);
    const auto y = synthesize_rx(ch, p, 1, 4.0, rng, 0.0);
    double expected = 0.0;
    for (std::size_t l = 0; l < 64; ++l) expected += ch.alpha(l, 1) * ch.beta(l);
    EXPECT_NEAR(y[0].imag(), 0.0, 1e-12);
    EXPECT_NEAR(y[0].real(), 2.0 * expected, 1e-12 * expected);
    // instantaneous SNR E (sum alpha beta)^2 / N0
    EXPECT_NEAR(std::norm(y[0]) / 1.0, 4.0 * expected * expected, 1e-10 * expected * expected);
  }
}

TEST(Synthesis, HighKappaMatchesExactPhases) {
  const ChannelState ch = random_channel(3, 64, 2, 1);
  numerics::RngStream r0(0, 0), r1(0, 1);
  const PhaseProfile exact = intelligent_phases(ch, 0, PhaseErrorModel::none(), r0);
  const PhaseProfile noisy = intelligent_phases(ch, 0, PhaseErrorModel::von_mises(1e9), r1);
  const Complex a = synthesize_rx(ch, exact, 0, 1.0, r0, 0.0)[0];
  const Complex b = synthesize_rx(ch, noisy, 0, 1.0, r1, 0.0)[0];
  EXPECT_LT(std::abs(a - b) / std::abs(a), 1e-3);
}

TEST(Synthesis, BlindSingleReflector) {
  const ChannelState ch = random_channel(4, 1, 2, 1);
  numerics::RngStream a(7, 7), b(7, 7);
  const auto y = synthesize_rx(ch, blind_phases(1), 1, 2.0, a, 0.5);
  const Complex n = numerics::sample_complex_gaussian(b, 0.5);
  EXPECT_NEAR(std::abs(y[0] - (std::sqrt(2.0) * ch.h(0, 1) * ch.g(0) + n)), 0.0, 1e-14);
}

TEST(Synthesis, Reproducible) {
  const ChannelState ch = random_channel(5, 16, 4, 3);
  numerics::RngStream a(9, 1), b(9, 1);
  EXPECT_EQ(synthesize_rx(ch, blind_phases(16), 2, 1.0, a, 1.0),
            synthesize_rx(ch, blind_phases(16), 2, 1.0, b, 1.0));
  EXPECT_THROW(synthesize_rx(ch, blind_phases(15), 2, 1.0, a, 1.0), std::invalid_argument);
}

TEST(Detection, NoiselessIsCorrect) {
  for (std::uint64_t s = 0; s < 50; ++s) {
    const ChannelState ch1 = random_channel(20 + s, 16, 4, 1);
    const ChannelState ch3 = random_channel(90 + s, 16, 4, 3);
    numerics::RngStream rng(1, s);
    const channel::DirectChannel dir = channel::draw_direct_channel(rng, 4, 2, 1.0);
    for (std::size_t i = 0; i < 4; ++i) {
      const PhaseProfile p = intelligent_phases(ch1, i, PhaseErrorModel::none(), rng);
      EXPECT_EQ(detect_intelligent(synthesize_rx(ch1, p, i, 1.0, rng, 0.0)[0], ch1, p, 1.0), i);
      const auto yb = synthesize_rx(ch3, blind_phases(16), i, 1.0, rng, 0.0);
      EXPECT_EQ(detect_blind(yb, ch3, 1.0), i);
      std::vector<Complex> yt(2);
      synthesize_direct_into(dir, i, 1.0, rng, 0.0, yt);
      EXPECT_EQ(detect_traditional(yt, dir, 1.0), i);
    }
  }
}

TEST(Detection, TiesGoToLowestIndex) {
  ChannelState ch = random_channel(6, 8, 2, 1);
  for (std::size_t l = 0; l < 8; ++l) ch.set_h(l, 1, ch.h(l, 0));
  numerics::RngStream rng(0, 0);
  const PhaseProfile p = intelligent_phases(ch, 1, PhaseErrorModel::none(), rng);
  const Complex y = synthesize_rx(ch, p, 1, 1.0, rng, 0.0)[0];
  EXPECT_EQ(detect_intelligent(y, ch, p, 1.0), 0u);
  EXPECT_EQ(detect_blind(std::vector<Complex>{y}, ch, 1.0), 0u);
}

// Per-realization error rate of the intelligent detector against the
// conditional pairwise error probability Q(sqrt(E |G_i - G_q|^2 / 2 N0)).
TEST(Detection, ConditionalErrorRateMatchesQFunction) {
  const ChannelState ch = random_channel(7, 4, 2, 1);
  numerics::RngStream rng(0, 0);
  const PhaseProfile p = intelligent_phases(ch, 0, PhaseErrorModel::none(), rng);
  std::vector<Complex> refs(2);
  cascaded_references(ch, p, refs);
  const double energy = 0.3;
  const double pep = numerics::q_function(std::sqrt(energy * std::norm(refs[0] - refs[1]) / 2.0));
  const int n = 200000;
  int errors = 0;
  std::vector<Complex> y(1);
  for (int t = 0; t < n; ++t) {
    numerics::RngStream noise(55, t);
    synthesize_rx_into(ch, p, 0, energy, noise, 1.0, y);
    errors += detect_intelligent(y[0], ch, p, energy) != 0;
  }
  const double rate = static_cast<double>(errors) / n;
  EXPECT_NEAR(rate, pep, 4.0 * std::sqrt(pep * (1 - pep) / n)) << "pep=" << pep;
}

TEST(Detection, TraditionalClosedFormMonteCarlo) {
  // gamma = E sigma^2 / (2 N0) = 1 -> 1/2 (1 - sqrt(1/2))
  const double energy = 2.0;
  const int n = 2000000;
  int errors = 0;
  std::vector<Complex> y(1);
  for (int t = 0; t < n; ++t) {
    numerics::RngStream rng(3, t);
    const auto dir = channel::draw_direct_channel(rng, 2, 1, 1.0);
    const std::size_t i = t & 1;
    synthesize_direct_into(dir, i, energy, rng, 1.0, y);
    errors += detect_traditional(y, dir, energy) != i;
  }
  const double p = 0.5 * (1.0 - std::sqrt(0.5));
  EXPECT_NEAR(p, 0.1464, 1e-4);
  EXPECT_NEAR(static_cast<double>(errors) / n, p, 4.0 * std::sqrt(p * (1 - p) / n));
}

TEST(Detection, BlindInvariantToCommonRelayRotation) {
  const double energy = analytics::from_db(-3.0);
  const int n = 200000;
  int plain = 0, rotated = 0;
  const Complex rot = std::polar(1.0, 1.234);
  std::vector<Complex> y(1);
  for (int t = 0; t < n; ++t) {
    numerics::RngStream rng(12, t);
    ChannelState ch = channel::draw_channel(rng, 16, 2, 1, 1.0);
    const std::size_t i = t & 1;
    numerics::RngStream noise(13, t);
    synthesize_rx_into(ch, blind_phases(16), i, energy, noise, 1.0, y);
    plain += detect_blind(y, ch, energy) != i;
    for (std::size_t l = 0; l < 16; ++l) ch.set_g(l, 0, ch.g(l) * rot);
    numerics::RngStream noise2(14, t);
    synthesize_rx_into(ch, blind_phases(16), i, energy, noise2, 1.0, y);
    rotated += detect_blind(y, ch, energy) != i;
  }
  const double p = static_cast<double>(plain) / n, q = static_cast<double>(rotated) / n;
  EXPECT_NEAR(p, q, 1.96 * std::sqrt(2.0 * p * (1 - p) / n));
}
