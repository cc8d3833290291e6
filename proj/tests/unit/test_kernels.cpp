#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "risssk/kernels.hpp"

namespace k = risssk::kernels;

namespace {

// Restores the dispatch choice after each test.
class IsaGuard {
 public:
  IsaGuard() : saved_(k::active_isa()) {}
  ~IsaGuard() { k::set_isa(saved_); }

 private:
  k::Isa saved_;
};

bool have_avx2() { return k::isa_supported(k::Isa::avx2); }

template <class F>
auto on_both(F&& f) {
  IsaGuard guard;
  k::set_isa(k::Isa::scalar);
  auto a = f();
  k::set_isa(have_avx2() ? k::Isa::avx2 : k::Isa::scalar);
  auto b = f();
  return std::pair{a, b};
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (std::bit_cast<std::uint64_t>(a[i]) != std::bit_cast<std::uint64_t>(b[i])) return false;
  }
  return true;
}

}  // namespace

// Random123 known-answer vectors for philox4x32-10.
TEST(Philox, KnownAnswerZero) {
  const k::Block out = k::philox4x32({0, 0, 0, 0}, {0, 0});
  EXPECT_EQ(out, (k::Block{0x6627e8d5u, 0xe169c58du, 0xbc57ac4cu, 0x9b00dbd8u}));
}

TEST(Philox, KnownAnswerOnes) {
  const k::Block out = k::philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                                     {0xffffffffu, 0xffffffffu});
  EXPECT_EQ(out, (k::Block{0x408f276du, 0x41c83b0eu, 0xa20bc7c6u, 0x6d5451fdu}));
}

TEST(Philox, KnownAnswerPi) {
  const k::Block out = k::philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                                     {0xa4093822u, 0x299f31d0u});
  EXPECT_EQ(out, (k::Block{0xd16cfe09u, 0x94fdccebu, 0x5001e420u, 0x24126ea1u}));
}

TEST(Philox, BlockUniformRange) {
  for (std::uint64_t b = 0; b < 1000; ++b) {
    const double u = k::block_uniform(k::stream_block(7, 3, b));
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

TEST(Kernels, GaussianScalarMatchesAvx2Bitwise) {
  if (!have_avx2()) GTEST_SKIP() << "no AVX2 on this host";
  for (std::size_t n : {1u, 3u, 4u, 5u, 17u, 1000u}) {
    auto [a, b] = on_both([n] {
      k::StreamCursor cur{12345, 99, 7};
      std::vector<double> re(n), im(n);
      k::complex_gaussian(cur, 0.75, re, im);
      re.insert(re.end(), im.begin(), im.end());
      re.push_back(static_cast<double>(cur.block));
      return re;
    });
    EXPECT_TRUE(same_bits(a, b)) << "n=" << n;
  }
}

TEST(Kernels, VonMisesScalarMatchesAvx2Bitwise) {
  if (!have_avx2()) GTEST_SKIP() << "no AVX2 on this host";
  for (double kappa : {0.0, 1e-9, 3e-6, 0.5, 2.0, 5.0, 100.0, 1e7}) {
    for (std::size_t n : {1u, 6u, 33u, 512u}) {
      auto [a, b] = on_both([=] {
        k::StreamCursor cur{42, 5, 0};
        std::vector<double> c(n), s(n);
        k::von_mises_phasors(cur, kappa, c, s);
        c.insert(c.end(), s.begin(), s.end());
        c.push_back(static_cast<double>(cur.block));
        return c;
      });
      EXPECT_TRUE(same_bits(a, b)) << "kappa=" << kappa << " n=" << n;
    }
  }
}

TEST(Kernels, AlignAndSumsScalarMatchAvx2Bitwise) {
  if (!have_avx2()) GTEST_SKIP() << "no AVX2 on this host";
  for (std::size_t n : {1u, 2u, 7u, 64u, 131u}) {
    auto [a, b] = on_both([n] {
      k::StreamCursor cur{1, 2, 3};
      std::vector<double> hr(n), hi(n), gr(n), gi(n), ec(n), es(n), ur(n), ui(n);
      k::complex_gaussian(cur, 1.0, hr, hi);
      k::complex_gaussian(cur, 1.0, gr, gi);
      k::von_mises_phasors(cur, 2.0, ec, es);
      std::vector<double> out;
      k::align_phases(hr, hi, gr, gi, {}, {}, ur, ui);
      out.insert(out.end(), ur.begin(), ur.end());
      const auto s0 = k::cascade_sum(hr, hi, ur, ui, gr, gi);
      k::align_phases(hr, hi, gr, gi, ec, es, ur, ui);
      out.insert(out.end(), ui.begin(), ui.end());
      const auto s1 = k::cascade_sum(hr, hi, ur, ui, gr, gi);
      const auto s2 = k::product_sum(hr, hi, gr, gi);
      out.insert(out.end(), {s0.real(), s0.imag(), s1.real(), s1.imag(), s2.real(), s2.imag()});
      return out;
    });
    EXPECT_TRUE(same_bits(a, b)) << "n=" << n;
  }
}

TEST(Kernels, GaussianMomentsBothIsas) {
  IsaGuard guard;
  for (k::Isa isa : {k::Isa::scalar, k::Isa::avx2}) {
    if (!k::isa_supported(isa)) continue;
    k::set_isa(isa);
    const std::size_t n = 200000;
    std::vector<double> re(n), im(n);
    k::StreamCursor cur{2024, 0, 0};
    k::complex_gaussian(cur, 1.0, re, im);
    double m = 0, p = 0, q4 = 0;
    for (std::size_t i = 0; i < n; ++i) {
      m += re[i];
      p += re[i] * re[i] + im[i] * im[i];
      q4 += re[i] * re[i] * re[i] * re[i];
    }
    EXPECT_NEAR(m / n, 0.0, 0.01);
    EXPECT_NEAR(p / n, 2.0, 0.02);     // scale 1 -> unit variance per component
    EXPECT_NEAR(q4 / n, 3.0, 0.06);    // Gaussian kurtosis
  }
}

TEST(Kernels, AlignCancelsPhase) {
  const std::vector<double> hr{0.3, -1.2, 0.0}, hi{-0.4, 0.5, 2.0}, gr{1.0, 0.2, -0.7},
      gi{0.1, -0.9, 0.0};
  std::vector<double> ur(3), ui(3);
  k::align_phases(hr, hi, gr, gi, {}, {}, ur, ui);
  for (std::size_t l = 0; l < 3; ++l) {
    const std::complex<double> prod =
        std::complex<double>(hr[l], hi[l]) * std::complex<double>(ur[l], ui[l]) *
        std::complex<double>(gr[l], gi[l]);
    EXPECT_NEAR(prod.imag(), 0.0, 1e-15);
    EXPECT_NEAR(prod.real(), std::abs(std::complex<double>(hr[l], hi[l])) *
                                 std::abs(std::complex<double>(gr[l], gi[l])),
                1e-14);
  }
}

TEST(Kernels, SizeMismatchThrows) {
  std::vector<double> a(3), b(4);
  k::StreamCursor cur{0, 0, 0};
  EXPECT_THROW(k::complex_gaussian(cur, 1.0, a, b), std::invalid_argument);
  EXPECT_THROW(k::von_mises_phasors(cur, -1.0, a, a), std::invalid_argument);
  EXPECT_THROW(k::product_sum(a, a, a, b), std::invalid_argument);
}

TEST(Kernels, SetIsaRejectsUnsupported) {
  if (have_avx2()) GTEST_SKIP();
  EXPECT_THROW(k::set_isa(k::Isa::avx2), std::invalid_argument);
}
