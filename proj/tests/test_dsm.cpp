#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <numeric>
#include <random>
#include <set>

#include "cgsim/dds.hpp"
#include "cgsim/dsm.hpp"
#include "cgsim/spectral.hpp"
#include "oracles/oracles.hpp"

namespace {

using cgsim::kLfsrMask;
using cgsim::lfsr_step;
using cgsim::mash_step;
using cgsim::MashState;

MashState random_state(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> res(0, 511);
  std::uniform_int_distribution<int> bit(0, 1);
  std::uniform_int_distribution<int> seed(1, 511);
  MashState s;
  s.residue1 = static_cast<std::uint16_t>(res(rng));
  s.residue2 = static_cast<std::uint16_t>(res(rng));
  s.residue3 = static_cast<std::uint16_t>(res(rng));
  s.y2_delay = bit(rng);
  s.y3_delay = {bit(rng), bit(rng)};
  s.lfsr = static_cast<std::uint16_t>(seed(rng));
  return s;
}

TEST(Lfsr, EverySeedHasPeriod511) {
  for (std::uint16_t seed = 1; seed <= kLfsrMask; ++seed) {
    std::set<std::uint16_t> visited{seed};
    std::uint16_t s = seed;
    int steps = 0;
    int ones = 0;
    do {
      const auto st = lfsr_step(s);
      ones += st.bit;
      s = st.state;
      ++steps;
      ASSERT_NE(s, 0);
      if (s != seed) {
        ASSERT_TRUE(visited.insert(s).second) << "early cycle from " << seed;
      }
    } while (s != seed && steps < 1000);
    EXPECT_EQ(steps, cgsim::kLfsrPeriod) << seed;
    EXPECT_EQ(ones, 256) << seed;
  }
}

TEST(Lfsr, AllOnesStep) {
  // feedback = bit8 ^ bit4 = 0, shifted left; the old MSB comes out.
  const auto st = lfsr_step(0x1FF);
  EXPECT_EQ(st.state, 0x1FE);
  EXPECT_EQ(st.bit, 1);
}

TEST(Lfsr, BitsFollowRecurrence) {
  for (std::uint16_t seed : {1, 0x1A5, 0x0F3, 0x1FF, 0x100}) {
    const auto expect = oracle::lfsr_bits(seed, 2000);
    std::uint16_t s = seed;
    for (std::size_t i = 0; i < expect.size(); ++i) {
      const auto st = lfsr_step(s);
      ASSERT_EQ(st.bit, expect[i]) << "seed " << seed << " step " << i;
      s = st.state;
    }
  }
}

TEST(Lfsr, RejectsInvalidStates) {
  EXPECT_THROW(lfsr_step(0), std::invalid_argument);
  EXPECT_THROW(lfsr_step(0x200), std::invalid_argument);
  EXPECT_THROW(cgsim::seeded_state(0), std::invalid_argument);
  EXPECT_THROW(cgsim::seeded_state(512), std::invalid_argument);
}

TEST(Mash, ZeroInputGivesZeroOutput) {
  MashState s;
  s.lfsr = 1;
  for (int i = 0; i < 1000; ++i) {
    const auto st = mash_step(0, s, false);
    ASSERT_EQ(st.code.value, 0);
    s = st.state;
  }
}

TEST(Mash, MidscaleCarryRate) {
  for (int n : {1000, 4096, 100000}) {
    MashState s;
    long sum = 0;
    for (int i = 0; i < n; ++i) {
      const auto st = mash_step(256, s, false);
      sum += st.code.value;
      s = st.state;
    }
    const double mean = static_cast<double>(sum) / n;
    EXPECT_LT(std::abs(mean - oracle::carry_rate(256, n)), 2.0 / n);
    EXPECT_LT(std::abs(mean - 0.5), 2.0 / n);
  }
}

TEST(Mash, FullScaleChannelMean) {
  const int n = 50000;
  const std::vector<int> samples(n, 255);
  MashState s = cgsim::seeded_state(0x1A5);
  const auto codes = cgsim::modulate_channel(samples, s, false, cgsim::Polarity::kPositive);
  double sum = 0.0;
  for (const auto c : codes) sum += c.value;
  EXPECT_LT(std::abs(sum / n - oracle::carry_rate(511, n)), 2.0 / n);
  EXPECT_LT(std::abs(sum / n - 511.0 / 512.0), 2.0 / n);
}

TEST(Mash, RejectsOutOfRangeInput) {
  EXPECT_THROW(mash_step(512, {}, false), std::invalid_argument);
  EXPECT_THROW(mash_step(-1, {}, false), std::invalid_argument);
}

TEST(Mash, ReconstructionIdentityFromRandomStates) {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<int> x(0, 511);
  for (int trial = 0; trial < 40; ++trial) {
    MashState s = random_state(rng);
    const bool dither = trial % 2 == 0;
    oracle::MashIdentity id;
    for (int i = 0; i < 5000; ++i) {
      const int xi = x(rng);
      const auto st = mash_step(xi, s, dither);
      ASSERT_TRUE(id.push(xi, st.dither2, st.dither3, st.state.residue3, st.code.value))
          << "trial " << trial << " cycle " << i;
      s = st.state;
    }
    EXPECT_EQ(id.checked(), 5000 - 3);
  }
}

TEST(Mash, MatchesReferenceModulator) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> x(0, 511);
  for (bool dither : {false, true}) {
    MashState s = cgsim::seeded_state(0x0F3);
    oracle::ReferenceMash ref;
    for (int i = 0; i < 20000; ++i) {
      const int xi = x(rng);
      const auto st = mash_step(xi, s, dither);
      ASSERT_EQ(st.code.value, ref.step(xi, st.dither2, st.dither3)) << i;
      ASSERT_EQ(st.state.residue3, ref.r3);
      s = st.state;
    }
  }
}

TEST(Mash, StateAndOutputStayInRange) {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<int> x(0, 511);
  std::set<int> seen;
  for (int trial = 0; trial < 20; ++trial) {
    MashState s = random_state(rng);
    for (int i = 0; i < 5000; ++i) {
      const auto st = mash_step(x(rng), s, trial % 2 == 0);
      s = st.state;
      ASSERT_TRUE(cgsim::mash_state_is_valid(s));
      ASSERT_LT(s.residue1, 512);
      ASSERT_LT(s.residue2, 512);
      ASSERT_LT(s.residue3, 512);
      ASSERT_TRUE(s.y2_delay == 0 || s.y2_delay == 1);
      ASSERT_TRUE(s.y3_delay[0] == 0 || s.y3_delay[0] == 1);
      ASSERT_TRUE(s.y3_delay[1] == 0 || s.y3_delay[1] == 1);
      ASSERT_NE(s.lfsr, 0);
      ASSERT_GE(st.code.value, cgsim::kDsmMin);
      ASSERT_LE(st.code.value, cgsim::kDsmMax);
      seen.insert(st.code.value);
    }
  }
  EXPECT_EQ(seen.size(), 8u);
}

TEST(Mash, DcInputIsEventuallyPeriodic) {
  for (int xdc : {1, 3, 64, 100, 129, 256, 300, 511}) {
    MashState s;
    std::vector<int> y;
    for (int i = 0; i < 4096 + 3 * 1024; ++i) {
      const auto st = mash_step(xdc, s, false);
      y.push_back(st.code.value);
      s = st.state;
    }
    int period = 0;
    for (int p = 1; p <= 1024 && period == 0; ++p) {
      bool ok = true;
      for (std::size_t i = 4096; i + static_cast<std::size_t>(p) < y.size() && ok; ++i) {
        ok = y[i] == y[i + static_cast<std::size_t>(p)];
      }
      if (ok) period = p;
    }
    ASSERT_GT(period, 0) << xdc;
    EXPECT_EQ(1024 % period, 0) << "x = " << xdc << " period " << period;
  }
}

TEST(Mash, DitherBreaksMirrorSymmetry) {
  const auto lut = cgsim::build_lut(9, 128, 255);
  const auto x = cgsim::synthesize(lut, 4096);
  const auto off = cgsim::modulate_differential(x, 0x1A5, 0x1A5, false);
  const auto on = cgsim::modulate_differential(x, 0x1A5, 0x1A5, true);
  int off_breaks = 0;
  int on_breaks = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    off_breaks += off.p[i].value + off.n[i].value != 1;
    on_breaks += on.p[i].value + on.n[i].value != 1;
  }
  EXPECT_GT(on_breaks, 0);
  EXPECT_GT(on_breaks, off_breaks);
}

TEST(Mash, NoiseRisesSixtyDbPerDecade) {
  const auto lut = cgsim::build_lut(9, 128, 255);
  const std::size_t n = 1u << 17;
  const auto x = cgsim::synthesize(lut, n);
  const auto codes = cgsim::modulate_differential(x, 0x1A5, 0x0F3, true);
  // Hann-windowed.
  std::vector<double> w(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double hann = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) / n);
    w[i] = codes.p[i].value * hann;
  }
  const auto p = cgsim::power_spectrum(w);
  const double fs = 2.56e6;
  const double bin = fs / static_cast<double>(n);
  const std::size_t f0_bin = n / 128;

  std::vector<double> lx;
  std::vector<double> ly;
  const double step = std::pow(10.0, 0.1);
  for (double f = 40e3; f < 400e3 * 1.0001; f *= step) {
    double acc = 0.0;
    int count = 0;
    for (auto k = static_cast<std::size_t>(f / bin); k < static_cast<std::size_t>(f * step / bin); ++k) {
      const std::size_t off = k % f0_bin;
      if (off <= 2 || off >= f0_bin - 2) continue;  // fundamental, harmonics and their window skirts
      acc += p[k];
      ++count;
    }
    lx.push_back(std::log10(f));
    ly.push_back(10.0 * std::log10(acc / count));
  }
  const double mx = std::accumulate(lx.begin(), lx.end(), 0.0) / static_cast<double>(lx.size());
  const double my = std::accumulate(ly.begin(), ly.end(), 0.0) / static_cast<double>(ly.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    sxy += (lx[i] - mx) * (ly[i] - my);
    sxx += (lx[i] - mx) * (lx[i] - mx);
  }
  const double slope = sxy / sxx;
  EXPECT_NEAR(slope, 60.0, 6.0);
}

TEST(Mash, ChannelSeedsAreIndependentStates) {
  const auto lut = cgsim::build_lut(9, 128, 255);
  const auto x = cgsim::synthesize(lut, 1024);
  MashState s = cgsim::seeded_state(0x1A5);
  const auto a = cgsim::modulate_channel(x, s, true, cgsim::Polarity::kPositive);
  const auto d = cgsim::modulate_differential(x, 0x1A5, 0x0F3, true);
  EXPECT_EQ(a, d.p);
  EXPECT_NE(s, MashState{});
}

}  // namespace
