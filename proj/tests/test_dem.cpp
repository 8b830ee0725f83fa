#include <gtest/gtest.h>

#include <bit>
#include <random>

#include "cgsim/dds.hpp"
#include "cgsim/dem.hpp"
#include "cgsim/dsm.hpp"
#include "cgsim/spectral.hpp"

namespace {

using cgsim::dwa_encode;
using cgsim::DwaState;
using cgsim::ElementMask;
using cgsim::kDwaElements;

ElementMask mask_of(std::initializer_list<int> elements) {
  unsigned m = 0;
  for (int e : elements) m |= 1u << e;
  return static_cast<ElementMask>(m);
}

TEST(Dwa, HandRotation) {
  DwaState s;
  auto a = dwa_encode(3, s);
  EXPECT_EQ(a.mask, mask_of({0, 1, 2}));
  auto b = dwa_encode(2, a.state);
  EXPECT_EQ(b.mask, mask_of({3, 4}));
  auto c = dwa_encode(4, b.state);
  EXPECT_EQ(c.mask, mask_of({5, 6, 0, 1}));
  EXPECT_EQ(c.state.pointer, 2);
}

TEST(Dwa, ThreeElementWrap) {
  DwaState s;
  s.pointer = 5;
  const auto a = dwa_encode(3, s);
  EXPECT_EQ(a.mask, mask_of({5, 6, 0}));
  EXPECT_EQ(a.state.pointer, 1);
}

TEST(Dwa, EmptyAndFullCodes) {
  DwaState s;
  s.pointer = 4;
  const auto z = dwa_encode(0, s);
  EXPECT_EQ(z.mask, 0);
  EXPECT_EQ(z.state.pointer, 4);
  const auto f = dwa_encode(7, s);
  EXPECT_EQ(f.mask, 0x7F);
  EXPECT_EQ(f.state.pointer, 4);
}

TEST(Dwa, RejectsOutOfRangeCodes) {
  EXPECT_THROW(dwa_encode(-1, {}), std::invalid_argument);
  EXPECT_THROW(dwa_encode(8, {}), std::invalid_argument);
  EXPECT_THROW(cgsim::thermometer_mask(8), std::invalid_argument);
}

TEST(Dwa, UsageEqualizesAndRotationIsCyclic) {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<int> code(0, 7);
  DwaState s;
  std::uint64_t total = 0;
  int expected_next = 0;
  for (int i = 0; i < 200000; ++i) {
    const int c = code(rng);
    const auto step = dwa_encode(c, s);
    ASSERT_EQ(std::popcount(static_cast<unsigned>(step.mask)), c);
    ASSERT_LT(step.state.pointer, kDwaElements);
    for (int k = 0; k < c; ++k) {
      ASSERT_TRUE(step.mask & (1u << ((expected_next + k) % kDwaElements)));
    }
    expected_next = (expected_next + c) % kDwaElements;
    total += static_cast<std::uint64_t>(c);
    for (auto u : step.state.usage) {
      ASSERT_TRUE(u == total / kDwaElements || u == (total + kDwaElements - 1) / kDwaElements);
    }
    s = step.state;
  }
}

TEST(Thermometer, SelectsLowElements) {
  for (int c = 0; c <= 7; ++c) {
    EXPECT_EQ(cgsim::thermometer_mask(c), static_cast<ElementMask>((1u << c) - 1u));
  }
}

std::vector<cgsim::DsmCode> sine_codes(std::size_t n, bool p_side = true) {
  const auto lut = cgsim::build_lut(9, 128, 255);
  const auto x = cgsim::synthesize(lut, n);
  auto d = cgsim::modulate_differential(x, 0x1A5, 0x0F3, true);
  return p_side ? d.p : d.n;
}

TEST(ElementSum, MatchedElementsMakeSelectionIrrelevant) {
  const auto p = sine_codes(8192, true);
  const auto n = sine_codes(8192, false);
  std::array<double, 7> unit;
  unit.fill(1.0);
  const auto dwa = cgsim::element_sum_dac(cgsim::encode_stream(p, cgsim::Selection::kDwa),
                                          cgsim::encode_stream(n, cgsim::Selection::kDwa),
                                          unit, unit, 2.56e6);
  const auto fixed =
      cgsim::element_sum_dac(cgsim::encode_stream(p, cgsim::Selection::kThermometer),
                             cgsim::encode_stream(n, cgsim::Selection::kThermometer), unit,
                             unit, 2.56e6);
  EXPECT_EQ(dwa.samples, fixed.samples);
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_DOUBLE_EQ(dwa.samples[i], (p[i].dac_code() - n[i].dac_code()) / 7.0);
  }
}

TEST(ElementSum, RejectsMismatchedStreams) {
  std::vector<ElementMask> a(4), b(5);
  std::array<double, 7> unit;
  unit.fill(1.0);
  EXPECT_THROW(cgsim::element_sum_dac(a, b, unit, unit, 1.0), std::invalid_argument);
}

TEST(Mismatch, DrawStatistics) {
  const auto zero = cgsim::draw_mismatch(0.0, 9);
  for (double c : zero.p) EXPECT_EQ(c, 1.0);
  double sum = 0.0;
  double sq = 0.0;
  int count = 0;
  for (std::uint64_t seed = 0; seed < 2000; ++seed) {
    const auto a = cgsim::draw_mismatch(0.01, seed);
    for (double c : a.p) {
      sum += c - 1.0;
      sq += (c - 1.0) * (c - 1.0);
      ++count;
    }
  }
  EXPECT_NEAR(sum / count, 0.0, 5e-4);
  EXPECT_NEAR(std::sqrt(sq / count), 0.01, 5e-4);
  EXPECT_THROW(cgsim::draw_mismatch(-0.1, 1), std::invalid_argument);
}

TEST(DemBenefit, NoMismatchNoDifference) {
  const auto b = cgsim::dem_benefit(0.0, 1);
  EXPECT_NEAR(b.snr_with_dwa_db, b.snr_fixed_db, 0.1);
}

TEST(DemBenefit, OnePercentMismatch) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto b = cgsim::dem_benefit(0.01, seed);
    EXPECT_GE(b.snr_with_dwa_db - b.snr_fixed_db, 10.0) << seed;
  }
}

TEST(DemBenefit, SingleElementErrorLeavesTheBand) {
  cgsim::DemBenefitOptions opt;
  const auto p = sine_codes(opt.samples, true);
  const auto n = sine_codes(opt.samples, false);
  std::array<double, 7> bad;
  bad.fill(1.0);
  bad[0] = 1.05;
  std::array<double, 7> unit;
  unit.fill(1.0);

  auto worst_harmonic = [&](cgsim::Selection sel) {
    const auto w = cgsim::element_sum_dac(cgsim::encode_stream(p, sel),
                                          cgsim::encode_stream(n, sel), bad, unit, opt.clock_hz);
    const auto a = cgsim::analyze(w, opt.clock_hz / 128.0, opt.band_hz);
    double worst = cgsim::kDbFloor;
    for (std::size_t k = 2 * a.spectrum.fundamental_bin; k <= a.spectrum.last_bin(opt.band_hz);
         k += a.spectrum.fundamental_bin) {
      worst = std::max(worst, a.spectrum.mags_db[k]);
    }
    return worst;
  };
  const double dwa = worst_harmonic(cgsim::Selection::kDwa);
  const double fixed = worst_harmonic(cgsim::Selection::kThermometer);
  EXPECT_LE(dwa, fixed - 15.0) << "dwa " << dwa << " fixed " << fixed;
}

}  // namespace
