#include <gtest/gtest.h>

#include <cmath>
#include <limits>
#include <random>

#include "semg/core.hpp"

namespace {

using semg::InputError;

std::vector<std::pair<std::string, std::vector<double>>> two_channels(std::size_t n) {
  return {{"biceps", std::vector<double>(n, 0.1)}, {"triceps", std::vector<double>(n, -0.2)}};
}

TEST(Recording, ValidConstructionHasNoWarning) {
  const auto rec = semg::make_recording(two_channels(10000), 1000.0);
  EXPECT_EQ(rec.channels().size(), 2u);
  EXPECT_EQ(rec.length(), 10000u);
  EXPECT_DOUBLE_EQ(rec.fs(), 1000.0);
  EXPECT_TRUE(rec.warnings().empty());
  EXPECT_EQ(rec.channel("triceps").samples()[0], -0.2);
}

TEST(Recording, LengthMismatchRejected) {
  auto ch = two_channels(100);
  ch[1].second.pop_back();
  try {
    (void)semg::make_recording(ch, 1000.0);
    FAIL() << "expected length mismatch";
  } catch (const InputError& e) {
    EXPECT_NE(std::string(e.what()).find("length mismatch"), std::string::npos);
  }
}

TEST(Recording, LowSamplingRateWarns) {
  const auto rec = semg::make_recording(two_channels(100), 500.0);
  ASSERT_EQ(rec.warnings().size(), 1u);
  EXPECT_NE(rec.warnings()[0].find("below 1000 Hz"), std::string::npos);
}

TEST(Recording, UnknownChannelLookupThrows) {
  const auto rec = semg::make_recording(two_channels(4), 1000.0);
  EXPECT_THROW((void)rec.channel("deltoid"), InputError);
}

TEST(Recording, RandomInvalidMutationsAreAllRejected) {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> kind(0, 5);
  for (int trial = 0; trial < 300; ++trial) {
    auto ch = two_channels(50);
    double fs = 1000.0;
    const int k = kind(rng);
    const std::size_t idx = rng() % 50;
    switch (k) {
      case 0: ch[rng() % 2].second[idx] = std::numeric_limits<double>::quiet_NaN(); break;
      case 1: ch[rng() % 2].second[idx] = std::numeric_limits<double>::infinity(); break;
      case 2: ch[rng() % 2].second.resize(idx); break;
      case 3: fs = -static_cast<double>(rng() % 1000); break;
      case 4: ch.clear(); break;
      case 5: ch[0].second.push_back(1.0); break;
    }
    EXPECT_THROW((void)semg::make_recording(ch, fs), InputError) << "mutation kind " << k;
  }
}

TEST(ChannelSignal, RejectsEmptyAndNonFinite) {
  EXPECT_THROW(semg::ChannelSignal("x", {}, 1000.0), InputError);
  EXPECT_THROW(semg::ChannelSignal("x", {1.0, NAN}, 1000.0), InputError);
  EXPECT_THROW(semg::ChannelSignal("x", {1.0}, 0.0), InputError);
  const semg::ChannelSignal s("x", {1.0, 2.0}, 2000.0);
  EXPECT_DOUBLE_EQ(s.duration(), 0.001);
}

TEST(Units, ParsingAndConversion) {
  EXPECT_DOUBLE_EQ(semg::to_millivolt_factor(semg::parse_units("V")), 1000.0);
  EXPECT_DOUBLE_EQ(semg::to_millivolt_factor(semg::parse_units("mV")), 1.0);
  EXPECT_DOUBLE_EQ(semg::to_millivolt_factor(semg::parse_units("uV")), 0.001);
  EXPECT_THROW((void)semg::parse_units("kV"), InputError);
}

TEST(PowerSpectrum, InvariantsEnforced) {
  EXPECT_THROW(semg::PowerSpectrum({0.0, 1.0}, {1.0}, 1.0), semg::ComputeError);
  EXPECT_THROW(semg::PowerSpectrum({0.0, 1.0}, {1.0, -1.0}, 1.0), semg::ComputeError);
  EXPECT_THROW(semg::PowerSpectrum({0.5, 1.0}, {1.0, 1.0}, 0.5), semg::ComputeError);
  const semg::PowerSpectrum p({0.0, 1.0, 2.0}, {1.0, 2.0, 3.0}, 1.0);
  EXPECT_DOUBLE_EQ(p.total_power(), 6.0);
}

TEST(Envelope, RejectsNegativeSamples) {
  EXPECT_THROW(semg::Envelope({0.0, -1e-3}, 1000.0, semg::EnvelopeKind::Rms), semg::ComputeError);
}

}  // namespace
