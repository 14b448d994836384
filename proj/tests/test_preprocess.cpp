#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "semg/preprocess.hpp"
#include "semg/synth.hpp"

namespace {

using semg::ChannelSignal;

ChannelSignal sig(std::vector<double> x, double fs = 1000.0) { return ChannelSignal("m", std::move(x), fs); }

double db(double mag) { return 20.0 * std::log10(mag); }

// ---------------------------------------------------------------- offset

TEST(RemoveOffset, Examples) {
  const auto flat = semg::remove_offset(sig(std::vector<double>(16, 3.0)));
  for (double v : flat.samples()) EXPECT_EQ(v, 0.0);
  const auto y = semg::remove_offset(sig({1.0, 2.0, 3.0}));
  EXPECT_DOUBLE_EQ(y.samples()[0], -1.0);
  EXPECT_DOUBLE_EQ(y.samples()[1], 0.0);
  EXPECT_DOUBLE_EQ(y.samples()[2], 1.0);
  const auto zero = semg::remove_offset(sig(std::vector<double>(8, 0.0)));
  for (double v : zero.samples()) EXPECT_EQ(v, 0.0);
}

TEST(RemoveOffset, ZeroMeanAndIdempotent) {
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(5.0, 2.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x(1 + rng() % 2000);
    for (double& v : x) v = g(rng);
    const auto once = semg::remove_offset(sig(x));
    double mean = 0.0, ms = 0.0;
    for (double v : once.samples()) mean += v, ms += v * v;
    mean /= static_cast<double>(x.size());
    const double rms_in = std::sqrt(std::inner_product(x.begin(), x.end(), x.begin(), 0.0) / x.size());
    EXPECT_LE(std::abs(mean), 1e-12 * rms_in);
    const auto twice = semg::remove_offset(once);
    for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(twice.samples()[i], once.samples()[i], 1e-12 * rms_in);
  }
}

// ---------------------------------------------------------------- band-pass design

TEST(ButterworthBandpass, MatchesAnalogPrototypeOracle) {
  for (double fs : {1000.0, 2000.0, 4096.0}) {
    const auto spec = semg::design_butterworth_bandpass(4, 15.0, 400.0, fs);
    EXPECT_EQ(spec.order, 8);
    EXPECT_EQ(spec.sections.size(), 4u);
    for (double f = 0.5; f < fs / 2.0; f += 3.7) {
      const double want = oracle::butterworth_bandpass_magnitude(4, 15.0, 400.0, fs, f);
      EXPECT_NEAR(spec.magnitude(f), want, 1e-9) << "fs=" << fs << " f=" << f;
    }
  }
}

TEST(ButterworthBandpass, DesignExamples) {
  const auto spec = semg::design_butterworth_bandpass(4, 15.0, 400.0, 2000.0);
  const double mid = std::sqrt(15.0 * 400.0);  // 77.46 Hz
  const double want_mid = oracle::butterworth_bandpass_magnitude(4, 15.0, 400.0, 2000.0, mid);
  EXPECT_NEAR(spec.magnitude(mid), want_mid, 0.005 * want_mid);
  EXPECT_NEAR(spec.magnitude(mid), 1.0, 0.005);
  EXPECT_NEAR(spec.magnitude(15.0), 1.0 / std::numbers::sqrt2, 0.02 / std::numbers::sqrt2);
  EXPECT_EQ(spec.magnitude(0.0), 0.0);
}

TEST(ButterworthBandpass, EdgeAndPassbandContract) {
  for (double fs : {1000.0, 2000.0, 5000.0}) {
    const auto spec = semg::design_butterworth_bandpass(4, 15.0, 400.0, fs);
    EXPECT_NEAR(db(spec.magnitude(15.0)), -3.0103, 0.2);
    EXPECT_NEAR(db(spec.magnitude(400.0)), -3.0103, 0.2);
    EXPECT_NEAR(db(spec.magnitude(std::sqrt(15.0 * 400.0))), 0.0, 0.05);
  }
}

TEST(ButterworthBandpass, PolesInsideUnitCircle) {
  for (int order = 1; order <= 8; ++order) {
    for (double fs : {1000.0, 2000.0}) {
      const auto spec = semg::design_butterworth_bandpass(order, 15.0, 400.0, fs);
      EXPECT_EQ(spec.order, 2 * order);
      for (const auto& s : spec.sections) {
        for (double m : s.pole_magnitudes()) EXPECT_LT(m, 1.0);
      }
      // Odd prototype orders place a real pole pair; response still matches.
      EXPECT_NEAR(spec.magnitude(100.0), oracle::butterworth_bandpass_magnitude(order, 15, 400, fs, 100.0), 1e-9);
    }
  }
}

TEST(ButterworthBandpass, RejectsBadBands) {
  EXPECT_THROW(semg::design_butterworth_bandpass(4, 0.0, 400.0, 2000.0), semg::InputError);
  EXPECT_THROW(semg::design_butterworth_bandpass(4, 400.0, 15.0, 2000.0), semg::InputError);
  EXPECT_THROW(semg::design_butterworth_bandpass(4, 15.0, 400.0, 700.0), semg::InputError);
  EXPECT_THROW(semg::design_butterworth_bandpass(0, 15.0, 400.0, 2000.0), semg::InputError);
}

// ---------------------------------------------------------------- filtering

TEST(ApplyFilter, ZeroPhasePassbandTonePreserved) {
  const double fs = 2000.0;
  const auto spec = semg::design_butterworth_bandpass(4, 15.0, 400.0, fs);
  const auto x = semg::synth_sine(100.0, 1.0, fs, 4.0);
  const auto y = semg::apply_filter(spec, x, true);
  ASSERT_EQ(y.size(), x.size());
  const std::size_t skip = 1000;  // 0.5 s
  const auto mid = y.samples().subspan(skip, y.size() - 2 * skip);
  const auto tone = oracle::fit_tone(mid, 100.0, fs, skip);
  EXPECT_NEAR(tone.amplitude, 1.0, 0.01);
  EXPECT_NEAR(tone.phase, 0.0, 0.01);
  const double expect = std::pow(oracle::butterworth_bandpass_magnitude(4, 15, 400, fs, 100.0), 2);
  EXPECT_NEAR(tone.amplitude, expect, 1e-4);
}

TEST(ApplyFilter, LowFrequencyToneRejected) {
  const double fs = 2000.0;
  const auto spec = semg::design_butterworth_bandpass(4, 15.0, 400.0, fs);
  const auto y = semg::apply_filter(spec, semg::synth_sine(1.0, 1.0, fs, 6.0), true);
  const std::size_t skip = 1000;
  double peak = 0.0;
  for (std::size_t i = skip; i < y.size() - skip; ++i) peak = std::max(peak, std::abs(y.samples()[i]));
  EXPECT_LT(peak, 0.05);
  EXPECT_LT(std::pow(oracle::butterworth_bandpass_magnitude(4, 15, 400, fs, 1.0), 2), 0.05);
}

TEST(ApplyFilter, ZeroInZeroOut) {
  const auto spec = semg::design_butterworth_bandpass(4, 15.0, 400.0, 1000.0);
  for (bool zp : {true, false}) {
    const auto y = semg::apply_filter(spec, sig(std::vector<double>(500, 0.0)), zp);
    for (double v : y.samples()) EXPECT_EQ(v, 0.0);
  }
}

TEST(ApplyFilter, Linearity) {
  const auto spec = semg::design_butterworth_bandpass(4, 15.0, 400.0, 1000.0);
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> coef(-3.0, 3.0);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 100 + rng() % 3000;
    std::vector<double> x(n), y(n), z(n);
    for (double& v : x) v = g(rng);
    for (double& v : y) v = g(rng) + 0.5;
    const double a = coef(rng), b = coef(rng);
    for (std::size_t i = 0; i < n; ++i) z[i] = a * x[i] + b * y[i];
    for (bool zp : {true, false}) {
      const auto fx = semg::apply_filter(spec, sig(x), zp);
      const auto fy = semg::apply_filter(spec, sig(y), zp);
      const auto fz = semg::apply_filter(spec, sig(z), zp);
      double scale = 0.0;
      for (double v : fz.samples()) scale = std::max(scale, std::abs(v));
      for (std::size_t i = 0; i < n; ++i) {
        EXPECT_NEAR(fz.samples()[i], a * fx.samples()[i] + b * fy.samples()[i], 1e-9 * std::max(scale, 1.0));
      }
    }
  }
}

TEST(ApplyFilter, TooShortForZeroPhase) {
  const auto spec = semg::design_butterworth_bandpass(4, 15.0, 400.0, 1000.0);
  EXPECT_EQ(semg::zero_phase_padding(spec), 24u);
  EXPECT_THROW((void)semg::apply_filter(spec, sig(std::vector<double>(24, 1.0)), true), semg::InputError);
  EXPECT_NO_THROW((void)semg::apply_filter(spec, sig(std::vector<double>(25, 1.0)), true));
  EXPECT_NO_THROW((void)semg::apply_filter(spec, sig(std::vector<double>(3, 1.0)), false));
}

TEST(ApplyFilter, RejectsRateMismatch) {
  const auto spec = semg::design_butterworth_bandpass(4, 15.0, 400.0, 2000.0);
  EXPECT_THROW((void)semg::apply_filter(spec, sig(std::vector<double>(500, 1.0), 1000.0)), semg::InputError);
}

// ---------------------------------------------------------------- notch

TEST(Notch, ResponseMatchesAnalogOracle) {
  const auto spec = semg::design_powerline_notch(60.0, 3, 30.0, 1000.0);
  for (double f = 1.0; f < 500.0; f += 1.3) {
    double want = 1.0;
    for (int k = 1; k <= 3; ++k) want *= oracle::notch_magnitude(60.0 * k, 30.0, 1000.0, f);
    EXPECT_NEAR(spec.magnitude(f), want, 1e-9) << f;
  }
}

TEST(Notch, CenterDepthAndShoulders) {
  const auto spec = semg::design_powerline_notch(60.0, 1, 30.0, 1000.0);
  EXPECT_LE(db(spec.magnitude(60.0) + 1e-300), -30.0);
  EXPECT_GE(db(spec.magnitude(55.0)), -3.0);
  EXPECT_GE(db(spec.magnitude(65.0)), -3.0);
  EXPECT_TRUE(spec.stable());
}

TEST(Notch, ToneExamples) {
  const double fs = 1000.0;
  const std::size_t skip = 500;
  const auto hum = semg::notch_powerline(semg::synth_sine(60.0, 1.0, fs, 5.0), 60.0, 1, 30.0);
  const auto mid = hum.samples().subspan(skip, hum.size() - 2 * skip);
  EXPECT_LT(oracle::fit_tone(mid, 60.0, fs, skip).amplitude, 0.03);

  const auto keep = semg::notch_powerline(semg::synth_sine(100.0, 1.0, fs, 5.0), 60.0, 1, 30.0);
  const auto mid2 = keep.samples().subspan(skip, keep.size() - 2 * skip);
  EXPECT_NEAR(oracle::fit_tone(mid2, 100.0, fs, skip).amplitude, 1.0, 0.02);
}

TEST(Notch, HarmonicsBelowNyquistAllApplied) {
  semg::Diagnostics diag;
  const auto spec = semg::design_powerline_notch(60.0, 3, 30.0, 1000.0, &diag);
  EXPECT_TRUE(diag.empty());
  ASSERT_EQ(spec.sections.size(), 3u);
  for (double f : {60.0, 120.0, 180.0}) EXPECT_LT(spec.magnitude(f), 1e-9);
}

TEST(Notch, HarmonicsAboveNyquistSkippedWithWarning) {
  semg::Diagnostics diag;
  const auto spec = semg::design_powerline_notch(60.0, 10, 30.0, 1000.0, &diag);
  EXPECT_EQ(spec.sections.size(), 8u);  // 60..480 Hz
  EXPECT_EQ(diag.size(), 2u);
  EXPECT_THROW(semg::design_powerline_notch(500.0, 1, 30.0, 1000.0), semg::InputError);
  EXPECT_THROW(semg::design_powerline_notch(50.0, 1, 30.0, 90.0), semg::InputError);
}

// ---------------------------------------------------------------- rectify / envelopes

TEST(Rectify, Examples) {
  const auto y = semg::rectify(sig({1.0, -2.0, 3.0}));
  EXPECT_EQ(std::vector<double>(y.samples().begin(), y.samples().end()), (std::vector<double>{1.0, 2.0, 3.0}));
  const auto same = semg::rectify(sig({0.0, 1.5, 2.0}));
  EXPECT_EQ(std::vector<double>(same.samples().begin(), same.samples().end()), (std::vector<double>{0.0, 1.5, 2.0}));
  EXPECT_EQ(semg::rectify(sig({-5.0})).samples()[0], 5.0);
}

TEST(MovingAverage, Examples) {
  const auto flat = semg::moving_average_envelope(sig(std::vector<double>(40, 2.0)), 10);
  for (double v : flat.samples()) EXPECT_DOUBLE_EQ(v, 2.0);
  EXPECT_DOUBLE_EQ(semg::moving_average_envelope(sig({0, 0, 0, 4}), 4).samples()[3], 1.0);
}

TEST(MovingAverage, ImpulseResponseIsBoxOfHeightOneOverN) {
  // Direct convolution with a causal 1/N box (full-window region only).
  std::vector<double> x(20, 0.0);
  x[8] = 1.0;
  const auto env = semg::moving_average_envelope(sig(x), 4);
  for (std::size_t i = 0; i < x.size(); ++i) {
    double conv = 0.0;
    for (std::size_t k = 0; k < 4 && k <= i; ++k) conv += x[i - k] / 4.0;
    EXPECT_NEAR(env.samples()[i], conv, 1e-15) << i;
  }
  EXPECT_DOUBLE_EQ(env.samples()[8], 0.25);
  EXPECT_DOUBLE_EQ(env.samples()[11], 0.25);
  EXPECT_DOUBLE_EQ(env.samples()[12], 0.0);
}

TEST(MovingAverage, PartialPrefixStartup) {
  const auto env = semg::moving_average_envelope(sig({2.0, 4.0, 6.0, 8.0}), 3);
  EXPECT_DOUBLE_EQ(env.samples()[0], 2.0);
  EXPECT_DOUBLE_EQ(env.samples()[1], 3.0);
  EXPECT_DOUBLE_EQ(env.samples()[2], 4.0);
  EXPECT_DOUBLE_EQ(env.samples()[3], 6.0);
  EXPECT_EQ(env.kind(), semg::EnvelopeKind::MovingAverage);
}

TEST(MovingAverage, WindowOfOneIsIdentityOnRectified) {
  std::mt19937_64 rng(2);
  std::exponential_distribution<double> e(2.0);
  std::vector<double> x(5000);
  for (double& v : x) v = e(rng);
  const auto env = semg::moving_average_envelope(sig(x), 1);
  for (std::size_t i = 0; i < x.size(); ++i) EXPECT_NEAR(env.samples()[i], x[i], 1e-12 * (1.0 + x[i]));
}

TEST(MovingAverage, Errors) {
  EXPECT_THROW((void)semg::moving_average_envelope(sig({1.0, -1.0}), 1), semg::InputError);
  EXPECT_THROW((void)semg::moving_average_envelope(sig({1.0, 1.0}), 0), semg::InputError);
  EXPECT_THROW((void)semg::moving_average_envelope(sig({1.0, 1.0}), 3), semg::InputError);
}

TEST(RmsEnvelope, Examples) {
  // 100 Hz sine at 1 kHz: 10-sample periods, window of 5 periods.
  const auto env = semg::rms_envelope(semg::synth_sine(100.0, 2.0, 1000.0, 1.0), 50);
  for (std::size_t i = 49; i < env.size(); ++i) EXPECT_NEAR(env.samples()[i], 2.0 / std::numbers::sqrt2, 0.005 * std::numbers::sqrt2);
  const auto dc = semg::rms_envelope(sig(std::vector<double>(30, -1.5)), 7);
  for (double v : dc.samples()) EXPECT_NEAR(v, 1.5, 1e-12);
  const auto zero = semg::rms_envelope(sig(std::vector<double>(30, 0.0)), 7);
  for (double v : zero.samples()) EXPECT_EQ(v, 0.0);
  EXPECT_THROW((void)semg::rms_envelope(sig({1.0}), 2), semg::InputError);
}

}  // namespace
