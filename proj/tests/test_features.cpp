#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "semg/epoching.hpp"
#include "semg/features.hpp"
#include "semg/synth.hpp"

namespace {

semg::PowerSpectrum spectrum(std::vector<double> density, double df) {
  std::vector<double> f(density.size());
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = static_cast<double>(k) * df;
  return semg::PowerSpectrum(std::move(f), std::move(density), df);
}

TEST(Rms, Examples) {
  EXPECT_DOUBLE_EQ(semg::rms(std::vector<double>(10, -3.0)), 3.0);
  EXPECT_DOUBLE_EQ(semg::rms(std::vector<double>{1, -1, 1, -1}), 1.0);
  const auto s = semg::synth_sine(50.0, 2.0, 1000.0, 1.0);
  EXPECT_NEAR(semg::rms(s.samples()), std::numbers::sqrt2, 0.001 * std::numbers::sqrt2);
  EXPECT_THROW((void)semg::rms(std::vector<double>{}), semg::InputError);
}

TEST(Arv, Examples) {
  EXPECT_DOUBLE_EQ(semg::arv(std::vector<double>{1, -1, 2, -2}), 1.5);
  EXPECT_DOUBLE_EQ(semg::arv(std::vector<double>(7, -0.25)), 0.25);
  for (double a : {0.5, 1.0, 3.0}) {
    const auto s = semg::synth_sine(5.0, a, 1000.0, 1.0, 0.3);
    EXPECT_NEAR(semg::arv(s.samples()), 2.0 * a / std::numbers::pi, 0.001 * 2.0 * a / std::numbers::pi);
    EXPECT_NEAR(semg::rms(s.samples()), a / std::numbers::sqrt2, 0.001 * a / std::numbers::sqrt2);
  }
}

TEST(Amplitude, ArvNeverExceedsRms) {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> g;
  std::uniform_real_distribution<double> u(-5.0, 5.0);
  for (int trial = 0; trial < 1000; ++trial) {
    std::vector<double> x(1 + rng() % 600);
    const bool gaussian = trial % 2 == 0;
    for (double& v : x) v = gaussian ? g(rng) : u(rng);
    EXPECT_LE(semg::arv(x), semg::rms(x) * (1.0 + 1e-12));
  }
  // Equality when |samples| is constant.
  EXPECT_DOUBLE_EQ(semg::arv(std::vector<double>{2, -2, 2}), semg::rms(std::vector<double>{2, -2, 2}));
}

TEST(Amplitude, ScalingProperty) {
  std::mt19937_64 rng(5);
  std::normal_distribution<double> g;
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> x(50 + rng() % 500), y(x.size());
    for (double& v : x) v = g(rng);
    const double c = std::uniform_real_distribution<double>(-10.0, 10.0)(rng);
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = c * x[i];
    EXPECT_NEAR(semg::rms(y), std::abs(c) * semg::rms(x), 1e-12 * (1.0 + std::abs(c)));
    EXPECT_NEAR(semg::arv(y), std::abs(c) * semg::arv(x), 1e-12 * (1.0 + std::abs(c)));
    const double thr = 0.3;
    if (c > 0.0) {
      EXPECT_EQ(semg::zero_crossings(y, c * thr), semg::zero_crossings(x, thr));
    }
  }
}

TEST(ZeroCrossings, Examples) {
  EXPECT_EQ(semg::zero_crossings(std::vector<double>{1, -1, 1, -1}), 3u);
  EXPECT_EQ(semg::zero_crossings(std::vector<double>(100, 0.7)), 0u);
  EXPECT_EQ(semg::zero_crossings(std::vector<double>{0.0, -1.0, 0.0}), 2u);  // zero is positive
  EXPECT_EQ(semg::zero_crossings(std::vector<double>{0.005, -0.004, 0.02}, 0.01), 1u);
  EXPECT_THROW((void)semg::zero_crossings(std::vector<double>{1.0}, -1.0), semg::InputError);
}

TEST(ZeroCrossings, HundredHertzSine) {
  // Phase offset keeps samples off exact zeros; with phase 0 every fifth sample
  // lands on a zero and the tie rule drops the first crossing.
  const auto s = semg::synth_sine(100.0, 1.0, 1000.0, 1.0, std::numbers::pi / 4.0);
  EXPECT_EQ(semg::zero_crossings(s.samples(), 0.0), 200u);
  const auto s10 = semg::synth_sine(100.0, 1.0, 1000.0, 10.0, std::numbers::pi / 4.0);
  EXPECT_EQ(semg::zero_crossings(s10.samples(), 0.0), 2000u);
}

TEST(MeanFrequency, FlatTopAndTone) {
  std::vector<double> d(201, 0.0);
  for (std::size_t k = 0; k <= 100; ++k) d[k] = 1.0;
  const auto flat = spectrum(d, 2.0);  // flat on [0, 200 Hz]
  EXPECT_DOUBLE_EQ(semg::mean_frequency(flat), 100.0);
  EXPECT_DOUBLE_EQ(semg::median_frequency(flat), 100.0);

  const auto tone = semg::synth_sine(130.0, 1.0, 1000.0, 0.5, 0.2);
  const auto p = semg::periodogram(tone.samples(), 1000.0);
  EXPECT_NEAR(semg::mean_frequency(p), 130.0, p.df());
  EXPECT_NEAR(semg::median_frequency(p), 130.0, p.df());
}

TEST(MeanFrequency, BandNoise) {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto x = semg::synth_band_noise({1000.0, 10.0, 1.0, seed, "m"}, {50.0, 150.0});
    const auto p = semg::welch_psd(x, 500);
    EXPECT_NEAR(semg::mean_frequency(p), 100.0, 5.0);
    EXPECT_NEAR(semg::median_frequency(p), 100.0, 5.0);
  }
}

TEST(MedianFrequency, HighFrequencyTailPullsMeanAbove) {
  // Bulk at 40-80 Hz plus a long shallow tail out to 400 Hz.
  std::vector<double> d(501, 0.0);
  for (std::size_t k = 40; k <= 80; ++k) d[k] = 10.0;
  for (std::size_t k = 81; k <= 400; ++k) d[k] = 0.5;
  const auto p = spectrum(d, 1.0);
  EXPECT_GT(semg::mean_frequency(p), semg::median_frequency(p));
  // The mirror-image low tail flips the ordering.
  std::vector<double> m(501, 0.0);
  for (std::size_t k = 320; k <= 360; ++k) m[k] = 10.0;
  for (std::size_t k = 1; k < 320; ++k) m[k] = 0.5;
  EXPECT_LT(semg::mean_frequency(spectrum(m, 1.0)), semg::median_frequency(spectrum(m, 1.0)));
}

TEST(MedianFrequency, SymmetricDensityWithinOneBin) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t bins = 20 + rng() % 400;
    const std::size_t c = 5 + rng() % (bins - 10);
    const std::size_t half = 1 + rng() % std::min(c, bins - 1 - c);
    std::vector<double> d(bins, 0.0);
    for (std::size_t j = 0; j <= half; ++j) {
      const double v = u(rng);
      d[c + j] = v;
      d[c - j] = v;
    }
    const double df = 0.5 + u(rng);
    const auto p = spectrum(d, df);
    EXPECT_NEAR(semg::mean_frequency(p), semg::median_frequency(p), df);
    for (double f : {semg::mean_frequency(p), semg::median_frequency(p)}) {
      EXPECT_GE(f, p.freqs().front());
      EXPECT_LE(f, p.freqs().back());
    }
  }
}

TEST(SpectralFeatures, ZeroPowerIsComputeError) {
  const auto p = spectrum(std::vector<double>(10, 0.0), 1.0);
  EXPECT_THROW((void)semg::mean_frequency(p), semg::ComputeError);
  EXPECT_THROW((void)semg::median_frequency(p), semg::ComputeError);
}

TEST(FeatureTable, RowsMatchEpochs) {
  const auto x = semg::synth_band_noise({1000.0, 10.0, 1.0, 3, "m"}, {50.0, 150.0});
  const auto t = semg::feature_table(semg::segment(x));
  EXPECT_EQ(t.rows(), 39u);
  EXPECT_EQ(t.mnf.size(), 39u);
  EXPECT_DOUBLE_EQ(t.time[1], 0.25);
  for (std::size_t i = 0; i < t.rows(); ++i) EXPECT_LE(t.arv[i], t.rms[i]);
}

TEST(FeatureTable, StationaryInputHasStableMnf) {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto x = semg::synth_band_noise({1000.0, 10.0, 1.0, seed, "m"}, {40.0, 200.0});
    const auto t = semg::feature_table(semg::segment(x));
    double m = 0.0, s = 0.0;
    for (double v : t.mnf) m += v;
    m /= static_cast<double>(t.rows());
    for (double v : t.mnf) s += (v - m) * (v - m);
    const double cv = std::sqrt(s / static_cast<double>(t.rows() - 1)) / m;
    EXPECT_LT(cv, 0.15) << seed;
  }
}

TEST(FeatureTable, ZeroSignalIsError) {
  const semg::ChannelSignal z("m", std::vector<double>(2000, 0.0), 1000.0);
  EXPECT_THROW((void)semg::feature_table(semg::segment(z)), semg::ComputeError);
}

TEST(Trend, Examples) {
  const std::vector<double> t{0, 1, 2, 3, 4};
  const auto line = semg::fatigue_trend(t, std::vector<double>{1, 3, 5, 7, 9});
  EXPECT_DOUBLE_EQ(line.slope, 2.0);
  EXPECT_DOUBLE_EQ(line.intercept, 1.0);
  EXPECT_DOUBLE_EQ(line.r, 1.0);
  EXPECT_FALSE(line.degenerate);
  const auto flat = semg::fatigue_trend(t, std::vector<double>(5, 4.0));
  EXPECT_EQ(flat.slope, 0.0);
  EXPECT_EQ(flat.r, 0.0);
  EXPECT_TRUE(flat.degenerate);
  EXPECT_THROW((void)semg::fatigue_trend(std::vector<double>(3, 1.0), std::vector<double>{1, 2, 3}),
               semg::InputError);
  EXPECT_THROW((void)semg::fatigue_trend(t, std::vector<double>{1, 2}), semg::InputError);
}

TEST(Trend, SyntheticFatigueDecline) {
  const semg::SynthSpec spec{1000.0, 60.0, 1.0, 42, "m"};
  const auto syn = semg::synth_fatigue_sequence(spec, {120.0, 80.0, 10.0});
  const auto t = semg::feature_table(semg::segment(syn.signal));
  const auto trend = semg::fatigue_trend(t.time, t.mnf);
  EXPECT_NEAR(trend.slope, -40.0 / 60.0, 0.15);
  EXPECT_LT(trend.r, -0.9);
}

TEST(Trend, PerEpochMnfTracksGeneratorCentroid) {
  const semg::SynthSpec spec{1000.0, 60.0, 1.0, 42, "m"};
  const auto syn = semg::synth_fatigue_sequence(spec, {120.0, 80.0, 10.0});
  const auto series = semg::segment(syn.signal);
  const auto t = semg::feature_table(series);
  for (std::size_t i = 0; i < t.rows(); ++i) {
    const double truth = syn.centroid_at(series.epochs[i].center_time());
    EXPECT_NEAR(t.mnf[i], truth, 6.0) << "epoch " << i;
  }
}

}  // namespace
