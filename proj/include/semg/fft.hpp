#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace semg::fft {

using Complex = std::complex<double>;

inline bool is_power_of_two(std::size_t n) noexcept { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_power_of_two(std::size_t n) noexcept {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

namespace detail {

// In-place iterative radix-2 transform; data.size() must be a power of two.
inline void radix2(std::vector<Complex>& data, bool inverse) {
  const std::size_t n = data.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(data[i], data[j]);
  }
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double angle = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
    const std::size_t half = len / 2;
    std::vector<Complex> twiddle(half);
    for (std::size_t k = 0; k < half; ++k) {
      twiddle[k] = std::polar(1.0, angle * static_cast<double>(k));
    }
    for (std::size_t i = 0; i < n; i += len) {
      for (std::size_t k = 0; k < half; ++k) {
        const Complex u = data[i + k];
        const Complex v = data[i + k + half] * twiddle[k];
        data[i + k] = u + v;
        data[i + k + half] = u - v;
      }
    }
  }
}

// Bluestein chirp-z: arbitrary-length DFT through a power-of-two convolution.
inline void bluestein(std::vector<Complex>& data, bool inverse) {
  const std::size_t n = data.size();
  const std::size_t m = next_power_of_two(2 * n - 1);
  const double sign = inverse ? 1.0 : -1.0;

  std::vector<Complex> chirp(n);
  for (std::size_t k = 0; k < n; ++k) {
    // k*k mod 2n keeps the angle argument small for large n.
    const std::size_t kk = (k * k) % (2 * n);
    chirp[k] = std::polar(1.0, sign * std::numbers::pi * static_cast<double>(kk) /
                                   static_cast<double>(n));
  }
  std::vector<Complex> a(m), b(m);
  for (std::size_t k = 0; k < n; ++k) a[k] = data[k] * chirp[k];
  b[0] = std::conj(chirp[0]);
  for (std::size_t k = 1; k < n; ++k) b[k] = b[m - k] = std::conj(chirp[k]);

  radix2(a, false);
  radix2(b, false);
  for (std::size_t k = 0; k < m; ++k) a[k] *= b[k];
  radix2(a, true);
  const double scale = 1.0 / static_cast<double>(m);
  for (std::size_t k = 0; k < n; ++k) data[k] = a[k] * scale * chirp[k];
}

}  // namespace detail

/// Unnormalized forward DFT: X[k] = sum_n x[n] exp(-2 pi i k n / N).
inline std::vector<Complex> forward(std::vector<Complex> data) {
  if (data.size() <= 1) return data;
  if (is_power_of_two(data.size())) {
    detail::radix2(data, false);
  } else {
    detail::bluestein(data, false);
  }
  return data;
}

inline std::vector<Complex> forward(std::span<const double> x) {
  return forward(std::vector<Complex>(x.begin(), x.end()));
}

/// Inverse DFT including the 1/N factor.
inline std::vector<Complex> inverse(std::vector<Complex> data) {
  if (data.size() <= 1) return data;
  if (is_power_of_two(data.size())) {
    detail::radix2(data, true);
  } else {
    detail::bluestein(data, true);
  }
  const double scale = 1.0 / static_cast<double>(data.size());
  for (auto& v : data) v *= scale;
  return data;
}

}  // namespace semg::fft
