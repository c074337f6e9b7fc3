#pragma once

// Iterative radix-2 complex FFT, power-of-two sizes only. Used by the
// overlap-add convolver and by periodogram estimates in tests/self-checks.

#include <complex>
#include <numbers>
#include <vector>

#include "ceeg/errors.hpp"

namespace ceeg {

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

inline void fft_inplace(std::vector<std::complex<double>>& a, bool inverse = false) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0)
    fail(ErrorKind::invalid_argument, "fft size must be a power of two");

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(len);
    const std::complex<double> wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }
  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (auto& x : a) x *= inv;
  }
}

/// Single-sided periodogram of a real signal, padded to the next power of two.
/// Returns |X[k]|^2 / N for k = 0..N/2; bin k corresponds to k*fs/N Hz.
inline std::vector<double> periodogram(const std::vector<double>& x, std::size_t* fft_size = nullptr) {
  const std::size_t n = next_pow2(std::max<std::size_t>(x.size(), 2));
  std::vector<std::complex<double>> a(n);
  for (std::size_t i = 0; i < x.size(); ++i) a[i] = x[i];
  fft_inplace(a);
  std::vector<double> psd(n / 2 + 1);
  for (std::size_t k = 0; k <= n / 2; ++k) psd[k] = std::norm(a[k]) / static_cast<double>(n);
  if (fft_size) *fft_size = n;
  return psd;
}

}  // namespace ceeg
