#pragma once

// Windowed-sinc FIR design (Hamming window). Kernels are odd-length,
// exactly symmetric type-I filters, so the group delay is the integer
// (len-1)/2 and zero-phase filtering reduces to delay compensation.

#include <cmath>
#include <numbers>
#include <string>
#include <vector>

#include "ceeg/errors.hpp"

namespace ceeg {

struct FirKernel {
  std::vector<double> taps;
  std::string design;  // human-readable passband/stopband descriptor

  std::size_t group_delay_samples() const { return (taps.size() - 1) / 2; }
};

struct BandpassSpec {
  double low_hz = 3.0;
  double high_hz = 45.0;
  double transition_hz = 2.0;
  double fs = 250.0;
};

struct NotchSpec {
  double base_hz = 50.0;
  double notch_width_hz = 1.0;  // full stopband width per notch
  double fs = 250.0;

  /// All multiples of base_hz strictly below the Nyquist frequency.
  std::vector<double> harmonics() const {
    std::vector<double> out;
    for (double f = base_hz; f < fs / 2.0; f += base_hz) out.push_back(f);
    return out;
  }
};

namespace detail {

/// Smallest odd tap count for the Hamming rule of thumb 3.3 * fs / transition.
inline std::size_t hamming_tap_count(double transition_hz, double fs) {
  auto n = static_cast<std::size_t>(std::ceil(3.3 * fs / transition_hz));
  if (n % 2 == 0) ++n;
  return n;
}

/// Hamming-windowed sinc lowpass with half-amplitude point at cutoff_hz,
/// normalized to exactly unit DC gain. Taps are mirrored from one half so the
/// kernel is symmetric to the last bit.
inline std::vector<double> windowed_sinc_lowpass(double cutoff_hz, std::size_t taps, double fs) {
  const std::size_t mid = (taps - 1) / 2;
  const double fc = cutoff_hz / fs;  // cycles per sample
  std::vector<double> h(taps);
  for (std::size_t i = 0; i <= mid; ++i) {
    const auto k = static_cast<double>(i) - static_cast<double>(mid);
    const double sinc =
        k == 0.0 ? 2.0 * fc : std::sin(2.0 * std::numbers::pi * fc * k) / (std::numbers::pi * k);
    const double window =
        0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                               static_cast<double>(taps - 1));
    h[i] = sinc * window;
    h[taps - 1 - i] = h[i];
  }
  double sum = 0.0;
  for (double v : h) sum += v;
  for (double& v : h) v /= sum;
  return h;
}

}  // namespace detail

/// Hamming-window FIR bandpass: difference of two unit-DC lowpass kernels.
/// Taps sum to exactly zero, so DC is fully rejected.
inline FirKernel design_bandpass(const BandpassSpec& spec) {
  if (!(spec.transition_hz > 0))
    fail(ErrorKind::invalid_argument, "infeasible bandpass spec: transition must be positive");
  if (!(spec.low_hz - spec.transition_hz > 0))
    fail(ErrorKind::invalid_argument, "infeasible bandpass spec: low edge minus transition <= 0");
  if (!(spec.high_hz + spec.transition_hz < spec.fs / 2.0))
    fail(ErrorKind::invalid_argument, "infeasible bandpass spec: high edge plus transition >= Nyquist");
  if (!(spec.low_hz < spec.high_hz))
    fail(ErrorKind::invalid_argument, "infeasible bandpass spec: low >= high");

  const std::size_t taps = detail::hamming_tap_count(spec.transition_hz, spec.fs);
  const std::vector<double> lp_high = detail::windowed_sinc_lowpass(spec.high_hz, taps, spec.fs);
  const std::vector<double> lp_low = detail::windowed_sinc_lowpass(spec.low_hz, taps, spec.fs);
  FirKernel k;
  k.taps.resize(taps);
  for (std::size_t i = 0; i < taps; ++i) k.taps[i] = lp_high[i] - lp_low[i];
  k.design = "bandpass " + std::to_string(spec.low_hz) + "-" + std::to_string(spec.high_hz) +
             " Hz, transition " + std::to_string(spec.transition_hz) + " Hz, Hamming";
  return k;
}

/// Linear-phase FIR notch: identity minus a narrow bandpass per harmonic.
/// Each notch has stopband width notch_width_hz; the per-edge transition is
/// half that width, which puts the response back within ripple of unity at
/// one width from the notch center.
inline FirKernel design_notch(const NotchSpec& spec) {
  if (!(spec.notch_width_hz > 0))
    fail(ErrorKind::invalid_argument, "infeasible notch spec: width must be positive");
  const std::vector<double> freqs = spec.harmonics();
  if (freqs.empty())
    fail(ErrorKind::invalid_argument, "no valid notch below Nyquist for base " +
                                          std::to_string(spec.base_hz) + " Hz at fs " +
                                          std::to_string(spec.fs));
  const double half_width = spec.notch_width_hz / 2.0;
  const double transition = half_width;
  for (double f : freqs)
    if (!(f + half_width + transition < spec.fs / 2.0))
      fail(ErrorKind::invalid_argument, "infeasible notch spec: notch at " + std::to_string(f) +
                                            " Hz does not clear Nyquist");
  if (!(freqs.front() - half_width - transition > 0))
    fail(ErrorKind::invalid_argument, "infeasible notch spec: notch touches DC");

  const std::size_t taps = detail::hamming_tap_count(transition, spec.fs);
  FirKernel k;
  k.taps.assign(taps, 0.0);
  k.taps[(taps - 1) / 2] = 1.0;
  for (double f : freqs) {
    const std::vector<double> hi = detail::windowed_sinc_lowpass(f + half_width, taps, spec.fs);
    const std::vector<double> lo = detail::windowed_sinc_lowpass(f - half_width, taps, spec.fs);
    for (std::size_t i = 0; i < taps; ++i) k.taps[i] -= hi[i] - lo[i];
  }
  k.design = "notch at";
  for (double f : freqs) k.design += " " + std::to_string(f);
  k.design += " Hz, stopband width " + std::to_string(spec.notch_width_hz) + " Hz, Hamming";
  return k;
}

/// Magnitude response |H(e^{j 2 pi f / fs})| evaluated by direct summation.
inline double frequency_response(const FirKernel& kernel, double freq_hz, double fs) {
  const double w = 2.0 * std::numbers::pi * freq_hz / fs;
  double re = 0.0, im = 0.0;
  for (std::size_t n = 0; n < kernel.taps.size(); ++n) {
    re += kernel.taps[n] * std::cos(w * static_cast<double>(n));
    im -= kernel.taps[n] * std::sin(w * static_cast<double>(n));
  }
  return std::sqrt(re * re + im * im);
}

inline double gain_db(const FirKernel& kernel, double freq_hz, double fs) {
  return 20.0 * std::log10(std::max(frequency_response(kernel, freq_hz, fs), 1e-300));
}

}  // namespace ceeg
