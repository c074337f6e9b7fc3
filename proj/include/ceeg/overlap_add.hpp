#pragma once

// Zero-phase FIR filtering via overlap-add FFT convolution. The signal is
// extended by mirror reflection (endpoints not repeated) by half the kernel
// length on each side, convolved, and the group delay removed, so the output
// has the input's length and a passband sinusoid comes back with zero phase
// shift.

#include <algorithm>
#include <complex>
#include <vector>

#include "ceeg/fft.hpp"
#include "ceeg/fir.hpp"
#include "ceeg/matrix.hpp"

namespace ceeg {

namespace detail {

/// Mirror extension index: maps any integer onto [0, n) by reflecting about
/// the first and last samples (period 2n-2). A length-1 signal extends as a
/// constant.
inline std::size_t mirror_index(long i, std::size_t n) {
  if (n == 1) return 0;
  const long period = 2 * static_cast<long>(n) - 2;
  long m = i % period;
  if (m < 0) m += period;
  if (m >= static_cast<long>(n)) m = period - m;
  return static_cast<std::size_t>(m);
}

inline std::size_t default_block(std::size_t klen) {
  const std::size_t fft_size = std::max<std::size_t>(next_pow2(4 * klen), 1024);
  return fft_size - (klen - 1);
}

}  // namespace detail

/// Reusable overlap-add state: kernel taps plus their cached spectrum for a
/// fixed block size.
struct FilterPlan {
  std::vector<double> taps;
  std::size_t block = 0;
  std::size_t fft_size = 0;
  std::vector<std::complex<double>> spectrum;
};

inline FilterPlan make_filter_plan(const FirKernel& kernel, std::size_t block_size = 0) {
  if (kernel.taps.empty() || kernel.taps.size() % 2 == 0)
    fail(ErrorKind::invalid_argument, "filter plan: kernel must have odd length");
  FilterPlan plan;
  plan.taps = kernel.taps;
  plan.block = block_size ? block_size : detail::default_block(kernel.taps.size());
  plan.fft_size = next_pow2(plan.block + kernel.taps.size() - 1);
  plan.spectrum.assign(plan.fft_size, {0.0, 0.0});
  for (std::size_t i = 0; i < plan.taps.size(); ++i) plan.spectrum[i] = plan.taps[i];
  fft_inplace(plan.spectrum);
  return plan;
}

namespace detail {

/// Overlap-add convolution of the mirror-extended signal for one or two
/// channels at once (two real channels packed into one complex transform).
inline void overlap_add_rows(const FilterPlan& plan, const double* row_a, double* out_a,
                             const double* row_b, double* out_b, std::size_t n) {
  const std::size_t klen = plan.taps.size();
  const std::size_t pad = (klen - 1) / 2;
  const std::size_t ext_len = n + 2 * pad;

  auto ext_at = [&](std::size_t i, const double* row) {
    return row[mirror_index(static_cast<long>(i) - static_cast<long>(pad), n)];
  };

  std::vector<double> acc_a(ext_len + klen - 1, 0.0);
  std::vector<double> acc_b(row_b ? ext_len + klen - 1 : 0, 0.0);
  std::vector<std::complex<double>> buf(plan.fft_size);

  for (std::size_t start = 0; start < ext_len; start += plan.block) {
    const std::size_t len = std::min(plan.block, ext_len - start);
    std::fill(buf.begin(), buf.end(), std::complex<double>{0.0, 0.0});
    for (std::size_t i = 0; i < len; ++i)
      buf[i] = {ext_at(start + i, row_a), row_b ? ext_at(start + i, row_b) : 0.0};
    fft_inplace(buf);
    for (std::size_t i = 0; i < plan.fft_size; ++i) buf[i] *= plan.spectrum[i];
    fft_inplace(buf, true);
    const std::size_t out_len = std::min(len + klen - 1, acc_a.size() - start);
    for (std::size_t i = 0; i < out_len; ++i) {
      acc_a[start + i] += buf[i].real();
      if (row_b) acc_b[start + i] += buf[i].imag();
    }
  }

  // Delay compensation: sample i of the output is full-convolution index
  // i + 2*pad (mirror pad plus kernel group delay).
  for (std::size_t i = 0; i < n; ++i) out_a[i] = acc_a[i + 2 * pad];
  if (row_b)
    for (std::size_t i = 0; i < n; ++i) out_b[i] = acc_b[i + 2 * pad];
}

}  // namespace detail

/// Zero-phase filters one signal. block_size is the number of extended-signal
/// samples consumed per FFT chunk; 0 picks a size-appropriate default. Any
/// positive block size yields the same result up to roundoff.
inline std::vector<double> overlap_add_filter(const std::vector<double>& signal,
                                              const FirKernel& kernel,
                                              std::size_t block_size = 0) {
  if (signal.empty()) fail(ErrorKind::invalid_argument, "overlap_add_filter: empty signal");
  const FilterPlan plan = make_filter_plan(kernel, block_size);
  std::vector<double> out(signal.size());
  detail::overlap_add_rows(plan, signal.data(), out.data(), nullptr, nullptr, signal.size());
  return out;
}

/// Filters every row of a channels-by-samples matrix in place, packing two
/// channels per complex FFT.
inline void filter_rows(Matrix& m, const FilterPlan& plan) {
  if (m.rows == 0 || m.cols == 0) fail(ErrorKind::invalid_argument, "filter_rows: empty matrix");
  std::vector<double> out_a(m.cols), out_b(m.cols);
  for (std::size_t r = 0; r + 1 < m.rows; r += 2) {
    detail::overlap_add_rows(plan, m.row(r).data(), out_a.data(), m.row(r + 1).data(),
                             out_b.data(), m.cols);
    std::copy(out_a.begin(), out_a.end(), m.row(r).begin());
    std::copy(out_b.begin(), out_b.end(), m.row(r + 1).begin());
  }
  if (m.rows % 2 == 1) {
    const std::size_t r = m.rows - 1;
    detail::overlap_add_rows(plan, m.row(r).data(), out_a.data(), nullptr, nullptr, m.cols);
    std::copy(out_a.begin(), out_a.end(), m.row(r).begin());
  }
}

}  // namespace ceeg
