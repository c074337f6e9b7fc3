#pragma once

// Correlation-based bad channel detection. The session's trials are
// concatenated, split into non-overlapping windows, and a channel's window is
// bad when its maximum absolute Pearson correlation with every other channel
// falls below the threshold. Channels whose bad-window fraction exceeds the
// fraction threshold are reported.

#include <cmath>
#include <set>
#include <vector>

#include "ceeg/errors.hpp"
#include "ceeg/session.hpp"

namespace ceeg {

struct BadChannelConfig {
  double window_s = 1.0;
  double correlation_threshold = 0.4;
  double bad_fraction_threshold = 0.02;
};

inline std::set<std::size_t> find_bad_by_correlation(const Session& session,
                                                     const BadChannelConfig& config) {
  const std::size_t n_channels = session.meta.n_channels();
  if (n_channels < 2)
    fail(ErrorKind::invalid_argument, "bad-channel detection needs at least 2 channels");
  if (session.trials.empty())
    fail(ErrorKind::invalid_argument, "bad-channel detection on empty session");
  if (!(config.correlation_threshold > 0 && config.correlation_threshold < 1) ||
      !(config.bad_fraction_threshold > 0 && config.bad_fraction_threshold < 1))
    fail(ErrorKind::invalid_argument, "bad-channel thresholds must lie in (0,1)");
  const double w_exact = config.window_s * session.meta.sampling_rate_hz;
  const auto window = static_cast<std::size_t>(std::llround(w_exact));
  if (window == 0 || std::abs(w_exact - static_cast<double>(window)) > 1e-9)
    fail(ErrorKind::invalid_argument, "window_s times sampling rate must be an integer");
  for (const auto& t : session.trials)
    if (t.n_samples() < window)
      fail(ErrorKind::invalid_argument, "trial shorter than one detection window");

  // Concatenate per channel.
  std::size_t total = 0;
  for (const auto& t : session.trials) total += t.n_samples();
  Matrix cat(n_channels, total);
  std::size_t off = 0;
  for (const auto& t : session.trials) {
    for (std::size_t c = 0; c < n_channels; ++c)
      std::copy(t.samples.row(c).begin(), t.samples.row(c).end(), cat.row(c).begin() + off);
    off += t.n_samples();
  }

  const std::size_t n_windows = total / window;  // trailing partial window ignored
  if (n_windows == 0)
    fail(ErrorKind::invalid_argument, "session shorter than one detection window");

  std::vector<std::size_t> bad_windows(n_channels, 0);
  std::vector<double> mean(n_channels), sd(n_channels);
  Matrix centered(n_channels, window);
  for (std::size_t w = 0; w < n_windows; ++w) {
    const std::size_t start = w * window;
    for (std::size_t c = 0; c < n_channels; ++c) {
      double m = 0.0;
      const auto row = cat.row(c);
      for (std::size_t i = 0; i < window; ++i) m += row[start + i];
      m /= static_cast<double>(window);
      double ss = 0.0;
      for (std::size_t i = 0; i < window; ++i) {
        const double d = row[start + i] - m;
        centered(c, i) = d;
        ss += d * d;
      }
      mean[c] = m;
      sd[c] = std::sqrt(ss);
    }
    for (std::size_t a = 0; a < n_channels; ++a) {
      double best = 0.0;
      if (sd[a] > 1e-12) {
        for (std::size_t b = 0; b < n_channels; ++b) {
          if (b == a || sd[b] <= 1e-12) continue;  // zero-variance partner: correlation 0
          double dot = 0.0;
          const auto ra = centered.row(a);
          const auto rb = centered.row(b);
          for (std::size_t i = 0; i < window; ++i) dot += ra[i] * rb[i];
          best = std::max(best, std::abs(dot) / (sd[a] * sd[b]));
        }
      }
      if (best < config.correlation_threshold) ++bad_windows[a];
    }
  }

  std::set<std::size_t> bads;
  for (std::size_t c = 0; c < n_channels; ++c) {
    const double fraction = static_cast<double>(bad_windows[c]) / static_cast<double>(n_windows);
    if (fraction > config.bad_fraction_threshold) bads.insert(c);
  }
  return bads;
}

}  // namespace ceeg
