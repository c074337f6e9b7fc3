#pragma once

#include <cmath>
#include <set>
#include <string>
#include <vector>

#include "ceeg/errors.hpp"
#include "ceeg/matrix.hpp"

namespace ceeg {

inline constexpr int kNumWordLabels = 5;
inline constexpr double kPaperSamplingRateHz = 250.0;

struct RecordingMeta {
  double sampling_rate_hz = kPaperSamplingRateHz;
  std::vector<std::string> channel_names;

  std::size_t n_channels() const { return channel_names.size(); }
  bool operator==(const RecordingMeta&) const = default;
};

struct Trial {
  int label_id = 0;    // index into the 5-word vocabulary
  bool bad = false;    // subject aborted the trial
  Matrix samples;      // n_channels x n_samples, microvolts

  std::size_t n_samples() const { return samples.cols; }
  bool operator==(const Trial&) const = default;
};

struct Session {
  std::string subject_id;
  int session_index = 1;  // 1..5
  RecordingMeta meta;
  std::vector<Trial> trials;

  bool operator==(const Session&) const = default;
};

inline void validate_meta(const RecordingMeta& meta) {
  if (!(meta.sampling_rate_hz > 0) || !std::isfinite(meta.sampling_rate_hz))
    fail(ErrorKind::invalid_argument, "invariant violation: sampling_rate_hz must be positive");
  if (meta.channel_names.empty())
    fail(ErrorKind::invalid_argument, "invariant violation: session must have at least one channel");
  std::set<std::string> seen;
  for (const auto& name : meta.channel_names) {
    if (name.empty())
      fail(ErrorKind::invalid_argument, "invariant violation: empty channel name");
    if (name.size() > 255)
      fail(ErrorKind::invalid_argument, "invariant violation: channel name longer than 255 bytes");
    if (!seen.insert(name).second)
      fail(ErrorKind::invalid_argument, "invariant violation: duplicate channel name '" + name + "'");
  }
}

inline void validate_trial(const Trial& trial, std::size_t n_channels) {
  if (trial.label_id < 0 || trial.label_id >= kNumWordLabels)
    fail(ErrorKind::invalid_argument, "invariant violation: label_id outside [0,4]");
  if (trial.samples.rows != n_channels)
    fail(ErrorKind::invalid_argument, "invariant violation: trial channel count mismatch");
  if (trial.samples.cols == 0)
    fail(ErrorKind::invalid_argument, "invariant violation: trial has zero samples");
  for (double v : trial.samples.data)
    if (!std::isfinite(v))
      fail(ErrorKind::invalid_amplitude, "invariant violation: non-finite amplitude");
}

/// Checks every Session invariant; throws on the first violation. An empty
/// trial list is allowed (a session can lose all trials to bad-trial removal).
inline void validate_session(const Session& s) {
  validate_meta(s.meta);
  if (s.session_index < 1 || s.session_index > 5)
    fail(ErrorKind::invalid_argument, "invariant violation: session_index outside [1,5]");
  for (const auto& t : s.trials) validate_trial(t, s.meta.n_channels());
}

/// Keeps exactly the trials with bad == false, order preserved. Idempotent.
inline Session drop_bad_trials(const Session& s) {
  Session out;
  out.subject_id = s.subject_id;
  out.session_index = s.session_index;
  out.meta = s.meta;
  out.trials.reserve(s.trials.size());
  for (const auto& t : s.trials)
    if (!t.bad) out.trials.push_back(t);
  return out;
}

}  // namespace ceeg
