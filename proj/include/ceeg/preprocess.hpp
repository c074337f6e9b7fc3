#pragma once

// The per-session preprocessing chain, in order: notch filter, bandpass
// filter, correlation-based bad channel detection, spherical-spline
// interpolation of the detected channels, common average reference.
// Epoch extraction slices the imagery window out of each trial.

#include <cmath>
#include <set>
#include <vector>

#include "ceeg/badchan.hpp"
#include "ceeg/fir.hpp"
#include "ceeg/montage.hpp"
#include "ceeg/overlap_add.hpp"
#include "ceeg/session.hpp"
#include "ceeg/spline.hpp"

namespace ceeg {

struct PreprocessConfig {
  BandpassSpec bandpass;
  NotchSpec notch;
  BadChannelConfig bad_channel;
  SplineConfig spline;
};

struct PreprocessOutcome {
  Session session;
  std::set<std::size_t> interpolated;  // channel indices replaced by the spline
};

/// Subtracts the across-channel mean from every sample. Idempotent.
inline Trial common_average_reference(const Trial& trial) {
  if (trial.samples.rows < 2)
    fail(ErrorKind::invalid_argument, "common average reference needs at least 2 channels");
  Trial out = trial;
  const std::size_t n_channels = trial.samples.rows;
  const std::size_t n = trial.samples.cols;
  for (std::size_t t = 0; t < n; ++t) {
    double mean = 0.0;
    for (std::size_t c = 0; c < n_channels; ++c) mean += trial.samples(c, t);
    mean /= static_cast<double>(n_channels);
    for (std::size_t c = 0; c < n_channels; ++c) out.samples(c, t) = trial.samples(c, t) - mean;
  }
  return out;
}

inline PreprocessOutcome preprocess_session(const Session& session, const Montage& montage,
                                            const PreprocessConfig& config_in = {}) {
  if (session.trials.empty())
    fail(ErrorKind::invalid_argument, "preprocess_session: session has no trials");

  PreprocessConfig config = config_in;
  config.bandpass.fs = session.meta.sampling_rate_hz;
  config.notch.fs = session.meta.sampling_rate_hz;

  const FilterPlan notch_plan = make_filter_plan(design_notch(config.notch));
  const FilterPlan bandpass_plan = make_filter_plan(design_bandpass(config.bandpass));

  PreprocessOutcome out;
  out.session = session;
  for (auto& trial : out.session.trials) {
    filter_rows(trial.samples, notch_plan);
    filter_rows(trial.samples, bandpass_plan);
  }

  out.interpolated = find_bad_by_correlation(out.session, config.bad_channel);
  if (!out.interpolated.empty())
    out.session = interpolate_bads(out.session, montage, out.interpolated, config.spline);

  for (auto& trial : out.session.trials) trial = common_average_reference(trial);
  return out;
}

struct Epoch {
  Matrix samples;  // n_channels x window
  int label_id = 0;
  std::size_t trial_index = 0;  // position in the session's trial list
};

/// Extracts the imagery-window epoch from each trial. The imagery onset is
/// derived from the trial end: the protocol records 2 s of imagery followed by
/// a fixed 1 s end fixation, so onset = n_samples - round(onset_from_end_s*fs)
/// with onset_from_end_s defaulting to 3 s. offset_s shifts the window
/// relative to the onset.
inline std::vector<Epoch> epoch_trials(const Session& session, double window_s = 2.0,
                                       double offset_s = 0.0, double onset_from_end_s = 3.0) {
  const double fs = session.meta.sampling_rate_hz;
  const auto window = static_cast<long>(std::llround(window_s * fs));
  if (window < 1) fail(ErrorKind::invalid_argument, "epoch window must cover at least one sample");
  const long back = std::llround(onset_from_end_s * fs);
  const long shift = std::llround(offset_s * fs);

  std::vector<Epoch> epochs;
  epochs.reserve(session.trials.size());
  for (std::size_t i = 0; i < session.trials.size(); ++i) {
    const auto& trial = session.trials[i];
    const auto n = static_cast<long>(trial.n_samples());
    const long onset = n - back;
    const long start = onset + shift;
    if (onset < 0)
      fail(ErrorKind::invalid_argument,
           "trial " + std::to_string(i) + " too short for imagery onset");
    if (start < 0 || start + window > n)
      fail(ErrorKind::invalid_argument,
           "epoch window outside trial " + std::to_string(i) + " bounds");
    Epoch e;
    e.label_id = trial.label_id;
    e.trial_index = i;
    e.samples = Matrix(trial.samples.rows, static_cast<std::size_t>(window));
    for (std::size_t c = 0; c < trial.samples.rows; ++c) {
      const auto src = trial.samples.row(c);
      std::copy(src.begin() + start, src.begin() + start + window, e.samples.row(c).begin());
    }
    epochs.push_back(std::move(e));
  }
  return epochs;
}

}  // namespace ceeg
