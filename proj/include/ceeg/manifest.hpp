#pragma once

#include <filesystem>
#include <fstream>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "ceeg/errors.hpp"
#include "ceeg/session.hpp"

namespace ceeg {

struct LabelEntry {
  int id = 0;
  std::string word;
  std::string english_equivalent;
  bool operator==(const LabelEntry&) const = default;
};

struct SessionEntry {
  int index = 1;          // 1..5
  std::string path;       // relative to the manifest file
  int n_trials = 0;
  bool operator==(const SessionEntry&) const = default;
};

struct SubjectEntry {
  std::string id;
  std::string gender;
  int age = 0;
  std::vector<SessionEntry> sessions;
  bool operator==(const SubjectEntry&) const = default;
};

struct DatasetManifest {
  double sampling_rate_hz = kPaperSamplingRateHz;
  std::vector<LabelEntry> labels;
  std::vector<SubjectEntry> subjects;
  bool operator==(const DatasetManifest&) const = default;
};

/// The 5-word imagined-command vocabulary used by generated datasets.
inline std::vector<LabelEntry> builtin_labels() {
  return {{0, "chap", "Left"},
          {1, "rast", "Right"},
          {2, "jelo", "Forward"},
          {3, "aghab", "Backward"},
          {4, "ist", "Stop"}};
}

inline void validate_manifest(const DatasetManifest& m) {
  if (static_cast<int>(m.labels.size()) != kNumWordLabels)
    fail(ErrorKind::invalid_argument, "label vocabulary must have 5 entries, got " +
                                          std::to_string(m.labels.size()));
  std::set<int> label_ids;
  for (const auto& l : m.labels) {
    if (!label_ids.insert(l.id).second)
      fail(ErrorKind::invalid_argument, "duplicate label id " + std::to_string(l.id));
    if (l.id < 0 || l.id >= kNumWordLabels)
      fail(ErrorKind::invalid_argument, "label id outside [0,4]");
  }
  if (!(m.sampling_rate_hz > 0))
    fail(ErrorKind::invalid_argument, "sampling_rate_hz must be positive");
  std::set<std::string> subject_ids;
  for (const auto& sub : m.subjects) {
    if (sub.id.empty()) fail(ErrorKind::invalid_argument, "subject id must be non-empty");
    if (!subject_ids.insert(sub.id).second)
      fail(ErrorKind::invalid_argument, "duplicate subject id '" + sub.id + "'");
    // Session indices must form a prefix of 1..5 in order, no duplicates.
    if (sub.sessions.size() > 5)
      fail(ErrorKind::invalid_argument, "subject '" + sub.id + "' has more than 5 sessions");
    for (std::size_t i = 0; i < sub.sessions.size(); ++i) {
      if (sub.sessions[i].index != static_cast<int>(i) + 1)
        fail(ErrorKind::invalid_argument,
             "subject '" + sub.id + "' session indices must be 1..k in order");
      if (sub.sessions[i].n_trials < 0)
        fail(ErrorKind::invalid_argument, "negative trial count in manifest");
    }
  }
}

inline nlohmann::json manifest_to_json(const DatasetManifest& m) {
  nlohmann::json j;
  j["format"] = "ceeg-manifest";
  j["version"] = 1;
  j["sampling_rate_hz"] = m.sampling_rate_hz;
  j["labels"] = nlohmann::json::array();
  for (const auto& l : m.labels)
    j["labels"].push_back({{"id", l.id}, {"word", l.word}, {"english_equivalent", l.english_equivalent}});
  j["subjects"] = nlohmann::json::array();
  for (const auto& sub : m.subjects) {
    nlohmann::json js;
    js["id"] = sub.id;
    js["gender"] = sub.gender;
    js["age"] = sub.age;
    js["sessions"] = nlohmann::json::array();
    for (const auto& se : sub.sessions)
      js["sessions"].push_back({{"index", se.index}, {"path", se.path}, {"n_trials", se.n_trials}});
    j["subjects"].push_back(std::move(js));
  }
  return j;
}

inline void save_manifest(const DatasetManifest& m, const std::filesystem::path& path) {
  validate_manifest(m);
  std::ofstream out(path, std::ios::trunc);
  if (!out) fail(ErrorKind::io_failure, "cannot open for writing: " + path.string());
  out << manifest_to_json(m).dump(2) << '\n';
  if (!out) fail(ErrorKind::io_failure, "write failed: " + path.string());
}

namespace detail {

template <typename T>
T json_field(const nlohmann::json& j, const char* key) {
  if (!j.contains(key))
    fail(ErrorKind::parse_error, std::string("manifest missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    fail(ErrorKind::parse_error, std::string("manifest field '") + key + "' has wrong type");
  }
}

}  // namespace detail

/// Loads and validates a manifest. Session paths are interpreted relative to
/// the manifest's directory and must resolve to readable files.
inline DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::io_failure, "cannot open for reading: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::parse_error, "manifest is not valid JSON: " + std::string(e.what()));
  }
  if (detail::json_field<std::string>(j, "format") != "ceeg-manifest")
    fail(ErrorKind::parse_error, "not a ceeg-manifest document");
  if (detail::json_field<int>(j, "version") != 1)
    fail(ErrorKind::parse_error, "unsupported manifest version");

  DatasetManifest m;
  m.sampling_rate_hz = detail::json_field<double>(j, "sampling_rate_hz");
  for (const auto& jl : detail::json_field<nlohmann::json>(j, "labels")) {
    LabelEntry l;
    l.id = detail::json_field<int>(jl, "id");
    l.word = detail::json_field<std::string>(jl, "word");
    l.english_equivalent = detail::json_field<std::string>(jl, "english_equivalent");
    m.labels.push_back(std::move(l));
  }
  for (const auto& js : detail::json_field<nlohmann::json>(j, "subjects")) {
    SubjectEntry sub;
    sub.id = detail::json_field<std::string>(js, "id");
    sub.gender = detail::json_field<std::string>(js, "gender");
    sub.age = detail::json_field<int>(js, "age");
    for (const auto& je : detail::json_field<nlohmann::json>(js, "sessions")) {
      SessionEntry se;
      se.index = detail::json_field<int>(je, "index");
      se.path = detail::json_field<std::string>(je, "path");
      se.n_trials = detail::json_field<int>(je, "n_trials");
      sub.sessions.push_back(std::move(se));
    }
    m.subjects.push_back(std::move(sub));
  }
  validate_manifest(m);

  const std::filesystem::path base = path.parent_path();
  for (const auto& sub : m.subjects)
    for (const auto& se : sub.sessions) {
      std::ifstream probe(base / se.path, std::ios::binary);
      if (!probe)
        fail(ErrorKind::invalid_argument,
             "session path does not resolve to a readable file: " + (base / se.path).string());
    }
  return m;
}

inline std::filesystem::path resolve_session_path(const std::filesystem::path& manifest_path,
                                                  const SessionEntry& entry) {
  return manifest_path.parent_path() / entry.path;
}

}  // namespace ceeg
