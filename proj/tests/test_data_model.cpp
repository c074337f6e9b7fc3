#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "ceeg/manifest.hpp"
#include "ceeg/montage.hpp"
#include "ceeg/rng.hpp"
#include "ceeg/session.hpp"
#include "ceeg/session_io.hpp"

using namespace ceeg;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  static int counter = 0;
  fs::path p = fs::temp_directory_path() / ("ceeg_dm_test_" + std::to_string(counter++));
  fs::create_directories(p);
  return p;
}

/// Random session whose amplitudes are exactly representable as f32, so file
/// round-trips are identities.
Session make_session(std::uint64_t seed, std::size_t n_channels = 4, std::size_t n_trials = 6,
                     std::size_t n_samples = 50) {
  Rng rng(seed);
  Session s;
  s.subject_id = "Sub-01";
  s.session_index = 2;
  s.meta.sampling_rate_hz = 250.0;
  for (std::size_t c = 0; c < n_channels; ++c) s.meta.channel_names.push_back("ch" + std::to_string(c));
  for (std::size_t i = 0; i < n_trials; ++i) {
    Trial t;
    t.label_id = static_cast<int>(rng.uniform_int(0, 4));
    t.bad = rng.uniform() < 0.2;
    t.samples = Matrix(n_channels, n_samples);
    for (double& v : t.samples.data) v = static_cast<float>(rng.uniform(-50.0, 50.0));
    s.trials.push_back(std::move(t));
  }
  return s;
}

}  // namespace

TEST_CASE("session file round-trip is the identity", "[data-model]") {
  const fs::path dir = temp_dir();
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 4ull, 5ull}) {
    const Session s = make_session(seed);
    const fs::path p = dir / ("s" + std::to_string(seed) + ".ceeg");
    write_session(s, p);
    const Session back = read_session(p, s.subject_id, s.session_index);
    REQUIRE(back == s);
  }
  fs::remove_all(dir);
}

TEST_CASE("re-serialization is byte-exact", "[data-model]") {
  const Session s = make_session(7);
  const std::string a = encode_session(s);
  const Session back = decode_session(reinterpret_cast<const std::uint8_t*>(a.data()), a.size(),
                                      s.subject_id, s.session_index);
  const std::string b = encode_session(back);
  REQUIRE(a == b);
}

TEST_CASE("session with zero channels is rejected before writing", "[data-model]") {
  Session s;
  s.meta.sampling_rate_hz = 250.0;
  REQUIRE_THROWS_MATCHES(write_session(s, "/tmp/never_written.ceeg"), Error,
                         Catch::Matchers::Predicate<Error>([](const Error& e) {
                           return e.kind() == ErrorKind::invalid_argument;
                         }));
}

TEST_CASE("file size follows the v1 layout arithmetic", "[data-model]") {
  // Layout: 4 magic + 1 version + 1 reserved + 2 n_channels + 8 fs = 16 bytes,
  // + per-name (1 + len), + 4 n_trials, + per-trial 7 + 4*ch*samples.
  const std::size_t n_channels = 30, n_trials = 100, n_samples = 500;
  Session s = make_session(11, n_channels, 0, 0);
  s.meta.channel_names.clear();
  std::size_t name_bytes = 0;
  for (const auto& name : builtin_channel_names()) {
    s.meta.channel_names.push_back(name);
    name_bytes += 1 + name.size();
  }
  for (std::size_t i = 0; i < n_trials; ++i) {
    Trial t;
    t.samples = Matrix(n_channels, n_samples, 1.0f);
    s.trials.push_back(std::move(t));
  }
  const std::string buf = encode_session(s);
  const std::size_t expected =
      16 + name_bytes + 4 + n_trials * (7 + n_channels * n_samples * 4);
  REQUIRE(buf.size() == expected);
}

TEST_CASE("reader rejects bad magic, version, truncation and NaN distinctly", "[data-model]") {
  const Session s = make_session(13);
  std::string buf = encode_session(s);

  SECTION("bad magic") {
    std::string b = buf;
    b[0] = 'X';
    REQUIRE_THROWS_MATCHES(
        decode_session(reinterpret_cast<const std::uint8_t*>(b.data()), b.size()), Error,
        Catch::Matchers::Predicate<Error>(
            [](const Error& e) { return e.kind() == ErrorKind::bad_magic; }));
  }
  SECTION("unsupported version") {
    std::string b = buf;
    b[4] = 2;
    REQUIRE_THROWS_MATCHES(
        decode_session(reinterpret_cast<const std::uint8_t*>(b.data()), b.size()), Error,
        Catch::Matchers::Predicate<Error>(
            [](const Error& e) { return e.kind() == ErrorKind::unsupported_version; }));
  }
  SECTION("truncated mid-trial") {
    for (std::size_t cut : {buf.size() - 1, buf.size() - 13, buf.size() / 2, std::size_t{21}}) {
      std::string b = buf.substr(0, cut);
      REQUIRE_THROWS_MATCHES(
          decode_session(reinterpret_cast<const std::uint8_t*>(b.data()), b.size()), Error,
          Catch::Matchers::Predicate<Error>(
              [](const Error& e) { return e.kind() == ErrorKind::truncated_payload; }));
    }
  }
  SECTION("NaN amplitude") {
    std::string b = buf;
    // Overwrite the last f32 with a quiet NaN (LE 0x7fc00000).
    const std::size_t off = b.size() - 4;
    b[off + 0] = '\x00';
    b[off + 1] = '\x00';
    b[off + 2] = '\xc0';
    b[off + 3] = '\x7f';
    REQUIRE_THROWS_MATCHES(
        decode_session(reinterpret_cast<const std::uint8_t*>(b.data()), b.size()), Error,
        Catch::Matchers::Predicate<Error>(
            [](const Error& e) { return e.kind() == ErrorKind::invalid_amplitude; }));
  }
}

TEST_CASE("every single-byte corruption of the 6-byte header is rejected", "[data-model]") {
  const Session s = make_session(17, 2, 1, 8);
  const std::string buf = encode_session(s);
  for (std::size_t pos = 0; pos < 6; ++pos) {
    for (int v = 0; v < 256; ++v) {
      if (static_cast<char>(v) == buf[pos]) continue;
      std::string b = buf;
      b[pos] = static_cast<char>(v);
      bool threw_typed = false;
      try {
        decode_session(reinterpret_cast<const std::uint8_t*>(b.data()), b.size());
      } catch (const Error&) {
        threw_typed = true;
      }
      if (!threw_typed) {
        CAPTURE(pos, v);
        FAIL("corrupted header accepted");
      }
    }
  }
  SUCCEED();
}

TEST_CASE("drop_bad_trials keeps order and is idempotent", "[data-model]") {
  Session s = make_session(19, 3, 100, 20);
  for (auto& t : s.trials) t.bad = false;
  s.trials[10].bad = s.trials[50].bad = s.trials[99].bad = true;
  const Session filtered = drop_bad_trials(s);
  REQUIRE(filtered.trials.size() == 97);
  for (const auto& t : filtered.trials) REQUIRE(!t.bad);
  REQUIRE(drop_bad_trials(filtered) == filtered);

  SECTION("no bad trials is the identity") {
    Session clean = make_session(23);
    for (auto& t : clean.trials) t.bad = false;
    REQUIRE(drop_bad_trials(clean) == clean);
  }
  SECTION("all bad leaves an empty trial list") {
    Session all_bad = make_session(29);
    for (auto& t : all_bad.trials) t.bad = true;
    REQUIRE(drop_bad_trials(all_bad).trials.empty());
  }
}

namespace {

DatasetManifest make_manifest(const fs::path& dir, int n_subjects = 11, int n_sessions = 5) {
  DatasetManifest m;
  m.labels = builtin_labels();
  m.sampling_rate_hz = 250.0;
  for (int sub = 1; sub <= n_subjects; ++sub) {
    SubjectEntry e;
    char id[16];
    std::snprintf(id, sizeof(id), "Sub-%02d", sub);
    e.id = id;
    e.gender = sub % 2 ? "male" : "female";
    e.age = 21 + sub % 8;
    for (int k = 1; k <= n_sessions; ++k) {
      SessionEntry se;
      se.index = k;
      se.path = e.id + "_ses-" + std::to_string(k) + ".ceeg";
      se.n_trials = k <= 3 ? 100 : 50;
      // Touch the file so path validation passes.
      Session s = make_session(static_cast<std::uint64_t>(sub * 10 + k), 2, 1, 4);
      write_session(s, dir / se.path);
      e.sessions.push_back(se);
    }
    m.subjects.push_back(std::move(e));
  }
  return m;
}

}  // namespace

TEST_CASE("manifest round-trip and session-entry count", "[data-model]") {
  const fs::path dir = temp_dir();
  const DatasetManifest m = make_manifest(dir);
  std::size_t entries = 0;
  for (const auto& sub : m.subjects) entries += sub.sessions.size();
  REQUIRE(entries == 55);  // 11 subjects x 5 sessions

  const fs::path p = dir / "manifest.json";
  save_manifest(m, p);
  const DatasetManifest back = load_manifest(p);
  REQUIRE(back == m);

  // Byte-exact re-serialization.
  save_manifest(back, dir / "manifest2.json");
  std::ifstream a(p), b(dir / "manifest2.json");
  const std::string sa((std::istreambuf_iterator<char>(a)), std::istreambuf_iterator<char>());
  const std::string sb((std::istreambuf_iterator<char>(b)), std::istreambuf_iterator<char>());
  REQUIRE(sa == sb);
  fs::remove_all(dir);
}

TEST_CASE("manifest schema violations are rejected", "[data-model]") {
  const fs::path dir = temp_dir();
  DatasetManifest m = make_manifest(dir, 2, 3);

  SECTION("wrong label count") {
    m.labels.pop_back();
    REQUIRE_THROWS_WITH(save_manifest(m, dir / "m.json"),
                        Catch::Matchers::ContainsSubstring("5 entries"));
  }
  SECTION("duplicate session index") {
    m.subjects[0].sessions[1].index = 1;
    REQUIRE_THROWS_AS(save_manifest(m, dir / "m.json"), Error);
  }
  SECTION("non-prefix session indices") {
    m.subjects[0].sessions[1].index = 3;
    REQUIRE_THROWS_AS(save_manifest(m, dir / "m.json"), Error);
  }
  SECTION("unresolvable session path") {
    save_manifest(m, dir / "m.json");
    fs::remove(dir / m.subjects[0].sessions[0].path);
    REQUIRE_THROWS_AS(load_manifest(dir / "m.json"), Error);
  }
  SECTION("missing field") {
    save_manifest(m, dir / "m.json");
    std::ifstream in(dir / "m.json");
    nlohmann::json j;
    in >> j;
    j["subjects"][0].erase("gender");
    std::ofstream out(dir / "m.json", std::ios::trunc);
    out << j.dump(2);
    out.close();
    REQUIRE_THROWS_MATCHES(load_manifest(dir / "m.json"), Error,
                           Catch::Matchers::Predicate<Error>([](const Error& e) {
                             return e.kind() == ErrorKind::parse_error;
                           }));
  }
  fs::remove_all(dir);
}

TEST_CASE("builtin montage geometry", "[data-model]") {
  const Montage m = builtin_montage();
  REQUIRE(m.positions.size() == 30);
  for (const auto& name : builtin_channel_names()) REQUIRE(m.has(name));

  SECTION("Cz sits at the vertex") {
    const Vec3 cz = m.position("Cz");
    REQUIRE(cz[0] == 0.0);
    REQUIRE(cz[1] == 0.0);
    REQUIRE(cz[2] == 1.0);
  }
  SECTION("all positions are unit vectors") {
    for (const auto& [name, p] : m.positions) {
      const double norm = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
      CAPTURE(name);
      REQUIRE_THAT(norm, Catch::Matchers::WithinAbs(1.0, 1e-9));
    }
  }
  SECTION("homologous pairs mirror in x") {
    const std::vector<std::pair<std::string, std::string>> pairs = {
        {"Fp1", "Fp2"}, {"F7", "F8"},   {"F3", "F4"},   {"FC5", "FC6"}, {"FC1", "FC2"},
        {"T7", "T8"},   {"C3", "C4"},   {"CP5", "CP6"}, {"CP1", "CP2"}, {"P7", "P8"},
        {"P3", "P4"},   {"PO3", "PO4"}, {"O1", "O2"}};
    for (const auto& [l, r] : pairs) {
      const Vec3 pl = m.position(l);
      const Vec3 pr = m.position(r);
      CAPTURE(l, r);
      REQUIRE_THAT(pl[0], Catch::Matchers::WithinAbs(-pr[0], 1e-9));
      REQUIRE_THAT(pl[1], Catch::Matchers::WithinAbs(pr[1], 1e-9));
      REQUIRE_THAT(pl[2], Catch::Matchers::WithinAbs(pr[2], 1e-9));
    }
  }
  SECTION("midline channels have x == 0") {
    for (const auto& name : {"Fz", "Cz", "Pz", "POz"})
      REQUIRE_THAT(m.position(name)[0], Catch::Matchers::WithinAbs(0.0, 1e-12));
  }
}
