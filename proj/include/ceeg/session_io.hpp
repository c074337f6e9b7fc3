#pragma once

// CEEG v1 session file, all integers little-endian:
//   bytes 0-3   ASCII "CEEG"
//   byte  4     version, u8 = 1
//   byte  5     reserved, u8 = 0
//   u16         n_channels
//   f64         sampling_rate_hz
//   n_channels  name records: u8 length + UTF-8 bytes
//   u32         n_trials
//   per trial:  u16 label_id, u8 bad_flag, u32 n_samples,
//               n_channels * n_samples f32 amplitudes, channel-major
//
// The format carries no subject id or session index; those live in the
// dataset manifest. read_session takes them as optional stamps so
// read(write(s)) reproduces s exactly.

#include <bit>
#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <string>

#include "ceeg/session.hpp"

namespace ceeg {

inline constexpr char kCeegMagic[4] = {'C', 'E', 'E', 'G'};
inline constexpr std::uint8_t kCeegVersion = 1;

namespace detail {

inline void put_u16(std::string& b, std::uint16_t v) {
  b.push_back(static_cast<char>(v & 0xff));
  b.push_back(static_cast<char>((v >> 8) & 0xff));
}

inline void put_u32(std::string& b, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_u64(std::string& b, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) b.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

inline void put_f32(std::string& b, float v) { put_u32(b, std::bit_cast<std::uint32_t>(v)); }
inline void put_f64(std::string& b, double v) { put_u64(b, std::bit_cast<std::uint64_t>(v)); }

class Reader {
 public:
  Reader(const std::uint8_t* p, std::size_t n) : p_(p), n_(n) {}

  std::uint8_t u8() {
    need(1);
    return p_[pos_++];
  }
  std::uint16_t u16() {
    need(2);
    std::uint16_t v = static_cast<std::uint16_t>(p_[pos_] | (p_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | p_[pos_ + i];
    pos_ += 4;
    return v;
  }
  std::uint64_t u64() {
    need(8);
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p_[pos_ + i];
    pos_ += 8;
    return v;
  }
  float f32() { return std::bit_cast<float>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }

  std::string bytes(std::size_t n) {
    need(n);
    std::string s(reinterpret_cast<const char*>(p_ + pos_), n);
    pos_ += n;
    return s;
  }

  std::size_t remaining() const { return n_ - pos_; }

 private:
  void need(std::size_t n) const {
    if (n_ - pos_ < n) fail(ErrorKind::truncated_payload, "truncated payload: file ends mid-record");
  }
  const std::uint8_t* p_;
  std::size_t n_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Serializes a validated session to the CEEG v1 byte layout.
inline std::string encode_session(const Session& s) {
  validate_session(s);
  std::string buf;
  std::size_t total = 20;
  for (const auto& name : s.meta.channel_names) total += 1 + name.size();
  for (const auto& t : s.trials) total += 7 + t.samples.data.size() * 4;
  buf.reserve(total);

  buf.append(kCeegMagic, 4);
  buf.push_back(static_cast<char>(kCeegVersion));
  buf.push_back(0);  // reserved
  detail::put_u16(buf, static_cast<std::uint16_t>(s.meta.n_channels()));
  detail::put_f64(buf, s.meta.sampling_rate_hz);
  for (const auto& name : s.meta.channel_names) {
    buf.push_back(static_cast<char>(name.size()));
    buf.append(name);
  }
  detail::put_u32(buf, static_cast<std::uint32_t>(s.trials.size()));
  for (const auto& t : s.trials) {
    detail::put_u16(buf, static_cast<std::uint16_t>(t.label_id));
    buf.push_back(t.bad ? 1 : 0);
    detail::put_u32(buf, static_cast<std::uint32_t>(t.n_samples()));
    for (double v : t.samples.data) {
      const float f = static_cast<float>(v);
      if (!std::isfinite(f))
        fail(ErrorKind::invalid_amplitude, "invariant violation: amplitude overflows f32");
      detail::put_f32(buf, f);
    }
  }
  return buf;
}

inline void write_session(const Session& s, const std::filesystem::path& path) {
  const std::string buf = encode_session(s);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::io_failure, "cannot open for writing: " + path.string());
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) fail(ErrorKind::io_failure, "write failed: " + path.string());
}

/// Decodes a CEEG v1 byte buffer. subject_id / session_index are not stored in
/// the file; callers that know them (e.g. via the manifest) pass them in.
inline Session decode_session(const std::uint8_t* data, std::size_t size,
                              const std::string& subject_id = "", int session_index = 1) {
  detail::Reader r(data, size);
  const std::string magic = r.bytes(4);
  if (std::memcmp(magic.data(), kCeegMagic, 4) != 0)
    fail(ErrorKind::bad_magic, "bad magic: not a CEEG file");
  const std::uint8_t version = r.u8();
  if (version != kCeegVersion)
    fail(ErrorKind::unsupported_version,
         "unsupported version " + std::to_string(version) + " (expected 1)");
  const std::uint8_t reserved = r.u8();
  if (reserved != 0) fail(ErrorKind::corrupt_header, "corrupt header: reserved byte nonzero");

  Session s;
  s.subject_id = subject_id;
  s.session_index = session_index;
  const std::uint16_t n_channels = r.u16();
  if (n_channels == 0) fail(ErrorKind::corrupt_header, "corrupt header: zero channels");
  s.meta.sampling_rate_hz = r.f64();
  if (!std::isfinite(s.meta.sampling_rate_hz) || s.meta.sampling_rate_hz <= 0)
    fail(ErrorKind::corrupt_header, "corrupt header: bad sampling rate");
  s.meta.channel_names.reserve(n_channels);
  for (std::uint16_t c = 0; c < n_channels; ++c) {
    const std::uint8_t len = r.u8();
    if (len == 0) fail(ErrorKind::corrupt_header, "corrupt header: empty channel name");
    s.meta.channel_names.push_back(r.bytes(len));
  }

  const std::uint32_t n_trials = r.u32();
  s.trials.reserve(n_trials);
  for (std::uint32_t i = 0; i < n_trials; ++i) {
    Trial t;
    t.label_id = r.u16();
    const std::uint8_t bad = r.u8();
    if (bad > 1) fail(ErrorKind::parse_error, "bad_flag byte must be 0 or 1");
    t.bad = bad == 1;
    const std::uint32_t n_samples = r.u32();
    if (n_samples == 0) fail(ErrorKind::parse_error, "trial has zero samples");
    t.samples = Matrix(n_channels, n_samples);
    for (double& v : t.samples.data) {
      const float f = r.f32();
      if (!std::isfinite(f))
        fail(ErrorKind::invalid_amplitude, "NaN/Inf amplitude in trial " + std::to_string(i));
      v = f;
    }
    s.trials.push_back(std::move(t));
  }
  if (r.remaining() != 0) fail(ErrorKind::parse_error, "trailing bytes after last trial");
  validate_session(s);
  return s;
}

inline Session read_session(const std::filesystem::path& path, const std::string& subject_id = "",
                            int session_index = 1) {
  std::ifstream in(path, std::ios::binary | std::ios::ate);
  if (!in) fail(ErrorKind::io_failure, "cannot open for reading: " + path.string());
  const std::streamsize size = in.tellg();
  in.seekg(0);
  std::string buf(static_cast<std::size_t>(size), '\0');
  in.read(buf.data(), size);
  if (!in) fail(ErrorKind::io_failure, "read failed: " + path.string());
  return decode_session(reinterpret_cast<const std::uint8_t*>(buf.data()), buf.size(), subject_id,
                        session_index);
}

}  // namespace ceeg
