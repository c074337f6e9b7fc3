#pragma once

// Idealized 10-20 electrode positions on the unit sphere for the canonical
// 30-channel cap. Coordinate frame: +x right ear (T8), +y nasion, +z vertex
// (Cz). The outer ring (Fp1/Fp2 .. O1/O2) lies on the equator; midline sites
// step 18 degrees along the nasion-inion arc; intermediate sites are placed by
// spherical interpolation along the standard 10-10 coronal arcs.
//
// These are the conventional equal-angle sphere positions (montage asset
// version 1), not digitized head measurements.

#include <array>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <vector>

#include "ceeg/errors.hpp"

namespace ceeg {

inline constexpr int kMontageAssetVersion = 1;

using Vec3 = std::array<double, 3>;

struct Montage {
  std::map<std::string, Vec3> positions;

  const Vec3& position(const std::string& channel) const {
    auto it = positions.find(channel);
    if (it == positions.end())
      fail(ErrorKind::invalid_argument, "channel missing from montage: " + channel);
    return it->second;
  }
  bool has(const std::string& channel) const { return positions.count(channel) != 0; }
};

namespace detail {

inline Vec3 sph(double inclination_deg, double azimuth_deg) {
  const double inc = inclination_deg * std::numbers::pi / 180.0;
  const double az = azimuth_deg * std::numbers::pi / 180.0;
  return {std::sin(inc) * std::cos(az), std::sin(inc) * std::sin(az), std::cos(inc)};
}

inline Vec3 normalized(const Vec3& v) {
  const double n = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  return {v[0] / n, v[1] / n, v[2] / n};
}

/// Great-circle interpolation from a to b at fraction t.
inline Vec3 slerp(const Vec3& a, const Vec3& b, double t) {
  double dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
  dot = std::max(-1.0, std::min(1.0, dot));
  const double omega = std::acos(dot);
  const double so = std::sin(omega);
  const double wa = std::sin((1.0 - t) * omega) / so;
  const double wb = std::sin(t * omega) / so;
  return normalized({wa * a[0] + wb * b[0], wa * a[1] + wb * b[1], wa * a[2] + wb * b[2]});
}

}  // namespace detail

/// The canonical 30-channel name list, front to back, left before right.
inline const std::vector<std::string>& builtin_channel_names() {
  static const std::vector<std::string> names = {
      "Fp1", "Fp2", "F7",  "F3",  "Fz",  "F4",  "F8",  "FC5", "FC1", "FC2",
      "FC6", "T7",  "C3",  "Cz",  "C4",  "T8",  "CP5", "CP1", "CP2", "CP6",
      "P7",  "P3",  "Pz",  "P4",  "P8",  "PO3", "POz", "PO4", "O1",  "O2"};
  return names;
}

inline Montage builtin_montage() {
  using detail::slerp;
  using detail::sph;

  // Anchors. Ring sites sit at inclination 90 (z = 0); midline sites step 18
  // degrees from Cz along the nasion-inion great circle.
  const Vec3 Cz = {0.0, 0.0, 1.0};
  const Vec3 Fz = sph(54, 90), FCz = sph(36, 90), CPz = sph(36, 270), Pz = sph(54, 270);
  const Vec3 POz = sph(72, 270), Oz = sph(90, 270);
  const Vec3 Fp1 = sph(90, 108), Fp2 = sph(90, 72);
  const Vec3 F7 = sph(90, 144), F8 = sph(90, 36);
  const Vec3 FT7 = sph(90, 162), FT8 = sph(90, 18);
  const Vec3 T7 = sph(90, 180), T8 = sph(90, 0);
  const Vec3 TP7 = sph(90, 198), TP8 = sph(90, 342);
  const Vec3 P7 = sph(90, 216), P8 = sph(90, 324);
  const Vec3 PO7 = sph(90, 234), PO8 = sph(90, 306);
  const Vec3 O1 = sph(90, 252), O2 = sph(90, 288);

  Montage m;
  m.positions = {
      {"Fp1", Fp1},
      {"Fp2", Fp2},
      {"F7", F7},
      {"F3", slerp(Fz, F7, 0.5)},
      {"Fz", Fz},
      {"F4", slerp(Fz, F8, 0.5)},
      {"F8", F8},
      {"FC5", slerp(FCz, FT7, 0.75)},
      {"FC1", slerp(FCz, FT7, 0.25)},
      {"FC2", slerp(FCz, FT8, 0.25)},
      {"FC6", slerp(FCz, FT8, 0.75)},
      {"T7", T7},
      {"C3", slerp(Cz, T7, 0.5)},
      {"Cz", Cz},
      {"C4", slerp(Cz, T8, 0.5)},
      {"T8", T8},
      {"CP5", slerp(CPz, TP7, 0.75)},
      {"CP1", slerp(CPz, TP7, 0.25)},
      {"CP2", slerp(CPz, TP8, 0.25)},
      {"CP6", slerp(CPz, TP8, 0.75)},
      {"P7", P7},
      {"P3", slerp(Pz, P7, 0.5)},
      {"Pz", Pz},
      {"P4", slerp(Pz, P8, 0.5)},
      {"P8", P8},
      {"PO3", slerp(POz, PO7, 0.5)},
      {"POz", POz},
      {"PO4", slerp(POz, PO8, 0.5)},
      {"O1", O1},
      {"O2", O2},
  };
  return m;
}

}  // namespace ceeg
