#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "core/field.hpp"

namespace msmlab {

enum class SnapshotType : std::uint32_t { Real = 1, Complex = 2, Vec3 = 3 };

/// Decoded snapshot payload. Values are doubles in file order: one per point
/// for Real, (re, im) pairs for Complex, (x, y, z) triples for Vec3.
struct Snapshot {
  Grid2D grid;
  SnapshotType type;
  std::vector<double> data;

  RealField as_real() const;
  ComplexField as_complex() const;
  std::array<RealField, 3> as_vec3() const;
};

Snapshot make_snapshot(const RealField& f);
Snapshot make_snapshot(const ComplexField& f);
Snapshot make_snapshot(const std::array<RealField, 3>& v);

/// Layout: "MSMF", u32 version, u32 n, f64 L, u32 dtype, values (all LE).
std::vector<std::uint8_t> encode_snapshot(const Snapshot& s);
Snapshot decode_snapshot(const std::vector<std::uint8_t>& bytes);
void write_snapshot(const std::string& path, const Snapshot& s);
Snapshot read_snapshot(const std::string& path);

struct NamedRecord {
  std::string name;
  Snapshot snapshot;
};

/// Layout: "MSMG", u32 version, u32 n, f64 L, u32 count, then per record
/// u32 name length, name bytes, u32 dtype, values.
void write_bundle(const std::string& path, const std::vector<NamedRecord>& records);
std::vector<NamedRecord> read_bundle(const std::string& path);

/// CSV with header x,y,re,im and 17 significant digits.
void write_csv(const std::string& path, const ComplexField& f);

inline constexpr std::uint32_t kSnapshotVersion = 1;

}  // namespace msmlab
