#include "core/snapshot.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <iomanip>
#include <iterator>

#include "core/error.hpp"

namespace msmlab {

namespace {

std::size_t components(SnapshotType t) {
  switch (t) {
    case SnapshotType::Real: return 1;
    case SnapshotType::Complex: return 2;
    case SnapshotType::Vec3: return 3;
  }
  return 0;
}

class Writer {
 public:
  void u32(std::uint32_t v) {
    for (int b = 0; b < 4; ++b) bytes.push_back(static_cast<std::uint8_t>(v >> (8 * b)));
  }
  void f64(double v) {
    const auto bits = std::bit_cast<std::uint64_t>(v);
    for (int b = 0; b < 8; ++b) bytes.push_back(static_cast<std::uint8_t>(bits >> (8 * b)));
  }
  void raw(const std::string& s) { bytes.insert(bytes.end(), s.begin(), s.end()); }

  std::vector<std::uint8_t> bytes;
};

class Reader {
 public:
  explicit Reader(const std::vector<std::uint8_t>& b) : bytes_(b) {}

  std::uint32_t u32() {
    need(4);
    std::uint32_t v = 0;
    for (int b = 0; b < 4; ++b) v |= static_cast<std::uint32_t>(bytes_[pos_++]) << (8 * b);
    return v;
  }
  double f64() {
    need(8);
    std::uint64_t v = 0;
    for (int b = 0; b < 8; ++b) v |= static_cast<std::uint64_t>(bytes_[pos_++]) << (8 * b);
    return std::bit_cast<double>(v);
  }
  std::string raw(std::size_t n) {
    need(n);
    std::string s(bytes_.begin() + static_cast<std::ptrdiff_t>(pos_),
                  bytes_.begin() + static_cast<std::ptrdiff_t>(pos_ + n));
    pos_ += n;
    return s;
  }
  bool done() const { return pos_ == bytes_.size(); }

 private:
  void need(std::size_t n) const {
    if (pos_ + n > bytes_.size()) fail(ErrorCode::IoError, "snapshot truncated");
  }

  const std::vector<std::uint8_t>& bytes_;
  std::size_t pos_ = 0;
};

void write_header(Writer& w, const char* magic, const Grid2D& g) {
  if (g.is_line()) fail(ErrorCode::InvalidArgument, "snapshots store square grids only");
  w.raw(magic);
  w.u32(kSnapshotVersion);
  w.u32(static_cast<std::uint32_t>(g.nx()));
  w.f64(g.length());
}

Grid2D read_header(Reader& r, const char* magic) {
  if (r.raw(4) != magic) fail(ErrorCode::IoError, std::string("bad magic, expected ") + magic);
  const std::uint32_t version = r.u32();
  if (version != kSnapshotVersion)
    fail(ErrorCode::IoError, "unsupported snapshot version " + std::to_string(version));
  const auto n = static_cast<int>(r.u32());
  const double L = r.f64();
  return Grid2D(n, L);
}

SnapshotType read_type(Reader& r) {
  const std::uint32_t t = r.u32();
  if (t < 1 || t > 3) fail(ErrorCode::IoError, "unknown snapshot dtype " + std::to_string(t));
  return static_cast<SnapshotType>(t);
}

void write_payload(Writer& w, const Snapshot& s) {
  w.u32(static_cast<std::uint32_t>(s.type));
  for (double v : s.data) w.f64(v);
}

Snapshot read_payload(Reader& r, const Grid2D& g) {
  Snapshot s{g, read_type(r), {}};
  const std::size_t count = g.size() * components(s.type);
  s.data.resize(count);
  for (double& v : s.data) v = r.f64();
  return s;
}

std::vector<std::uint8_t> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorCode::IoError, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void dump(const std::string& path, const std::vector<std::uint8_t>& bytes) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path);
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) fail(ErrorCode::IoError, "write failed for " + path);
}

}  // namespace

RealField Snapshot::as_real() const {
  if (type != SnapshotType::Real) fail(ErrorCode::ShapeMismatch, "snapshot is not real");
  return RealField(grid, data);
}

ComplexField Snapshot::as_complex() const {
  if (type != SnapshotType::Complex) fail(ErrorCode::ShapeMismatch, "snapshot is not complex");
  ComplexField f(grid);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = cplx(data[2 * k], data[2 * k + 1]);
  return f;
}

std::array<RealField, 3> Snapshot::as_vec3() const {
  if (type != SnapshotType::Vec3) fail(ErrorCode::ShapeMismatch, "snapshot is not vec3");
  std::array<RealField, 3> v{RealField(grid), RealField(grid), RealField(grid)};
  for (std::size_t k = 0; k < grid.size(); ++k)
    for (std::size_t c = 0; c < 3; ++c) v[c][k] = data[3 * k + c];
  return v;
}

Snapshot make_snapshot(const RealField& f) { return {f.grid, SnapshotType::Real, f.values}; }

Snapshot make_snapshot(const ComplexField& f) {
  Snapshot s{f.grid, SnapshotType::Complex, {}};
  s.data.reserve(2 * f.size());
  for (cplx v : f.values) {
    s.data.push_back(v.real());
    s.data.push_back(v.imag());
  }
  return s;
}

Snapshot make_snapshot(const std::array<RealField, 3>& v) {
  require_same_grid(v[0].grid, v[1].grid);
  require_same_grid(v[0].grid, v[2].grid);
  Snapshot s{v[0].grid, SnapshotType::Vec3, {}};
  s.data.reserve(3 * v[0].size());
  for (std::size_t k = 0; k < v[0].size(); ++k)
    for (const auto& c : v) s.data.push_back(c[k]);
  return s;
}

std::vector<std::uint8_t> encode_snapshot(const Snapshot& s) {
  Writer w;
  write_header(w, "MSMF", s.grid);
  write_payload(w, s);
  return std::move(w.bytes);
}

Snapshot decode_snapshot(const std::vector<std::uint8_t>& bytes) {
  Reader r(bytes);
  const Grid2D g = read_header(r, "MSMF");
  Snapshot s = read_payload(r, g);
  if (!r.done()) fail(ErrorCode::IoError, "trailing bytes after snapshot");
  return s;
}

void write_snapshot(const std::string& path, const Snapshot& s) { dump(path, encode_snapshot(s)); }

Snapshot read_snapshot(const std::string& path) { return decode_snapshot(slurp(path)); }

void write_bundle(const std::string& path, const std::vector<NamedRecord>& records) {
  require(!records.empty(), "bundle needs at least one record");
  const Grid2D& g = records.front().snapshot.grid;
  Writer w;
  write_header(w, "MSMG", g);
  w.u32(static_cast<std::uint32_t>(records.size()));
  for (const auto& rec : records) {
    require_same_grid(g, rec.snapshot.grid);
    w.u32(static_cast<std::uint32_t>(rec.name.size()));
    w.raw(rec.name);
    write_payload(w, rec.snapshot);
  }
  dump(path, w.bytes);
}

std::vector<NamedRecord> read_bundle(const std::string& path) {
  const auto bytes = slurp(path);
  Reader r(bytes);
  const Grid2D g = read_header(r, "MSMG");
  const std::uint32_t count = r.u32();
  std::vector<NamedRecord> out;
  for (std::uint32_t k = 0; k < count; ++k) {
    const std::uint32_t len = r.u32();
    std::string name = r.raw(len);
    out.push_back({std::move(name), read_payload(r, g)});
  }
  if (!r.done()) fail(ErrorCode::IoError, "trailing bytes after bundle");
  return out;
}

void write_csv(const std::string& path, const ComplexField& f) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::IoError, "cannot write " + path);
  out << std::setprecision(17) << "x,y,re,im\n";
  const Grid2D& g = f.grid;
  for (int j = 0; j < g.ny(); ++j)
    for (int i = 0; i < g.nx(); ++i) {
      const cplx v = f.at(i, j);
      out << g.coordinate(0, i) << ',' << g.coordinate(1, j) << ',' << v.real() << ',' << v.imag()
          << '\n';
    }
}

}  // namespace msmlab
