#pragma once

#include <cstddef>
#include <vector>

namespace msmlab {

/// Uniform periodic grid on the box [-L/2, L/2)^2.
///
/// Square grids carry n points per axis (n a power of two, n >= 8). A "line"
/// grid has ny == 1 and models a periodic interval; the y direction then
/// carries only the zero mode.
class Grid2D {
 public:
  Grid2D(int n, double length);

  static Grid2D line(int n, double length);

  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  bool is_line() const noexcept { return ny_ == 1; }
  double length() const noexcept { return length_; }
  std::size_t size() const noexcept {
    return static_cast<std::size_t>(nx_) * static_cast<std::size_t>(ny_);
  }
  double dx() const noexcept { return length_ / nx_; }
  /// Quadrature weight of one grid point (dx*dy, or dx on a line grid).
  double cell_measure() const noexcept;
  /// Area (or length) of the periodic domain.
  double volume() const noexcept;

  int points(int axis) const noexcept { return axis == 0 ? nx_ : ny_; }
  /// Signed integer frequency of storage index i along an axis; the Nyquist
  /// index maps to -n/2.
  int mode(int axis, int i) const noexcept;
  double wavenumber(int axis, int i) const noexcept;
  double fundamental() const noexcept;
  bool is_nyquist(int axis, int i) const noexcept;
  /// Two-thirds rule: true when the mode survives dealiasing.
  bool dealias_keep(int i, int j) const noexcept;

  double coordinate(int axis, int i) const noexcept;
  std::vector<double> wavenumbers(int axis) const;

  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx_) +
           static_cast<std::size_t>(i);
  }

  friend bool operator==(const Grid2D& a, const Grid2D& b) noexcept {
    return a.nx_ == b.nx_ && a.ny_ == b.ny_ && a.length_ == b.length_;
  }

 private:
  Grid2D(int nx, int ny, double length, bool);

  int nx_;
  int ny_;
  double length_;
};

void require_same_grid(const Grid2D& a, const Grid2D& b);

bool is_power_of_two(int n) noexcept;

}  // namespace msmlab
