#include "core/grid.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "core/error.hpp"

namespace msmlab {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::NonzeroMean: return "NonzeroMean";
    case ErrorCode::ChartUndefined: return "ChartUndefined";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::PicardDiverged: return "PicardDiverged";
    case ErrorCode::TooLarge: return "TooLarge";
    case ErrorCode::ConfigError: return "ConfigError";
    case ErrorCode::IoError: return "IoError";
  }
  return "Unknown";
}

bool is_power_of_two(int n) noexcept { return n > 0 && (n & (n - 1)) == 0; }

namespace {

void validate_axis(int n, double length) {
  require(n >= 8 && is_power_of_two(n),
          "grid size must be a power of two >= 8, got " + std::to_string(n));
  require(std::isfinite(length) && length > 0.0, "grid length must be positive");
}

}  // namespace

Grid2D::Grid2D(int n, double length) : nx_(n), ny_(n), length_(length) {
  validate_axis(n, length);
}

Grid2D::Grid2D(int nx, int ny, double length, bool) : nx_(nx), ny_(ny), length_(length) {}

Grid2D Grid2D::line(int n, double length) {
  validate_axis(n, length);
  return Grid2D(n, 1, length, true);
}

double Grid2D::cell_measure() const noexcept {
  return is_line() ? dx() : dx() * dx();
}

double Grid2D::volume() const noexcept {
  return is_line() ? length_ : length_ * length_;
}

int Grid2D::mode(int axis, int i) const noexcept {
  const int n = points(axis);
  if (n == 1) return 0;
  return i < n / 2 ? i : i - n;
}

double Grid2D::fundamental() const noexcept {
  return 2.0 * std::numbers::pi / length_;
}

double Grid2D::wavenumber(int axis, int i) const noexcept {
  return fundamental() * mode(axis, i);
}

bool Grid2D::is_nyquist(int axis, int i) const noexcept {
  const int n = points(axis);
  return n > 1 && i == n / 2;
}

bool Grid2D::dealias_keep(int i, int j) const noexcept {
  const int mx = std::abs(mode(0, i));
  const int my = std::abs(mode(1, j));
  return 3 * mx <= nx_ && (ny_ == 1 || 3 * my <= ny_);
}

double Grid2D::coordinate(int axis, int i) const noexcept {
  if (points(axis) == 1) return 0.0;
  return -0.5 * length_ + i * dx();
}

std::vector<double> Grid2D::wavenumbers(int axis) const {
  std::vector<double> k(static_cast<std::size_t>(points(axis)));
  for (int i = 0; i < points(axis); ++i) k[static_cast<std::size_t>(i)] = wavenumber(axis, i);
  return k;
}

void require_same_grid(const Grid2D& a, const Grid2D& b) {
  if (!(a == b)) fail(ErrorCode::ShapeMismatch, "fields live on different grids");
}

}  // namespace msmlab
