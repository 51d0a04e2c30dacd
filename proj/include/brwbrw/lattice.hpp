#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace brwbrw {

// Largest supported lattice dimension. Direction masks hold 2*d bits.
inline constexpr int kMaxDimension = 8;

// Signed unit vectors are indexed as +e1, -e1, +e2, -e2, ..., so direction
// k moves along axis k/2, positively when k is even.
using Direction = int;

constexpr int axis_of(Direction k) noexcept { return k >> 1; }
constexpr int sign_of(Direction k) noexcept { return (k & 1) ? -1 : 1; }
constexpr Direction opposite(Direction k) noexcept { return k ^ 1; }
constexpr Direction direction_of(int axis, int sign) noexcept { return 2 * axis + (sign < 0 ? 1 : 0); }

// A point of Z^d. Coordinates beyond dim() are kept at zero so that
// defaulted comparison is well defined.
class LatticePosition {
 public:
  LatticePosition() = default;
  explicit LatticePosition(int dim);
  LatticePosition(std::initializer_list<std::int64_t> coords);
  explicit LatticePosition(std::span<const std::int64_t> coords);

  int dim() const noexcept { return dim_; }
  std::int64_t operator[](int j) const noexcept { return coords_[static_cast<std::size_t>(j)]; }
  std::int64_t& operator[](int j) noexcept { return coords_[static_cast<std::size_t>(j)]; }

  std::span<const std::int64_t> coords() const noexcept {
    return {coords_.data(), static_cast<std::size_t>(dim_)};
  }

  LatticePosition step(Direction k) const noexcept {
    LatticePosition next = *this;
    next.coords_[static_cast<std::size_t>(axis_of(k))] += sign_of(k);
    return next;
  }

  double dot(std::span<const double> v) const noexcept;
  std::string to_string() const;

  friend bool operator==(const LatticePosition&, const LatticePosition&) = default;

 private:
  std::array<std::int64_t, kMaxDimension> coords_{};
  int dim_ = 0;
};

// If b - a is a signed unit vector, returns its direction index; otherwise -1.
Direction unit_step_between(const LatticePosition& a, const LatticePosition& b) noexcept;

// A finite nearest-neighbour path, stored as a flat coordinate array.
class Trajectory {
 public:
  Trajectory() = default;
  explicit Trajectory(int dim) : dim_(dim) {}

  int dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return dim_ == 0 ? 0 : coords_.size() / static_cast<std::size_t>(dim_); }
  bool empty() const noexcept { return coords_.empty(); }

  LatticePosition operator[](std::size_t i) const;
  LatticePosition back() const { return (*this)[size() - 1]; }

  void push_back(const LatticePosition& x);
  void reserve(std::size_t n) { coords_.reserve(n * static_cast<std::size_t>(dim_)); }

  // Coordinate j of point i without materializing a LatticePosition.
  std::int64_t coord(std::size_t i, int j) const noexcept {
    return coords_[i * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(j)];
  }

  friend bool operator==(const Trajectory&, const Trajectory&) = default;

 private:
  int dim_ = 0;
  std::vector<std::int64_t> coords_;
};

}  // namespace brwbrw
