#include "brwbrw/lattice.hpp"

#include <cstdlib>

#include "brwbrw/error.hpp"

namespace brwbrw {

namespace {

void check_dimension(int dim) {
  if (dim < 1 || dim > kMaxDimension) {
    throw Error(ErrorCode::InvalidArgument,
                "lattice dimension " + std::to_string(dim) + " outside [1, " + std::to_string(kMaxDimension) + "]");
  }
}

}  // namespace

LatticePosition::LatticePosition(int dim) : dim_(dim) { check_dimension(dim); }

LatticePosition::LatticePosition(std::initializer_list<std::int64_t> coords)
    : LatticePosition(std::span<const std::int64_t>(coords.begin(), coords.size())) {}

LatticePosition::LatticePosition(std::span<const std::int64_t> coords) : dim_(static_cast<int>(coords.size())) {
  check_dimension(dim_);
  for (std::size_t j = 0; j < coords.size(); ++j) coords_[j] = coords[j];
}

double LatticePosition::dot(std::span<const double> v) const noexcept {
  double s = 0.0;
  for (int j = 0; j < dim_; ++j) s += static_cast<double>(coords_[static_cast<std::size_t>(j)]) * v[static_cast<std::size_t>(j)];
  return s;
}

std::string LatticePosition::to_string() const {
  std::string out = "(";
  for (int j = 0; j < dim_; ++j) {
    if (j) out += ",";
    out += std::to_string(coords_[static_cast<std::size_t>(j)]);
  }
  return out + ")";
}

Direction unit_step_between(const LatticePosition& a, const LatticePosition& b) noexcept {
  if (a.dim() != b.dim()) return -1;
  Direction found = -1;
  for (int j = 0; j < a.dim(); ++j) {
    const std::int64_t diff = b[j] - a[j];
    if (diff == 0) continue;
    if (found != -1 || std::llabs(diff) != 1) return -1;
    found = direction_of(j, diff > 0 ? 1 : -1);
  }
  return found;
}

LatticePosition Trajectory::operator[](std::size_t i) const {
  const auto* first = coords_.data() + i * static_cast<std::size_t>(dim_);
  return LatticePosition(std::span<const std::int64_t>(first, static_cast<std::size_t>(dim_)));
}

void Trajectory::push_back(const LatticePosition& x) {
  if (dim_ == 0) dim_ = x.dim();
  if (x.dim() != dim_) throw Error(ErrorCode::InvalidArgument, "trajectory dimension mismatch");
  const auto c = x.coords();
  coords_.insert(coords_.end(), c.begin(), c.end());
}

}  // namespace brwbrw
