#pragma once

#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <vector>

#include "brwbrw/lattice.hpp"
#include "brwbrw/rng.hpp"
#include "brwbrw/walk.hpp"

namespace brwbrw {

using VertexId = std::uint32_t;
inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();
inline constexpr std::uint64_t kDefaultVertexBudget = 100'000'000;

// Set of signed unit directions, bit k for direction k.
class DirectionSet {
 public:
  constexpr DirectionSet() = default;
  constexpr explicit DirectionSet(std::uint16_t bits) : bits_(bits) {}

  constexpr bool contains(Direction k) const noexcept { return (bits_ >> k) & 1u; }
  constexpr bool empty() const noexcept { return bits_ == 0; }
  constexpr int size() const noexcept { return __builtin_popcount(bits_); }
  constexpr std::uint16_t bits() const noexcept { return bits_; }

  std::vector<Direction> to_vector() const;

  friend constexpr bool operator==(DirectionSet, DirectionSet) = default;

 private:
  std::uint16_t bits_ = 0;
};

// Open-addressing map from lattice positions to dense vertex ids. Keys are
// the coordinates packed into 128 bits; each coordinate gets 128/d bits
// (at most 64), and positions that do not fit are rejected.
class PositionIndex {
 public:
  explicit PositionIndex(int dim = 1);

  VertexId find(const LatticePosition& x) const;
  // Returns the existing id, or assigns `next_id` and returns it.
  VertexId find_or_insert(const LatticePosition& x, VertexId next_id);
  std::size_t size() const noexcept { return size_; }

 private:
  using Key = unsigned __int128;
  struct Slot {
    Key key;
    VertexId id;
  };

  Key pack(const LatticePosition& x) const;
  static std::uint64_t hash(Key key) noexcept {
    const auto lo = static_cast<std::uint64_t>(key);
    const auto hi = static_cast<std::uint64_t>(key >> 64);
    return splitmix64(lo ^ splitmix64(hi));
  }
  void grow();

  int dim_;
  int bits_per_coord_;
  std::vector<Slot> slots_;
  std::size_t size_ = 0;
};

// The trace of a nearest-neighbour walk: visited sites, traversed edges,
// and the generating path. Graphs produced by generate() keep the
// generator's stream and can be extended; graphs built from a fixed
// trajectory (or loaded from a dump) are frozen.
class TraceGraph {
 public:
  // Walk `n` steps of `dist` under `seed` and record its trace.
  static TraceGraph generate(const StepDistribution& dist, std::uint64_t n, RandomSeed seed,
                             std::uint64_t vertex_budget = kDefaultVertexBudget);

  int dim() const noexcept { return dim_; }
  std::size_t vertex_count() const noexcept { return masks_.size(); }
  std::size_t edge_count() const noexcept { return edge_count_; }
  const Trajectory& trajectory() const noexcept { return trajectory_; }
  bool has_generator() const noexcept { return generator_.has_value(); }
  std::uint64_t steps_consumed() const noexcept { return trajectory_.empty() ? 0 : trajectory_.size() - 1; }

  void set_vertex_budget(std::uint64_t budget) noexcept { vertex_budget_ = budget; }
  std::uint64_t vertex_budget() const noexcept { return vertex_budget_; }

  // Continue the stored walk by `extra_steps`. Existing vertices and edges
  // are never removed. Throws NoGeneratorState on frozen graphs.
  void extend(std::uint64_t extra_steps);

  VertexId find(const LatticePosition& x) const { return index_.find(x); }
  // Like find() but throws UnknownVertex.
  VertexId id_of(const LatticePosition& x) const;

  LatticePosition position(VertexId v) const;
  std::int64_t coord(VertexId v, int j) const noexcept {
    return coords_[static_cast<std::size_t>(v) * static_cast<std::size_t>(dim_) + static_cast<std::size_t>(j)];
  }
  DirectionSet mask(VertexId v) const noexcept { return DirectionSet(masks_[v]); }
  VertexId neighbor(VertexId v, Direction k) const noexcept {
    return neighbors_[static_cast<std::size_t>(v) * static_cast<std::size_t>(2 * dim_) + static_cast<std::size_t>(k)];
  }
  // Trajectory index of the first visit; ids are assigned in this order.
  std::uint64_t first_visit(VertexId v) const noexcept { return first_visit_[v]; }

  // Vertex at the end of the generating path, or kNoVertex when unknown.
  VertexId frontier() const noexcept { return frontier_; }
  // True when the frontier's adjacency may still grow under extension.
  bool frontier_open() const noexcept { return generator_.has_value(); }

  friend TraceGraph build_trace(const Trajectory& trajectory);
  friend TraceGraph read_trace(std::istream& in);

 private:
  struct GeneratorState {
    StepDistribution dist;
    RandomStream rng;
  };

  explicit TraceGraph(int dim);
  VertexId add_vertex(const LatticePosition& x, std::uint64_t visit_index);
  void add_edge(VertexId a, Direction k, VertexId b);
  void append_point(const LatticePosition& x);

  int dim_;
  PositionIndex index_;
  std::vector<std::int64_t> coords_;
  std::vector<std::uint16_t> masks_;
  std::vector<VertexId> neighbors_;
  std::vector<std::uint64_t> first_visit_;
  std::size_t edge_count_ = 0;
  Trajectory trajectory_;
  std::optional<GeneratorState> generator_;
  VertexId frontier_ = kNoVertex;
  LatticePosition head_;
  std::uint64_t vertex_budget_ = kDefaultVertexBudget;
};

// Frozen trace of a given path. Throws NonUnitIncrement.
TraceGraph build_trace(const Trajectory& trajectory);

// Copy of `graph` extended by `extra_steps`.
TraceGraph extend_trace(const TraceGraph& graph, std::uint64_t extra_steps);

// Directions e with {x, x+e} in the edge set. Throws UnknownVertex.
DirectionSet neighbors(const TraceGraph& graph, const LatticePosition& x);

struct CutPoint {
  LatticePosition position;
  std::uint64_t trajectory_index;  // first visit
};

// Vertices whose removal disconnects the origin from the last trajectory
// point, in trajectory order. The endpoints themselves are excluded.
struct CutPointList {
  std::vector<CutPoint> points;

  // Drops cut-points first visited within `margin` steps of the path's end;
  // near the frontier a finite trace can report points that later steps close off.
  CutPointList without_tail(std::uint64_t path_length, std::uint64_t margin) const;
};

CutPointList cut_points(const TraceGraph& graph);

// Binary dump: u8 version (=1), u8 d, u64 vertex count, then per vertex
// d x i64 coordinates and a u16 direction mask. All integers little-endian.
// The generating path is not stored; a loaded graph is frozen.
inline constexpr std::uint8_t kTraceDumpVersion = 1;
void write_trace(std::ostream& out, const TraceGraph& graph);
TraceGraph read_trace(std::istream& in);

}  // namespace brwbrw
