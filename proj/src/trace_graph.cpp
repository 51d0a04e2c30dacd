#include "brwbrw/trace_graph.hpp"

#include <algorithm>
#include <bit>
#include <istream>
#include <ostream>
#include <string>

#include "brwbrw/error.hpp"

namespace brwbrw {

std::vector<Direction> DirectionSet::to_vector() const {
  std::vector<Direction> out;
  for (Direction k = 0; k < 2 * kMaxDimension; ++k) {
    if (contains(k)) out.push_back(k);
  }
  return out;
}

// ---------------------------------------------------------------------------
// PositionIndex

PositionIndex::PositionIndex(int dim) : dim_(dim), bits_per_coord_(std::min(64, 128 / dim)), slots_(64) {
  for (auto& s : slots_) s.id = kNoVertex;
}

PositionIndex::Key PositionIndex::pack(const LatticePosition& x) const {
  Key key = 0;
  if (bits_per_coord_ == 64) {
    for (int j = dim_ - 1; j >= 0; --j) key = (key << 64) | static_cast<std::uint64_t>(x[j]);
    return key;
  }
  const std::int64_t bias = std::int64_t{1} << (bits_per_coord_ - 1);
  for (int j = dim_ - 1; j >= 0; --j) {
    if (x[j] < -bias || x[j] >= bias) {
      throw Error(ErrorCode::CoordinateOutOfRange,
                  "coordinate " + std::to_string(x[j]) + " does not fit the " + std::to_string(bits_per_coord_) +
                      "-bit key field used for d=" + std::to_string(dim_));
    }
    key = (key << bits_per_coord_) | static_cast<std::uint64_t>(x[j] + bias);
  }
  return key;
}

VertexId PositionIndex::find(const LatticePosition& x) const {
  const Key key = pack(x);
  const std::size_t mask = slots_.size() - 1;
  for (std::size_t i = hash(key) & mask;; i = (i + 1) & mask) {
    const Slot& s = slots_[i];
    if (s.id == kNoVertex) return kNoVertex;
    if (s.key == key) return s.id;
  }
}

VertexId PositionIndex::find_or_insert(const LatticePosition& x, VertexId next_id) {
  if (2 * (size_ + 1) > slots_.size()) grow();
  const Key key = pack(x);
  const std::size_t mask = slots_.size() - 1;
  for (std::size_t i = hash(key) & mask;; i = (i + 1) & mask) {
    Slot& s = slots_[i];
    if (s.id == kNoVertex) {
      s.key = key;
      s.id = next_id;
      ++size_;
      return next_id;
    }
    if (s.key == key) return s.id;
  }
}

void PositionIndex::grow() {
  std::vector<Slot> old(slots_.size() * 2);
  for (auto& s : old) s.id = kNoVertex;
  old.swap(slots_);
  const std::size_t mask = slots_.size() - 1;
  for (const Slot& s : old) {
    if (s.id == kNoVertex) continue;
    std::size_t i = hash(s.key) & mask;
    while (slots_[i].id != kNoVertex) i = (i + 1) & mask;
    slots_[i] = s;
  }
}

// ---------------------------------------------------------------------------
// TraceGraph

TraceGraph::TraceGraph(int dim) : dim_(dim), index_(dim), trajectory_(dim), head_(dim) {}

VertexId TraceGraph::add_vertex(const LatticePosition& x, std::uint64_t visit_index) {
  const auto next = static_cast<VertexId>(masks_.size());
  const VertexId v = index_.find_or_insert(x, next);
  if (v != next) return v;
  if (masks_.size() >= vertex_budget_) {
    throw Error(ErrorCode::VertexBudgetExceeded,
                "trace reached the vertex budget of " + std::to_string(vertex_budget_));
  }
  const auto c = x.coords();
  coords_.insert(coords_.end(), c.begin(), c.end());
  masks_.push_back(0);
  neighbors_.insert(neighbors_.end(), static_cast<std::size_t>(2 * dim_), kNoVertex);
  first_visit_.push_back(visit_index);
  return v;
}

void TraceGraph::add_edge(VertexId a, Direction k, VertexId b) {
  if (masks_[a] & (1u << k)) return;
  masks_[a] = static_cast<std::uint16_t>(masks_[a] | (1u << k));
  masks_[b] = static_cast<std::uint16_t>(masks_[b] | (1u << opposite(k)));
  neighbors_[static_cast<std::size_t>(a) * static_cast<std::size_t>(2 * dim_) + static_cast<std::size_t>(k)] = b;
  neighbors_[static_cast<std::size_t>(b) * static_cast<std::size_t>(2 * dim_) + static_cast<std::size_t>(opposite(k))] = a;
  ++edge_count_;
}

void TraceGraph::append_point(const LatticePosition& x) {
  if (trajectory_.empty()) {
    frontier_ = add_vertex(x, 0);
  } else {
    const Direction k = unit_step_between(head_, x);
    if (k < 0) {
      throw Error(ErrorCode::NonUnitIncrement, "step " + head_.to_string() + " -> " + x.to_string() +
                                                   " at index " + std::to_string(trajectory_.size()));
    }
    const VertexId v = add_vertex(x, trajectory_.size());
    add_edge(frontier_, k, v);
    frontier_ = v;
  }
  head_ = x;
  trajectory_.push_back(x);
}

TraceGraph TraceGraph::generate(const StepDistribution& dist, std::uint64_t n, RandomSeed seed,
                                std::uint64_t vertex_budget) {
  TraceGraph graph(dist.dim());
  graph.vertex_budget_ = vertex_budget;
  graph.generator_ = GeneratorState{dist, RandomStream(seed)};
  graph.append_point(LatticePosition(dist.dim()));
  graph.extend(n);
  return graph;
}

void TraceGraph::extend(std::uint64_t extra_steps) {
  if (!generator_) throw Error(ErrorCode::NoGeneratorState, "trace was built from a fixed trajectory");
  trajectory_.reserve(trajectory_.size() + extra_steps);
  for (std::uint64_t i = 0; i < extra_steps; ++i) {
    append_point(head_.step(generator_->dist.sample(generator_->rng)));
  }
}

VertexId TraceGraph::id_of(const LatticePosition& x) const {
  if (x.dim() != dim_) throw Error(ErrorCode::UnknownVertex, x.to_string() + " has the wrong dimension");
  const VertexId v = index_.find(x);
  if (v == kNoVertex) throw Error(ErrorCode::UnknownVertex, x.to_string() + " is not on the trace");
  return v;
}

LatticePosition TraceGraph::position(VertexId v) const {
  return LatticePosition(std::span<const std::int64_t>(coords_.data() + static_cast<std::size_t>(v) * static_cast<std::size_t>(dim_),
                                                       static_cast<std::size_t>(dim_)));
}

TraceGraph build_trace(const Trajectory& trajectory) {
  if (trajectory.empty()) throw Error(ErrorCode::InvalidArgument, "empty trajectory");
  TraceGraph graph(trajectory.dim());
  for (std::size_t i = 0; i < trajectory.size(); ++i) graph.append_point(trajectory[i]);
  return graph;
}

TraceGraph extend_trace(const TraceGraph& graph, std::uint64_t extra_steps) {
  TraceGraph copy = graph;
  copy.extend(extra_steps);
  return copy;
}

DirectionSet neighbors(const TraceGraph& graph, const LatticePosition& x) { return graph.mask(graph.id_of(x)); }

// ---------------------------------------------------------------------------
// Cut points

CutPointList CutPointList::without_tail(std::uint64_t path_length, std::uint64_t margin) const {
  CutPointList out;
  for (const auto& p : points) {
    if (p.trajectory_index + margin < path_length) out.points.push_back(p);
  }
  return out;
}

CutPointList cut_points(const TraceGraph& graph) {
  if (graph.vertex_count() < 2) throw Error(ErrorCode::TooSmall, "cut points need at least two vertices");
  if (graph.trajectory().empty()) throw Error(ErrorCode::InvalidArgument, "graph has no generating path");

  const VertexId root = graph.find(graph.trajectory()[0]);
  const VertexId target = graph.frontier();
  CutPointList out;
  if (root == target) return out;

  // Iterative Tarjan lowpoint DFS from the origin.
  const std::size_t n = graph.vertex_count();
  const int degree = 2 * graph.dim();
  std::vector<std::uint32_t> disc(n, 0), low(n, 0);
  std::vector<VertexId> parent(n, kNoVertex);
  std::vector<int> next_dir(n, 0);
  std::vector<VertexId> stack;
  std::uint32_t clock = 1;

  disc[root] = low[root] = clock++;
  stack.push_back(root);
  while (!stack.empty()) {
    const VertexId v = stack.back();
    if (next_dir[v] < degree) {
      const Direction k = next_dir[v]++;
      const VertexId w = graph.neighbor(v, k);
      if (w == kNoVertex) continue;
      if (disc[w] == 0) {
        parent[w] = v;
        disc[w] = low[w] = clock++;
        stack.push_back(w);
      } else if (w != parent[v]) {
        low[v] = std::min(low[v], disc[w]);
      }
    } else {
      stack.pop_back();
      if (parent[v] != kNoVertex) low[parent[v]] = std::min(low[parent[v]], low[v]);
    }
  }

  // v separates root from target iff the tree child c of v towards target
  // has no back edge above v.
  std::vector<VertexId> found;
  VertexId child = target;
  for (VertexId v = parent[target]; v != kNoVertex && v != root; child = v, v = parent[v]) {
    if (low[child] >= disc[v]) found.push_back(v);
  }
  std::sort(found.begin(), found.end());
  out.points.reserve(found.size());
  for (const VertexId v : found) out.points.push_back({graph.position(v), graph.first_visit(v)});
  return out;
}

// ---------------------------------------------------------------------------
// Binary dump

namespace {

template <typename T>
void put_le(std::ostream& out, T value) {
  using U = std::make_unsigned_t<T>;
  auto u = static_cast<U>(value);
  char bytes[sizeof(T)];
  for (std::size_t i = 0; i < sizeof(T); ++i) {
    bytes[i] = static_cast<char>(u & 0xFF);
    u = static_cast<U>(u >> 8);
  }
  out.write(bytes, sizeof(T));
}

template <typename T>
T get_le(std::istream& in) {
  using U = std::make_unsigned_t<T>;
  unsigned char bytes[sizeof(T)];
  if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw Error(ErrorCode::MalformedDump, "truncated dump");
  U u = 0;
  for (std::size_t i = sizeof(T); i-- > 0;) u = static_cast<U>((u << 8) | bytes[i]);
  return static_cast<T>(u);
}

}  // namespace

void write_trace(std::ostream& out, const TraceGraph& graph) {
  put_le<std::uint8_t>(out, kTraceDumpVersion);
  put_le<std::uint8_t>(out, static_cast<std::uint8_t>(graph.dim()));
  put_le<std::uint64_t>(out, graph.vertex_count());
  for (VertexId v = 0; v < graph.vertex_count(); ++v) {
    for (int j = 0; j < graph.dim(); ++j) put_le<std::int64_t>(out, graph.coord(v, j));
    put_le<std::uint16_t>(out, graph.mask(v).bits());
  }
}

TraceGraph read_trace(std::istream& in) {
  const auto version = get_le<std::uint8_t>(in);
  if (version != kTraceDumpVersion) {
    throw Error(ErrorCode::MalformedDump, "unsupported dump version " + std::to_string(version));
  }
  const int dim = get_le<std::uint8_t>(in);
  if (dim < 1 || dim > kMaxDimension) throw Error(ErrorCode::MalformedDump, "bad dimension " + std::to_string(dim));
  const auto count = get_le<std::uint64_t>(in);
  if (count == 0 || count >= kNoVertex) throw Error(ErrorCode::MalformedDump, "bad vertex count");

  TraceGraph graph(dim);
  std::vector<std::uint16_t> masks;
  masks.reserve(count);
  for (std::uint64_t i = 0; i < count; ++i) {
    LatticePosition x(dim);
    for (int j = 0; j < dim; ++j) x[j] = get_le<std::int64_t>(in);
    if (graph.add_vertex(x, i) != i) throw Error(ErrorCode::MalformedDump, "duplicate vertex " + x.to_string());
    masks.push_back(get_le<std::uint16_t>(in));
  }
  if (graph.find(LatticePosition(dim)) == kNoVertex) throw Error(ErrorCode::MalformedDump, "origin missing");

  for (VertexId v = 0; v < count; ++v) {
    for (Direction k = 0; k < 2 * dim; ++k) {
      if (!(masks[v] & (1u << k))) continue;
      const VertexId w = graph.find(graph.position(v).step(k));
      if (w == kNoVertex || !(masks[w] & (1u << opposite(k)))) {
        throw Error(ErrorCode::MalformedDump, "asymmetric adjacency at " + graph.position(v).to_string());
      }
      graph.add_edge(v, k, w);
    }
  }
  return graph;
}

}  // namespace brwbrw
