#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace coarse {

using VertexId = std::uint32_t;
using Label = std::vector<std::int64_t>;
using Edge = std::pair<VertexId, VertexId>;

// Distance to an unreachable vertex, and the trusted radius of a window that
// is the whole (finite) graph.
inline constexpr std::uint32_t kInfinity = std::numeric_limits<std::uint32_t>::max();

// A finite induced window of a (possibly infinite) vertex-labelled graph.
//
// Every vertex at distance < trusted_radius() from the basepoint has all of
// its ambient neighbours present, so a ball B(x, r) is exact whenever
// depth(x) + r <= trusted_radius(). Windows are immutable once built.
class GraphWindow {
 public:
  GraphWindow() = default;
  GraphWindow(std::vector<Label> labels, std::vector<Edge> edges,
              std::uint32_t trusted_radius, VertexId basepoint);

  std::size_t size() const { return labels_.size(); }
  std::size_t edge_count() const { return adjacency_.size() / 2; }

  std::span<const VertexId> neighbours(VertexId v) const {
    return {adjacency_.data() + offsets_[v], adjacency_.data() + offsets_[v + 1]};
  }
  std::size_t degree(VertexId v) const { return offsets_[v + 1] - offsets_[v]; }
  bool adjacent(VertexId a, VertexId b) const;

  const Label& label(VertexId v) const { return labels_[v]; }
  std::optional<VertexId> find(const Label& label) const;
  // Throws kUnknownVertex when the label is absent.
  VertexId at(const Label& label) const;

  VertexId basepoint() const { return basepoint_; }
  std::uint32_t trusted_radius() const { return trusted_radius_; }
  bool complete() const { return trusted_radius_ == kInfinity; }

  // Window distance from the basepoint (kInfinity if disconnected).
  std::uint32_t depth(VertexId v) const { return depth_[v]; }
  // True when B(x, r) computed in the window equals the ambient ball.
  bool trusted_at(VertexId x, std::uint32_t r) const;

  bool contains(VertexId v) const { return v < labels_.size(); }
  // Throws kUnknownVertex.
  void require(VertexId v) const;

  // Sorted (u < v) edge list.
  std::vector<Edge> edges() const;

 private:
  std::vector<Label> labels_;
  std::vector<std::size_t> offsets_{0};
  std::vector<VertexId> adjacency_;
  std::map<Label, VertexId> index_;
  std::vector<std::uint32_t> depth_;
  std::uint32_t trusted_radius_ = 0;
  VertexId basepoint_ = 0;
};

// A subset of a window's vertices, kept sorted. The owning window must
// outlive the set.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(const GraphWindow& window) : window_(&window) {}
  VertexSet(const GraphWindow& window, std::vector<VertexId> members,
            bool trusted = true);

  const GraphWindow& window() const { return *window_; }
  bool has_window() const { return window_ != nullptr; }

  std::span<const VertexId> members() const { return members_; }
  auto begin() const { return members_.begin(); }
  auto end() const { return members_.end(); }
  std::size_t size() const { return members_.size(); }
  bool empty() const { return members_.empty(); }
  VertexId operator[](std::size_t i) const { return members_[i]; }

  bool contains(VertexId v) const;
  // Position of v in members(), if present.
  std::optional<std::size_t> index_of(VertexId v) const;

  // False when the set touches the untrusted rim of its window.
  bool trusted() const { return trusted_; }
  void mark_untrusted() { trusted_ = false; }

  friend bool operator==(const VertexSet& a, const VertexSet& b) {
    return a.members_ == b.members_;
  }

 private:
  const GraphWindow* window_ = nullptr;
  std::vector<VertexId> members_;
  bool trusted_ = true;
};

VertexSet set_union(const VertexSet& a, const VertexSet& b);
VertexSet set_intersection(const VertexSet& a, const VertexSet& b);
VertexSet set_difference(const VertexSet& a, const VertexSet& b);
bool is_subset(const VertexSet& inner, const VertexSet& outer);
std::size_t intersection_size(const VertexSet& a, const VertexSet& b);
VertexSet whole_window(const GraphWindow& w);

// Truncated BFS that reuses its scratch arrays between runs; only the
// vertices touched by the previous run are reset.
class BoundedBfs {
 public:
  explicit BoundedBfs(const GraphWindow& w) : w_(&w), dist_(w.size(), kInfinity) {}

  // Vertices within `limit` of the sources, in BFS order.
  const std::vector<VertexId>& run(VertexId src, std::uint32_t limit);
  const std::vector<VertexId>& run(std::span<const VertexId> sources, std::uint32_t limit);
  // Distance from the last run's sources (kInfinity if not reached).
  std::uint32_t dist(VertexId v) const { return dist_[v]; }
  const std::vector<VertexId>& visited() const { return order_; }

 private:
  const GraphWindow* w_;
  std::vector<std::uint32_t> dist_;
  std::vector<VertexId> order_;
};

// Single-source BFS; unreachable vertices map to kInfinity.
std::vector<std::uint32_t> bfs_distances(const GraphWindow& w, VertexId src);
// Multi-source BFS truncated at max_depth (farther vertices map to kInfinity).
std::vector<std::uint32_t> bfs_distances(const GraphWindow& w,
                                         std::span<const VertexId> sources,
                                         std::uint32_t max_depth = kInfinity);

VertexSet ball(const GraphWindow& w, VertexId x, std::uint32_t r);
VertexSet sphere(const GraphWindow& w, VertexId x, std::uint32_t r);

// A^{+alpha} = {x : d(x, A) <= alpha}.
VertexSet neighbourhood(const VertexSet& a, std::uint32_t alpha);
// d_r B = B^{+r} \ B.
VertexSet r_boundary(const VertexSet& b, std::uint32_t r);

// For each member a_i of A, the indices j != i with d(a_i, a_j) <= r, where
// d is the window distance. Rows are sorted.
std::vector<std::vector<std::uint32_t>> proximity_graph(const VertexSet& a,
                                                        std::uint32_t r);

// Classes of the transitive closure of d(x, y) <= k within A, ordered by
// their smallest member.
std::vector<VertexSet> k_components(const VertexSet& a, std::uint32_t k);

struct GrowthTable {
  std::vector<std::uint32_t> radii;
  std::vector<std::uint64_t> values;
  bool trusted = true;
};

// beta_S(r) = sup_{s in S} |B(s, r) cap S|.
GrowthTable growth(const VertexSet& s, std::span<const std::uint32_t> radii);
// V_family(r) = sup over members S of the family and s in S.
GrowthTable family_growth(std::span<const VertexSet> family,
                          std::span<const std::uint32_t> radii);
// beta_X(r) = sup_x |B(x, r)| over the probes whose r-ball is trusted. Falls
// back to every vertex (flagged untrusted) when no probe qualifies.
GrowthTable ambient_growth(const GraphWindow& w,
                           std::span<const std::uint32_t> radii);
std::uint64_t ambient_growth_at(const GraphWindow& w, std::uint32_t r);

}  // namespace coarse
