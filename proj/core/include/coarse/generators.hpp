#pragma once

#include <cstdint>
#include <optional>
#include <unordered_map>
#include <utility>
#include <vector>

#include "coarse/finite_group.hpp"
#include "coarse/graph_core.hpp"

namespace coarse {

// A window of the regular tree of the given valence, oriented towards an end
// xi. The anchor ray a_j (b(a_j) = j) runs from a_{b_max} down through the
// basepoint a_0; a_{j-1} is child 0 of a_j. The window holds the descendants
// z of a_{b_max} with b(z) >= b_min that lie at most depth_below steps under
// the ray.
//
// Labels: ray vertex a_j is (j, j); any other vertex is
// (b, j, c_1, ..., c_m), where a_j is the ray vertex it hangs from and c_i
// are child indices (c_1 >= 1, later c_i >= 0).
struct TreeWindow {
  GraphWindow graph;
  int valence = 3;
  std::int64_t b_min = 0;
  std::int64_t b_max = 0;
  std::uint32_t depth_below = 0;
  std::vector<std::int64_t> busemann;
  std::vector<std::optional<VertexId>> parent;
  std::vector<std::vector<VertexId>> children;

  std::int64_t b(VertexId v) const { return busemann[v]; }
  VertexId anchor(std::int64_t j) const;
  // The k-th ancestor; throws kUntrusted if it leaves the window.
  VertexId ancestor(VertexId v, std::uint32_t k) const;
  // True when v has all valence - 1 children in the window.
  bool branches_fully(VertexId v) const {
    return children[v].size() == static_cast<std::size_t>(valence - 1);
  }
};

TreeWindow tree_window(int valence, std::int64_t b_min, std::int64_t b_max,
                       std::uint32_t depth_below);

// Descendants of x at most `levels` steps below it (T(x) cut at that depth).
// Flagged untrusted if the window clips the subtree.
VertexSet tree_below(const TreeWindow& tw, VertexId x, std::uint32_t levels = kInfinity);
// Descendants exactly `levels` steps below x.
std::vector<VertexId> tree_level(const TreeWindow& tw, VertexId x, std::uint32_t levels);

// L1 product of two windows: vertex (i1, i2) has id i1 * |w2| + i2 and label
// (|label1|, label1..., label2...).
GraphWindow product_window(const GraphWindow& w1, const GraphWindow& w2);

struct TreeProduct {
  TreeWindow first;
  TreeWindow second;
  GraphWindow graph;

  VertexId pair(VertexId a, VertexId b) const {
    return static_cast<VertexId>(a * second.graph.size() + b);
  }
  std::pair<VertexId, VertexId> split(VertexId v) const {
    const auto n2 = static_cast<VertexId>(second.graph.size());
    return {v / n2, v % n2};
  }
};

TreeProduct tree_product(TreeWindow first, TreeWindow second);

// A_x(k) = (T(x1) x T(x2)) cap (S(x, k-1) cup S(x, k)), k >= 1. Throws
// kUntrusted unless both T(x_i) are complete to depth k in the window.
VertexSet tree_annulus(const TreeProduct& tp, VertexId x, std::uint32_t k);

// DL(p, q) restricted to the band |b_1| <= band: pairs (x1, x2) of T_{p+1} x
// T_{q+1} with b(x1) + b(x2) = 0, adjacent when both coordinates move one
// step. The band is convex, so window distances are ambient distances.
struct DLWindow {
  GraphWindow graph;
  int p = 2;
  int q = 2;
  std::int64_t band = 0;
  TreeWindow first;
  TreeWindow second;
  std::vector<std::pair<VertexId, VertexId>> coords;

  std::optional<VertexId> find(VertexId x1, VertexId x2) const;

 private:
  friend DLWindow dl_window(int p, int q, std::int64_t band);
  std::unordered_map<std::uint64_t, VertexId> index_;
};

DLWindow dl_window(int p, int q, std::int64_t band);

// V_o(r): pairs (z1, z2) with z_i a descendant of o_i, the two depths summing
// to r. Requires b(o1) + b(o2) = r (kPrecondition otherwise) and the whole
// set inside the window (kUntrusted otherwise).
VertexSet dl_vset(const DLWindow& dw, VertexId o1, VertexId o2, std::uint32_t r);
// A_x(r) = V_{(x1^r, x2)}(r) for r >= 1.
VertexSet dl_persistent(const DLWindow& dw, VertexId x, std::uint32_t r);

// Box [-halfwidth, halfwidth]^n of Z^n; labels are coordinates.
GraphWindow grid_window(std::uint32_t n, std::uint32_t halfwidth);

// Cycle C_n, labels (i); the complete finite graph.
GraphWindow cycle_window(std::uint32_t n);
// Path P_n, labels (i).
GraphWindow path_window(std::uint32_t n);

// S(x, r)^{+t}.
VertexSet thickened_sphere(const GraphWindow& w, VertexId x, std::uint32_t r,
                           std::uint32_t t);

struct WreathBallSpec {
  FiniteGroup lamp;
  // Absent: the base is Z with generators +1, -1.
  std::optional<FiniteGroup> base;
  std::uint32_t radius = 0;
};

// Cayley ball of A wr B around the identity. Label: (x, p_1, v_1, p_2, v_2,
// ...) with base position x and the lamp values v_i != 1 at positions
// p_1 < p_2 < ...
GraphWindow wreath_ball(const WreathBallSpec& spec);

}  // namespace coarse
