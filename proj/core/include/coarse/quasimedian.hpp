#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "coarse/finite_group.hpp"
#include "coarse/graph_core.hpp"

namespace coarse {

// One letter of a graph-product word: a nontrivial element of the vertex
// group G_u.
struct Syllable {
  std::uint32_t vertex = 0;
  GroupElement element = 0;

  auto operator<=>(const Syllable&) const = default;
};

// Reduced word in canonical shuffle order: among all reduced words for the
// element, the lexicographically least sequence of vertices.
using NormalForm = std::vector<Syllable>;

// The graph product of finite groups over a finite simplicial graph Gamma.
class GraphProduct {
 public:
  GraphProduct() = default;
  GraphProduct(std::uint32_t vertex_count,
               std::vector<std::pair<std::uint32_t, std::uint32_t>> edges,
               std::vector<FiniteGroup> groups, std::vector<std::string> names = {});

  std::uint32_t vertex_count() const { return static_cast<std::uint32_t>(groups_.size()); }
  bool adjacent(std::uint32_t u, std::uint32_t v) const { return adjacency_[u][v]; }
  const FiniteGroup& group(std::uint32_t u) const { return groups_[u]; }
  const std::string& name(std::uint32_t u) const { return names_[u]; }
  std::optional<std::uint32_t> vertex_named(const std::string& name) const;
  const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges() const { return edges_; }
  // Sorted star(u) = {u} cup link(u).
  const std::vector<std::uint32_t>& star(std::uint32_t u) const { return star_[u]; }
  // Every nonempty complete subgraph of Gamma, each sorted.
  const std::vector<std::vector<std::uint32_t>>& complete_subgraphs() const { return cliques_; }
  std::uint32_t clique_number() const { return clique_number_; }

  // Throws kInvalidArgument on an unknown generator (bad vertex, element out
  // of range or trivial).
  NormalForm normal_form(std::span<const Syllable> word) const;
  NormalForm multiply(const NormalForm& g, Syllable s) const;
  NormalForm multiply(const NormalForm& a, const NormalForm& b) const;
  NormalForm inverse(const NormalForm& g) const;
  // Shortest representative of g <Lambda> (lambda sorted).
  NormalForm coset_min(const NormalForm& g, std::span<const std::uint32_t> lambda) const;
  // The u-syllable that can be shuffled to the end (front), or the identity.
  GroupElement trailing(const NormalForm& g, std::uint32_t u) const;
  GroupElement leading(const NormalForm& g, std::uint32_t u) const;
  // Sum of the syllables' word lengths in their vertex groups.
  std::uint64_t weighted_length(const NormalForm& g) const;
  // Flattened (vertex, element, vertex, element, ...).
  Label label(const NormalForm& g) const;

 private:
  NormalForm canonical(NormalForm word) const;

  std::vector<FiniteGroup> groups_;
  std::vector<std::string> names_;
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges_;
  std::vector<std::vector<bool>> adjacency_;
  std::vector<std::vector<std::uint32_t>> star_;
  std::vector<std::vector<std::uint32_t>> cliques_;
  std::uint32_t clique_number_ = 0;
};

struct QMClique {
  std::uint32_t vertex = 0;  // Gamma vertex u of the coset g G_u
  NormalForm base;  // shortest element of the coset
  std::vector<VertexId> members;  // sorted
  bool complete = false;  // all |G_u| elements present
  std::uint32_t hyperplane = 0;
};

struct QMHyperplane {
  std::uint32_t vertex = 0;
  // Shortest element of g <star(u)>; the hyperplane is g J_u.
  NormalForm base;
  std::vector<std::uint32_t> cliques;
  std::size_t edge_count = 0;
  // The whole carrier lies strictly inside the ball.
  bool trusted = false;
};

// Ball of radius R in Cayl(Gamma G, union of G_u \ {1}) with its clique and
// hyperplane registries.
class QMWindow {
 public:
  const GraphProduct& product() const { return product_; }
  std::uint32_t radius() const { return radius_; }
  const GraphWindow& graph() const { return graph_; }
  const NormalForm& element(VertexId v) const { return elements_[v]; }
  std::optional<VertexId> find(const NormalForm& g) const;
  std::uint32_t norm(VertexId v) const { return graph_.depth(v); }
  // True when the ball is the whole (finite) group.
  bool exhaustive() const { return graph_.complete(); }
  // Pairs with both norms <= pair_trust() are trusted pairs.
  std::uint32_t pair_trust() const { return exhaustive() ? kInfinity : radius_ / 2; }
  bool trusted_pair(VertexId x, VertexId y) const;

  const std::vector<QMClique>& cliques() const { return cliques_; }
  const std::vector<QMHyperplane>& hyperplanes() const { return hyperplanes_; }
  // Clique x G_u, if registered.
  std::optional<std::uint32_t> clique_at(std::uint32_t u, VertexId x) const;
  // Clique and hyperplane of the edge {a, b}; throws if not an edge.
  std::uint32_t edge_clique(VertexId a, VertexId b) const;
  std::uint32_t edge_hyperplane(VertexId a, VertexId b) const;
  // Hyperplane key (u, coset_min(g, star(u))) computed from the group.
  std::optional<std::uint32_t> hyperplane_by_key(std::uint32_t u, const NormalForm& base) const;
  // Label of the sector of x delimited by hyperplane h: the leading
  // u-syllable of base^{-1} x. Fibres carry the same labels.
  GroupElement sector_label(std::uint32_t h, VertexId x) const;
  // delta_C(a, b) for a, b in clique c.
  std::uint32_t clique_metric(std::uint32_t c, VertexId a, VertexId b) const;

 private:
  friend QMWindow qm_ball(const GraphProduct& product, std::uint32_t radius,
                          std::size_t max_states);
  static std::uint64_t edge_key(VertexId a, VertexId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
  }

  GraphProduct product_;
  std::uint32_t radius_ = 0;
  GraphWindow graph_;
  std::vector<NormalForm> elements_;
  std::map<NormalForm, VertexId> index_;
  std::vector<QMClique> cliques_;
  std::map<std::pair<std::uint32_t, NormalForm>, std::uint32_t> clique_index_;
  std::vector<QMHyperplane> hyperplanes_;
  std::map<std::pair<std::uint32_t, NormalForm>, std::uint32_t> hyperplane_index_;
  std::unordered_map<std::uint64_t, std::uint32_t> edge_clique_;
  std::unordered_map<std::uint64_t, std::uint32_t> edge_hyperplane_;
  std::size_t key_mismatches_ = 0;

 public:
  // Edges whose union-find hyperplane disagrees with the algebraic key
  // (zero on a correct registry).
  std::size_t key_mismatches() const { return key_mismatches_; }
};

// Throws kBudgetExceeded past max_states vertices.
QMWindow qm_ball(const GraphProduct& product, std::uint32_t radius,
                 std::size_t max_states = 2'000'000);

struct HyperplaneGeometry {
  VertexSet carrier;
  std::vector<VertexSet> fibres;  // components of N(J) minus J's edges
  std::vector<VertexSet> sectors;  // components of the window minus J's edges
  bool clipped = false;
};

HyperplaneGeometry hyperplane_geometry(const QMWindow& q, std::uint32_t h);

// Unique nearest vertex of `target` to x (window distance), or nothing when
// the nearest vertex is not unique.
std::optional<VertexId> gate(const GraphWindow& w, std::span<const VertexId> target, VertexId x);

struct QMStructureReport {
  std::size_t vertices = 0;
  std::size_t hyperplanes = 0;
  std::size_t trusted_pairs = 0;
  std::size_t geodesics = 0;
  std::size_t k4_minus = 0;
  std::size_t k32 = 0;
  std::size_t clique_violations = 0;
  std::size_t key_mismatches = 0;
  std::size_t distance_violations = 0;
  std::size_t crossing_violations = 0;
  std::size_t sector_mismatches = 0;
  std::size_t cubdist_violations = 0;
  std::size_t prism_violations = 0;
  std::uint32_t max_prism_dimension = 0;
  std::vector<std::string> messages;

  bool passed() const {
    return k4_minus + k32 + clique_violations + key_mismatches + distance_violations +
               crossing_violations + sector_mismatches + cubdist_violations +
               prism_violations ==
           0;
  }
};

// Forbidden induced K4^- and K3,2; clique registry sanity; hyperplane keys;
// d(x, y) = #separating hyperplanes and single crossings along every
// geodesic of length <= max_geodesic for trusted pairs; window sectors vs.
// sector labels; the cubical distance bound; prisms.
QMStructureReport check_structure(const QMWindow& q, std::uint32_t max_geodesic = 5);

// Hyperplanes separating x and y (by sector labels).
std::vector<std::uint32_t> separating_hyperplanes(const QMWindow& q, VertexId x, VertexId y);

struct MetricRoutes {
  std::uint64_t algebraic = 0;  // weighted length of x^{-1} y
  std::uint64_t broken_geodesic = 0;  // sum of delta_C along a geodesic
  std::optional<std::uint64_t> projections;  // sum over J of delta_J
};

// delta(x, y) by three independent routes (trusted pairs only).
MetricRoutes metric_routes(const QMWindow& q, VertexId x, VertexId y);

struct MetricReport {
  std::size_t coherence_checked = 0;
  std::size_t coherence_violations = 0;
  std::size_t pairs = 0;
  std::size_t route_mismatches = 0;
  std::size_t below_graph_metric = 0;  // delta < d
  bool passed() const {
    return coherence_violations + route_mismatches + below_graph_metric == 0;
  }
};

// Coherence of the clique metrics (projections between cliques of one
// hyperplane are isometries) and agreement of the three delta routes.
MetricReport check_metrics(const QMWindow& q);

enum class PCEdgeKind { kSlide, kRotation };

// Graph of pointed cliques over the complete cliques of a QM window.
struct PCWindow {
  GraphWindow graph;
  std::vector<std::pair<std::uint32_t, VertexId>> pointed;  // (clique, marked vertex)
  std::unordered_map<std::uint64_t, PCEdgeKind> kinds;
  std::map<std::pair<std::uint32_t, VertexId>, VertexId> index;

  PCEdgeKind kind(VertexId a, VertexId b) const;
  std::optional<VertexId> find(std::uint32_t clique, VertexId p) const;
};

// Basepoint: the clique G_u of the identity for u = base_vertex.
PCWindow pc_build(const QMWindow& q, std::uint32_t base_vertex = 0);

struct Bulkhead {
  std::uint32_t hyperplane = 0;
  GroupElement fibre = 0;
  VertexSet bulkhead;
  VertexSet zone_in;  // cliques inside the sector of F
  VertexSet zone_out;  // the other zone
  bool separates = false;
};

// Fibre labels of hyperplane h met by the window.
std::vector<GroupElement> fibre_labels(const QMWindow& q, std::uint32_t h);
Bulkhead bulkhead(const QMWindow& q, const PCWindow& pc, std::uint32_t h, GroupElement fibre);

struct PCBoundsCheck {
  std::uint64_t delta = 0;
  std::uint32_t d_pc = 0;
  bool same_hyperplane = false;
  bool exact = false;  // window PC distance equals the ambient one
  bool lower_ok = true;  // delta <= d_PC
  std::optional<bool> upper_ok;  // d_PC <= 3 delta + 1 (same hyperplane only)
};

PCBoundsCheck pc_distance_bounds(const QMWindow& q, const PCWindow& pc, VertexId a, VertexId b);

struct PCReport {
  std::size_t pc_vertices = 0;
  std::size_t lower_checked = 0;
  std::size_t lower_violations = 0;
  std::size_t upper_checked = 0;
  std::size_t upper_violations = 0;
  std::size_t bulkheads = 0;
  std::size_t bulkhead_violations = 0;
  bool passed() const { return lower_violations + upper_violations + bulkhead_violations == 0; }
};

// All exact pairs for the distance sandwich and every bulkhead of every
// trusted hyperplane.
PCReport check_pc(const QMWindow& q, const PCWindow& pc);

}  // namespace coarse
