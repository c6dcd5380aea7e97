#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "coarse/finite_group.hpp"
#include "coarse/graph_core.hpp"
#include "coarse/quasimedian.hpp"

namespace coarse {

// How lamps at distinct base positions commute.
enum class GammaKind {
  kCayley,  // b ~ bs for s a base generator
  kComplete,  // all positions commute: the ordinary wreath product
  kEdgeless,  // no positions commute
};

struct PartialWreathSpec {
  FiniteGroup lamp;
  // Absent: the base is Z with generators +1, -1.
  std::optional<FiniteGroup> base;
  GammaKind gamma = GammaKind::kCayley;
  std::uint32_t radius = 0;
};

// The graph product Gamma A over the base positions within `reach` of the
// identity (all of B when B is finite).
struct LampProduct {
  GraphProduct product;
  std::vector<std::int64_t> positions;  // Gamma vertex -> base position

  std::uint32_t index_of(std::int64_t position) const;
};

LampProduct lamp_product(const PartialWreathSpec& spec, std::uint32_t reach);

// Cayley ball of A box_Gamma B = Gamma A semidirect B. Label: (b, p_1, a_1,
// p_2, a_2, ...) with base position b and the normal-form syllables at
// positions p_i.
struct PartialWreathBall {
  GraphWindow graph;
  LampProduct lamps;
  std::vector<std::pair<NormalForm, std::int64_t>> elements;
};

PartialWreathBall partial_wreath_ball(const PartialWreathSpec& spec);

struct IsoReport {
  std::size_t ball_size = 0;
  std::size_t pc_ball_size = 0;
  std::size_t ball_edges = 0;
  std::size_t pc_ball_edges = 0;
  bool basepoint_ok = false;
  bool bijection_ok = false;
  bool edges_ok = false;
  std::optional<std::string> mismatch;

  bool passed() const { return basepoint_ok && bijection_ok && edges_ok; }
};

// (g, b) -> (g G_b, g) against the graph of pointed cliques of QM(Gamma, A)
// on the ball of radius spec.radius.
IsoReport pc_iso_check(const PartialWreathSpec& spec);

struct WreathComparison {
  std::size_t partial_size = 0;
  std::size_t wreath_size = 0;
  bool equal = false;  // same labels and same edges
  bool surjective = false;  // the projection hits every wreath vertex
  bool edges_to_edges = false;  // generators go to generators
};

// Projection (g, b) -> (f, b), f(p) = product of the p-syllables of g, onto
// the wreath ball of the same radius.
WreathComparison compare_with_wreath(const PartialWreathSpec& spec);

// B(E, c) = {(f, x) : x in E, f = c off E}, materialized in a wreath ball
// over Z (labels as in wreath_ball).
struct BSet {
  std::vector<std::int64_t> e;
  std::map<std::int64_t, GroupElement> colouring;
  VertexSet members;
};

// Throws kUntrusted when some element of the set is missing from the window.
BSet bset(const GraphWindow& wreath, const FiniteGroup& lamp, std::vector<std::int64_t> e,
          std::map<std::int64_t, GroupElement> colouring);

}  // namespace coarse
