#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "coarse/graph_core.hpp"
#include "coarse/quasimedian.hpp"
#include "coarse/rational.hpp"

// Slow, obviously-correct reference implementations used as test oracles.
namespace oracle {

using coarse::GraphWindow;
using coarse::Rational;
using coarse::VertexId;

using DistanceMatrix = std::vector<std::vector<std::uint32_t>>;

// Floyd-Warshall over the window; unreachable pairs are kInfinity.
DistanceMatrix all_pairs(const GraphWindow& w);

// Sizes of the r-coarse components of `points` (d <= r joins two points).
std::vector<std::size_t> component_sizes(const DistanceMatrix& d, const std::vector<VertexId>& points,
                                         std::uint32_t r);

// Least |S| over all S in A with every r-component of A \ S of size <= delta |A|.
std::size_t cut(const GraphWindow& w, const std::vector<VertexId>& a, std::uint32_t r,
                const Rational& delta);

// min |d_r B cap A| / |B| over nonempty B in A with |B| <= |A| / 2.
Rational cheeger(const GraphWindow& w, const std::vector<VertexId>& a, std::uint32_t r);

// min over two-level functions f = 1_B - |B| / |A| of
// sum_x sup_{y, y' in B(x, k) cap A} |f(y) - f(y')| / sum_x |f(x)|
// (counting measure).
Rational poincare_two_level(const GraphWindow& w, const std::vector<VertexId>& a, std::uint32_t k);

// Canonical form of a short word in a graph product by exhaustive search:
// merge same-vertex syllables across commuting stretches until reduced,
// then take the least vertex sequence over all commutation-equivalent
// orderings.
coarse::NormalForm normal_form(const coarse::GraphProduct& gp, std::vector<coarse::Syllable> word);

// ------------------------------------------------------------ generators

// Connected random graph on n vertices: a random tree plus each other edge
// with probability p. Labels are (i); basepoint 0; complete.
GraphWindow random_graph(std::mt19937_64& rng, std::uint32_t n, double p);

// Random subset of size k of {0..n-1}, sorted.
std::vector<VertexId> random_subset(std::mt19937_64& rng, std::uint32_t n, std::uint32_t k);

// Random word of the given length over the vertex groups' nontrivial elements.
std::vector<coarse::Syllable> random_word(std::mt19937_64& rng, const coarse::GraphProduct& gp,
                                          std::uint32_t length);

// Random Gamma on n vertices with edge probability p, with cyclic groups of
// orders drawn from {2, 3}.
coarse::GraphProduct random_product(std::mt19937_64& rng, std::uint32_t n, double p);

}  // namespace oracle
