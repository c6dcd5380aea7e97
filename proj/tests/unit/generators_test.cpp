#include <doctest.h>

#include "coarse/error.hpp"
#include "coarse/generators.hpp"

using namespace coarse;

TEST_CASE("tree windows are trees with the expected degrees") {
  const auto t = tree_window(3, -3, 2, 5);
  CHECK(t.graph.edge_count() + 1 == t.graph.size());
  for (VertexId v = 0; v < t.graph.size(); ++v) {
    CHECK(t.graph.degree(v) <= 3);
    if (t.parent[v]) CHECK(t.b(*t.parent[v]) == t.b(v) + 1);
  }
  CHECK(t.b(t.graph.basepoint()) == 0);
  CHECK(t.anchor(2) == t.ancestor(t.graph.basepoint(), 2));
  CHECK_THROWS_AS(t.ancestor(t.graph.basepoint(), 3), Error);
}

TEST_CASE("tree annulus shells have (k+1) 2^k points") {
  for (std::uint32_t k = 1; k <= 5; ++k) {
    const auto tw = tree_window(3, -static_cast<std::int64_t>(k) - 1, 1, k + 2);
    const auto tp = tree_product(tw, tw);
    const auto x = tp.graph.basepoint();
    const auto a = tree_annulus(tp, x, k);
    CHECK(intersection_size(a, sphere(tp.graph, x, k)) == (k + 1) * (1u << k));
    CHECK(a.size() == (k + 1) * (1u << k) + k * (1u << (k - 1)));
    CHECK(is_subset(a, ball(tp.graph, x, 4 * k)));
  }
}

TEST_CASE("annulus of the parent shares the outer shell of the smaller annulus") {
  const std::uint32_t k = 3;
  const auto tw = tree_window(3, -5, 2, 6);
  const auto tp = tree_product(tw, tw);
  const auto x = tp.graph.basepoint();
  const auto [x1, x2] = tp.split(x);
  const auto xp = tp.pair(*tp.first.parent[x1], x2);
  const auto both = set_intersection(tree_annulus(tp, x, k), tree_annulus(tp, xp, k));
  CHECK(both.size() == k * (1u << (k - 1)));
  CHECK(both == set_intersection(tree_annulus(tp, x, k), sphere(tp.graph, x, k - 1)));
}

TEST_CASE("annulus escaping the window is untrusted") {
  const auto tw = tree_window(3, -2, 1, 3);
  const auto tp = tree_product(tw, tw);
  CHECK_THROWS_AS(tree_annulus(tp, tp.graph.basepoint(), 4), Error);
}

TEST_CASE("Diestel-Leader sets have (r+1) 2^r points") {
  for (std::uint32_t r = 1; r <= 5; ++r) {
    const auto dw = dl_window(2, 2, r);
    const auto a = dl_persistent(dw, dw.graph.basepoint(), r);
    CHECK(a.size() == (r + 1) * (1u << r));
  }
}

TEST_CASE("Diestel-Leader window is 4-regular inside the band") {
  const auto dw = dl_window(2, 2, 3);
  for (VertexId v = 0; v < dw.graph.size(); ++v) {
    if (dw.graph.depth(v) < dw.graph.trusted_radius()) CHECK(dw.graph.degree(v) == 4);
  }
  const auto [o1, o2] = dw.coords[dw.graph.basepoint()];
  CHECK_THROWS_AS(dl_vset(dw, o1, o2, 1), Error);
}

TEST_CASE("grid, cycle and path windows") {
  const auto g = grid_window(2, 3);
  CHECK(g.size() == 49);
  CHECK(g.edge_count() == 2 * 7 * 6);
  CHECK(g.trusted_radius() == 3);
  CHECK(cycle_window(5).edge_count() == 5);
  CHECK(cycle_window(5).complete());
  CHECK(path_window(5).edge_count() == 4);
}

TEST_CASE("lamplighter balls") {
  const auto z2 = FiniteGroup::cyclic(2);
  CHECK(wreath_ball({z2, std::nullopt, 1}).size() == 4);
  CHECK(wreath_ball({z2, std::nullopt, 2}).size() == 10);
  CHECK(wreath_ball({z2, std::nullopt, 3}).size() == 22);
  const auto full = wreath_ball({z2, FiniteGroup::cyclic(3), 20});
  CHECK(full.size() == 24);
  CHECK(full.complete());
}

TEST_CASE("thickened spheres") {
  const auto g = grid_window(2, 8);
  const auto s = thickened_sphere(g, g.basepoint(), 3, 1);
  CHECK(s == neighbourhood(sphere(g, g.basepoint(), 3), 1));
}

TEST_CASE("finite groups validate their tables") {
  CHECK_THROWS_AS(FiniteGroup({{0, 1}, {0, 1}}, {1}), Error);
  CHECK_THROWS_AS(FiniteGroup({{0, 1}, {1, 0}}, {0}), Error);
  const auto z5 = FiniteGroup::cyclic(5);
  CHECK(z5.word_length(2) == 2);
  CHECK(z5.inverse(2) == 3);
  CHECK(FiniteGroup::cyclic_complete(5).word_length(2) == 1);
}
