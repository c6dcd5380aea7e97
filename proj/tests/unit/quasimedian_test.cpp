#include <doctest.h>

#include <random>

#include "coarse/error.hpp"
#include "coarse/product_spec.hpp"
#include "coarse/quasimedian.hpp"
#include "../support/oracles.hpp"

using namespace coarse;

namespace {

const FiniteGroup z2 = FiniteGroup::cyclic(2);
const FiniteGroup z3 = FiniteGroup::cyclic(3);

GraphProduct k3_z3() { return GraphProduct(3, {{0, 1}, {1, 2}, {0, 2}}, {z3, z3, z3}); }
GraphProduct edge_z2() { return GraphProduct(2, {{0, 1}}, {z2, z2}); }
GraphProduct p3_z2() { return GraphProduct(3, {{0, 1}, {1, 2}}, {z2, z2, z2}); }
GraphProduct free_z2() { return GraphProduct(2, {}, {z2, z2}); }

}  // namespace

TEST_CASE("normal forms agree with exhaustive reduction") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const auto gp = oracle::random_product(rng, 4, 0.5);
    const auto w = oracle::random_word(rng, gp, 6);
    CHECK(gp.normal_form(w) == oracle::normal_form(gp, w));
  }
}

TEST_CASE("normal form group laws") {
  std::mt19937_64 rng(23);
  const auto gp = p3_z2();
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = gp.normal_form(oracle::random_word(rng, gp, 5));
    const auto b = gp.normal_form(oracle::random_word(rng, gp, 5));
    const auto c = gp.normal_form(oracle::random_word(rng, gp, 5));
    CHECK(gp.multiply(gp.multiply(a, b), c) == gp.multiply(a, gp.multiply(b, c)));
    CHECK(gp.multiply(a, gp.inverse(a)).empty());
  }
  CHECK_THROWS_AS(gp.normal_form(std::vector<Syllable>{{5, 1}}), Error);
  CHECK_THROWS_AS(gp.normal_form(std::vector<Syllable>{{0, 2}}), Error);
  // Identity syllables are dropped.
  CHECK(gp.normal_form(std::vector<Syllable>{{0, 0}}).empty());
}

TEST_CASE("coset minima and end syllables") {
  const auto gp = p3_z2();
  // a c b on the path a-b-c: b commutes with both, a and c do not commute.
  const auto g = gp.normal_form(std::vector<Syllable>{{0, 1}, {2, 1}, {1, 1}});
  CHECK(gp.trailing(g, 1) == 1);
  CHECK(gp.leading(g, 0) == 1);
  CHECK(gp.leading(g, 2) == 0);
  CHECK(gp.leading(g, 1) == 1);
  CHECK(gp.trailing(g, 0) == 0);
  const std::uint32_t lam[] = {1};
  CHECK(gp.coset_min(g, lam) == gp.normal_form(std::vector<Syllable>{{0, 1}, {2, 1}}));
  CHECK(gp.weighted_length(g) == 3);
}

TEST_CASE("ball sizes of small graph products") {
  CHECK(qm_ball(k3_z3(), 6).graph().size() == 27);
  CHECK(qm_ball(k3_z3(), 6).exhaustive());
  CHECK(qm_ball(edge_z2(), 3).graph().size() == 4);
  for (std::uint32_t r = 1; r <= 5; ++r) {
    const auto q = qm_ball(free_z2(), r);
    CHECK(q.graph().size() == 2 * r + 1);
    CHECK_FALSE(q.exhaustive());
  }
  const auto q = qm_ball(p3_z2(), 2);
  CHECK(q.graph().size() == 8);
  CHECK_THROWS_AS(qm_ball(free_z2(), 40, 10), Error);
}

TEST_CASE("cliques are the cosets of vertex groups") {
  const auto q = qm_ball(GraphProduct(1, {}, {z3}), 3);
  CHECK(q.graph().size() == 3);
  CHECK(q.graph().edge_count() == 3);
  CHECK(q.cliques().size() == 1);
  CHECK(q.cliques()[0].complete);
  CHECK(q.hyperplanes().size() == 1);
  const auto h = k3_z3();
  const auto qh = qm_ball(h, 3);
  // 9 cosets per vertex group in (Z/3)^3.
  CHECK(qh.cliques().size() == 27);
  CHECK(qh.hyperplanes().size() == 3);
  CHECK(qh.key_mismatches() == 0);
}

TEST_CASE("structure checks pass on the reference fixtures") {
  for (const auto& gp : {GraphProduct(1, {}, {z3}), k3_z3(), edge_z2(), p3_z2()}) {
    const auto q = qm_ball(gp, 3);
    const auto s = check_structure(q);
    CHECK(s.passed());
    CHECK(s.k4_minus == 0);
    CHECK(s.k32 == 0);
    CHECK(s.max_prism_dimension <= gp.clique_number());
  }
  const auto s = check_structure(qm_ball(k3_z3(), 3));
  CHECK(s.trusted_pairs == 351);
  CHECK(s.max_prism_dimension == 3);
}

TEST_CASE("distance is the number of separating hyperplanes") {
  const auto q = qm_ball(p3_z2(), 6);
  const auto d = oracle::all_pairs(q.graph());
  for (VertexId x = 0; x < q.graph().size(); ++x) {
    for (VertexId y = x + 1; y < q.graph().size(); ++y) {
      if (!q.trusted_pair(x, y)) continue;
      CHECK(separating_hyperplanes(q, x, y).size() == d[x][y]);
    }
  }
}

TEST_CASE("hyperplane geometry of a single clique") {
  const auto q = qm_ball(GraphProduct(1, {}, {z3}), 3);
  const auto geo = hyperplane_geometry(q, 0);
  CHECK(geo.carrier.size() == 3);
  CHECK(geo.fibres.size() == 3);
  CHECK(geo.sectors.size() == 3);
}

TEST_CASE("gates onto cliques") {
  const auto q = qm_ball(edge_z2(), 3);
  const auto& c = q.cliques()[0].members;
  for (VertexId x = 0; x < q.graph().size(); ++x) CHECK(gate(q.graph(), c, x).has_value());
  const auto tri = qm_ball(GraphProduct(1, {}, {z3}), 2);
  const std::vector<VertexId> pair{0, 1};
  CHECK_FALSE(gate(tri.graph(), pair, 2).has_value());
}

TEST_CASE("clique metrics are coherent") {
  for (const auto& gp : {k3_z3(), p3_z2(), GraphProduct(2, {{0, 1}}, {FiniteGroup::cyclic(4), z3})}) {
    const auto rep = check_metrics(qm_ball(gp, 3));
    CHECK(rep.passed());
    CHECK(rep.pairs > 0);
  }
}

TEST_CASE("pointed-clique graph") {
  const auto tri = qm_ball(GraphProduct(1, {}, {z3}), 3);
  const auto pc = pc_build(tri);
  CHECK(pc.graph.size() == 3);
  CHECK(pc.graph.edge_count() == 3);
  const auto sq = pc_build(qm_ball(edge_z2(), 3));
  CHECK(sq.graph.size() == 8);
  CHECK(sq.graph.edge_count() == 8);
  for (const auto& gp : {k3_z3(), edge_z2(), p3_z2()}) {
    const auto q = qm_ball(gp, 3);
    const auto rep = check_pc(q, pc_build(q));
    CHECK(rep.passed());
    CHECK(rep.lower_checked > 0);
  }
}

TEST_CASE("bulkheads separate their zones") {
  const auto q = qm_ball(k3_z3(), 3);
  const auto pc = pc_build(q);
  std::size_t checked = 0;
  for (std::uint32_t h = 0; h < q.hyperplanes().size(); ++h) {
    for (auto a : fibre_labels(q, h)) {
      const auto b = bulkhead(q, pc, h, a);
      CHECK(b.separates);
      CHECK(intersection_size(b.zone_in, b.zone_out) == 0);
      CHECK(b.bulkhead.size() + b.zone_in.size() + b.zone_out.size() == pc.graph.size());
      ++checked;
    }
  }
  CHECK(checked == 9);
}

TEST_CASE("product spec files") {
  const auto spec = parse_product_spec(
      "[gamma]\nvertices = a b c\nedges = a-b b-c\n[groups]\ndefault = Z/2\nb = table:s3\n"
      "[table.s3]\nrows = 0 1 2 3 4 5; 1 0 4 5 2 3; 2 3 0 1 5 4; 3 2 5 4 0 1; 4 5 1 0 3 2; 5 4 3 2 1 0\n"
      "generators = 1 2\n");
  REQUIRE(spec.product);
  CHECK(spec.product->vertex_count() == 3);
  CHECK(spec.product->group(1).order() == 6);
  CHECK(spec.product->adjacent(0, 1));
  CHECK_FALSE(spec.product->adjacent(0, 2));
  CHECK_THROWS_AS(parse_product_spec("[gamma]\nvertices = a b\nedges = a-z\n"), Error);
  CHECK_THROWS_AS(parse_product_spec("[groups]\ndefault = Z/2\n"), Error);
  const auto w = parse_product_spec("[wreath]\nlamp = Z/2\nbase = Z/3\ngamma = complete\n");
  REQUIRE(w.wreath);
  CHECK(w.wreath->gamma == GammaKind::kComplete);
  CHECK(w.graph_product(2).vertex_count() == 3);
}
