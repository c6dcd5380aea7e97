#include <doctest.h>

#include "coarse/error.hpp"
#include "coarse/generators.hpp"
#include "coarse/invariants.hpp"
#include "coarse/separation.hpp"

using namespace coarse;

TEST_CASE("ball family of Z^2 is persistent with alpha 1/5") {
  const auto g = grid_window(2, 8);
  const auto fam = balls_family(g);
  CHECK(fam.alpha == Rational(1, 5));
  CHECK(fam.default_delta() == Rational(9, 10));
  const std::vector<std::uint32_t> radii{1, 2, 3};
  const std::vector<VertexId> probes{g.basepoint()};
  const auto rep = persistence_check(fam, radii, probes);
  CHECK(rep.passed());
  CHECK(rep.worst >= Rational(1, 5));
}

TEST_CASE("tree annuli are 1/8-persistent") {
  const auto tw = tree_window(3, -5, 1, 6);
  const auto tp = tree_product(tw, tw);
  const auto fam = tree_annulus_family(tp);
  const std::vector<std::uint32_t> radii{1, 2, 3, 4};
  const std::vector<VertexId> probes{tp.graph.basepoint()};
  const auto rep = persistence_check(fam, radii, probes);
  CHECK(rep.passed());
  CHECK(rep.worst == Rational(1, 5));
  CHECK(rep.worst >= Rational(1, 8));
}

TEST_CASE("DL sets are 1/4-persistent") {
  const auto dw = dl_window(2, 2, 6);
  const auto fam = dl_family(dw);
  std::vector<VertexId> probes{dw.graph.basepoint()};
  for (auto u : dw.graph.neighbours(dw.graph.basepoint())) probes.push_back(u);
  const std::vector<std::uint32_t> radii{1, 2, 3, 4};
  const auto rep = persistence_check(fam, radii, probes);
  CHECK(rep.passed());
  CHECK(rep.worst == Rational(1, 4));
}

TEST_CASE("a line separates the grid into two coarse components") {
  const auto g = grid_window(2, 6);
  std::vector<VertexId> line;
  for (VertexId v = 0; v < g.size(); ++v) {
    if (g.label(v)[0] == 0) line.push_back(v);
  }
  const VertexSet s(g, line);
  const auto v = separation_witness(s, 1, 0, 3);
  CHECK(v.separates);
  CHECK(v.qualifying.size() == 2);
  const auto thick = separation_witness(s, 1, 1, 3);
  CHECK(thick.separates);
  // The window edge is at distance exactly 6, which still qualifies.
  CHECK(separation_witness(s, 1, 0, 6).separates);
  CHECK_THROWS_AS(separation_witness(s, 1, 0, 7), Error);
  // At scale 2 the two halves see each other across the line.
  CHECK_FALSE(separation_witness(s, 2, 0, 3).separates);
}

TEST_CASE("scan extracts certified cuts from the grid separator") {
  for (std::uint32_t r = 2; r <= 5; ++r) {
    const auto f = balls_scan_fixture(r);
    const auto part = coarse_partition(f.separator, 1);
    CHECK(part.parts.size() == 2);
    const auto res = scan_for_cut(f.family, f.path, part, f.separator, f.family.default_delta(), r);
    CHECK(res.cut_certified);
    CHECK(res.drop_ok);
    CHECK(res.cut.size() >= r);
    CHECK(is_cut(res.set, res.cut, 1, f.family.default_delta()));
  }
}

TEST_CASE("scan on tree annuli and DL sets") {
  for (std::uint32_t k = 1; k <= 2; ++k) {
    const auto f = tree_annulus_scan_fixture(k);
    const auto part = coarse_partition(f.separator, 1);
    const auto res = scan_for_cut(f.family, f.path, part, f.separator, Rational(15, 16), k);
    CHECK(res.cut_certified);
  }
  for (std::uint32_t r = 1; r <= 2; ++r) {
    const auto f = dl_scan_fixture(r);
    const auto part = coarse_partition(f.separator, 1);
    const auto res = scan_for_cut(f.family, f.path, part, f.separator, Rational(7, 8), r);
    CHECK(res.cut_certified);
  }
}

TEST_CASE("scan rejects a path that never leaves the dominant part") {
  const auto f = balls_scan_fixture(2);
  const auto part = coarse_partition(f.separator, 1);
  const std::vector<VertexId> stay{f.path.front()};
  CHECK_THROWS_AS(scan_for_cut(f.family, stay, part, f.separator, f.family.default_delta(), 2), Error);
}

TEST_CASE("geodesic paths are shortest") {
  const auto g = grid_window(2, 4);
  const auto a = g.at({-3, 1});
  const auto b = g.at({2, -2});
  const auto p = geodesic_path(g, a, b);
  CHECK(p.size() == 9);
  CHECK(p.front() == a);
  CHECK(p.back() == b);
  for (std::size_t i = 1; i < p.size(); ++i) CHECK(g.adjacent(p[i - 1], p[i]));
}
