#include <doctest.h>

#include "coarse/error.hpp"
#include "coarse/generators.hpp"
#include "coarse/partial_wreath.hpp"

using namespace coarse;

namespace {

const FiniteGroup z2 = FiniteGroup::cyclic(2);
const FiniteGroup z3 = FiniteGroup::cyclic(3);

}  // namespace

TEST_CASE("lamp product over Z is a path of lamps") {
  const auto lp = lamp_product({z2, std::nullopt, GammaKind::kCayley, 2}, 3);
  CHECK(lp.positions.size() == 7);
  CHECK(lp.product.edges().size() == 6);
  CHECK(lp.index_of(0) == 3);
  CHECK_THROWS_AS(lp.index_of(4), Error);
}

TEST_CASE("line partial wreath ball matches the lamplighter ball") {
  const std::size_t sizes[] = {4, 10, 22, 44};
  for (std::uint32_t r = 1; r <= 4; ++r) {
    const PartialWreathSpec spec{z2, std::nullopt, GammaKind::kCayley, r};
    const auto ball = partial_wreath_ball(spec);
    CHECK(ball.graph.size() == sizes[r - 1]);
    const auto cmp = compare_with_wreath(spec);
    CHECK(cmp.surjective);
    CHECK(cmp.edges_to_edges);
  }
}

TEST_CASE("pointed-clique isomorphism for the line") {
  for (std::uint32_t r = 1; r <= 3; ++r) {
    const auto iso = pc_iso_check({z2, std::nullopt, GammaKind::kCayley, r});
    CHECK(iso.passed());
    CHECK(iso.ball_size == iso.pc_ball_size);
    CHECK(iso.ball_edges == iso.pc_ball_edges);
  }
}

TEST_CASE("complete Gamma over a finite base is the wreath product") {
  for (std::uint32_t r = 1; r <= 4; ++r) {
    const PartialWreathSpec spec{z3, z3, GammaKind::kCayley, r};
    CHECK(compare_with_wreath(spec).equal);
    CHECK(pc_iso_check(spec).passed());
    const PartialWreathSpec complete{z2, z3, GammaKind::kComplete, r};
    CHECK(compare_with_wreath(complete).equal);
  }
}

TEST_CASE("edgeless Gamma grows faster than the wreath product") {
  for (std::uint32_t r = 1; r <= 3; ++r) {
    const auto cmp = compare_with_wreath({z2, std::nullopt, GammaKind::kEdgeless, r});
    CHECK(cmp.partial_size == cmp.wreath_size);
  }
  const auto cmp = compare_with_wreath({z2, std::nullopt, GammaKind::kEdgeless, 4});
  CHECK(cmp.partial_size == 46);
  CHECK(cmp.wreath_size == 44);
  CHECK(cmp.surjective);
  CHECK(cmp.edges_to_edges);
  CHECK_FALSE(cmp.equal);
}

TEST_CASE("isomorphism check needs the Cayley Gamma") {
  CHECK_THROWS_AS(pc_iso_check({z2, std::nullopt, GammaKind::kEdgeless, 2}), Error);
}

TEST_CASE("B(E, c) sets") {
  const auto wb = wreath_ball({z2, std::nullopt, 8});
  const auto bs = bset(wb, z2, {0, 1}, {{2, 1}});
  CHECK(bs.members.size() == 8);
  const auto one = bset(wb, z2, {0}, {});
  CHECK(one.members.size() == 2);
  CHECK_THROWS_AS(bset(wb, z2, {}, {}), Error);
  CHECK_THROWS_AS(bset(wb, z2, {0}, {{1, 5}}), Error);
  const auto small = wreath_ball({z2, std::nullopt, 2});
  CHECK_THROWS_AS(bset(small, z2, {0, 1, 2}, {{3, 1}}), Error);
}
