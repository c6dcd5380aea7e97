#include <doctest.h>

#include <random>

#include "coarse/error.hpp"
#include "coarse/generators.hpp"
#include "coarse/invariants.hpp"
#include "../support/oracles.hpp"

using namespace coarse;

namespace {

std::vector<VertexId> ids(const VertexSet& s) { return {s.begin(), s.end()}; }

}  // namespace

TEST_CASE("cut of small fixed graphs") {
  const auto c4 = cycle_window(4);
  const auto rep = cut(whole_window(c4), 1, Rational(1, 2));
  REQUIRE(rep.exact);
  CHECK(*rep.exact == Rational(2));
  CHECK(is_cut(whole_window(c4), rep.witness, 1, Rational(1, 2)));
  REQUIRE(rep.cheeger_bound);
  CHECK(*rep.cheeger_bound == Rational(1, 3));

  const auto p5 = path_window(5);
  CHECK(*cut(whole_window(p5), 1, Rational(1, 2)).exact == Rational(1));
  // A single point can only be cut by removing it.
  const VertexSet one(p5, {2});
  CHECK(*cut(one, 1, Rational(1, 2)).exact == Rational(1));
}

TEST_CASE("cut witnesses are re-checked independently") {
  const auto g = grid_window(2, 4);
  const auto a = ball(g, g.basepoint(), 2);
  const auto rep = cut(a, 1, Rational(9, 10));
  REQUIRE(rep.exact);
  CHECK(Rational(static_cast<std::int64_t>(rep.witness.size())) == *rep.exact);
  CHECK(is_cut(a, rep.witness, 1, Rational(9, 10)));
  CHECK_FALSE(is_cut(a, VertexSet(g), 1, Rational(9, 10)));
}

TEST_CASE("tree annulus cut is 1 at delta 15/16 for k = 1, 2") {
  for (std::uint32_t k = 1; k <= 2; ++k) {
    const auto tw = tree_window(3, -static_cast<std::int64_t>(k) - 1, 1, k + 2);
    const auto tp = tree_product(tw, tw);
    const auto a = tree_annulus(tp, tp.graph.basepoint(), k);
    const auto rep = cut(a, 1, Rational(15, 16));
    REQUIRE(rep.exact);
    CHECK(*rep.exact == Rational(1));
    CHECK(oracle::cut(tp.graph, ids(a), 1, Rational(15, 16)) == 1);
    REQUIRE(rep.cheeger_bound);
    CHECK(*rep.exact >= *rep.cheeger_bound);
  }
}

TEST_CASE("exhausted cut budget yields an interval") {
  const auto g = grid_window(2, 6);
  const auto a = ball(g, g.basepoint(), 4);
  const auto rep = cut(a, 1, Rational(1, 2), {.exact = true, .budget = 10, .with_cheeger_bound = false});
  CHECK_FALSE(rep.exact.has_value());
  CHECK(rep.lower <= rep.upper);
  CHECK(is_cut(a, rep.witness, 1, Rational(1, 2)));
}

TEST_CASE("Cheeger constant matches brute force on fixtures") {
  const auto c6 = cycle_window(6);
  const auto h = cheeger(whole_window(c6), 1);
  REQUIRE(h.exact);
  CHECK(*h.exact == oracle::cheeger(c6, ids(whole_window(c6)), 1));
  CHECK(*h.exact == Rational(2, 3));
  CHECK(cheeger_ratio(whole_window(c6), h.witness, 1) == *h.exact);
}

TEST_CASE("Cheeger exhaustive cap") {
  const auto g = grid_window(2, 6);
  CHECK_THROWS_AS(cheeger(ball(g, g.basepoint(), 4), 1), Error);
}

TEST_CASE("cut lower bound from Cheeger") {
  // lambda = min(1/4, (1 - 1/2) / 2) / 3 = 1/12
  CHECK(cut_lower_from_cheeger(Rational(1), 4, Rational(1, 2), 3) == Rational(1, 3));
  CHECK(cut_lower_from_cheeger(Rational(1, 2), 10, Rational(15, 16), 5) ==
        Rational(1, 32) / 5 * Rational(1, 2) * 10);
}

TEST_CASE("two-level Poincare constant matches the direct formula") {
  const auto tw = tree_window(3, -3, 1, 4);
  const auto tp = tree_product(tw, tw);
  const auto a = tree_annulus(tp, tp.graph.basepoint(), 2);
  const auto rep = poincare_l1(metric_measure_set(a), 1, {.sampled = true, .seed = 3});
  REQUIRE(rep.exact);
  CHECK(*rep.exact == oracle::poincare_two_level(tp.graph, ids(a), 1));
  CHECK(*rep.exact == Rational(1, 2));
  CHECK(*rep.exact >= Rational(3, 16));
  CHECK(rep.challenger_ok);
  std::vector<double> f;
  for (const auto& v : rep.function) f.push_back(to_double(v));
  CHECK(poincare_ratio(metric_measure_set(a), 1, f) == doctest::Approx(to_double(*rep.exact)));
}

TEST_CASE("Poincare preconditions") {
  const auto p = path_window(1);
  CHECK_THROWS_AS(poincare_l1(metric_measure_set(whole_window(p)), 1), Error);
  const auto p3 = path_window(3);
  CHECK_THROWS_AS(poincare_l1(metric_measure_set(whole_window(p3)), 0), Error);
}

TEST_CASE("separated nets cover and separate") {
  const auto g = grid_window(2, 5);
  const auto a = ball(g, g.basepoint(), 4);
  for (std::uint32_t eps = 1; eps <= 3; ++eps) {
    const auto z = separated_net(a, eps);
    CHECK(is_subset(z, a));
    CHECK(is_subset(a, neighbourhood(z, eps)));
  }
}
