#include <doctest.h>

#include <random>
#include <sstream>

#include "coarse/generators.hpp"
#include "coarse/graph_io.hpp"
#include "coarse/harness.hpp"
#include "coarse/invariants.hpp"
#include "coarse/quasimedian.hpp"
#include "../support/oracles.hpp"

using namespace coarse;

namespace {

struct Case {
  GraphWindow w;
  std::vector<VertexId> a;
};

Case random_case(std::mt19937_64& rng, std::uint32_t max_size) {
  const auto n = std::uniform_int_distribution<std::uint32_t>(max_size, 2 * max_size)(rng);
  const double p = std::uniform_real_distribution<double>(0.0, 0.25)(rng);
  Case c{oracle::random_graph(rng, n, p), {}};
  const auto k = std::uniform_int_distribution<std::uint32_t>(2, max_size)(rng);
  c.a = oracle::random_subset(rng, n, k);
  return c;
}

Rational random_delta(std::mt19937_64& rng) {
  const std::int64_t den = std::uniform_int_distribution<std::int64_t>(2, 16)(rng);
  const std::int64_t num = std::uniform_int_distribution<std::int64_t>(1, den - 1)(rng);
  return Rational(num, den);
}

}  // namespace

TEST_CASE("property: exact cut equals brute force") {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 60; ++trial) {
    const auto c = random_case(rng, 12);
    const VertexSet a(c.w, c.a);
    const auto r = std::uniform_int_distribution<std::uint32_t>(1, 2)(rng);
    const auto delta = random_delta(rng);
    const auto rep = cut(a, r, delta, {.with_cheeger_bound = false});
    REQUIRE(rep.exact);
    CHECK(*rep.exact == Rational(static_cast<std::int64_t>(oracle::cut(c.w, c.a, r, delta))));
    CHECK(is_cut(a, rep.witness, r, delta));
  }
}

TEST_CASE("property: cut is monotone in delta") {
  std::mt19937_64 rng(103);
  for (int trial = 0; trial < 30; ++trial) {
    const auto c = random_case(rng, 11);
    const VertexSet a(c.w, c.a);
    auto d1 = random_delta(rng), d2 = random_delta(rng);
    if (d2 < d1) std::swap(d1, d2);
    const auto tight = cut(a, 1, d1, {.with_cheeger_bound = false});
    const auto loose = cut(a, 1, d2, {.with_cheeger_bound = false});
    CHECK(*loose.exact <= *tight.exact);
  }
}

TEST_CASE("property: Cheeger constant equals brute force") {
  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 40; ++trial) {
    const auto c = random_case(rng, 12);
    const VertexSet a(c.w, c.a);
    const auto r = std::uniform_int_distribution<std::uint32_t>(1, 2)(rng);
    const auto h = cheeger(a, r);
    REQUIRE(h.exact);
    CHECK(*h.exact == oracle::cheeger(c.w, c.a, r));
    if (!h.witness.empty()) CHECK(cheeger_ratio(a, h.witness, r) == *h.exact);
  }
}

TEST_CASE("property: the Cheeger bound never exceeds the cut") {
  std::mt19937_64 rng(109);
  for (int trial = 0; trial < 30; ++trial) {
    const auto c = random_case(rng, 10);
    const VertexSet a(c.w, c.a);
    const auto delta = random_delta(rng);
    const auto rep = cut(a, 1, delta);
    REQUIRE(rep.exact);
    REQUIRE(rep.cheeger_bound);
    CHECK(*rep.exact >= *rep.cheeger_bound);
  }
}

TEST_CASE("property: two-level Poincare constant equals the direct formula") {
  std::mt19937_64 rng(113);
  for (int trial = 0; trial < 25; ++trial) {
    const auto c = random_case(rng, 10);
    const VertexSet a(c.w, c.a);
    const auto rep = poincare_l1(metric_measure_set(a), 1);
    REQUIRE(rep.exact);
    CHECK(*rep.exact == oracle::poincare_two_level(c.w, c.a, 1));
  }
}

TEST_CASE("property: greedy nets satisfy the counting-measure sandwich") {
  std::mt19937_64 rng(127);
  for (int trial = 0; trial < 40; ++trial) {
    const auto c = random_case(rng, 12);
    const VertexSet a(c.w, c.a);
    const auto eps = std::uniform_int_distribution<std::uint32_t>(1, 2)(rng);
    const auto z = separated_net(a, eps);
    std::size_t alpha = 0;
    for (VertexId x = 0; x < c.w.size(); ++x) alpha = std::max(alpha, ball(c.w, x, eps).size());
    for (int sub = 0; sub < 10; ++sub) {
      const auto k = std::uniform_int_distribution<std::uint32_t>(1, static_cast<std::uint32_t>(c.a.size()))(rng);
      std::vector<VertexId> picks;
      for (auto i : oracle::random_subset(rng, static_cast<std::uint32_t>(c.a.size()), k)) picks.push_back(c.a[i]);
      const VertexSet b(c.w, picks);
      const auto nu = intersection_size(neighbourhood(b, eps), z);
      CHECK(b.size() <= alpha * nu);
      CHECK(nu <= alpha * b.size());
    }
  }
}

TEST_CASE("property: normal forms are invariant under commutations and cancellations") {
  std::mt19937_64 rng(131);
  for (int trial = 0; trial < 150; ++trial) {
    const auto gp = oracle::random_product(rng, 4, 0.5);
    auto w = oracle::random_word(rng, gp, 7);
    const auto nf = gp.normal_form(w);
    for (std::size_t i = 0; i + 1 < w.size(); ++i) {
      if (w[i].vertex != w[i + 1].vertex && gp.adjacent(w[i].vertex, w[i + 1].vertex)) {
        auto swapped = w;
        std::swap(swapped[i], swapped[i + 1]);
        CHECK(gp.normal_form(swapped) == nf);
      }
    }
    const auto s = oracle::random_word(rng, gp, 1)[0];
    auto padded = w;
    const auto pos = std::uniform_int_distribution<std::size_t>(0, w.size())(rng);
    padded.insert(padded.begin() + static_cast<std::ptrdiff_t>(pos),
                  {s, {s.vertex, gp.group(s.vertex).inverse(s.element)}});
    CHECK(gp.normal_form(padded) == nf);
  }
}

TEST_CASE("property: random graph products are quasi-median") {
  std::mt19937_64 rng(137);
  for (int trial = 0; trial < 12; ++trial) {
    const auto gp = oracle::random_product(rng, 3, 0.5);
    const auto q = qm_ball(gp, 3);
    const auto s = check_structure(q);
    CHECK(s.passed());
    CHECK(q.key_mismatches() == 0);
    const auto d = oracle::all_pairs(q.graph());
    for (VertexId x = 0; x < q.graph().size(); x += 2) {
      for (VertexId y = x + 1; y < q.graph().size(); y += 3) {
        if (q.trusted_pair(x, y)) CHECK(separating_hyperplanes(q, x, y).size() == d[x][y]);
      }
    }
  }
}

TEST_CASE("property: cgw round trips random windows") {
  std::mt19937_64 rng(139);
  for (int trial = 0; trial < 30; ++trial) {
    const auto w = oracle::random_graph(rng, std::uniform_int_distribution<std::uint32_t>(1, 40)(rng), 0.1);
    const auto back = from_cgw(to_cgw(w));
    CHECK(back.edges() == w.edges());
    CHECK(to_cgw(back) == to_cgw(w));
  }
}

TEST_CASE("property: csv round trips random tables") {
  std::mt19937_64 rng(149);
  const std::string alphabet = "ab,\"1/ x";
  for (int trial = 0; trial < 50; ++trial) {
    Table t;
    const auto cols = std::uniform_int_distribution<int>(1, 4)(rng);
    for (int c = 0; c < cols; ++c) t.columns.push_back("c" + std::to_string(c));
    for (int r = std::uniform_int_distribution<int>(0, 5)(rng); r > 0; --r) {
      std::vector<std::string> row;
      for (int c = 0; c < cols; ++c) {
        std::string cell;
        for (int k = std::uniform_int_distribution<int>(0, 6)(rng); k > 0; --k) {
          cell += alphabet[std::uniform_int_distribution<std::size_t>(0, alphabet.size() - 1)(rng)];
        }
        row.push_back(cell);
      }
      t.rows.push_back(row);
    }
    std::stringstream s;
    write_csv(s, t);
    const auto back = read_csv(s);
    CHECK(back.columns == t.columns);
    CHECK(back.rows == t.rows);
  }
}
