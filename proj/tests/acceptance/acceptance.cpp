// One PASS/FAIL/INCONCLUSIVE line per acceptance criterion; exit status 1
// when any criterion fails.
#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "coarse/error.hpp"
#include "coarse/generators.hpp"
#include "coarse/invariants.hpp"
#include "coarse/partial_wreath.hpp"
#include "coarse/quasimedian.hpp"
#include "coarse/separation.hpp"
#include "../support/oracles.hpp"

using namespace coarse;

namespace {

enum class Outcome { kPass, kFail, kInconclusive };

struct Result {
  Outcome outcome = Outcome::kPass;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      outcome = Outcome::kFail;
      detail << " [failed: " << what << "]";
    }
  }
};

using Criterion = std::function<void(Result&)>;

TreeProduct annulus_window(std::uint32_t k) {
  const auto t = tree_window(3, -static_cast<std::int64_t>(k) - 1, 1, k + 2);
  return tree_product(t, t);
}

std::vector<GraphProduct> qm_fixtures() {
  const auto z2 = FiniteGroup::cyclic(2);
  const auto z3 = FiniteGroup::cyclic(3);
  return {GraphProduct(1, {}, {z3}), GraphProduct(3, {{0, 1}, {1, 2}, {0, 2}}, {z3, z3, z3}),
          GraphProduct(2, {{0, 1}}, {z2, z2}), GraphProduct(3, {{0, 1}, {1, 2}}, {z2, z2, z2})};
}

void tree_annulus_sizes(Result& res) {
  for (std::uint32_t k = 1; k <= 6; ++k) {
    const auto tp = annulus_window(k);
    const auto x = tp.graph.basepoint();
    const auto a = tree_annulus(tp, x, k);
    const auto shell = intersection_size(a, sphere(tp.graph, x, k));
    const std::size_t expected = (k + 1) * (std::size_t{1} << k);
    res.detail << " k=" << k << ":" << shell;
    res.require(shell == expected, "shell size at k=" + std::to_string(k));
    res.require(is_subset(a, ball(tp.graph, x, 4 * k)), "A(k) in B(x,4k) at k=" + std::to_string(k));
  }
}

void persistence_constants(Result& res) {
  {
    const auto tp = annulus_window(4);
    const auto fam = tree_annulus_family(tp);
    const std::vector<std::uint32_t> radii{1, 2, 3, 4};
    const std::vector<VertexId> probes{tp.graph.basepoint()};
    const auto rep = persistence_check(fam, radii, probes);
    res.detail << " tree worst " << to_string(rep.worst);
    res.require(rep.passed() && rep.worst >= Rational(1, 8), "tree annuli 1/8");
  }
  {
    const auto dw = dl_window(2, 2, 6);
    const auto fam = dl_family(dw);
    std::vector<VertexId> probes{dw.graph.basepoint()};
    for (auto u : dw.graph.neighbours(dw.graph.basepoint())) probes.push_back(u);
    const std::vector<std::uint32_t> radii{1, 2, 3, 4};
    const auto rep = persistence_check(fam, radii, probes);
    res.detail << ", DL worst " << to_string(rep.worst);
    res.require(rep.passed() && rep.worst >= Rational(1, 4), "DL sets 1/4");
  }
}

void dl_sizes(Result& res) {
  for (std::uint32_t r = 1; r <= 6; ++r) {
    const auto dw = dl_window(2, 2, r);
    const auto a = dl_persistent(dw, dw.graph.basepoint(), r);
    res.detail << " r=" << r << ":" << a.size();
    res.require(a.size() == (r + 1) * (std::size_t{1} << r), "size at r=" + std::to_string(r));
  }
}

void cut_growth(Result& res) {
  std::vector<Rational> values;
  for (std::uint32_t k = 1; k <= 2; ++k) {
    const auto tp = annulus_window(k);
    const auto a = tree_annulus(tp, tp.graph.basepoint(), k);
    const auto rep = cut(a, 1, Rational(15, 16));
    if (!rep.exact || !rep.cheeger_bound) {
      res.outcome = Outcome::kInconclusive;
      res.detail << " k=" << k << " uncertified";
      return;
    }
    res.detail << " k=" << k << ": cut " << to_string(*rep.exact) << " >= bound "
               << to_string(*rep.cheeger_bound);
    res.require(is_cut(a, rep.witness, 1, Rational(15, 16)), "witness re-check");
    res.require(*rep.exact >= *rep.cheeger_bound, "Cheeger bound at k=" + std::to_string(k));
    values.push_back(*rep.exact);
  }
  res.require(values[0] < values[1], "strictly increasing in k (" + to_string(values[0]) +
                                         " then " + to_string(values[1]) + ")");
}

void poincare_instance(Result& res) {
  const auto tp = annulus_window(2);
  const auto a = tree_annulus(tp, tp.graph.basepoint(), 2);
  const auto rep = poincare_l1(metric_measure_set(a), 1, {.sampled = true});
  if (!rep.exact) {
    res.outcome = Outcome::kInconclusive;
    res.detail << " not exact";
    return;
  }
  res.detail << " |A|=" << a.size() << " h1=" << to_string(*rep.exact) << " >= 3/16";
  res.require(a.size() <= 24, "|A| <= 24");
  res.require(*rep.exact >= Rational(3, 16), "h1 >= 3/16");
}

void oracle_equivalence(Result& res) {
  std::mt19937_64 rng(2024);
  std::size_t violations = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const auto n = std::uniform_int_distribution<std::uint32_t>(12, 24)(rng);
    const auto w = oracle::random_graph(rng, n, std::uniform_real_distribution<double>(0, 0.2)(rng));
    const auto k = std::uniform_int_distribution<std::uint32_t>(2, 12)(rng);
    const auto ids = oracle::random_subset(rng, n, k);
    const VertexSet a(w, ids);
    const std::int64_t den = std::uniform_int_distribution<std::int64_t>(2, 12)(rng);
    const Rational delta(std::uniform_int_distribution<std::int64_t>(1, den - 1)(rng), den);
    const auto r = std::uniform_int_distribution<std::uint32_t>(1, 2)(rng);
    const auto rep = cut(a, r, delta, {.with_cheeger_bound = false});
    if (!rep.exact || *rep.exact != Rational(static_cast<std::int64_t>(oracle::cut(w, ids, r, delta)))) {
      ++violations;
    }
    const auto eps = std::uniform_int_distribution<std::uint32_t>(1, 2)(rng);
    const auto z = separated_net(a, eps);
    std::size_t alpha = 0;
    for (VertexId x = 0; x < w.size(); ++x) alpha = std::max(alpha, ball(w, x, eps).size());
    for (std::uint64_t mask = 1; mask < (1ull << ids.size()); mask += 1 + mask / 7) {
      std::vector<VertexId> picks;
      for (std::size_t i = 0; i < ids.size(); ++i) {
        if (mask >> i & 1) picks.push_back(ids[i]);
      }
      const VertexSet b(w, picks);
      const auto nu = intersection_size(neighbourhood(b, eps), z);
      if (b.size() > alpha * nu || nu > alpha * b.size()) ++violations;
    }
  }
  res.detail << " 50 subsets, " << violations << " violations";
  res.require(violations == 0, "oracle agreement");
}

void quasi_median_structure(Result& res) {
  std::size_t pairs = 0;
  for (const auto& gp : qm_fixtures()) {
    const auto s = check_structure(qm_ball(gp, 3));
    pairs += s.trusted_pairs;
    res.require(s.passed(), "structure of a " + std::to_string(gp.vertex_count()) + "-vertex product");
    res.require(s.k4_minus + s.k32 + s.distance_violations + s.crossing_violations == 0,
                "forbidden subgraphs, distances or crossings");
  }
  res.detail << " " << pairs << " trusted pairs";
}

void pc_sandwich(Result& res) {
  std::size_t lower = 0, upper = 0, bulkheads = 0;
  for (const auto& gp : qm_fixtures()) {
    const auto q = qm_ball(gp, 3);
    const auto rep = check_pc(q, pc_build(q));
    lower += rep.lower_checked;
    upper += rep.upper_checked;
    bulkheads += rep.bulkheads;
    res.require(rep.passed(), "PC checks of a " + std::to_string(gp.vertex_count()) + "-vertex product");
  }
  res.detail << " " << lower << " lower, " << upper << " upper, " << bulkheads << " bulkheads";
  res.require(lower > 0 && upper > 0 && bulkheads > 0, "nonempty checks");
}

void partial_wreath(Result& res) {
  const auto z2 = FiniteGroup::cyclic(2);
  const auto z3 = FiniteGroup::cyclic(3);
  const auto iso = pc_iso_check({z2, std::nullopt, GammaKind::kCayley, 3});
  res.detail << " line R=3 ball " << iso.ball_size;
  res.require(iso.passed(), "line isomorphism" + (iso.mismatch ? ": " + *iso.mismatch : ""));
  for (auto kind : {GammaKind::kCayley, GammaKind::kComplete}) {
    const auto cmp = compare_with_wreath({z2, z3, kind, 3});
    res.require(cmp.equal, "Z/3 complete Gamma equals the wreath ball");
  }
  res.detail << ", Z/3 complete equal to wreath";
}

void separation_demo(Result& res) {
  for (std::uint32_t r = 2; r <= 5; ++r) {
    const auto f = balls_scan_fixture(r, 12);
    const auto part = coarse_partition(f.separator, 1);
    const auto scan = scan_for_cut(f.family, f.path, part, f.separator, f.family.default_delta(), r);
    res.detail << " r=" << r << ":" << scan.cut.size();
    res.require(scan.cut_certified, "certified at r=" + std::to_string(r));
    res.require(scan.cut.size() >= r, "|cut| >= r at r=" + std::to_string(r));
  }
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    double limit_seconds;
    bool timeout_inconclusive;
    Criterion run;
  };
  const std::vector<Entry> criteria{
      {"tree annulus sizes", 10, false, tree_annulus_sizes},
      {"persistence constants", 60, false, persistence_constants},
      {"DL set sizes", 10, false, dl_sizes},
      {"cut growth", 600, true, cut_growth},
      {"Poincare bound instance", 300, false, poincare_instance},
      {"oracle equivalence", 120, false, oracle_equivalence},
      {"quasi-median structure", 120, false, quasi_median_structure},
      {"PC sandwich and bulkheads", 120, false, pc_sandwich},
      {"partial wreath integration", 120, false, partial_wreath},
      {"separation demo", 60, false, separation_demo},
  };
  bool any_fail = false;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto& c = criteria[i];
    Result res;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      c.run(res);
    } catch (const Error& e) {
      const bool budget = e.code() == ErrorCode::kBudgetExceeded;
      res.outcome = budget && c.timeout_inconclusive ? Outcome::kInconclusive : Outcome::kFail;
      res.detail << " [error: " << e.what() << "]";
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (secs > c.limit_seconds && res.outcome == Outcome::kPass) {
      res.outcome = c.timeout_inconclusive ? Outcome::kInconclusive : Outcome::kFail;
      res.detail << " [over the " << c.limit_seconds << " s limit]";
    }
    const char* tag = res.outcome == Outcome::kPass   ? "PASS"
                      : res.outcome == Outcome::kFail ? "FAIL"
                                                      : "INCONCLUSIVE";
    any_fail = any_fail || res.outcome == Outcome::kFail;
    std::cout << tag << " " << (i + 1) << " " << c.name << ":" << res.detail.str() << " ("
              << std::fixed;
    std::cout.precision(2);
    std::cout << secs << " s)" << std::endl;
  }
  return any_fail ? 1 : 0;
}
