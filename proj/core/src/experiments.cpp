#include <future>
#include <sstream>

#include "coarse/error.hpp"
#include "coarse/generators.hpp"
#include "coarse/harness.hpp"
#include "coarse/invariants.hpp"
#include "coarse/partial_wreath.hpp"
#include "coarse/quasimedian.hpp"
#include "coarse/separation.hpp"

namespace coarse {

namespace {

struct Datapoint {
  std::vector<std::string> row;
  std::vector<Assertion> checks;
};

Assertion check(std::string name, bool ok, std::string detail = {}) {
  return {std::move(name), ok ? Verdict::kPass : Verdict::kFail, std::move(detail)};
}

std::string str(const Rational& r) { return to_string(r); }
std::string str(std::size_t v) { return std::to_string(v); }
std::string str(bool b) { return b ? "1" : "0"; }

// An uncertified cut can only confirm the bound through its lower end.
Assertion bound_check(std::string name, const InvariantReport& rep, const Rational& bound) {
  const std::string detail = str(rep.lower) + " vs " + str(bound);
  if (rep.lower >= bound) return {std::move(name), Verdict::kPass, detail};
  if (!rep.exact) return {std::move(name), Verdict::kInconclusive, detail + " (uncertified)"};
  return {std::move(name), Verdict::kFail, detail};
}

// Runs one datapoint per parameter on a pool of async tasks and keeps the
// rows in parameter order. Budget exhaustion and window escapes become
// inconclusive rows with empty cells.
template <class F>
std::vector<Datapoint> datapoints(const std::vector<std::uint32_t>& params, std::size_t columns,
                                  const std::string& param_name, F f) {
  std::vector<std::future<Datapoint>> futures;
  for (auto p : params) {
    futures.push_back(std::async(std::launch::async, [=, &f]() -> Datapoint {
      try {
        return f(p);
      } catch (const Error& e) {
        if (e.code() != ErrorCode::kBudgetExceeded && e.code() != ErrorCode::kUntrusted) throw;
        Datapoint d;
        d.row.assign(columns, "");
        d.row[0] = std::to_string(p);
        d.checks.push_back(
            {param_name + "=" + std::to_string(p), Verdict::kInconclusive, e.what()});
        return d;
      }
    }));
  }
  std::vector<Datapoint> out;
  for (auto& fu : futures) out.push_back(fu.get());
  return out;
}

void collect(RunRecord& rec, std::vector<Datapoint> points) {
  for (auto& d : points) {
    rec.table.rows.push_back(std::move(d.row));
    for (auto& a : d.checks) rec.assertions.push_back(std::move(a));
  }
}

TreeProduct annulus_window(std::uint32_t k) {
  const auto t = tree_window(3, -static_cast<std::int64_t>(k) - 1, 1, k + 2);
  return tree_product(t, t);
}

// ---------------------------------------------------------------- trees

RunRecord run_tree_annulus(const ExperimentSpec& spec, WindowCache*) {
  RunRecord rec;
  const auto ks = spec.get_range("k", 1, 4);
  const auto persist_max = spec.get_u32("persistence_max", 4);
  rec.table.columns = {"k", "shell", "expected", "annulus", "in_ball_4k", "persistence"};
  const auto points = datapoints(ks, 6, "k", [&](std::uint32_t k) {
    Datapoint d;
    const TreeProduct tp = annulus_window(k);
    const VertexId x = tp.graph.basepoint();
    const VertexSet a = tree_annulus(tp, x, k);
    const std::size_t shell = intersection_size(a, sphere(tp.graph, x, k));
    const std::size_t expected = (k + 1) * (std::size_t{1} << k);
    const bool inside = is_subset(a, ball(tp.graph, x, 4 * k));
    std::string persistence;
    d.checks.push_back(check("shell size k=" + str(std::size_t{k}), shell == expected,
                             str(shell) + " vs " + str(expected)));
    d.checks.push_back(check("A(k) in B(x,4k) k=" + str(std::size_t{k}), inside));
    if (k <= persist_max) {
      const PersistentFamily fam = tree_annulus_family(tp);
      const std::vector<std::uint32_t> radii{k};
      const std::vector<VertexId> probes{x};
      const auto rep = persistence_check(fam, radii, probes);
      persistence = str(rep.worst);
      d.checks.push_back(check("persistence k=" + str(std::size_t{k}),
                               rep.passed() && rep.worst >= Rational(1, 8),
                               "worst " + persistence + (rep.violation ? ", " + *rep.violation : "")));
    }
    d.row = {str(std::size_t{k}), str(shell), str(expected), str(a.size()), str(inside), persistence};
    return d;
  });
  collect(rec, points);
  return rec;
}

// ------------------------------------------------------------------- DL

RunRecord run_dl_vset(const ExperimentSpec& spec, WindowCache*) {
  RunRecord rec;
  const auto rs = spec.get_range("r", 1, 6);
  const auto persist_max = spec.get_u32("persistence_max", 4);
  rec.table.columns = {"r", "size", "expected", "persistence"};
  const auto points = datapoints(rs, 4, "r", [&](std::uint32_t r) {
    Datapoint d;
    const DLWindow dw = dl_window(2, 2, r);
    const VertexSet a = dl_persistent(dw, dw.graph.basepoint(), r);
    const std::size_t expected = (r + 1) * (std::size_t{1} << r);
    d.checks.push_back(check("size r=" + str(std::size_t{r}), a.size() == expected,
                             str(a.size()) + " vs " + str(expected)));
    std::string persistence;
    if (r <= persist_max) {
      const DLWindow big = dl_window(2, 2, std::max<std::uint32_t>(persist_max + 2, 2 * r));
      const PersistentFamily fam = dl_family(big);
      std::vector<VertexId> probes{big.graph.basepoint()};
      for (auto u : big.graph.neighbours(big.graph.basepoint())) probes.push_back(u);
      const std::vector<std::uint32_t> radii{r};
      const auto rep = persistence_check(fam, radii, probes);
      persistence = str(rep.worst);
      d.checks.push_back(check("persistence r=" + str(std::size_t{r}),
                               rep.passed() && rep.worst >= Rational(1, 4),
                               "worst " + persistence + (rep.violation ? ", " + *rep.violation : "")));
    }
    d.row = {str(std::size_t{r}), str(a.size()), str(expected), persistence};
    return d;
  });
  collect(rec, points);
  return rec;
}

// ------------------------------------------------------------------ cuts

RunRecord run_cut_growth(const ExperimentSpec& spec, WindowCache*) {
  RunRecord rec;
  const auto ks = spec.get_range("k", 1, 2);
  const Rational delta = spec.get_rational("delta", Rational(15, 16));
  const std::uint64_t budget = spec.get_u32("budget", 20'000'000);
  rec.table.columns = {"k", "size", "cut_lower", "cut_upper", "certified", "cheeger_bound"};
  const auto points = datapoints(ks, 6, "k", [&](std::uint32_t k) {
    Datapoint d;
    const TreeProduct tp = annulus_window(k);
    const VertexSet a = tree_annulus(tp, tp.graph.basepoint(), k);
    const auto rep = cut(a, 1, delta, {.exact = true, .budget = budget});
    const std::string name = "k=" + str(std::size_t{k});
    if (!rep.exact) {
      d.checks.push_back({"cut certified " + name, Verdict::kInconclusive,
                          "budget exhausted, interval [" + str(rep.lower) + ", " +
                              str(rep.upper) + "]"});
    } else {
      d.checks.push_back(check("witness re-check " + name, is_cut(a, rep.witness, 1, delta)));
    }
    if (rep.cheeger_bound) {
      d.checks.push_back(bound_check("cut >= Cheeger bound " + name, rep, *rep.cheeger_bound));
    } else {
      d.checks.push_back({"cut >= Cheeger bound " + name, Verdict::kInconclusive,
                          "|A| = " + str(a.size()) + " exceeds the exhaustive Cheeger cap"});
    }
    d.row = {str(std::size_t{k}), str(a.size()), str(rep.lower), str(rep.upper),
             str(rep.exact.has_value()), rep.cheeger_bound ? str(*rep.cheeger_bound) : ""};
    return d;
  });
  collect(rec, points);
  // Strict growth in k, judged on certified neighbours only.
  for (std::size_t i = 1; i < rec.table.rows.size(); ++i) {
    const auto& prev = rec.table.rows[i - 1];
    const auto& cur = rec.table.rows[i];
    const std::string name = "strictly increasing k=" + prev[0] + ".." + cur[0];
    if (prev[4] != "1" || cur[4] != "1") {
      rec.assertions.push_back({name, Verdict::kInconclusive, "uncertified value"});
      continue;
    }
    const Rational a = parse_rational(prev[2]);
    const Rational b = parse_rational(cur[2]);
    rec.assertions.push_back(check(name, a < b, prev[2] + " then " + cur[2]));
  }
  return rec;
}

RunRecord run_poincare(const ExperimentSpec& spec, WindowCache*) {
  RunRecord rec;
  const auto ks = spec.get_range("k", 2, 2);
  rec.table.columns = {"k", "size", "value", "bound", "exact", "challenger"};
  const auto points = datapoints(ks, 6, "k", [&](std::uint32_t k) {
    Datapoint d;
    const TreeProduct tp = annulus_window(k);
    const VertexSet a = tree_annulus(tp, tp.graph.basepoint(), k);
    const auto rep = poincare_l1(metric_measure_set(a), 1, {.sampled = true, .seed = spec.seed});
    const Rational bound(3, 4 * (static_cast<std::int64_t>(k) + 2));
    const std::string name = "h1 >= 3/(4(k+2)) k=" + str(std::size_t{k});
    if (rep.exact) {
      d.checks.push_back(check(name, *rep.exact >= bound, str(*rep.exact) + " vs " + str(bound)));
    } else {
      d.checks.push_back({name, Verdict::kInconclusive, "only an upper bound " + str(rep.upper)});
    }
    std::ostringstream ch;
    if (rep.challenger) ch << *rep.challenger;
    d.row = {str(std::size_t{k}), str(a.size()), str(rep.upper), str(bound),
             str(rep.exact.has_value()), ch.str()};
    return d;
  });
  collect(rec, points);
  return rec;
}

RunRecord run_grid_cut(const ExperimentSpec& spec, WindowCache* cache) {
  RunRecord rec;
  const auto rs = spec.get_range("r", 1, 3);
  const Rational delta = spec.get_rational("delta", Rational(9, 10));
  const std::uint32_t halfwidth = spec.get_u32("halfwidth", 6);
  rec.table.columns = {"r", "size", "cut_lower", "cut_upper", "certified", "cheeger_bound"};
  const auto build = [&] { return grid_window(2, halfwidth); };
  const GraphWindow w = cache ? cache->get_or_build("grid 2 " + std::to_string(halfwidth), build)
                              : build();
  const auto points = datapoints(rs, 6, "r", [&](std::uint32_t r) {
    Datapoint d;
    const VertexSet a = ball(w, w.basepoint(), r);
    const auto rep = cut(a, 1, delta);
    const std::string name = "r=" + str(std::size_t{r});
    if (rep.exact) {
      d.checks.push_back(check("witness re-check " + name, is_cut(a, rep.witness, 1, delta)));
    } else {
      d.checks.push_back({"cut certified " + name, Verdict::kInconclusive, "budget exhausted"});
    }
    if (rep.cheeger_bound) {
      d.checks.push_back(bound_check("cut >= Cheeger bound " + name, rep, *rep.cheeger_bound));
    }
    d.row = {str(std::size_t{r}), str(a.size()), str(rep.lower), str(rep.upper),
             str(rep.exact.has_value()), rep.cheeger_bound ? str(*rep.cheeger_bound) : ""};
    return d;
  });
  collect(rec, points);
  return rec;
}

// ------------------------------------------------------------ separation

RunRecord run_separation_demo(const ExperimentSpec& spec, WindowCache*) {
  RunRecord rec;
  const auto rs = spec.get_range("r", 2, 5);
  const std::uint32_t halfwidth = spec.get_u32("halfwidth", 12);
  rec.table.columns = {"r", "parts", "s", "cut_size", "certified"};
  const auto points = datapoints(rs, 5, "r", [&](std::uint32_t r) {
    Datapoint d;
    const ScanFixture f = balls_scan_fixture(r, halfwidth);
    const Partition part = coarse_partition(f.separator, 1);
    const ScanResult res =
        scan_for_cut(f.family, f.path, part, f.separator, f.family.default_delta(), r);
    const std::string name = "r=" + str(std::size_t{r});
    d.checks.push_back(check("certified cut " + name, res.cut_certified));
    d.checks.push_back(check("|cut| >= r " + name, res.cut.size() >= r,
                             str(res.cut.size()) + " vs " + str(std::size_t{r})));
    d.row = {str(std::size_t{r}), str(part.parts.size()), str(res.s), str(res.cut.size()),
             str(res.cut_certified)};
    return d;
  });
  collect(rec, points);
  return rec;
}

// ------------------------------------------------------------ QM graphs

struct QMFixture {
  std::string name;
  GraphProduct product;
};

std::vector<QMFixture> qm_fixtures() {
  const auto z2 = FiniteGroup::cyclic(2);
  const auto z3 = FiniteGroup::cyclic(3);
  return {
      {"single-Z3", GraphProduct(1, {}, {z3})},
      {"K3-Z3", GraphProduct(3, {{0, 1}, {1, 2}, {0, 2}}, {z3, z3, z3})},
      {"edge-Z2", GraphProduct(2, {{0, 1}}, {z2, z2})},
      {"P3-Z2", GraphProduct(3, {{0, 1}, {1, 2}}, {z2, z2, z2})},
  };
}

RunRecord run_qm_structure(const ExperimentSpec& spec, WindowCache*) {
  RunRecord rec;
  const std::uint32_t radius = spec.get_u32("radius", 3);
  const auto fixtures = qm_fixtures();
  rec.table.columns = {"fixture", "radius", "vertices", "hyperplanes", "trusted_pairs",
                       "geodesics", "structure_violations", "pc_vertices", "pc_pairs",
                       "bulkheads", "pc_violations"};
  std::vector<std::uint32_t> ids;
  for (std::uint32_t i = 0; i < fixtures.size(); ++i) ids.push_back(i);
  const auto points = datapoints(ids, 11, "fixture", [&](std::uint32_t i) {
    Datapoint d;
    const auto& fx = fixtures[i];
    const QMWindow q = qm_ball(fx.product, radius);
    const auto s = check_structure(q);
    const PCWindow pc = pc_build(q);
    const auto p = check_pc(q, pc);
    const std::size_t sv = s.k4_minus + s.k32 + s.clique_violations + s.key_mismatches +
                           s.distance_violations + s.crossing_violations + s.sector_mismatches +
                           s.cubdist_violations + s.prism_violations;
    const std::size_t pv = p.lower_violations + p.upper_violations + p.bulkhead_violations;
    std::string detail;
    for (const auto& m : s.messages) detail += (detail.empty() ? "" : "; ") + m;
    d.checks.push_back(check("quasi-median structure " + fx.name, s.passed(), detail));
    d.checks.push_back(check("pointed cliques " + fx.name, p.passed(),
                             str(pv) + " violations"));
    d.row = {fx.name, str(std::size_t{radius}), str(s.vertices), str(s.hyperplanes),
             str(s.trusted_pairs), str(s.geodesics), str(sv), str(p.pc_vertices),
             str(p.lower_checked), str(p.bulkheads), str(pv)};
    return d;
  });
  collect(rec, points);
  return rec;
}

RunRecord run_partial_wreath(const ExperimentSpec& spec, WindowCache* cache) {
  RunRecord rec;
  const auto rs = spec.get_range("radius", 1, 3);
  const auto z2 = FiniteGroup::cyclic(2);
  const auto z3 = FiniteGroup::cyclic(3);
  rec.table.columns = {"radius", "line_ball", "line_iso", "wreath_ball", "edgeless_ball",
                       "edgeless_projection_onto", "finite_complete_equal", "finite_iso"};
  const auto points = datapoints(rs, 8, "radius", [&](std::uint32_t r) {
    Datapoint d;
    const std::string name = "radius=" + str(std::size_t{r});
    const PartialWreathSpec line{z2, std::nullopt, GammaKind::kCayley, r};
    const IsoReport iso = pc_iso_check(line);
    d.checks.push_back(check("PC isomorphism line " + name, iso.passed(),
                             iso.mismatch ? *iso.mismatch : ""));

    const auto build = [&] { return wreath_ball({z2, std::nullopt, r}); };
    const GraphWindow wreath =
        cache ? cache->get_or_build("wreath Z2 Z " + std::to_string(r), build) : build();

    const PartialWreathSpec edgeless{z2, std::nullopt, GammaKind::kEdgeless, r};
    const auto cmp = compare_with_wreath(edgeless);
    d.checks.push_back(check("edgeless projection " + name,
                             cmp.surjective && cmp.edges_to_edges && cmp.wreath_size == wreath.size() &&
                                 cmp.partial_size >= cmp.wreath_size));

    const PartialWreathSpec finite{z3, z3, GammaKind::kCayley, r};
    const auto eq = compare_with_wreath(finite);
    const IsoReport fiso = pc_iso_check(finite);
    d.checks.push_back(check("complete Gamma equals wreath " + name, eq.equal,
                             str(eq.partial_size) + " vs " + str(eq.wreath_size)));
    d.checks.push_back(check("PC isomorphism Z/3 " + name, fiso.passed(),
                             fiso.mismatch ? *fiso.mismatch : ""));
    d.row = {str(std::size_t{r}), str(iso.ball_size), str(iso.passed()), str(wreath.size()),
             str(cmp.partial_size), str(cmp.surjective && cmp.edges_to_edges), str(eq.equal),
             str(fiso.passed())};
    return d;
  });
  collect(rec, points);
  return rec;
}

}  // namespace

const std::vector<Experiment>& experiment_registry() {
  static const std::vector<Experiment> registry{
      {"tree-annulus", "T3 x T3 annuli: shell sizes, containment, persistence",
       {"Tree annuli", "k", {"shell", "annulus"}, true}, run_tree_annulus},
      {"dl-vset", "DL(2,2) sets: sizes and persistence",
       {"DL(2,2) sets", "r", {"size", "expected"}, true}, run_dl_vset},
      {"cut-growth", "exact cuts of tree annuli against the Cheeger bound",
       {"Cut of tree annuli", "k", {"cut_upper", "cheeger_bound"}, false}, run_cut_growth},
      {"poincare", "two-level L1 Poincare constant of tree annuli",
       {"L1 Poincare constant", "k", {"value", "bound"}, false}, run_poincare},
      {"grid-cut", "exact cuts of Z^2 balls",
       {"Cut of Z^2 balls", "r", {"cut_upper", "cheeger_bound"}, false}, run_grid_cut},
      {"separation-demo", "coarse separation of Z^2 by a line, ball family",
       {"Cut found by the scan", "r", {"cut_size"}, false}, run_separation_demo},
      {"qm-structure", "quasi-median checks on small graph products",
       {"Quasi-median windows", "hyperplanes", {"vertices", "pc_vertices"}, true}, run_qm_structure},
      {"partial-wreath", "partial wreath products against pointed cliques and wreath products",
       {"Ball sizes", "radius", {"line_ball", "wreath_ball", "edgeless_ball"}, true},
       run_partial_wreath},
  };
  return registry;
}

}  // namespace coarse
