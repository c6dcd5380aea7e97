#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include <CLI11.hpp>

#include "coarse/error.hpp"
#include "coarse/generators.hpp"
#include "coarse/graph_io.hpp"
#include "coarse/harness.hpp"
#include "coarse/invariants.hpp"
#include "coarse/partial_wreath.hpp"
#include "coarse/product_spec.hpp"
#include "coarse/quasimedian.hpp"
#include "coarse/separation.hpp"

using namespace coarse;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitInconclusive = 2;
constexpr int kExitError = 3;

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::kPass: return kExitPass;
    case Verdict::kFail: return kExitFail;
    case Verdict::kInconclusive: return kExitInconclusive;
  }
  return kExitError;
}

std::string radius_text(std::uint32_t r) { return r == kInfinity ? "inf" : std::to_string(r); }

void describe(const GraphWindow& w) {
  std::cout << "vertices " << w.size() << "\nedges " << w.edge_count() << "\ntrusted_radius "
            << radius_text(w.trusted_radius()) << "\nbasepoint " << w.basepoint() << '\n';
}

// ------------------------------------------------------------- generate

struct GenerateArgs {
  std::string kind;
  int valence = 3;
  std::int64_t b_min = -3;
  std::int64_t b_max = 1;
  std::uint32_t depth = 4;
  int p = 2;
  int q = 2;
  std::int64_t band = 3;
  std::uint32_t dim = 2;
  std::uint32_t halfwidth = 5;
  std::string lamp = "Z/2";
  std::string base = "Z";
  std::uint32_t radius = 3;
  std::string out;
};

int run_generate(const GenerateArgs& a) {
  GraphWindow w;
  if (a.kind == "tree") {
    w = tree_window(a.valence, a.b_min, a.b_max, a.depth).graph;
  } else if (a.kind == "product") {
    const auto t = tree_window(a.valence, a.b_min, a.b_max, a.depth);
    w = tree_product(t, t).graph;
  } else if (a.kind == "dl") {
    w = dl_window(a.p, a.q, a.band).graph;
  } else if (a.kind == "grid") {
    w = grid_window(a.dim, a.halfwidth);
  } else {
    WreathBallSpec spec{parse_group(a.lamp), std::nullopt, a.radius};
    if (a.base != "Z") spec.base = parse_group(a.base);
    w = wreath_ball(spec);
  }
  describe(w);
  if (!a.out.empty()) save_cgw(a.out, w);
  return kExitPass;
}

// ------------------------------------------------------------ invariant

struct InvariantArgs {
  std::string kind;
  std::string graph;
  std::string set;
  std::uint32_t r = 1;
  std::string delta = "1/2";
  std::uint32_t k = 1;
  std::string mode = "exact";
  std::uint64_t budget = 20'000'000;
  std::uint64_t seed = 1;
};

int run_invariant(const InvariantArgs& a) {
  const GraphWindow w = load_cgw(a.graph);
  const VertexSet s = a.set.empty() ? whole_window(w) : load_vs(a.set, w);
  const auto t0 = std::chrono::steady_clock::now();
  InvariantReport rep;
  if (a.kind == "cheeger") {
    rep = cheeger(s, a.r, {.exhaustive = a.mode != "sweep"});
  } else if (a.kind == "cut") {
    rep = cut(s, a.r, parse_rational(a.delta), {.exact = a.mode != "sweep", .budget = a.budget});
  } else {
    rep = poincare_l1(metric_measure_set(s), a.k, {.sampled = a.mode == "sampled", .seed = a.seed});
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << "kind " << to_string(rep.kind) << "\nmethod " << to_string(rep.method)
            << "\nlower " << to_string(rep.lower) << "\nexact "
            << (rep.exact ? to_string(*rep.exact) : "-") << "\nupper " << to_string(rep.upper)
            << "\nwitness_size " << rep.witness.size() << "\ntrusted " << rep.trusted << '\n';
  if (rep.cheeger_bound) std::cout << "cheeger_bound " << to_string(*rep.cheeger_bound) << '\n';
  if (rep.challenger) std::cout << "challenger " << *rep.challenger << '\n';
  std::cout << "csv " << to_string(rep.kind) << ",r=" << a.r;
  if (rep.delta) std::cout << ";delta=" << to_string(*rep.delta);
  if (rep.kind == InvariantKind::kPoincare) std::cout << ";k=" << a.k;
  std::cout << ',' << to_string(rep.lower) << ',' << (rep.exact ? to_string(*rep.exact) : "")
            << ',' << to_string(rep.upper) << ',' << rep.witness.size() << ','
            << to_string(rep.method) << ',' << secs << '\n';
  if (!rep.trusted || !rep.challenger_ok) return kExitInconclusive;
  return rep.exact ? kExitPass : kExitInconclusive;
}

// ---------------------------------------------------------- separation

int run_separate(const std::string& graph, const std::string& separator, std::uint32_t k,
                 std::uint32_t L, std::uint32_t D) {
  const GraphWindow w = load_cgw(graph);
  const VertexSet s = load_vs(separator, w);
  const auto v = separation_witness(s, k, L, D);
  std::cout << "components " << v.components.size() << "\nqualifying " << v.qualifying.size()
            << "\nseparates " << v.separates << "\ntrusted " << v.trusted << '\n';
  for (auto i : v.qualifying) std::cout << "component " << i << " size " << v.components[i].size() << '\n';
  if (!v.trusted) return kExitInconclusive;
  return v.separates ? kExitPass : kExitFail;
}

int run_scan(const std::string& family, std::uint32_t r, const std::string& path_arg,
             const std::string& delta_arg) {
  ScanFixture f;
  if (family == "balls") {
    f = balls_scan_fixture(r);
  } else if (family == "tree-annulus") {
    f = tree_annulus_scan_fixture(r);
  } else {
    f = dl_scan_fixture(r);
  }
  std::vector<VertexId> path = f.path;
  if (path_arg != "auto") {
    std::ifstream in(path_arg);
    if (!in) throw Error(ErrorCode::kFormat, "cannot read path " + path_arg);
    path.clear();
    for (VertexId v; in >> v;) path.push_back(v);
  }
  const Rational delta = delta_arg.empty() ? f.family.default_delta() : parse_rational(delta_arg);
  const Partition part = coarse_partition(f.separator, f.family.k);
  const auto res = scan_for_cut(f.family, path, part, f.separator, delta, r);
  std::cout << "family " << f.family.name << "\nwindow " << f.window->size() << "\nparts "
            << part.parts.size() << "\ndelta " << to_string(delta) << "\ns " << res.s
            << "\npoint " << res.point << "\ncut_size " << res.cut.size() << "\nset_size "
            << res.size << "\ncertified " << res.cut_certified << '\n';
  return res.cut_certified ? kExitPass : kExitFail;
}

// ------------------------------------------------------------------- qm

struct QMArgs {
  std::string action;
  std::string spec;
  std::uint32_t radius = 3;
  std::uint32_t base_vertex = 0;
  std::string out;
};

int run_qm(const QMArgs& a) {
  const ProductSpec spec = load_product_spec(a.spec);
  if (a.action == "iso-check") {
    if (!spec.wreath) throw Error(ErrorCode::kFormat, "iso-check needs a [wreath] section");
    PartialWreathSpec pw = *spec.wreath;
    pw.radius = a.radius;
    const auto cmp = compare_with_wreath(pw);
    std::cout << "partial_ball " << cmp.partial_size << "\nwreath_ball " << cmp.wreath_size
              << "\nequal_to_wreath " << cmp.equal << "\nprojection_surjective " << cmp.surjective
              << "\nprojection_edges " << cmp.edges_to_edges << '\n';
    if (pw.gamma != GammaKind::kCayley) {
      std::cout << "pc_iso skipped (Gamma is not the Cayley graph of the base)\n";
      return kExitInconclusive;
    }
    const auto iso = pc_iso_check(pw);
    std::cout << "pc_ball " << iso.pc_ball_size << "\nbasepoint " << iso.basepoint_ok
              << "\nbijection " << iso.bijection_ok << "\nedges " << iso.edges_ok << '\n';
    if (iso.mismatch) std::cout << "mismatch " << *iso.mismatch << '\n';
    return iso.passed() ? kExitPass : kExitFail;
  }

  const QMWindow q = qm_ball(spec.graph_product(a.radius + 1), a.radius);
  if (a.action == "build") {
    describe(q.graph());
    std::cout << "cliques " << q.cliques().size() << "\nhyperplanes " << q.hyperplanes().size()
              << '\n';
    if (!a.out.empty()) save_cgw(a.out, q.graph());
    const auto s = check_structure(q);
    std::cout << "trusted_pairs " << s.trusted_pairs << "\ngeodesics " << s.geodesics
              << "\nk4_minus " << s.k4_minus << "\nk32 " << s.k32 << "\ndistance_violations "
              << s.distance_violations << "\ncrossing_violations " << s.crossing_violations
              << "\nmax_prism_dimension " << s.max_prism_dimension << '\n';
    for (const auto& m : s.messages) std::cout << "violation " << m << '\n';
    return s.passed() ? kExitPass : kExitFail;
  }
  if (a.action == "hyperplanes") {
    const GraphProduct& gp = q.product();
    for (std::uint32_t h = 0; h < q.hyperplanes().size(); ++h) {
      const auto& hp = q.hyperplanes()[h];
      const auto geo = hyperplane_geometry(q, h);
      std::cout << h << " vertex " << gp.name(hp.vertex) << " base";
      for (auto v : gp.label(hp.base)) std::cout << ' ' << v;
      std::cout << " cliques " << hp.cliques.size() << " edges " << hp.edge_count << " carrier "
                << geo.carrier.size() << " fibres " << geo.fibres.size() << " sectors "
                << geo.sectors.size() << " trusted " << hp.trusted << '\n';
    }
    return kExitPass;
  }
  // pc
  const PCWindow pc = pc_build(q, a.base_vertex);
  describe(pc.graph);
  const auto rep = check_pc(q, pc);
  std::cout << "lower_checked " << rep.lower_checked << "\nlower_violations "
            << rep.lower_violations << "\nupper_checked " << rep.upper_checked
            << "\nupper_violations " << rep.upper_violations << "\nbulkheads " << rep.bulkheads
            << "\nbulkhead_violations " << rep.bulkhead_violations << '\n';
  if (!a.out.empty()) save_cgw(a.out, pc.graph);
  return rep.passed() ? kExitPass : kExitFail;
}

// ----------------------------------------------------------- experiment

int run_experiments(const std::string& config, const std::string& out,
                    const std::vector<std::string>& only) {
  auto specs = load_experiment_specs(config);
  std::optional<WindowCache> cache;
  if (auto dir = cache_dir_from_env()) cache.emplace(*dir);
  Verdict overall = Verdict::kPass;
  for (auto& spec : specs) {
    if (!only.empty() && std::find(only.begin(), only.end(), spec.name) == only.end()) continue;
    spec.out_dir = out;
    const RunRecord rec = run_experiment(spec, cache ? &*cache : nullptr);
    const Verdict v = rec.overall();
    std::cout << to_string(v) << ' ' << rec.experiment << " (" << rec.table.rows.size()
              << " rows, " << rec.assertions.size() << " assertions)\n";
    for (const auto& a : rec.assertions) {
      if (a.verdict != Verdict::kPass) {
        std::cout << "  " << to_string(a.verdict) << ' ' << a.name;
        if (!a.detail.empty()) std::cout << " : " << a.detail;
        std::cout << '\n';
      }
    }
    if (v == Verdict::kFail || (v == Verdict::kInconclusive && overall == Verdict::kPass)) {
      overall = v;
    }
  }
  return exit_code(overall);
}

int report_experiments(const std::string& out) {
  const auto names = regenerate_plots(out);
  Verdict overall = Verdict::kPass;
  for (const auto& name : names) {
    std::ifstream in(std::filesystem::path(out) / (name + ".verdict"));
    std::string line, last;
    while (std::getline(in, line)) {
      if (line.rfind("overall ", 0) == 0) last = line.substr(8);
    }
    std::cout << (last.empty() ? "missing" : last) << ' ' << name << '\n';
    if (last == "fail" || last.empty()) {
      overall = Verdict::kFail;
    } else if (last == "inconclusive" && overall == Verdict::kPass) {
      overall = Verdict::kInconclusive;
    }
  }
  return exit_code(overall);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Coarse separation and cut invariants on finite graph windows"};
  app.require_subcommand(1);
  int code = kExitPass;
  std::function<int()> action;

  GenerateArgs gen;
  auto* g = app.add_subcommand("generate", "build a graph window and write it as cgw");
  g->add_option("kind", gen.kind)->required()->check(
      CLI::IsMember({"tree", "product", "dl", "grid", "wreath"}));
  g->add_option("--valence", gen.valence, "tree valence");
  g->add_option("--bmin", gen.b_min, "lowest horosphere");
  g->add_option("--bmax", gen.b_max, "highest ray vertex");
  g->add_option("--depth", gen.depth, "levels below the ray");
  g->add_option("--p", gen.p);
  g->add_option("--q", gen.q);
  g->add_option("--band", gen.band, "DL band half-width");
  g->add_option("--dim", gen.dim, "grid dimension");
  g->add_option("--halfwidth", gen.halfwidth, "grid half-width");
  g->add_option("--lamp", gen.lamp, "lamp group (Z/n)");
  g->add_option("--base", gen.base, "base group (Z or Z/n)");
  g->add_option("--radius", gen.radius, "wreath ball radius");
  g->add_option("--out", gen.out, "output cgw file");
  g->callback([&] { action = [&] { return run_generate(gen); }; });

  InvariantArgs inv;
  auto* iv = app.add_subcommand("invariant", "Cheeger constant, cut or Poincare constant of a set");
  iv->add_option("kind", inv.kind)->required()->check(CLI::IsMember({"cheeger", "cut", "poincare"}));
  iv->add_option("--graph", inv.graph)->required();
  iv->add_option("--set", inv.set, "vs file (default: the whole window)");
  iv->add_option("--r", inv.r);
  iv->add_option("--delta", inv.delta);
  iv->add_option("--k", inv.k);
  iv->add_option("--mode", inv.mode)->check(CLI::IsMember({"exact", "sweep", "sampled"}));
  iv->add_option("--budget", inv.budget);
  iv->add_option("--seed", inv.seed);
  iv->callback([&] { action = [&] { return run_invariant(inv); }; });

  std::string sep_graph, sep_set;
  std::uint32_t sep_k = 1, sep_l = 0, sep_d = 1;
  auto* sp = app.add_subcommand("separate", "k-components of the window minus S^{+L}");
  sp->add_option("--graph", sep_graph)->required();
  sp->add_option("--separator", sep_set)->required();
  sp->add_option("--k", sep_k);
  sp->add_option("--L", sep_l);
  sp->add_option("--D", sep_d);
  sp->callback([&] { action = [&] { return run_separate(sep_graph, sep_set, sep_k, sep_l, sep_d); }; });

  std::string scan_family = "balls", scan_path = "auto", scan_delta;
  std::uint32_t scan_r = 2;
  auto* sc = app.add_subcommand("scan", "walk a path and extract a cut from a persistent family");
  sc->add_option("--family", scan_family)->check(CLI::IsMember({"balls", "tree-annulus", "dl"}));
  sc->add_option("--r", scan_r);
  sc->add_option("--path", scan_path, "auto, or a file of vertex ids");
  sc->add_option("--delta", scan_delta);
  sc->callback([&] { action = [&] { return run_scan(scan_family, scan_r, scan_path, scan_delta); }; });

  QMArgs qm;
  auto* qc = app.add_subcommand("qm", "graph products as quasi-median graphs");
  qc->add_option("action", qm.action)->required()->check(
      CLI::IsMember({"build", "hyperplanes", "pc", "iso-check"}));
  qc->add_option("--spec", qm.spec)->required()->check(CLI::ExistingFile);
  qc->add_option("--radius", qm.radius);
  qc->add_option("--base-vertex", qm.base_vertex, "Gamma vertex of the PC basepoint");
  qc->add_option("--out", qm.out);
  qc->callback([&] { action = [&] { return run_qm(qm); }; });

  std::string exp_action, exp_config, exp_out = "results";
  std::vector<std::string> exp_only;
  auto* ex = app.add_subcommand("experiment", "registered experiments");
  ex->add_option("action", exp_action)->required()->check(CLI::IsMember({"run", "list", "report"}));
  ex->add_option("--config", exp_config)->check(CLI::ExistingFile);
  ex->add_option("--out", exp_out);
  ex->add_option("--only", exp_only, "run only the named experiments");
  ex->callback([&] {
    action = [&] {
      if (exp_action == "list") {
        for (const auto& e : experiment_registry()) std::cout << e.name << "  " << e.description << '\n';
        return kExitPass;
      }
      if (exp_action == "report") return report_experiments(exp_out);
      if (exp_config.empty()) throw Error(ErrorCode::kInvalidArgument, "run needs --config");
      return run_experiments(exp_config, exp_out, exp_only);
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitPass : kExitError;
  }
  try {
    code = action();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return code;
}
