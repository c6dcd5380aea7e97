#include "coarse/separation.hpp"

#include <algorithm>
#include <map>

#include "coarse/error.hpp"
#include "coarse/invariants.hpp"

namespace coarse {

namespace {

std::string describe(const GraphWindow& w, VertexId v) {
  std::string out = "#" + std::to_string(v) + "(";
  for (std::size_t i = 0; i < w.label(v).size(); ++i) {
    if (i) out += ",";
    out += std::to_string(w.label(v)[i]);
  }
  return out + ")";
}

}  // namespace

PersistentFamily balls_family(const GraphWindow& w) {
  PersistentFamily fam;
  fam.name = "balls";
  fam.window = &w;
  fam.alpha = Rational(1, static_cast<std::int64_t>(w.degree(w.basepoint()) + 1));
  fam.generate = [&w](VertexId x, std::uint32_t r) {
    auto b = ball(w, x, r);
    if (!b.trusted()) throw Error(ErrorCode::kUntrusted, "ball leaves the trusted region");
    return b;
  };
  return fam;
}

PersistentFamily thickened_sphere_family(const GraphWindow& w, std::uint32_t t) {
  PersistentFamily fam;
  fam.name = "thickened-sphere";
  fam.window = &w;
  fam.alpha = Rational(1, static_cast<std::int64_t>(ball(w, w.basepoint(), t).size()));
  fam.generate = [&w, t](VertexId x, std::uint32_t r) {
    if (!w.trusted_at(x, r + t)) {
      throw Error(ErrorCode::kUntrusted, "thickened sphere leaves the trusted region");
    }
    return thickened_sphere(w, x, r, t);
  };
  return fam;
}

PersistentFamily tree_annulus_family(const TreeProduct& tp) {
  PersistentFamily fam;
  fam.name = "tree-annulus";
  fam.window = &tp.graph;
  fam.alpha = Rational(1, 8);
  fam.generate = [&tp](VertexId x, std::uint32_t k) { return tree_annulus(tp, x, k); };
  return fam;
}

PersistentFamily dl_family(const DLWindow& dw) {
  PersistentFamily fam;
  fam.name = "dl";
  fam.window = &dw.graph;
  fam.alpha = Rational(1, 4);
  fam.generate = [&dw](VertexId x, std::uint32_t r) { return dl_persistent(dw, x, r); };
  return fam;
}

PersistenceReport persistence_check(const PersistentFamily& fam,
                                    std::span<const std::uint32_t> radii,
                                    std::span<const VertexId> probes) {
  const GraphWindow& w = *fam.window;
  PersistenceReport report;
  BoundedBfs bfs(w);
  auto fail = [&](const std::string& what) {
    if (!report.violation) report.violation = what;
  };
  for (std::uint32_t r : radii) {
    PersistenceRow row;
    row.r = r;
    std::map<VertexId, VertexSet> cache;
    auto get = [&](VertexId v) -> const VertexSet& {
      auto it = cache.find(v);
      if (it == cache.end()) it = cache.emplace(v, fam.generate(v, r)).first;
      return it->second;
    };
    std::optional<std::size_t> size;
    for (VertexId x : probes) {
      const VertexSet& ax = get(x);
      bfs.run(x, 4 * r);
      for (VertexId z : ax) {
        if (bfs.dist(z) == kInfinity) {
          if (!w.trusted_at(x, 4 * r)) {
            throw Error(ErrorCode::kUntrusted,
                        "containment undecided outside the trusted region at " + describe(w, x));
          }
          report.containment = false;
          fail("r=" + std::to_string(r) + ": " + describe(w, z) + " in A_x(r) is farther than 4r from x=" +
               describe(w, x));
          break;
        }
      }
      if (!size) size = ax.size();
      std::vector<VertexId> neighbours;
      for (VertexId y : bfs.run(x, fam.k)) {
        if (y != x) neighbours.push_back(y);
      }
      for (VertexId y : neighbours) {
        const VertexSet& ay = get(y);
        for (const VertexSet* s : {&ax, &ay}) {
          if (s->size() != *size) {
            report.uniform = false;
            fail("r=" + std::to_string(r) + ": sizes " + std::to_string(*size) + " and " +
                 std::to_string(s->size()) + " differ");
          }
        }
        const Rational ratio(static_cast<std::int64_t>(intersection_size(ax, ay)),
                             static_cast<std::int64_t>(*size));
        if (ratio < row.worst) {
          row.worst = ratio;
          row.worst_x = x;
          row.worst_y = y;
        }
      }
    }
    row.size = size.value_or(0);
    if (row.worst < fam.alpha) {
      report.overlap = false;
      fail("r=" + std::to_string(r) + ": overlap " + to_string(row.worst) + " < alpha=" +
           to_string(fam.alpha) + " for x=" + describe(w, row.worst_x) + ", y=" +
           describe(w, row.worst_y));
    }
    report.worst = std::min(report.worst, row.worst);
    report.rows.push_back(row);
  }
  return report;
}

SeparationVerdict separation_witness(const VertexSet& s, std::uint32_t k, std::uint32_t L,
                                     std::uint32_t D) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k must be >= 1");
  const GraphWindow& w = s.window();
  SeparationVerdict verdict;
  if (!s.empty()) {
    const bool any = std::any_of(s.begin(), s.end(),
                                 [&](VertexId v) { return w.trusted_at(v, L + D); });
    if (!any) throw Error(ErrorCode::kUntrusted, "no separator point is trusted at L + D");
    verdict.trusted = std::all_of(s.begin(), s.end(),
                                  [&](VertexId v) { return w.trusted_at(v, L + D); });
  }
  const VertexSet thick = s.empty() ? s : neighbourhood(s, L);
  const VertexSet rest = set_difference(whole_window(w), thick);
  if (rest.empty()) return verdict;
  verdict.components = k_components(rest, k);
  const auto dist = s.empty() ? std::vector<std::uint32_t>(w.size(), kInfinity)
                              : bfs_distances(w, s.members());
  for (std::size_t i = 0; i < verdict.components.size(); ++i) {
    const auto& comp = verdict.components[i];
    const bool far = std::any_of(comp.begin(), comp.end(), [&](VertexId v) {
      return dist[v] == kInfinity || dist[v] >= D;
    });
    if (far) verdict.qualifying.push_back(i);
  }
  verdict.separates = verdict.qualifying.size() >= 2;
  return verdict;
}

Partition coarse_partition(const VertexSet& separator, std::uint32_t k) {
  Partition p;
  const VertexSet rest = set_difference(whole_window(separator.window()), separator);
  if (!rest.empty()) p.parts = k_components(rest, k);
  p.checked = true;
  return p;
}

ScanResult scan_for_cut(const PersistentFamily& fam, std::span<const VertexId> path,
                        const Partition& partition, const VertexSet& separator,
                        const Rational& delta, std::uint32_t r) {
  const GraphWindow& w = *fam.window;
  if (path.size() < 2) throw Error(ErrorCode::kPrecondition, "path needs at least two points");
  if (partition.parts.empty()) throw Error(ErrorCode::kPrecondition, "empty partition");
  BoundedBfs bfs(w);
  for (std::size_t p = 0; p + 1 < path.size(); ++p) {
    bfs.run(path[p], fam.k);
    if (bfs.dist(path[p + 1]) == kInfinity) {
      throw Error(ErrorCode::kPrecondition,
                  "path steps " + std::to_string(p) + " -> " + std::to_string(p + 1) +
                      " are farther apart than k=" + std::to_string(fam.k));
    }
  }
  ScanResult out;
  const VertexSet first = fam.generate(path.front(), r);
  out.size = first.size();
  const auto n = static_cast<std::int64_t>(out.size);
  // |A cap X| >= delta |A|  <=>  |A cap X| * den >= num * |A|.
  auto at_least_delta = [&](std::size_t count) {
    return static_cast<std::int64_t>(count) * delta.denominator() >= delta.numerator() * n;
  };
  std::size_t best = 0;
  for (std::size_t i = 0; i < partition.parts.size(); ++i) {
    const auto c = intersection_size(first, partition.parts[i]);
    if (c > best) {
      best = c;
      out.part = i;
    }
  }
  if (!at_least_delta(best)) {
    throw Error(ErrorCode::kPrecondition,
                "start set has only " + std::to_string(best) + " of " + std::to_string(n) +
                    " points in its dominant part, below delta=" + to_string(delta));
  }
  const VertexSet& dominant = partition.parts[out.part];
  out.in_part.push_back(best);
  std::optional<VertexSet> current;
  for (std::size_t p = 1; p < path.size(); ++p) {
    VertexSet a = fam.generate(path[p], r);
    const auto c = intersection_size(a, dominant);
    out.in_part.push_back(c);
    if (!at_least_delta(c)) {
      out.s = p;
      out.point = path[p];
      current = std::move(a);
      break;
    }
  }
  if (!current) {
    throw Error(ErrorCode::kPrecondition,
                "end set keeps " + std::to_string(out.in_part.back()) + " of " +
                    std::to_string(n) + " points in the dominant part; no drop below delta");
  }
  out.set = std::move(*current);
  out.drop_ok = at_least_delta(out.in_part[out.s - 1]) && !at_least_delta(out.in_part[out.s]);
  out.parts_ok = true;
  for (const auto& part : partition.parts) {
    const auto c = intersection_size(out.set, part);
    if (static_cast<std::int64_t>(c) * delta.denominator() > delta.numerator() * n) {
      out.parts_ok = false;
    }
  }
  out.cut = set_intersection(out.set, separator);
  out.cut_certified = partition.checked && out.parts_ok && delta < Rational(1) &&
                      is_cut(out.set, out.cut, fam.k, delta);
  return out;
}

std::vector<VertexId> geodesic_path(const GraphWindow& w, VertexId a, VertexId b) {
  const auto dist = bfs_distances(w, b);
  if (dist[a] == kInfinity) throw Error(ErrorCode::kPrecondition, "endpoints are disconnected");
  std::vector<VertexId> path{a};
  while (path.back() != b) {
    const VertexId v = path.back();
    for (VertexId u : w.neighbours(v)) {
      if (dist[u] + 1 == dist[v]) {
        path.push_back(u);
        break;
      }
    }
  }
  return path;
}

ScanFixture balls_scan_fixture(std::uint32_t r, std::uint32_t halfwidth) {
  if (r == 0 || r + 1 + r > halfwidth) {
    throw Error(ErrorCode::kInvalidArgument, "balls scan needs 1 <= r and 2r + 1 <= halfwidth");
  }
  auto w = std::make_shared<GraphWindow>(grid_window(2, halfwidth));
  ScanFixture f;
  f.owner = w;
  f.window = w.get();
  f.family = balls_family(*w);
  f.r = r;
  std::vector<VertexId> line;
  for (VertexId v = 0; v < w->size(); ++v) {
    if (w->label(v)[0] == 0) line.push_back(v);
  }
  f.separator = VertexSet(*w, std::move(line));
  const auto reach = static_cast<std::int64_t>(r + 1);
  f.path = geodesic_path(*w, w->at({-reach, 0}), w->at({reach, 0}));
  return f;
}

ScanFixture tree_annulus_scan_fixture(std::uint32_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "annulus index k must be >= 1");
  const auto kk = static_cast<std::int64_t>(k);
  auto tp = std::make_shared<TreeProduct>(tree_product(tree_window(3, -kk, 2 * kk + 2, 3 * k + 2),
                                                       tree_window(3, -kk, 0, k)));
  ScanFixture f;
  f.owner = tp;
  f.window = &tp->graph;
  f.family = tree_annulus_family(*tp);
  f.r = k;
  const auto d1 = bfs_distances(tp->first.graph, tp->first.anchor(0));
  std::vector<VertexId> sep;
  for (VertexId v = 0; v < tp->graph.size(); ++v) {
    if (d1[tp->split(v).first] == k + 1) sep.push_back(v);
  }
  f.separator = VertexSet(tp->graph, std::move(sep));
  const VertexId root2 = tp->second.anchor(0);
  for (std::int64_t j = 0; j <= 2 * kk + 2; ++j) {
    f.path.push_back(tp->pair(tp->first.anchor(j), root2));
  }
  return f;
}

ScanFixture dl_scan_fixture(std::uint32_t r) {
  if (r == 0) throw Error(ErrorCode::kInvalidArgument, "DL family is indexed by r >= 1");
  const auto rr = static_cast<std::int64_t>(r);
  auto dw = std::make_shared<DLWindow>(dl_window(2, 2, rr + 1));
  ScanFixture f;
  f.owner = dw;
  f.window = &dw->graph;
  f.family = dl_family(*dw);
  f.r = r;
  std::vector<VertexId> sep;
  for (VertexId v = 0; v < dw->graph.size(); ++v) {
    if (dw->first.b(dw->coords[v].first) == 0) sep.push_back(v);
  }
  f.separator = VertexSet(dw->graph, std::move(sep));
  for (std::int64_t j = -(rr + 1); j <= 1; ++j) {
    f.path.push_back(*dw->find(dw->first.anchor(j), dw->second.anchor(-j)));
  }
  return f;
}

}  // namespace coarse
