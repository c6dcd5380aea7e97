#include "coarse/partial_wreath.hpp"

#include <algorithm>
#include <set>

#include "coarse/error.hpp"
#include "coarse/generators.hpp"

namespace coarse {

std::uint32_t LampProduct::index_of(std::int64_t position) const {
  auto it = std::lower_bound(positions.begin(), positions.end(), position);
  if (it == positions.end() || *it != position) {
    throw Error(ErrorCode::kUntrusted,
                "base position " + std::to_string(position) + " is outside the lamp window");
  }
  return static_cast<std::uint32_t>(it - positions.begin());
}

LampProduct lamp_product(const PartialWreathSpec& spec, std::uint32_t reach) {
  LampProduct lp;
  if (spec.base) {
    for (std::uint32_t b = 0; b < spec.base->order(); ++b) lp.positions.push_back(b);
  } else {
    const auto r = static_cast<std::int64_t>(reach);
    for (std::int64_t p = -r; p <= r; ++p) lp.positions.push_back(p);
  }
  const auto n = static_cast<std::uint32_t>(lp.positions.size());
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  switch (spec.gamma) {
    case GammaKind::kComplete:
      for (std::uint32_t a = 0; a < n; ++a) {
        for (std::uint32_t b = a + 1; b < n; ++b) edges.emplace_back(a, b);
      }
      break;
    case GammaKind::kEdgeless:
      break;
    case GammaKind::kCayley:
      if (spec.base) {
        for (std::uint32_t a = 0; a < n; ++a) {
          for (auto s : spec.base->generators()) {
            const auto b = spec.base->mul(a, s);
            if (b != a) edges.emplace_back(std::min(a, b), std::max(a, b));
          }
        }
      } else {
        for (std::uint32_t a = 0; a + 1 < n; ++a) edges.emplace_back(a, a + 1);
      }
      break;
  }
  std::vector<std::string> names;
  for (auto p : lp.positions) names.push_back("p" + std::to_string(p));
  lp.product = GraphProduct(n, std::move(edges), std::vector<FiniteGroup>(n, spec.lamp),
                            std::move(names));
  return lp;
}

namespace {

Label ball_label(const LampProduct& lp, const NormalForm& g, std::int64_t b) {
  Label l{b};
  for (const auto& s : g) {
    l.push_back(lp.positions[s.vertex]);
    l.push_back(s.element);
  }
  return l;
}

// Lamp configuration of the wreath-product image, as a wreath_ball label.
Label projected_label(const LampProduct& lp, const FiniteGroup& lamp, const NormalForm& g,
                      std::int64_t b) {
  std::map<std::int64_t, GroupElement> f;
  for (const auto& s : g) {
    auto [it, fresh] = f.try_emplace(lp.positions[s.vertex], lamp.identity());
    it->second = lamp.mul(it->second, s.element);
  }
  Label l{b};
  for (const auto& [p, v] : f) {
    if (v == lamp.identity()) continue;
    l.push_back(p);
    l.push_back(v);
  }
  return l;
}

}  // namespace

PartialWreathBall partial_wreath_ball(const PartialWreathSpec& spec) {
  PartialWreathBall ball;
  ball.lamps = lamp_product(spec, spec.radius + 1);
  const GraphProduct& gp = ball.lamps.product;
  const FiniteGroup& lamp = spec.lamp;
  const std::int64_t origin = spec.base ? spec.base->identity() : 0;

  std::map<std::pair<NormalForm, std::int64_t>, VertexId> index;
  std::vector<std::uint32_t> depth{0};
  ball.elements.emplace_back(NormalForm{}, origin);
  index.emplace(ball.elements.back(), 0);
  std::vector<Edge> edges;
  bool closed = true;
  for (VertexId v = 0; v < ball.elements.size(); ++v) {
    std::vector<std::pair<NormalForm, std::int64_t>> moves;
    {
      const auto& [g, b] = ball.elements[v];
      for (auto s : lamp.generators()) {
        moves.emplace_back(gp.multiply(g, {ball.lamps.index_of(b), s}), b);
      }
      if (spec.base) {
        for (auto s : spec.base->generators()) {
          moves.emplace_back(g, spec.base->mul(static_cast<GroupElement>(b), s));
        }
      } else {
        moves.emplace_back(g, b + 1);
        moves.emplace_back(g, b - 1);
      }
    }
    for (auto& m : moves) {
      auto it = index.find(m);
      if (it != index.end()) {
        if (it->second != v) edges.emplace_back(std::min(v, it->second), std::max(v, it->second));
        continue;
      }
      if (depth[v] >= spec.radius) {
        closed = false;
        continue;
      }
      const auto id = static_cast<VertexId>(ball.elements.size());
      index.emplace(m, id);
      ball.elements.push_back(std::move(m));
      depth.push_back(depth[v] + 1);
      edges.emplace_back(v, id);
    }
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());
  std::vector<Label> labels;
  for (const auto& [g, b] : ball.elements) labels.push_back(ball_label(ball.lamps, g, b));
  ball.graph = GraphWindow(std::move(labels), std::move(edges), closed ? kInfinity : spec.radius, 0);
  return ball;
}

IsoReport pc_iso_check(const PartialWreathSpec& spec) {
  if (spec.gamma != GammaKind::kCayley) {
    throw Error(ErrorCode::kPrecondition, "the pointed-clique model needs Gamma = Cayl(B)");
  }
  IsoReport rep;
  const auto ball = partial_wreath_ball(spec);
  const std::uint32_t R = spec.radius;
  const LampProduct& lp = ball.lamps;
  const QMWindow q = qm_ball(lp.product, R + 1);
  const std::int64_t origin = spec.base ? spec.base->identity() : 0;
  const PCWindow pc = pc_build(q, lp.index_of(origin));
  const auto dist = bfs_distances(pc.graph, pc.graph.basepoint());

  rep.ball_size = ball.graph.size();
  rep.ball_edges = ball.graph.edge_count();
  std::vector<VertexId> image(ball.graph.size());
  for (VertexId v = 0; v < ball.graph.size(); ++v) {
    const auto& [g, b] = ball.elements[v];
    const auto p = q.find(g);
    const auto c = p ? q.clique_at(lp.index_of(b), *p) : std::nullopt;
    const auto target = c ? pc.find(*c, *p) : std::nullopt;
    if (!target) {
      rep.mismatch = "no pointed clique for ball vertex " + std::to_string(v);
      return rep;
    }
    image[v] = *target;
  }
  rep.basepoint_ok = image[0] == pc.graph.basepoint();

  std::vector<bool> in_ball(pc.graph.size(), false);
  for (VertexId v = 0; v < pc.graph.size(); ++v) {
    if (dist[v] <= R) {
      in_ball[v] = true;
      ++rep.pc_ball_size;
    }
  }
  std::set<VertexId> distinct(image.begin(), image.end());
  rep.bijection_ok = distinct.size() == image.size() && image.size() == rep.pc_ball_size &&
                     std::all_of(image.begin(), image.end(), [&](VertexId v) { return in_ball[v]; });
  if (!rep.bijection_ok && !rep.mismatch) {
    rep.mismatch = "ball has " + std::to_string(image.size()) + " vertices (" +
                   std::to_string(distinct.size()) + " distinct images), PC ball has " +
                   std::to_string(rep.pc_ball_size);
  }

  for (const auto& [a, b] : pc.graph.edges()) {
    if (in_ball[a] && in_ball[b]) ++rep.pc_ball_edges;
  }
  bool edges_ok = rep.pc_ball_edges == rep.ball_edges;
  for (const auto& [a, b] : ball.graph.edges()) {
    if (!pc.graph.adjacent(image[a], image[b])) {
      edges_ok = false;
      if (!rep.mismatch) {
        rep.mismatch = "ball edge " + std::to_string(a) + "-" + std::to_string(b) +
                       " is not a PC edge";
      }
    }
  }
  rep.edges_ok = edges_ok;
  if (!edges_ok && !rep.mismatch) {
    rep.mismatch = std::to_string(rep.ball_edges) + " ball edges against " +
                   std::to_string(rep.pc_ball_edges) + " PC edges";
  }
  return rep;
}

WreathComparison compare_with_wreath(const PartialWreathSpec& spec) {
  WreathComparison out;
  const auto ball = partial_wreath_ball(spec);
  const GraphWindow wreath = wreath_ball({spec.lamp, spec.base, spec.radius});
  out.partial_size = ball.graph.size();
  out.wreath_size = wreath.size();

  std::vector<std::optional<VertexId>> pi(ball.graph.size());
  std::vector<bool> hit(wreath.size(), false);
  bool inside = true;
  for (VertexId v = 0; v < ball.graph.size(); ++v) {
    const auto& [g, b] = ball.elements[v];
    pi[v] = wreath.find(projected_label(ball.lamps, spec.lamp, g, b));
    if (pi[v]) {
      hit[*pi[v]] = true;
    } else {
      inside = false;
    }
  }
  out.surjective = inside && std::all_of(hit.begin(), hit.end(), [](bool h) { return h; });
  out.edges_to_edges = inside;
  for (const auto& [a, b] : ball.graph.edges()) {
    if (!pi[a] || !pi[b] || !wreath.adjacent(*pi[a], *pi[b])) out.edges_to_edges = false;
  }

  // Identical presentations: same labels and same edges, label for label.
  out.equal = out.partial_size == out.wreath_size;
  for (VertexId v = 0; v < ball.graph.size() && out.equal; ++v) {
    out.equal = wreath.find(ball.graph.label(v)).has_value();
  }
  if (out.equal) {
    out.equal = ball.graph.edge_count() == wreath.edge_count();
    for (const auto& [a, b] : ball.graph.edges()) {
      if (!out.equal) break;
      out.equal = wreath.adjacent(wreath.at(ball.graph.label(a)), wreath.at(ball.graph.label(b)));
    }
  }
  return out;
}

BSet bset(const GraphWindow& wreath, const FiniteGroup& lamp, std::vector<std::int64_t> e,
          std::map<std::int64_t, GroupElement> colouring) {
  std::sort(e.begin(), e.end());
  e.erase(std::unique(e.begin(), e.end()), e.end());
  if (e.empty()) throw Error(ErrorCode::kInvalidArgument, "E must be nonempty");
  for (auto it = colouring.begin(); it != colouring.end();) {
    if (it->second >= lamp.order()) {
      throw Error(ErrorCode::kInvalidArgument, "colouring value outside the lamp group");
    }
    it = it->second == lamp.identity() ? colouring.erase(it) : std::next(it);
  }
  BSet out;
  out.e = e;
  out.colouring = colouring;
  std::vector<VertexId> members;
  std::vector<GroupElement> h(e.size(), 0);
  while (true) {
    std::map<std::int64_t, GroupElement> f = colouring;
    for (std::size_t i = 0; i < e.size(); ++i) {
      auto [it, fresh] = f.try_emplace(e[i], lamp.identity());
      it->second = lamp.mul(it->second, h[i]);
    }
    for (auto x : e) {
      Label l{x};
      for (const auto& [p, v] : f) {
        if (v == lamp.identity()) continue;
        l.push_back(p);
        l.push_back(v);
      }
      auto id = wreath.find(l);
      if (!id) {
        throw Error(ErrorCode::kUntrusted, "B(E, c) escapes the window at base position " +
                                               std::to_string(x));
      }
      members.push_back(*id);
    }
    std::size_t i = 0;
    while (i < h.size() && ++h[i] == lamp.order()) h[i++] = 0;
    if (i == h.size()) break;
  }
  std::sort(members.begin(), members.end());
  out.members = VertexSet(wreath, std::move(members));
  return out;
}

}  // namespace coarse
