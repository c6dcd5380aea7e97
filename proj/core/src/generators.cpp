#include "coarse/generators.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <string>

#include "coarse/error.hpp"

namespace coarse {

VertexId TreeWindow::anchor(std::int64_t j) const { return graph.at(Label{j, j}); }

VertexId TreeWindow::ancestor(VertexId v, std::uint32_t k) const {
  graph.require(v);
  for (std::uint32_t i = 0; i < k; ++i) {
    if (!parent[v]) {
      throw Error(ErrorCode::kUntrusted, "ancestor leaves the tree window");
    }
    v = *parent[v];
  }
  return v;
}

TreeWindow tree_window(int valence, std::int64_t b_min, std::int64_t b_max,
                       std::uint32_t depth_below) {
  if (valence < 3) throw Error(ErrorCode::kInvalidArgument, "tree valence must be >= 3");
  if (b_max <= b_min) throw Error(ErrorCode::kInvalidArgument, "need b_max > b_min");
  if (b_min > 0 || b_max < 0) {
    throw Error(ErrorCode::kInvalidArgument, "band too small to contain the basepoint");
  }

  struct Node {
    std::int64_t j;  // ray index the vertex hangs from
    std::uint32_t m;  // steps below the ray
  };
  std::vector<Label> labels;
  std::vector<Node> nodes;
  std::vector<std::int64_t> busemann;
  std::vector<std::optional<VertexId>> parent;
  std::vector<Edge> edges;

  auto add = [&](Label label, std::int64_t b, Node node, std::optional<VertexId> up) {
    const auto id = static_cast<VertexId>(labels.size());
    labels.push_back(std::move(label));
    nodes.push_back(node);
    busemann.push_back(b);
    parent.push_back(up);
    if (up) edges.emplace_back(*up, id);
  };

  add(Label{b_max, b_max}, b_max, Node{b_max, 0}, std::nullopt);
  for (VertexId v = 0; v < labels.size(); ++v) {
    const std::int64_t b = busemann[v];
    if (b - 1 < b_min) continue;
    const Node node = nodes[v];
    const bool on_ray = node.m == 0;
    const bool may_leave_ray = node.m + 1 <= depth_below;
    if (on_ray) {
      add(Label{b - 1, b - 1}, b - 1, Node{b - 1, 0}, v);
      if (!may_leave_ray) continue;
      for (int c = 1; c < valence - 1; ++c) {
        add(Label{b - 1, node.j, c}, b - 1, Node{node.j, 1}, v);
      }
    } else {
      if (!may_leave_ray) continue;
      for (int c = 0; c < valence - 1; ++c) {
        Label label = labels[v];
        label[0] = b - 1;
        label.push_back(c);
        add(std::move(label), b - 1, Node{node.j, node.m + 1}, v);
      }
    }
  }

  const auto base = static_cast<VertexId>(std::find(labels.begin(), labels.end(), Label{0, 0}) -
                                          labels.begin());
  const auto trusted = static_cast<std::uint32_t>(
      std::min<std::int64_t>({b_max, -b_min, static_cast<std::int64_t>(depth_below)}));

  TreeWindow tw;
  tw.valence = valence;
  tw.b_min = b_min;
  tw.b_max = b_max;
  tw.depth_below = depth_below;
  tw.children.resize(labels.size());
  for (VertexId v = 0; v < parent.size(); ++v) {
    if (parent[v]) tw.children[*parent[v]].push_back(v);
  }
  tw.busemann = std::move(busemann);
  tw.parent = std::move(parent);
  tw.graph = GraphWindow(std::move(labels), std::move(edges), trusted, base);
  return tw;
}

std::vector<VertexId> tree_level(const TreeWindow& tw, VertexId x, std::uint32_t levels) {
  tw.graph.require(x);
  std::vector<VertexId> layer{x};
  for (std::uint32_t i = 0; i < levels && !layer.empty(); ++i) {
    std::vector<VertexId> next;
    for (VertexId v : layer) {
      next.insert(next.end(), tw.children[v].begin(), tw.children[v].end());
    }
    layer = std::move(next);
  }
  std::sort(layer.begin(), layer.end());
  return layer;
}

VertexSet tree_below(const TreeWindow& tw, VertexId x, std::uint32_t levels) {
  tw.graph.require(x);
  std::vector<VertexId> out;
  std::vector<VertexId> layer{x};
  bool clipped = false;
  for (std::uint32_t i = 0; !layer.empty(); ++i) {
    out.insert(out.end(), layer.begin(), layer.end());
    if (i == levels) break;
    std::vector<VertexId> next;
    for (VertexId v : layer) {
      if (!tw.branches_fully(v)) clipped = true;
      next.insert(next.end(), tw.children[v].begin(), tw.children[v].end());
    }
    layer = std::move(next);
  }
  return VertexSet(tw.graph, std::move(out), !clipped);
}

GraphWindow product_window(const GraphWindow& w1, const GraphWindow& w2) {
  const std::size_t n1 = w1.size();
  const std::size_t n2 = w2.size();
  auto id = [n2](std::size_t a, std::size_t b) { return static_cast<VertexId>(a * n2 + b); };
  std::vector<Label> labels;
  labels.reserve(n1 * n2);
  for (VertexId a = 0; a < n1; ++a) {
    for (VertexId b = 0; b < n2; ++b) {
      Label label{static_cast<std::int64_t>(w1.label(a).size())};
      label.insert(label.end(), w1.label(a).begin(), w1.label(a).end());
      label.insert(label.end(), w2.label(b).begin(), w2.label(b).end());
      labels.push_back(std::move(label));
    }
  }
  std::vector<Edge> edges;
  for (VertexId a = 0; a < n1; ++a) {
    for (VertexId b = 0; b < n2; ++b) {
      for (VertexId u : w1.neighbours(a)) {
        if (u > a) edges.emplace_back(id(a, b), id(u, b));
      }
      for (VertexId u : w2.neighbours(b)) {
        if (u > b) edges.emplace_back(id(a, b), id(a, u));
      }
    }
  }
  const std::uint32_t trusted = std::min(w1.trusted_radius(), w2.trusted_radius());
  return GraphWindow(std::move(labels), std::move(edges), trusted,
                     id(w1.basepoint(), w2.basepoint()));
}

TreeProduct tree_product(TreeWindow first, TreeWindow second) {
  TreeProduct tp;
  tp.graph = product_window(first.graph, second.graph);
  tp.first = std::move(first);
  tp.second = std::move(second);
  return tp;
}

namespace {

// Levels 0..k of T(x); throws kUntrusted if any level is incomplete.
std::vector<std::vector<VertexId>> complete_levels(const TreeWindow& tw, VertexId x,
                                                   std::uint32_t k) {
  std::vector<std::vector<VertexId>> levels;
  std::uint64_t expected = 1;
  for (std::uint32_t i = 0; i <= k; ++i) {
    levels.push_back(tree_level(tw, x, i));
    if (levels.back().size() != expected) {
      throw Error(ErrorCode::kUntrusted,
                  "tree below vertex is clipped at depth " + std::to_string(i));
    }
    expected *= static_cast<std::uint64_t>(tw.valence - 1);
  }
  return levels;
}

}  // namespace

VertexSet tree_annulus(const TreeProduct& tp, VertexId x, std::uint32_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "annulus index k must be >= 1");
  tp.graph.require(x);
  const auto [x1, x2] = tp.split(x);
  const auto l1 = complete_levels(tp.first, x1, k);
  const auto l2 = complete_levels(tp.second, x2, k);
  std::vector<VertexId> out;
  for (std::uint32_t i = 0; i <= k; ++i) {
    for (std::uint32_t j = 0; i + j <= k; ++j) {
      if (i + j + 1 < k) continue;
      for (VertexId a : l1[i]) {
        for (VertexId b : l2[j]) out.push_back(tp.pair(a, b));
      }
    }
  }
  return VertexSet(tp.graph, std::move(out));
}

std::optional<VertexId> DLWindow::find(VertexId x1, VertexId x2) const {
  auto it = index_.find(static_cast<std::uint64_t>(x1) * second.graph.size() + x2);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

DLWindow dl_window(int p, int q, std::int64_t band) {
  if (p < 2 || q < 2) throw Error(ErrorCode::kInvalidArgument, "DL(p, q) needs p, q >= 2");
  if (band < 1) throw Error(ErrorCode::kInvalidArgument, "DL band must be >= 1");
  DLWindow dw;
  dw.p = p;
  dw.q = q;
  dw.band = band;
  const auto full = static_cast<std::uint32_t>(2 * band);
  dw.first = tree_window(p + 1, -band, band, full);
  dw.second = tree_window(q + 1, -band, band, full);
  const TreeWindow& t1 = dw.first;
  const TreeWindow& t2 = dw.second;

  std::map<std::int64_t, std::vector<VertexId>> level2;
  for (VertexId v = 0; v < t2.graph.size(); ++v) level2[t2.b(v)].push_back(v);

  std::vector<Label> labels;
  for (VertexId u = 0; u < t1.graph.size(); ++u) {
    for (VertexId v : level2[-t1.b(u)]) {
      const auto id = static_cast<VertexId>(dw.coords.size());
      dw.coords.emplace_back(u, v);
      dw.index_.emplace(static_cast<std::uint64_t>(u) * t2.graph.size() + v, id);
      Label label{static_cast<std::int64_t>(t1.graph.label(u).size())};
      label.insert(label.end(), t1.graph.label(u).begin(), t1.graph.label(u).end());
      label.insert(label.end(), t2.graph.label(v).begin(), t2.graph.label(v).end());
      labels.push_back(std::move(label));
    }
  }
  // Every edge raises one coordinate and lowers the other; list each once
  // from the endpoint whose first coordinate goes up.
  std::vector<Edge> edges;
  for (VertexId id = 0; id < dw.coords.size(); ++id) {
    const auto [u, v] = dw.coords[id];
    if (!t1.parent[u]) continue;
    for (VertexId w : t2.children[v]) {
      if (auto other = dw.find(*t1.parent[u], w)) edges.emplace_back(id, *other);
    }
  }
  const auto base = *dw.find(t1.graph.basepoint(), t2.graph.basepoint());
  dw.graph = GraphWindow(std::move(labels), std::move(edges),
                         static_cast<std::uint32_t>(band), base);
  return dw;
}

VertexSet dl_vset(const DLWindow& dw, VertexId o1, VertexId o2, std::uint32_t r) {
  dw.first.graph.require(o1);
  dw.second.graph.require(o2);
  if (dw.first.b(o1) + dw.second.b(o2) != static_cast<std::int64_t>(r)) {
    throw Error(ErrorCode::kPrecondition, "V-set needs b(o1) + b(o2) = r");
  }
  std::vector<VertexId> out;
  for (std::uint32_t i = 0; i <= r; ++i) {
    const auto l1 = complete_levels(dw.first, o1, i).back();
    const auto l2 = complete_levels(dw.second, o2, r - i).back();
    for (VertexId a : l1) {
      for (VertexId b : l2) {
        auto z = dw.find(a, b);
        if (!z) throw Error(ErrorCode::kUntrusted, "V-set leaves the DL band");
        out.push_back(*z);
      }
    }
  }
  return VertexSet(dw.graph, std::move(out));
}

VertexSet dl_persistent(const DLWindow& dw, VertexId x, std::uint32_t r) {
  if (r == 0) throw Error(ErrorCode::kInvalidArgument, "DL family is indexed by r >= 1");
  dw.graph.require(x);
  const auto [x1, x2] = dw.coords[x];
  return dl_vset(dw, dw.first.ancestor(x1, r), x2, r);
}

GraphWindow grid_window(std::uint32_t n, std::uint32_t halfwidth) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "grid dimension must be >= 1");
  const std::uint64_t side = 2ull * halfwidth + 1;
  std::uint64_t total = 1;
  for (std::uint32_t i = 0; i < n; ++i) total *= side;
  std::vector<Label> labels(total, Label(n));
  std::vector<Edge> edges;
  for (std::uint64_t id = 0; id < total; ++id) {
    std::uint64_t rest = id;
    std::uint64_t stride = 1;
    for (std::uint32_t c = n; c-- > 0;) {
      const auto digit = rest % side;
      rest /= side;
      labels[id][c] = static_cast<std::int64_t>(digit) - halfwidth;
      if (digit + 1 < side) {
        edges.emplace_back(static_cast<VertexId>(id), static_cast<VertexId>(id + stride));
      }
      stride *= side;
    }
  }
  const auto origin = static_cast<VertexId>((total - 1) / 2);
  return GraphWindow(std::move(labels), std::move(edges), halfwidth, origin);
}

GraphWindow cycle_window(std::uint32_t n) {
  if (n < 3) throw Error(ErrorCode::kInvalidArgument, "cycle needs n >= 3");
  std::vector<Label> labels;
  std::vector<Edge> edges;
  for (std::uint32_t i = 0; i < n; ++i) {
    labels.push_back({static_cast<std::int64_t>(i)});
    edges.emplace_back(i, (i + 1) % n);
  }
  return GraphWindow(std::move(labels), std::move(edges), kInfinity, 0);
}

GraphWindow path_window(std::uint32_t n) {
  if (n == 0) throw Error(ErrorCode::kInvalidArgument, "path needs n >= 1");
  std::vector<Label> labels;
  std::vector<Edge> edges;
  for (std::uint32_t i = 0; i < n; ++i) {
    labels.push_back({static_cast<std::int64_t>(i)});
    if (i + 1 < n) edges.emplace_back(i, i + 1);
  }
  return GraphWindow(std::move(labels), std::move(edges), kInfinity, 0);
}

VertexSet thickened_sphere(const GraphWindow& w, VertexId x, std::uint32_t r,
                           std::uint32_t t) {
  return neighbourhood(sphere(w, x, r), t);
}

namespace {

using Lamps = std::map<std::int64_t, GroupElement>;

Label wreath_label(std::int64_t x, const Lamps& lamps) {
  Label label{x};
  for (const auto& [pos, value] : lamps) {
    label.push_back(pos);
    label.push_back(value);
  }
  return label;
}

}  // namespace

GraphWindow wreath_ball(const WreathBallSpec& spec) {
  const FiniteGroup& lamp = spec.lamp;
  struct State {
    std::int64_t x;
    Lamps lamps;
  };
  std::vector<State> states;
  std::vector<Label> labels;
  std::vector<std::uint32_t> depth;
  std::map<Label, VertexId> index;
  std::vector<Edge> edges;
  bool truncated = false;

  const std::int64_t origin = spec.base ? spec.base->identity() : 0;
  states.push_back({origin, {}});
  labels.push_back(wreath_label(origin, {}));
  depth.push_back(0);
  index.emplace(labels.back(), 0);

  for (VertexId v = 0; v < states.size(); ++v) {
    std::vector<State> moves;
    const State& here = states[v];
    for (auto s : lamp.generators()) {
      State next = here;
      auto it = next.lamps.find(here.x);
      const GroupElement old = it == next.lamps.end() ? lamp.identity() : it->second;
      const GroupElement value = lamp.mul(old, s);
      if (value == lamp.identity()) {
        next.lamps.erase(here.x);
      } else {
        next.lamps[here.x] = value;
      }
      moves.push_back(std::move(next));
    }
    if (spec.base) {
      for (auto s : spec.base->generators()) {
        moves.push_back({spec.base->mul(static_cast<GroupElement>(here.x), s), here.lamps});
      }
    } else {
      moves.push_back({here.x + 1, here.lamps});
      moves.push_back({here.x - 1, here.lamps});
    }
    const bool expand = depth[v] < spec.radius;
    for (auto& next : moves) {
      Label label = wreath_label(next.x, next.lamps);
      auto it = index.find(label);
      if (it != index.end()) {
        edges.emplace_back(v, it->second);
      } else if (expand) {
        const auto id = static_cast<VertexId>(states.size());
        index.emplace(label, id);
        labels.push_back(std::move(label));
        depth.push_back(depth[v] + 1);
        edges.emplace_back(v, id);
        // `here` may dangle after this push_back; it is not used again.
        states.push_back(std::move(next));
      } else {
        truncated = true;
      }
    }
  }
  // A finite group exhausted before the radius is the whole Cayley graph.
  const std::uint32_t trusted = truncated ? spec.radius : kInfinity;
  return GraphWindow(std::move(labels), std::move(edges), trusted, 0);
}

}  // namespace coarse
