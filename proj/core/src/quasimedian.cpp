#include "coarse/quasimedian.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include "coarse/error.hpp"
#include "coarse/union_find.hpp"

namespace coarse {

namespace {

void enumerate_cliques(const std::vector<std::vector<bool>>& adj, std::vector<std::uint32_t>& current,
                       std::uint32_t next, std::vector<std::vector<std::uint32_t>>& out) {
  const auto n = static_cast<std::uint32_t>(adj.size());
  for (std::uint32_t v = next; v < n; ++v) {
    bool ok = true;
    for (auto c : current) ok = ok && adj[c][v];
    if (!ok) continue;
    current.push_back(v);
    out.push_back(current);
    enumerate_cliques(adj, current, v + 1, out);
    current.pop_back();
  }
}

// Largest k such that some k members of `items` are pairwise related.
std::size_t max_clique(const std::vector<std::uint32_t>& items,
                       const std::function<bool(std::uint32_t, std::uint32_t)>& related) {
  std::size_t best = 0;
  std::vector<std::uint32_t> current;
  std::function<void(std::size_t)> grow = [&](std::size_t from) {
    best = std::max(best, current.size());
    if (current.size() + (items.size() - from) <= best) return;
    for (std::size_t i = from; i < items.size(); ++i) {
      bool ok = true;
      for (auto c : current) ok = ok && related(c, items[i]);
      if (!ok) continue;
      current.push_back(items[i]);
      grow(i + 1);
      current.pop_back();
    }
  };
  grow(0);
  return best;
}

}  // namespace

GraphProduct::GraphProduct(std::uint32_t vertex_count,
                           std::vector<std::pair<std::uint32_t, std::uint32_t>> edges,
                           std::vector<FiniteGroup> groups, std::vector<std::string> names)
    : groups_(std::move(groups)), names_(std::move(names)) {
  if (groups_.size() != vertex_count) {
    throw Error(ErrorCode::kInvalidArgument, "one vertex group per vertex of Gamma is required");
  }
  for (const auto& g : groups_) {
    if (g.order() < 2) throw Error(ErrorCode::kInvalidArgument, "vertex groups must be nontrivial");
  }
  if (names_.empty()) {
    for (std::uint32_t u = 0; u < vertex_count; ++u) names_.push_back("v" + std::to_string(u));
  }
  if (names_.size() != vertex_count) {
    throw Error(ErrorCode::kInvalidArgument, "one name per vertex of Gamma is required");
  }
  adjacency_.assign(vertex_count, std::vector<bool>(vertex_count, false));
  for (auto [u, v] : edges) {
    if (u >= vertex_count || v >= vertex_count) {
      throw Error(ErrorCode::kInvalidArgument, "Gamma edge endpoint out of range");
    }
    if (u == v) throw Error(ErrorCode::kInvalidArgument, "Gamma must have no loops");
    if (u > v) std::swap(u, v);
    if (adjacency_[u][v]) continue;
    adjacency_[u][v] = adjacency_[v][u] = true;
    edges_.emplace_back(u, v);
  }
  std::sort(edges_.begin(), edges_.end());
  star_.resize(vertex_count);
  for (std::uint32_t u = 0; u < vertex_count; ++u) {
    for (std::uint32_t v = 0; v < vertex_count; ++v) {
      if (u == v || adjacency_[u][v]) star_[u].push_back(v);
    }
  }
  std::vector<std::uint32_t> all(vertex_count);
  std::iota(all.begin(), all.end(), 0u);
  clique_number_ = static_cast<std::uint32_t>(
      max_clique(all, [this](std::uint32_t a, std::uint32_t b) { return adjacency_[a][b]; }));
  if (vertex_count <= 24) {
    std::vector<std::uint32_t> current;
    enumerate_cliques(adjacency_, current, 0, cliques_);
  }
}

std::optional<std::uint32_t> GraphProduct::vertex_named(const std::string& name) const {
  for (std::uint32_t u = 0; u < names_.size(); ++u) {
    if (names_[u] == name) return u;
  }
  return std::nullopt;
}

NormalForm GraphProduct::canonical(NormalForm word) const {
  NormalForm out;
  out.reserve(word.size());
  while (!word.empty()) {
    std::size_t pick = word.size();
    for (std::size_t i = 0; i < word.size(); ++i) {
      bool movable = true;
      for (std::size_t j = 0; j < i && movable; ++j) {
        movable = adjacency_[word[j].vertex][word[i].vertex];
      }
      if (movable && (pick == word.size() || word[i].vertex < word[pick].vertex)) pick = i;
    }
    out.push_back(word[pick]);
    word.erase(word.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return out;
}

namespace {

// Right-multiplies a reduced word by one syllable, keeping it reduced.
void push_syllable(const GraphProduct& gp, NormalForm& w, Syllable s) {
  for (std::size_t i = w.size(); i-- > 0;) {
    if (w[i].vertex == s.vertex) {
      const FiniteGroup& g = gp.group(s.vertex);
      const GroupElement e = g.mul(w[i].element, s.element);
      if (e == g.identity()) {
        w.erase(w.begin() + static_cast<std::ptrdiff_t>(i));
      } else {
        w[i].element = e;
      }
      return;
    }
    if (!gp.adjacent(w[i].vertex, s.vertex)) break;
  }
  w.push_back(s);
}

}  // namespace

NormalForm GraphProduct::normal_form(std::span<const Syllable> word) const {
  NormalForm w;
  for (const auto& s : word) {
    if (s.vertex >= vertex_count()) {
      throw Error(ErrorCode::kInvalidArgument,
                  "unknown generator: vertex " + std::to_string(s.vertex));
    }
    const FiniteGroup& g = groups_[s.vertex];
    if (s.element >= g.order()) {
      throw Error(ErrorCode::kInvalidArgument, "unknown generator: element " +
                                                   std::to_string(s.element) + " of " +
                                                   names_[s.vertex]);
    }
    if (s.element == g.identity()) continue;
    push_syllable(*this, w, s);
  }
  return canonical(std::move(w));
}

NormalForm GraphProduct::multiply(const NormalForm& g, Syllable s) const {
  NormalForm w = g;
  if (s.element != groups_[s.vertex].identity()) push_syllable(*this, w, s);
  return canonical(std::move(w));
}

NormalForm GraphProduct::multiply(const NormalForm& a, const NormalForm& b) const {
  NormalForm w = a;
  for (const auto& s : b) push_syllable(*this, w, s);
  return canonical(std::move(w));
}

NormalForm GraphProduct::inverse(const NormalForm& g) const {
  NormalForm w(g.rbegin(), g.rend());
  for (auto& s : w) s.element = groups_[s.vertex].inverse(s.element);
  return canonical(std::move(w));
}

NormalForm GraphProduct::coset_min(const NormalForm& g,
                                   std::span<const std::uint32_t> lambda) const {
  NormalForm w = g;
  const auto in_lambda = [&](std::uint32_t u) {
    return std::binary_search(lambda.begin(), lambda.end(), u);
  };
  bool removed = true;
  while (removed) {
    removed = false;
    for (std::size_t i = w.size(); i-- > 0;) {
      if (!in_lambda(w[i].vertex)) continue;
      bool movable = true;
      for (std::size_t j = i + 1; j < w.size() && movable; ++j) {
        movable = adjacency_[w[i].vertex][w[j].vertex];
      }
      if (movable) {
        w.erase(w.begin() + static_cast<std::ptrdiff_t>(i));
        removed = true;
        break;
      }
    }
  }
  return canonical(std::move(w));
}

GroupElement GraphProduct::trailing(const NormalForm& g, std::uint32_t u) const {
  for (std::size_t i = g.size(); i-- > 0;) {
    if (g[i].vertex == u) return g[i].element;
    if (!adjacency_[g[i].vertex][u]) break;
  }
  return groups_[u].identity();
}

GroupElement GraphProduct::leading(const NormalForm& g, std::uint32_t u) const {
  for (const auto& s : g) {
    if (s.vertex == u) return s.element;
    if (!adjacency_[s.vertex][u]) break;
  }
  return groups_[u].identity();
}

std::uint64_t GraphProduct::weighted_length(const NormalForm& g) const {
  std::uint64_t total = 0;
  for (const auto& s : g) total += groups_[s.vertex].word_length(s.element);
  return total;
}

Label GraphProduct::label(const NormalForm& g) const {
  Label out;
  out.reserve(2 * g.size());
  for (const auto& s : g) {
    out.push_back(s.vertex);
    out.push_back(s.element);
  }
  return out;
}

std::optional<VertexId> QMWindow::find(const NormalForm& g) const {
  auto it = index_.find(g);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool QMWindow::trusted_pair(VertexId x, VertexId y) const {
  // Every geodesic from x to y stays within norm |x| + |y|.
  return exhaustive() || static_cast<std::uint64_t>(norm(x)) + norm(y) <= radius_;
}

std::optional<std::uint32_t> QMWindow::clique_at(std::uint32_t u, VertexId x) const {
  const std::uint32_t lam[] = {u};
  auto it = clique_index_.find({u, product_.coset_min(elements_[x], lam)});
  if (it == clique_index_.end()) return std::nullopt;
  return it->second;
}

std::uint32_t QMWindow::edge_clique(VertexId a, VertexId b) const {
  auto it = edge_clique_.find(edge_key(a, b));
  if (it == edge_clique_.end()) {
    throw Error(ErrorCode::kInvalidArgument,
                "not an edge: " + std::to_string(a) + " " + std::to_string(b));
  }
  return it->second;
}

std::uint32_t QMWindow::edge_hyperplane(VertexId a, VertexId b) const {
  return cliques_[edge_clique(a, b)].hyperplane;
}

std::optional<std::uint32_t> QMWindow::hyperplane_by_key(std::uint32_t u,
                                                         const NormalForm& base) const {
  auto it = hyperplane_index_.find({u, product_.coset_min(base, product_.star(u))});
  if (it == hyperplane_index_.end()) return std::nullopt;
  return it->second;
}

GroupElement QMWindow::sector_label(std::uint32_t h, VertexId x) const {
  const QMHyperplane& hp = hyperplanes_[h];
  return product_.leading(product_.multiply(product_.inverse(hp.base), elements_[x]), hp.vertex);
}

std::uint32_t QMWindow::clique_metric(std::uint32_t c, VertexId a, VertexId b) const {
  const QMClique& cl = cliques_[c];
  const FiniteGroup& g = product_.group(cl.vertex);
  const GroupElement ea = product_.trailing(elements_[a], cl.vertex);
  const GroupElement eb = product_.trailing(elements_[b], cl.vertex);
  return g.word_length(g.mul(g.inverse(ea), eb));
}

QMWindow qm_ball(const GraphProduct& product, std::uint32_t radius, std::size_t max_states) {
  if (radius == 0) throw Error(ErrorCode::kInvalidArgument, "QM ball radius must be >= 1");
  QMWindow q;
  q.product_ = product;
  q.radius_ = radius;

  std::vector<Syllable> moves;
  for (std::uint32_t u = 0; u < product.vertex_count(); ++u) {
    const FiniteGroup& g = product.group(u);
    for (GroupElement e = 0; e < g.order(); ++e) {
      if (e != g.identity()) moves.push_back({u, e});
    }
  }

  std::vector<std::uint32_t> depth{0};
  q.elements_.push_back({});
  q.index_.emplace(NormalForm{}, 0);
  for (VertexId v = 0; v < q.elements_.size(); ++v) {
    if (depth[v] >= radius) break;
    for (const auto& s : moves) {
      NormalForm next = product.multiply(q.elements_[v], s);
      if (q.index_.count(next)) continue;
      if (q.elements_.size() >= max_states) {
        throw Error(ErrorCode::kBudgetExceeded,
                    "QM ball exceeds " + std::to_string(max_states) + " states");
      }
      q.index_.emplace(next, static_cast<VertexId>(q.elements_.size()));
      q.elements_.push_back(std::move(next));
      depth.push_back(depth[v] + 1);
    }
  }

  // Edges among ball vertices, tagged with their Gamma vertex.
  bool closed = true;
  std::vector<Edge> edges;
  std::vector<std::uint32_t> edge_vertex;
  for (VertexId v = 0; v < q.elements_.size(); ++v) {
    for (const auto& s : moves) {
      auto it = q.index_.find(product.multiply(q.elements_[v], s));
      if (it == q.index_.end()) {
        closed = false;
        continue;
      }
      if (v < it->second) {
        edges.emplace_back(v, it->second);
        edge_vertex.push_back(s.vertex);
      }
    }
  }
  std::vector<Label> labels;
  labels.reserve(q.elements_.size());
  for (const auto& e : q.elements_) labels.push_back(product.label(e));
  q.graph_ = GraphWindow(std::move(labels), edges, closed ? kInfinity : radius, 0);

  // Clique registry: the cosets x G_u met by the ball.
  for (VertexId v = 0; v < q.elements_.size(); ++v) {
    for (std::uint32_t u = 0; u < product.vertex_count(); ++u) {
      const std::uint32_t lam[] = {u};
      auto key = std::make_pair(u, product.coset_min(q.elements_[v], lam));
      auto it = q.clique_index_.find(key);
      if (it == q.clique_index_.end()) {
        const auto id = static_cast<std::uint32_t>(q.cliques_.size());
        QMClique c;
        c.vertex = u;
        c.base = key.second;
        q.cliques_.push_back(std::move(c));
        it = q.clique_index_.emplace(std::move(key), id).first;
      }
      q.cliques_[it->second].members.push_back(v);
    }
  }
  for (auto& c : q.cliques_) {
    std::sort(c.members.begin(), c.members.end());
    c.complete = c.members.size() == product.group(c.vertex).order();
    const auto hkey = std::make_pair(c.vertex, product.coset_min(c.base, product.star(c.vertex)));
    auto it = q.hyperplane_index_.find(hkey);
    if (it == q.hyperplane_index_.end()) {
      const auto id = static_cast<std::uint32_t>(q.hyperplanes_.size());
      QMHyperplane h;
      h.vertex = c.vertex;
      h.base = hkey.second;
      q.hyperplanes_.push_back(std::move(h));
      it = q.hyperplane_index_.emplace(hkey, id).first;
    }
    c.hyperplane = it->second;
  }
  for (std::uint32_t c = 0; c < q.cliques_.size(); ++c) {
    q.hyperplanes_[q.cliques_[c].hyperplane].cliques.push_back(c);
  }

  std::unordered_map<std::uint64_t, std::size_t> edge_index;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto [a, b] = edges[i];
    const auto c = *q.clique_at(edge_vertex[i], a);
    q.edge_clique_.emplace(QMWindow::edge_key(a, b), c);
    q.hyperplanes_[q.cliques_[c].hyperplane].edge_count++;
    edge_index.emplace(QMWindow::edge_key(a, b), i);
  }

  for (auto& h : q.hyperplanes_) {
    bool inside = true;
    for (auto c : h.cliques) {
      const auto& cl = q.cliques_[c];
      inside = inside && cl.complete;
      for (auto m : cl.members) inside = inside && depth[m] < radius;
    }
    h.trusted = closed || inside;
  }

  // Graph-side hyperplanes: the classes of edges under "same triangle" and
  // "opposite sides of an induced square", compared with the algebraic keys.
  const GraphWindow& g = q.graph_;
  UnionFind uf(edges.size());
  const auto idx = [&](VertexId a, VertexId b) { return edge_index.at(QMWindow::edge_key(a, b)); };
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto [a, b] = edges[i];
    for (VertexId c : g.neighbours(a)) {
      if (c == b) continue;
      if (g.adjacent(c, b)) {
        uf.unite(i, idx(a, c));
        uf.unite(i, idx(b, c));
        continue;
      }
      for (VertexId d : g.neighbours(b)) {
        if (d == a || d == c || g.adjacent(d, a)) continue;
        if (g.adjacent(c, d)) uf.unite(i, idx(c, d));
      }
    }
  }
  std::map<std::size_t, std::set<std::uint32_t>> keys_of_class;
  std::map<std::uint32_t, std::set<std::size_t>> classes_of_key;
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const auto root = uf.find(i);
    const auto h = q.cliques_[q.edge_clique_.at(QMWindow::edge_key(edges[i].first, edges[i].second))]
                       .hyperplane;
    keys_of_class[root].insert(h);
    classes_of_key[h].insert(root);
  }
  for (const auto& [root, keys] : keys_of_class) q.key_mismatches_ += keys.size() - 1;
  for (const auto& [key, roots] : classes_of_key) q.key_mismatches_ += roots.size() - 1;
  return q;
}

std::optional<VertexId> gate(const GraphWindow& w, std::span<const VertexId> target, VertexId x) {
  std::vector<bool> in(w.size(), false);
  for (auto t : target) in[t] = true;
  if (in[x]) return x;
  std::vector<std::uint32_t> dist(w.size(), kInfinity);
  std::deque<VertexId> queue{x};
  dist[x] = 0;
  std::uint32_t found_at = kInfinity;
  std::vector<VertexId> found;
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    if (dist[v] >= found_at) break;
    for (VertexId u : w.neighbours(v)) {
      if (dist[u] != kInfinity) continue;
      dist[u] = dist[v] + 1;
      if (in[u]) {
        found_at = dist[u];
        found.push_back(u);
      }
      queue.push_back(u);
    }
  }
  if (found.size() != 1) return std::nullopt;
  return found.front();
}

namespace {

// Components of the window with hyperplane h's edges removed, restricted to
// the given vertex subset (or the whole window).
std::vector<std::size_t> cut_components(const QMWindow& q, std::uint32_t h,
                                        const std::vector<bool>* within) {
  const GraphWindow& g = q.graph();
  UnionFind uf(g.size());
  for (const auto& [a, b] : g.edges()) {
    if (within && (!(*within)[a] || !(*within)[b])) continue;
    if (q.edge_hyperplane(a, b) == h) continue;
    uf.unite(a, b);
  }
  std::vector<std::size_t> comp(g.size());
  for (VertexId v = 0; v < g.size(); ++v) comp[v] = uf.find(v);
  return comp;
}

std::vector<VertexSet> group_components(const GraphWindow& g, const std::vector<std::size_t>& comp,
                                        const std::vector<bool>* within) {
  std::map<std::size_t, std::vector<VertexId>> groups;
  std::vector<std::size_t> order;
  for (VertexId v = 0; v < g.size(); ++v) {
    if (within && !(*within)[v]) continue;
    auto [it, fresh] = groups.try_emplace(comp[v]);
    if (fresh) order.push_back(comp[v]);
    it->second.push_back(v);
  }
  std::vector<VertexSet> out;
  for (auto c : order) out.emplace_back(g, std::move(groups[c]));
  return out;
}

}  // namespace

HyperplaneGeometry hyperplane_geometry(const QMWindow& q, std::uint32_t h) {
  if (h >= q.hyperplanes().size()) {
    throw Error(ErrorCode::kInvalidArgument, "unknown hyperplane " + std::to_string(h));
  }
  const GraphWindow& g = q.graph();
  const QMHyperplane& hp = q.hyperplanes()[h];
  std::vector<bool> in_carrier(g.size(), false);
  for (auto c : hp.cliques) {
    for (auto m : q.cliques()[c].members) in_carrier[m] = true;
  }
  std::vector<VertexId> carrier;
  for (VertexId v = 0; v < g.size(); ++v) {
    if (in_carrier[v]) carrier.push_back(v);
  }
  HyperplaneGeometry out;
  out.clipped = !hp.trusted;
  out.carrier = VertexSet(g, std::move(carrier), hp.trusted);
  out.fibres = group_components(g, cut_components(q, h, &in_carrier), &in_carrier);
  out.sectors = group_components(g, cut_components(q, h, nullptr), nullptr);
  if (out.clipped) {
    for (auto& f : out.fibres) f.mark_untrusted();
    for (auto& s : out.sectors) s.mark_untrusted();
  }
  return out;
}

std::vector<std::uint32_t> separating_hyperplanes(const QMWindow& q, VertexId x, VertexId y) {
  // Every hyperplane separating x from y is dual to an edge of x^{-1} y's
  // syllables translated by x, but scanning the registry is simpler and the
  // registries here are small.
  std::vector<std::uint32_t> out;
  for (std::uint32_t h = 0; h < q.hyperplanes().size(); ++h) {
    if (q.sector_label(h, x) != q.sector_label(h, y)) out.push_back(h);
  }
  return out;
}

namespace {

// Vertices eligible for pair checks: the pair-trusted core, capped.
std::vector<VertexId> pair_core(const QMWindow& q, std::size_t cap) {
  std::vector<VertexId> out;
  const std::uint32_t limit = q.pair_trust();
  for (VertexId v = 0; v < q.graph().size() && out.size() < cap; ++v) {
    if (q.norm(v) <= limit) out.push_back(v);
  }
  return out;
}

std::set<std::pair<std::uint32_t, std::uint32_t>> transverse_pairs(const QMWindow& q) {
  std::set<std::pair<std::uint32_t, std::uint32_t>> out;
  const GraphWindow& g = q.graph();
  for (VertexId a = 0; a < g.size(); ++a) {
    for (VertexId b : g.neighbours(a)) {
      for (VertexId c : g.neighbours(a)) {
        if (c <= b || g.adjacent(b, c)) continue;
        // Induced square a-b-d-c.
        for (VertexId d : g.neighbours(b)) {
          if (d == a || g.adjacent(d, a) || !g.adjacent(d, c)) continue;
          auto h1 = q.edge_hyperplane(a, b);
          auto h2 = q.edge_hyperplane(a, c);
          if (h1 > h2) std::swap(h1, h2);
          if (h1 != h2) out.emplace(h1, h2);
        }
      }
    }
  }
  return out;
}

}  // namespace

QMStructureReport check_structure(const QMWindow& q, std::uint32_t max_geodesic) {
  const GraphWindow& g = q.graph();
  const GraphProduct& gp = q.product();
  QMStructureReport rep;
  rep.vertices = g.size();
  rep.hyperplanes = q.hyperplanes().size();
  rep.key_mismatches = q.key_mismatches();
  const auto note = [&rep](const std::string& m) {
    if (rep.messages.size() < 20) rep.messages.push_back(m);
  };

  // Induced K4^-: an edge with two non-adjacent common neighbours.
  // Induced K3,2: two non-adjacent vertices with three pairwise
  // non-adjacent common neighbours.
  for (const auto& [a, b] : g.edges()) {
    std::vector<VertexId> common;
    for (VertexId c : g.neighbours(a)) {
      if (c != b && g.adjacent(c, b)) common.push_back(c);
    }
    bool bad = false;
    for (std::size_t i = 0; i < common.size() && !bad; ++i) {
      for (std::size_t j = i + 1; j < common.size() && !bad; ++j) {
        bad = !g.adjacent(common[i], common[j]);
      }
    }
    if (bad) {
      ++rep.k4_minus;
      note("induced K4- on edge " + std::to_string(a) + "-" + std::to_string(b));
    }
  }
  for (VertexId a = 0; a < g.size(); ++a) {
    std::map<VertexId, std::vector<VertexId>> via;
    for (VertexId m : g.neighbours(a)) {
      for (VertexId c : g.neighbours(m)) {
        if (c > a && !g.adjacent(a, c)) via[c].push_back(m);
      }
    }
    for (const auto& [c, mids] : via) {
      if (mids.size() < 3) continue;
      std::vector<std::uint32_t> items(mids.begin(), mids.end());
      const auto k = max_clique(items, [&g](std::uint32_t x, std::uint32_t y) {
        return !g.adjacent(x, y);
      });
      if (k >= 3) {
        ++rep.k32;
        note("induced K3,2 at " + std::to_string(a) + "," + std::to_string(c));
      }
    }
  }

  // Clique registry: complete cliques are maximal complete subgraphs and
  // own exactly their edges.
  for (std::uint32_t c = 0; c < q.cliques().size(); ++c) {
    const auto& cl = q.cliques()[c];
    const auto& m = cl.members;
    for (std::size_t i = 0; i < m.size(); ++i) {
      for (std::size_t j = i + 1; j < m.size(); ++j) {
        if (!g.adjacent(m[i], m[j]) || q.edge_clique(m[i], m[j]) != c) ++rep.clique_violations;
      }
    }
    if (cl.complete && m.size() >= 2) {
      for (VertexId x : g.neighbours(m[0])) {
        if (std::binary_search(m.begin(), m.end(), x)) continue;
        bool all = true;
        for (auto y : m) all = all && g.adjacent(x, y);
        if (all) {
          ++rep.clique_violations;
          note("clique " + std::to_string(c) + " is not maximal");
        }
      }
    }
  }

  const auto transverse = transverse_pairs(q);
  const auto is_transverse = [&transverse](std::uint32_t a, std::uint32_t b) {
    if (a > b) std::swap(a, b);
    return transverse.count({a, b}) > 0;
  };

  // Prisms: cosets x<Lambda> present in full must be products of cliques.
  const std::uint32_t dim = gp.clique_number();
  for (VertexId x = 0; x < g.size(); ++x) {
    for (const auto& lam : gp.complete_subgraphs()) {
      if (gp.coset_min(q.element(x), lam) != q.element(x)) continue;
      std::vector<std::vector<GroupElement>> coords{{}};
      for (auto u : lam) {
        std::vector<std::vector<GroupElement>> next;
        for (const auto& c : coords) {
          for (GroupElement e = 0; e < gp.group(u).order(); ++e) {
            auto t = c;
            t.push_back(e);
            next.push_back(std::move(t));
          }
        }
        coords = std::move(next);
      }
      std::vector<VertexId> verts;
      for (const auto& c : coords) {
        NormalForm w = q.element(x);
        for (std::size_t i = 0; i < lam.size(); ++i) w = gp.multiply(w, {lam[i], c[i]});
        auto v = q.find(w);
        if (!v) break;
        verts.push_back(*v);
      }
      if (verts.size() != coords.size()) continue;
      rep.max_prism_dimension = std::max(rep.max_prism_dimension, static_cast<std::uint32_t>(lam.size()));
      for (std::size_t i = 0; i < verts.size(); ++i) {
        for (std::size_t j = i + 1; j < verts.size(); ++j) {
          std::size_t differ = 0;
          for (std::size_t t = 0; t < lam.size(); ++t) differ += coords[i][t] != coords[j][t];
          if (g.adjacent(verts[i], verts[j]) != (differ == 1)) ++rep.prism_violations;
        }
      }
    }
    if (gp.complete_subgraphs().empty()) break;
  }
  if (rep.max_prism_dimension > dim) ++rep.prism_violations;
  // Graph side: pairwise transverse hyperplanes through one vertex.
  for (VertexId x = 0; x < g.size() && gp.vertex_count() <= 20; ++x) {
    std::vector<std::uint32_t> hs;
    for (VertexId y : g.neighbours(x)) hs.push_back(q.edge_hyperplane(x, y));
    std::sort(hs.begin(), hs.end());
    hs.erase(std::unique(hs.begin(), hs.end()), hs.end());
    if (max_clique(hs, is_transverse) > dim) {
      ++rep.prism_violations;
      note("more than clique(Gamma) transverse hyperplanes at " + std::to_string(x));
    }
  }

  // Pairwise checks over the trusted core.
  const auto core = pair_core(q, 160);
  std::vector<std::size_t> sector_ok;
  for (std::size_t i = 0; i < core.size(); ++i) {
    const VertexId x = core[i];
    const auto dist = bfs_distances(g, x);
    for (std::size_t j = i + 1; j < core.size(); ++j) {
      const VertexId y = core[j];
      if (!q.trusted_pair(x, y)) continue;
      ++rep.trusted_pairs;
      const auto sep = separating_hyperplanes(q, x, y);
      if (dist[y] != sep.size()) {
        ++rep.distance_violations;
        note("d(" + std::to_string(x) + "," + std::to_string(y) + ") = " + std::to_string(dist[y]) +
             " but " + std::to_string(sep.size()) + " separating hyperplanes");
      }
      if (sep.size() <= 20) {
        const auto chain = max_clique(sep, [&](std::uint32_t a, std::uint32_t b) {
          return !is_transverse(a, b);
        });
        if (dist[y] > dim * chain) ++rep.cubdist_violations;
      }
      if (dist[y] > max_geodesic) continue;
      // Every geodesic from y back to x, walking down x's BFS layers.
      std::vector<VertexId> path{y};
      std::size_t budget = 20000;
      std::function<void(VertexId)> walk = [&](VertexId v) {
        if (budget == 0) return;
        if (v == x) {
          --budget;
          ++rep.geodesics;
          std::vector<std::uint32_t> hs;
          for (std::size_t t = 0; t + 1 < path.size(); ++t) {
            hs.push_back(q.edge_hyperplane(path[t], path[t + 1]));
          }
          std::sort(hs.begin(), hs.end());
          if (std::adjacent_find(hs.begin(), hs.end()) != hs.end()) {
            ++rep.crossing_violations;
            note("geodesic crossing a hyperplane twice between " + std::to_string(x) + " and " +
                 std::to_string(y));
          }
          return;
        }
        for (VertexId u : g.neighbours(v)) {
          if (dist[u] + 1 != dist[v]) continue;
          path.push_back(u);
          walk(u);
          path.pop_back();
        }
      };
      walk(y);
    }
  }

  // Window sectors against sector labels on the trusted core.
  std::vector<bool> in_core(g.size(), false);
  for (auto v : core) in_core[v] = true;
  for (std::uint32_t h = 0; h < q.hyperplanes().size() && g.size() <= 20000; ++h) {
    const auto comp = cut_components(q, h, nullptr);
    std::map<std::size_t, GroupElement> label_of;
    std::map<GroupElement, std::size_t> comp_of;
    for (auto v : core) {
      if (!q.exhaustive() && 2 * q.norm(v) > q.radius()) continue;
      const auto lab = q.sector_label(h, v);
      auto [a, fa] = label_of.emplace(comp[v], lab);
      auto [b, fb] = comp_of.emplace(lab, comp[v]);
      if ((!fa && a->second != lab) || (!fb && b->second != comp[v])) {
        ++rep.sector_mismatches;
        note("sector labels disagree with window sectors for hyperplane " + std::to_string(h));
        break;
      }
    }
  }
  return rep;
}

MetricRoutes metric_routes(const QMWindow& q, VertexId x, VertexId y) {
  const GraphProduct& gp = q.product();
  const GraphWindow& g = q.graph();
  MetricRoutes out;
  out.algebraic = gp.weighted_length(gp.multiply(gp.inverse(q.element(x)), q.element(y)));

  const auto dist = bfs_distances(g, y);
  if (dist[x] == kInfinity) throw Error(ErrorCode::kInternal, "QM window is disconnected");
  VertexId v = x;
  while (v != y) {
    for (VertexId u : g.neighbours(v)) {
      if (dist[u] + 1 == dist[v]) {
        out.broken_geodesic += q.clique_metric(q.edge_clique(v, u), v, u);
        v = u;
        break;
      }
    }
  }

  std::uint64_t total = 0;
  for (auto h : separating_hyperplanes(q, x, y)) {
    std::optional<std::uint64_t> part;
    for (auto c : q.hyperplanes()[h].cliques) {
      const auto& cl = q.cliques()[c];
      if (!cl.complete) continue;
      bool exact = q.exhaustive();
      if (!exact) {
        std::uint32_t top = 0;
        for (auto m : cl.members) top = std::max(top, q.norm(m));
        exact = static_cast<std::uint64_t>(std::max(q.norm(x), q.norm(y))) + top <= q.radius();
      }
      if (!exact) continue;
      const auto px = gate(g, cl.members, x);
      const auto py = gate(g, cl.members, y);
      if (!px || !py) throw Error(ErrorCode::kInternal, "clique projection is not unique");
      part = q.clique_metric(c, *px, *py);
      break;
    }
    if (!part) return out;
    total += *part;
  }
  out.projections = total;
  return out;
}

MetricReport check_metrics(const QMWindow& q) {
  const GraphWindow& g = q.graph();
  MetricReport rep;
  // Coherence: gate maps between complete cliques of one hyperplane.
  for (const auto& hp : q.hyperplanes()) {
    std::vector<std::uint32_t> usable;
    for (auto c : hp.cliques) {
      const auto& cl = q.cliques()[c];
      if (!cl.complete) continue;
      std::uint32_t top = 0;
      for (auto m : cl.members) top = std::max(top, q.norm(m));
      if (q.exhaustive() || 2 * top <= q.radius()) usable.push_back(c);
    }
    for (std::size_t i = 0; i < usable.size() && rep.coherence_checked < 20000; ++i) {
      for (std::size_t j = 0; j < usable.size(); ++j) {
        if (i == j) continue;
        const auto& a = q.cliques()[usable[i]];
        const auto& b = q.cliques()[usable[j]];
        ++rep.coherence_checked;
        std::vector<VertexId> image;
        for (auto m : a.members) {
          auto p = gate(g, b.members, m);
          if (!p) break;
          image.push_back(*p);
        }
        bool ok = image.size() == a.members.size();
        for (std::size_t s = 0; ok && s < image.size(); ++s) {
          for (std::size_t t = s + 1; ok && t < image.size(); ++t) {
            ok = q.clique_metric(usable[j], image[s], image[t]) ==
                 q.clique_metric(usable[i], a.members[s], a.members[t]);
          }
        }
        if (!ok) ++rep.coherence_violations;
      }
    }
  }
  const auto core = pair_core(q, 60);
  for (std::size_t i = 0; i < core.size(); ++i) {
    const auto dist = bfs_distances(g, core[i]);
    for (std::size_t j = i + 1; j < core.size(); ++j) {
      if (!q.trusted_pair(core[i], core[j])) continue;
      ++rep.pairs;
      const auto routes = metric_routes(q, core[i], core[j]);
      if (routes.broken_geodesic != routes.algebraic ||
          (routes.projections && *routes.projections != routes.algebraic)) {
        ++rep.route_mismatches;
      }
      if (routes.algebraic < dist[core[j]]) ++rep.below_graph_metric;
    }
  }
  return rep;
}

PCEdgeKind PCWindow::kind(VertexId a, VertexId b) const {
  if (a > b) std::swap(a, b);
  auto it = kinds.find((static_cast<std::uint64_t>(a) << 32) | b);
  if (it == kinds.end()) throw Error(ErrorCode::kInvalidArgument, "not a PC edge");
  return it->second;
}

std::optional<VertexId> PCWindow::find(std::uint32_t clique, VertexId p) const {
  auto it = index.find({clique, p});
  if (it == index.end()) return std::nullopt;
  return it->second;
}

PCWindow pc_build(const QMWindow& q, std::uint32_t base_vertex) {
  const GraphProduct& gp = q.product();
  PCWindow pc;
  std::vector<Label> labels;
  for (std::uint32_t c = 0; c < q.cliques().size(); ++c) {
    const auto& cl = q.cliques()[c];
    if (!cl.complete) continue;
    for (auto p : cl.members) {
      pc.index.emplace(std::make_pair(c, p), static_cast<VertexId>(pc.pointed.size()));
      pc.pointed.emplace_back(c, p);
      Label l{static_cast<std::int64_t>(cl.vertex)};
      const Label lp = gp.label(q.element(p));
      l.insert(l.end(), lp.begin(), lp.end());
      labels.push_back(std::move(l));
    }
  }
  const auto base_clique = q.clique_at(base_vertex, 0);
  if (!base_clique || !q.cliques()[*base_clique].complete) {
    throw Error(ErrorCode::kUntrusted, "basepoint clique is not complete in the window");
  }
  const VertexId base = pc.index.at({*base_clique, 0});

  std::vector<Edge> edges;
  const auto add = [&](VertexId a, VertexId b, PCEdgeKind k) {
    if (a > b) std::swap(a, b);
    if (pc.kinds.emplace((static_cast<std::uint64_t>(a) << 32) | b, k).second) edges.emplace_back(a, b);
  };
  for (std::uint32_t c = 0; c < q.cliques().size(); ++c) {
    const auto& cl = q.cliques()[c];
    if (!cl.complete) continue;
    for (std::size_t i = 0; i < cl.members.size(); ++i) {
      for (std::size_t j = i + 1; j < cl.members.size(); ++j) {
        if (q.clique_metric(c, cl.members[i], cl.members[j]) == 1) {
          add(pc.index.at({c, cl.members[i]}), pc.index.at({c, cl.members[j]}), PCEdgeKind::kSlide);
        }
      }
    }
  }
  for (VertexId p = 0; p < q.graph().size(); ++p) {
    for (const auto& [u, v] : gp.edges()) {
      const auto cu = q.clique_at(u, p);
      const auto cv = q.clique_at(v, p);
      if (!cu || !cv || !q.cliques()[*cu].complete || !q.cliques()[*cv].complete) continue;
      add(pc.index.at({*cu, p}), pc.index.at({*cv, p}), PCEdgeKind::kRotation);
    }
  }
  pc.graph = GraphWindow(std::move(labels), std::move(edges),
                         q.exhaustive() ? kInfinity : q.radius(), base);
  return pc;
}

std::vector<GroupElement> fibre_labels(const QMWindow& q, std::uint32_t h) {
  std::set<GroupElement> out;
  for (auto c : q.hyperplanes()[h].cliques) {
    for (auto m : q.cliques()[c].members) out.insert(q.sector_label(h, m));
  }
  return {out.begin(), out.end()};
}

namespace {

Bulkhead bulkhead_from_labels(const QMWindow& q, const PCWindow& pc, std::uint32_t h,
                              GroupElement fibre, const std::vector<GroupElement>& label) {
  Bulkhead out;
  out.hyperplane = h;
  out.fibre = fibre;
  std::vector<VertexId> bulk, in, outside;
  for (VertexId v = 0; v < pc.pointed.size(); ++v) {
    const auto [c, p] = pc.pointed[v];
    const bool inside = label[p] == fibre;
    if (q.cliques()[c].hyperplane == h) {
      (inside ? bulk : outside).push_back(v);
    } else {
      (inside ? in : outside).push_back(v);
    }
  }
  const bool trusted = q.hyperplanes()[h].trusted;
  out.bulkhead = VertexSet(pc.graph, std::move(bulk), trusted);
  out.zone_in = VertexSet(pc.graph, std::move(in), trusted);
  out.zone_out = VertexSet(pc.graph, std::move(outside), trusted);

  // Search from the first zone avoiding the bulkhead.
  const GraphWindow& g = pc.graph;
  std::vector<bool> seen(g.size(), false);
  for (auto v : out.bulkhead) seen[v] = true;
  std::deque<VertexId> queue;
  for (auto v : out.zone_in) {
    seen[v] = true;
    queue.push_back(v);
  }
  while (!queue.empty()) {
    const VertexId v = queue.front();
    queue.pop_front();
    for (VertexId u : g.neighbours(v)) {
      if (!seen[u]) {
        seen[u] = true;
        queue.push_back(u);
      }
    }
  }
  out.separates = std::none_of(out.zone_out.begin(), out.zone_out.end(),
                               [&seen](VertexId v) { return seen[v]; });
  return out;
}

std::vector<GroupElement> sector_labels(const QMWindow& q, std::uint32_t h) {
  std::vector<GroupElement> label(q.graph().size());
  for (VertexId v = 0; v < label.size(); ++v) label[v] = q.sector_label(h, v);
  return label;
}

}  // namespace

Bulkhead bulkhead(const QMWindow& q, const PCWindow& pc, std::uint32_t h, GroupElement fibre) {
  if (h >= q.hyperplanes().size()) {
    throw Error(ErrorCode::kInvalidArgument, "unknown hyperplane " + std::to_string(h));
  }
  return bulkhead_from_labels(q, pc, h, fibre, sector_labels(q, h));
}

PCBoundsCheck pc_distance_bounds(const QMWindow& q, const PCWindow& pc, VertexId a, VertexId b) {
  const GraphProduct& gp = q.product();
  const auto [ca, pa] = pc.pointed.at(a);
  const auto [cb, pb] = pc.pointed.at(b);
  PCBoundsCheck out;
  out.delta = gp.weighted_length(gp.multiply(gp.inverse(q.element(pa)), q.element(pb)));
  const auto dist = bfs_distances(pc.graph, a);
  out.d_pc = dist[b];
  out.same_hyperplane = q.cliques()[ca].hyperplane == q.cliques()[cb].hyperplane;
  // A PC path of length t from (A, a) only marks vertices of norm <= |a| + t,
  // and pointed cliques marked below the rim are all present.
  const auto reach = [&](std::uint64_t t) {
    return q.exhaustive() || q.norm(pa) + t + 1 <= q.radius();
  };
  out.exact = out.d_pc != kInfinity && reach(out.d_pc);
  if (out.exact) out.lower_ok = out.delta <= out.d_pc;
  if (out.same_hyperplane && (out.exact || reach(3 * out.delta + 1))) {
    out.upper_ok = out.d_pc != kInfinity && out.d_pc <= 3 * out.delta + 1;
  }
  return out;
}

PCReport check_pc(const QMWindow& q, const PCWindow& pc) {
  PCReport rep;
  rep.pc_vertices = pc.graph.size();
  const GraphProduct& gp = q.product();
  std::vector<VertexId> sources;
  for (VertexId v = 0; v < pc.graph.size() && sources.size() < 400; ++v) {
    if (q.exhaustive() || q.norm(pc.pointed[v].second) + 1 < q.radius()) sources.push_back(v);
  }
  for (auto a : sources) {
    const auto dist = bfs_distances(pc.graph, a);
    const VertexId pa = pc.pointed[a].second;
    const auto inv = gp.inverse(q.element(pa));
    for (VertexId b = 0; b < pc.graph.size(); ++b) {
      const auto [cb, pb] = pc.pointed[b];
      const std::uint64_t delta = gp.weighted_length(gp.multiply(inv, q.element(pb)));
      const auto reach = [&](std::uint64_t t) {
        return q.exhaustive() || q.norm(pa) + t + 1 <= q.radius();
      };
      const bool exact = dist[b] != kInfinity && reach(dist[b]);
      if (exact) {
        ++rep.lower_checked;
        if (delta > dist[b]) ++rep.lower_violations;
      }
      if (q.cliques()[pc.pointed[a].first].hyperplane == q.cliques()[cb].hyperplane &&
          (exact || reach(3 * delta + 1))) {
        ++rep.upper_checked;
        if (dist[b] == kInfinity || dist[b] > 3 * delta + 1) ++rep.upper_violations;
      }
    }
  }
  for (std::uint32_t h = 0; h < q.hyperplanes().size(); ++h) {
    if (!q.hyperplanes()[h].trusted) continue;
    const auto label = sector_labels(q, h);
    for (auto f : fibre_labels(q, h)) {
      ++rep.bulkheads;
      if (!bulkhead_from_labels(q, pc, h, f, label).separates) ++rep.bulkhead_violations;
    }
  }
  return rep;
}

}  // namespace coarse
