#include "coarse/graph_core.hpp"

#include <algorithm>
#include <deque>
#include <iterator>
#include <string>

#include "coarse/error.hpp"
#include "coarse/union_find.hpp"

namespace coarse {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUnknownVertex: return "unknown vertex";
    case ErrorCode::kInvalidArgument: return "invalid argument";
    case ErrorCode::kUntrusted: return "untrusted";
    case ErrorCode::kPrecondition: return "precondition violated";
    case ErrorCode::kBudgetExceeded: return "budget exceeded";
    case ErrorCode::kNotAGroup: return "not a group";
    case ErrorCode::kFormat: return "format error";
    case ErrorCode::kHashMismatch: return "hash mismatch";
    case ErrorCode::kRegistry: return "registry error";
    case ErrorCode::kInternal: return "internal error";
  }
  return "error";
}

GraphWindow::GraphWindow(std::vector<Label> labels, std::vector<Edge> edges,
                         std::uint32_t trusted_radius, VertexId basepoint)
    : labels_(std::move(labels)),
      trusted_radius_(trusted_radius),
      basepoint_(basepoint) {
  const std::size_t n = labels_.size();
  if (n > 0 && basepoint >= n) {
    throw Error(ErrorCode::kUnknownVertex, "basepoint out of range");
  }
  for (VertexId v = 0; v < n; ++v) {
    auto [it, inserted] = index_.emplace(labels_[v], v);
    if (!inserted) {
      throw Error(ErrorCode::kInvalidArgument,
                  "duplicate vertex label at id " + std::to_string(v));
    }
  }
  for (auto& e : edges) {
    if (e.first >= n || e.second >= n) {
      throw Error(ErrorCode::kUnknownVertex, "edge endpoint out of range");
    }
    if (e.first == e.second) {
      throw Error(ErrorCode::kInvalidArgument, "self-loop");
    }
    if (e.first > e.second) std::swap(e.first, e.second);
  }
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

  std::vector<std::size_t> deg(n, 0);
  for (const auto& [a, b] : edges) {
    ++deg[a];
    ++deg[b];
  }
  offsets_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) offsets_[v + 1] = offsets_[v] + deg[v];
  adjacency_.resize(offsets_[n]);
  std::vector<std::size_t> fill(offsets_.begin(), offsets_.end() - 1);
  for (const auto& [a, b] : edges) {
    adjacency_[fill[a]++] = b;
    adjacency_[fill[b]++] = a;
  }
  for (std::size_t v = 0; v < n; ++v) {
    std::sort(adjacency_.begin() + offsets_[v], adjacency_.begin() + offsets_[v + 1]);
  }
  if (n > 0) {
    depth_ = bfs_distances(*this, basepoint_);
  }
}

bool GraphWindow::adjacent(VertexId a, VertexId b) const {
  auto nb = neighbours(a);
  return std::binary_search(nb.begin(), nb.end(), b);
}

std::optional<VertexId> GraphWindow::find(const Label& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

VertexId GraphWindow::at(const Label& label) const {
  auto v = find(label);
  if (!v) {
    std::string text;
    for (auto x : label) text += " " + std::to_string(x);
    throw Error(ErrorCode::kUnknownVertex, "no vertex with label" + text);
  }
  return *v;
}

bool GraphWindow::trusted_at(VertexId x, std::uint32_t r) const {
  if (complete()) return true;
  const std::uint32_t d = depth_[x];
  if (d == kInfinity || r == kInfinity) return false;
  return static_cast<std::uint64_t>(d) + r <= trusted_radius_;
}

void GraphWindow::require(VertexId v) const {
  if (!contains(v)) {
    throw Error(ErrorCode::kUnknownVertex, "vertex id " + std::to_string(v));
  }
}

std::vector<Edge> GraphWindow::edges() const {
  std::vector<Edge> out;
  out.reserve(edge_count());
  for (VertexId v = 0; v < size(); ++v) {
    for (VertexId u : neighbours(v)) {
      if (v < u) out.emplace_back(v, u);
    }
  }
  return out;
}

VertexSet::VertexSet(const GraphWindow& window, std::vector<VertexId> members,
                     bool trusted)
    : window_(&window), members_(std::move(members)), trusted_(trusted) {
  std::sort(members_.begin(), members_.end());
  members_.erase(std::unique(members_.begin(), members_.end()), members_.end());
  if (!members_.empty()) window.require(members_.back());
}

bool VertexSet::contains(VertexId v) const {
  return std::binary_search(members_.begin(), members_.end(), v);
}

std::optional<std::size_t> VertexSet::index_of(VertexId v) const {
  auto it = std::lower_bound(members_.begin(), members_.end(), v);
  if (it == members_.end() || *it != v) return std::nullopt;
  return static_cast<std::size_t>(it - members_.begin());
}

namespace {

const GraphWindow& common_window(const VertexSet& a, const VertexSet& b) {
  if (!a.has_window()) return b.window();
  if (b.has_window() && &a.window() != &b.window()) {
    throw Error(ErrorCode::kInvalidArgument, "vertex sets from different windows");
  }
  return a.window();
}

template <typename Op>
VertexSet combine(const VertexSet& a, const VertexSet& b, Op op) {
  const GraphWindow& w = common_window(a, b);
  std::vector<VertexId> out;
  op(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return VertexSet(w, std::move(out), a.trusted() && b.trusted());
}

}  // namespace

VertexSet set_union(const VertexSet& a, const VertexSet& b) {
  return combine(a, b, [](auto... args) { return std::set_union(args...); });
}

VertexSet set_intersection(const VertexSet& a, const VertexSet& b) {
  return combine(a, b, [](auto... args) { return std::set_intersection(args...); });
}

VertexSet set_difference(const VertexSet& a, const VertexSet& b) {
  return combine(a, b, [](auto... args) { return std::set_difference(args...); });
}

bool is_subset(const VertexSet& inner, const VertexSet& outer) {
  return std::includes(outer.begin(), outer.end(), inner.begin(), inner.end());
}

std::size_t intersection_size(const VertexSet& a, const VertexSet& b) {
  std::size_t count = 0;
  auto i = a.begin();
  auto j = b.begin();
  while (i != a.end() && j != b.end()) {
    if (*i < *j) {
      ++i;
    } else if (*j < *i) {
      ++j;
    } else {
      ++count;
      ++i;
      ++j;
    }
  }
  return count;
}

VertexSet whole_window(const GraphWindow& w) {
  std::vector<VertexId> all(w.size());
  for (VertexId v = 0; v < w.size(); ++v) all[v] = v;
  return VertexSet(w, std::move(all));
}

const std::vector<VertexId>& BoundedBfs::run(VertexId src, std::uint32_t limit) {
  const VertexId one[] = {src};
  return run(one, limit);
}

const std::vector<VertexId>& BoundedBfs::run(std::span<const VertexId> sources,
                                             std::uint32_t limit) {
  for (VertexId v : order_) dist_[v] = kInfinity;
  order_.clear();
  for (VertexId s : sources) {
    w_->require(s);
    if (dist_[s] != 0) {
      dist_[s] = 0;
      order_.push_back(s);
    }
  }
  for (std::size_t i = 0; i < order_.size(); ++i) {
    const VertexId v = order_[i];
    if (dist_[v] >= limit) continue;
    for (VertexId u : w_->neighbours(v)) {
      if (dist_[u] == kInfinity) {
        dist_[u] = dist_[v] + 1;
        order_.push_back(u);
      }
    }
  }
  return order_;
}

std::vector<std::uint32_t> bfs_distances(const GraphWindow& w, VertexId src) {
  w.require(src);
  const VertexId sources[] = {src};
  return bfs_distances(w, sources);
}

std::vector<std::uint32_t> bfs_distances(const GraphWindow& w,
                                         std::span<const VertexId> sources,
                                         std::uint32_t max_depth) {
  std::vector<std::uint32_t> dist(w.size(), kInfinity);
  std::deque<VertexId> queue;
  for (VertexId s : sources) {
    w.require(s);
    if (dist[s] != 0) {
      dist[s] = 0;
      queue.push_back(s);
    }
  }
  while (!queue.empty()) {
    VertexId v = queue.front();
    queue.pop_front();
    if (dist[v] >= max_depth) continue;
    for (VertexId u : w.neighbours(v)) {
      if (dist[u] == kInfinity) {
        dist[u] = dist[v] + 1;
        queue.push_back(u);
      }
    }
  }
  return dist;
}

namespace {

VertexSet layer_set(const GraphWindow& w, VertexId x, std::uint32_t r, bool exact_layer) {
  w.require(x);
  BoundedBfs bfs(w);
  std::vector<VertexId> out;
  for (VertexId v : bfs.run(x, r)) {
    if (!exact_layer || bfs.dist(v) == r) out.push_back(v);
  }
  return VertexSet(w, std::move(out), w.trusted_at(x, r));
}

bool all_trusted_at(const VertexSet& a, std::uint32_t r) {
  if (!a.trusted()) return false;
  const GraphWindow& w = a.window();
  return std::all_of(a.begin(), a.end(), [&](VertexId v) { return w.trusted_at(v, r); });
}

}  // namespace

VertexSet ball(const GraphWindow& w, VertexId x, std::uint32_t r) {
  return layer_set(w, x, r, false);
}

VertexSet sphere(const GraphWindow& w, VertexId x, std::uint32_t r) {
  return layer_set(w, x, r, true);
}

VertexSet neighbourhood(const VertexSet& a, std::uint32_t alpha) {
  BoundedBfs bfs(a.window());
  std::vector<VertexId> out = bfs.run(a.members(), alpha);
  return VertexSet(a.window(), std::move(out), all_trusted_at(a, alpha));
}

VertexSet r_boundary(const VertexSet& b, std::uint32_t r) {
  if (b.empty()) return b;
  return set_difference(neighbourhood(b, r), b);
}

std::vector<std::vector<std::uint32_t>> proximity_graph(const VertexSet& a,
                                                        std::uint32_t r) {
  std::vector<std::vector<std::uint32_t>> rows(a.size());
  BoundedBfs bfs(a.window());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (VertexId v : bfs.run(a[i], r)) {
      if (v == a[i]) continue;
      if (auto j = a.index_of(v)) rows[i].push_back(static_cast<std::uint32_t>(*j));
    }
    std::sort(rows[i].begin(), rows[i].end());
  }
  return rows;
}

std::vector<VertexSet> k_components(const VertexSet& a, std::uint32_t k) {
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "k_components requires k >= 1");
  const auto rows = proximity_graph(a, k);
  UnionFind uf(a.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (auto j : rows[i]) uf.unite(i, j);
  }
  std::map<std::size_t, std::vector<VertexId>> classes;
  for (std::size_t i = 0; i < a.size(); ++i) classes[uf.find(i)].push_back(a[i]);
  const bool trusted = all_trusted_at(a, k);
  std::vector<VertexSet> out;
  out.reserve(classes.size());
  for (auto& [root, members] : classes) {
    out.emplace_back(a.window(), std::move(members), trusted);
  }
  std::sort(out.begin(), out.end(),
            [](const VertexSet& x, const VertexSet& y) { return x[0] < y[0]; });
  return out;
}

namespace {

std::uint32_t max_radius(std::span<const std::uint32_t> radii) {
  if (radii.empty()) throw Error(ErrorCode::kInvalidArgument, "empty radius list");
  return *std::max_element(radii.begin(), radii.end());
}

// Folds sup_src |B(src, r) cap S| (S = everything when `s` is null) into
// `values` for every requested radius.
void fold_growth(const GraphWindow& w, std::span<const VertexId> sources, const VertexSet* s,
                 std::span<const std::uint32_t> radii, std::vector<std::uint64_t>& values,
                 bool& trusted) {
  const std::uint32_t rmax = max_radius(radii);
  BoundedBfs bfs(w);
  std::vector<std::uint64_t> per_layer(rmax + 1);
  for (VertexId src : sources) {
    std::fill(per_layer.begin(), per_layer.end(), 0);
    for (VertexId v : bfs.run(src, rmax)) {
      if (s == nullptr || s->contains(v)) ++per_layer[bfs.dist(v)];
    }
    for (std::uint32_t d = 1; d <= rmax; ++d) per_layer[d] += per_layer[d - 1];
    for (std::size_t i = 0; i < radii.size(); ++i) {
      values[i] = std::max(values[i], per_layer[radii[i]]);
    }
    if (!w.trusted_at(src, rmax)) trusted = false;
  }
}

}  // namespace

GrowthTable growth(const VertexSet& s, std::span<const std::uint32_t> radii) {
  if (s.empty()) throw Error(ErrorCode::kInvalidArgument, "growth of an empty set");
  GrowthTable table;
  table.radii.assign(radii.begin(), radii.end());
  table.values.assign(radii.size(), 0);
  fold_growth(s.window(), s.members(), &s, radii, table.values, table.trusted);
  table.trusted = table.trusted && s.trusted();
  return table;
}

GrowthTable family_growth(std::span<const VertexSet> family,
                          std::span<const std::uint32_t> radii) {
  GrowthTable table;
  table.radii.assign(radii.begin(), radii.end());
  table.values.assign(radii.size(), 0);
  bool any = false;
  for (const auto& s : family) {
    if (s.empty()) continue;
    any = true;
    fold_growth(s.window(), s.members(), &s, radii, table.values, table.trusted);
    table.trusted = table.trusted && s.trusted();
  }
  if (!any) throw Error(ErrorCode::kInvalidArgument, "family growth of empty sets");
  return table;
}

GrowthTable ambient_growth(const GraphWindow& w, std::span<const std::uint32_t> radii) {
  if (w.size() == 0) throw Error(ErrorCode::kInvalidArgument, "empty window");
  GrowthTable table;
  table.radii.assign(radii.begin(), radii.end());
  table.values.assign(radii.size(), 0);
  const std::uint32_t rmax = max_radius(radii);
  std::vector<VertexId> probes;
  for (VertexId v = 0; v < w.size(); ++v) {
    if (w.trusted_at(v, rmax)) probes.push_back(v);
  }
  bool trusted = true;
  if (probes.empty()) {
    probes.resize(w.size());
    for (VertexId v = 0; v < w.size(); ++v) probes[v] = v;
  }
  fold_growth(w, probes, nullptr, radii, table.values, trusted);
  table.trusted = trusted;
  return table;
}

std::uint64_t ambient_growth_at(const GraphWindow& w, std::uint32_t r) {
  const std::uint32_t radii[] = {r};
  return ambient_growth(w, radii).values.front();
}

}  // namespace coarse
