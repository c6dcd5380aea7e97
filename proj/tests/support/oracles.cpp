#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

namespace oracle {

using coarse::kInfinity;

DistanceMatrix all_pairs(const GraphWindow& w) {
  const std::size_t n = w.size();
  DistanceMatrix d(n, std::vector<std::uint32_t>(n, kInfinity));
  for (std::size_t i = 0; i < n; ++i) d[i][i] = 0;
  for (const auto& [a, b] : w.edges()) d[a][b] = d[b][a] = 1;
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      if (d[i][k] == kInfinity) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (d[k][j] == kInfinity) continue;
        d[i][j] = std::min(d[i][j], d[i][k] + d[k][j]);
      }
    }
  }
  return d;
}

std::vector<std::size_t> component_sizes(const DistanceMatrix& d, const std::vector<VertexId>& points,
                                         std::uint32_t r) {
  const std::size_t n = points.size();
  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (d[points[i]][points[j]] <= r) parent[find(i)] = find(j);
    }
  }
  std::vector<std::size_t> count(n, 0);
  for (std::size_t i = 0; i < n; ++i) ++count[find(i)];
  std::vector<std::size_t> out;
  for (auto c : count) {
    if (c) out.push_back(c);
  }
  return out;
}

std::size_t cut(const GraphWindow& w, const std::vector<VertexId>& a, std::uint32_t r,
                const Rational& delta) {
  const auto d = all_pairs(w);
  const std::size_t n = a.size();
  const Rational cap = delta * static_cast<std::int64_t>(n);
  std::size_t best = n;
  for (std::uint64_t mask = 0; mask < (1ull << n); ++mask) {
    const auto s = static_cast<std::size_t>(__builtin_popcountll(mask));
    if (s >= best) continue;
    std::vector<VertexId> rest;
    for (std::size_t i = 0; i < n; ++i) {
      if (!(mask >> i & 1)) rest.push_back(a[i]);
    }
    const auto sizes = component_sizes(d, rest, r);
    if (std::all_of(sizes.begin(), sizes.end(),
                    [&](std::size_t c) { return Rational(static_cast<std::int64_t>(c)) <= cap; })) {
      best = s;
    }
  }
  return best;
}

Rational cheeger(const GraphWindow& w, const std::vector<VertexId>& a, std::uint32_t r) {
  const auto d = all_pairs(w);
  const std::size_t n = a.size();
  std::optional<Rational> best;
  for (std::uint64_t mask = 1; mask < (1ull << n); ++mask) {
    const auto b = static_cast<std::size_t>(__builtin_popcountll(mask));
    if (2 * b > n) continue;
    std::int64_t boundary = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask >> i & 1) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if ((mask >> j & 1) && d[a[i]][a[j]] <= r) {
          ++boundary;
          break;
        }
      }
    }
    const Rational ratio(boundary, static_cast<std::int64_t>(b));
    if (!best || ratio < *best) best = ratio;
  }
  return best.value_or(Rational(0));
}

Rational poincare_two_level(const GraphWindow& w, const std::vector<VertexId>& a, std::uint32_t k) {
  const auto d = all_pairs(w);
  const std::size_t n = a.size();
  std::optional<Rational> best;
  for (std::uint64_t mask = 1; mask + 1 < (1ull << n); ++mask) {
    const auto b = static_cast<std::int64_t>(__builtin_popcountll(mask));
    const Rational mean(b, static_cast<std::int64_t>(n));
    std::vector<Rational> f(n);
    Rational norm = 0;
    for (std::size_t i = 0; i < n; ++i) {
      f[i] = ((mask >> i & 1) ? Rational(1) : Rational(0)) - mean;
      norm += f[i] < Rational(0) ? -f[i] : f[i];
    }
    Rational grad = 0;
    for (std::size_t x = 0; x < n; ++x) {
      Rational lo = 0, hi = 0;
      bool first = true;
      for (std::size_t y = 0; y < n; ++y) {
        if (d[a[x]][a[y]] > k) continue;
        if (first || f[y] < lo) lo = f[y];
        if (first || f[y] > hi) hi = f[y];
        first = false;
      }
      grad += hi - lo;
    }
    const Rational ratio = grad / norm;
    if (!best || ratio < *best) best = ratio;
  }
  return *best;
}

namespace {

using coarse::Syllable;

bool commutes(const coarse::GraphProduct& gp, std::uint32_t u, std::uint32_t v) {
  return u != v && gp.adjacent(u, v);
}

// One merge step: two same-vertex syllables whose in-between syllables all
// commute with that vertex. Returns false when the word is reduced.
bool merge_once(const coarse::GraphProduct& gp, std::vector<Syllable>& w) {
  for (std::size_t i = 0; i < w.size(); ++i) {
    for (std::size_t j = i + 1; j < w.size(); ++j) {
      if (w[j].vertex == w[i].vertex) {
        const auto& g = gp.group(w[i].vertex);
        const auto m = g.mul(w[i].element, w[j].element);
        w.erase(w.begin() + static_cast<std::ptrdiff_t>(j));
        if (m == g.identity()) {
          w.erase(w.begin() + static_cast<std::ptrdiff_t>(i));
        } else {
          w[i].element = m;
        }
        return true;
      }
      if (!commutes(gp, w[i].vertex, w[j].vertex)) break;
    }
  }
  return false;
}

}  // namespace

coarse::NormalForm normal_form(const coarse::GraphProduct& gp, std::vector<Syllable> word) {
  while (merge_once(gp, word)) {
  }
  // Least vertex sequence among orderings that keep every non-commuting
  // pair in its original relative order.
  const std::size_t n = word.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::optional<coarse::NormalForm> best;
  do {
    bool ok = true;
    for (std::size_t i = 0; i < n && ok; ++i) {
      for (std::size_t j = i + 1; j < n && ok; ++j) {
        if (perm[i] > perm[j] && !commutes(gp, word[perm[i]].vertex, word[perm[j]].vertex)) {
          ok = false;
        }
      }
    }
    if (!ok) continue;
    coarse::NormalForm cand;
    for (auto i : perm) cand.push_back(word[i]);
    auto key = [](const coarse::NormalForm& f) {
      std::vector<std::uint32_t> v;
      for (const auto& s : f) v.push_back(s.vertex);
      return v;
    };
    if (!best || key(cand) < key(*best)) best = cand;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return best.value_or(coarse::NormalForm{});
}

GraphWindow random_graph(std::mt19937_64& rng, std::uint32_t n, double p) {
  std::set<coarse::Edge> edges;
  for (std::uint32_t v = 1; v < n; ++v) {
    const auto u = static_cast<VertexId>(std::uniform_int_distribution<std::uint32_t>(0, v - 1)(rng));
    edges.emplace(u, v);
  }
  std::bernoulli_distribution extra(p);
  for (std::uint32_t u = 0; u < n; ++u) {
    for (std::uint32_t v = u + 1; v < n; ++v) {
      if (extra(rng)) edges.emplace(u, v);
    }
  }
  std::vector<coarse::Label> labels;
  for (std::uint32_t i = 0; i < n; ++i) labels.push_back({static_cast<std::int64_t>(i)});
  return GraphWindow(std::move(labels), {edges.begin(), edges.end()}, kInfinity, 0);
}

std::vector<VertexId> random_subset(std::mt19937_64& rng, std::uint32_t n, std::uint32_t k) {
  std::vector<VertexId> all(n);
  std::iota(all.begin(), all.end(), 0);
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(std::min(k, n));
  std::sort(all.begin(), all.end());
  return all;
}

std::vector<coarse::Syllable> random_word(std::mt19937_64& rng, const coarse::GraphProduct& gp,
                                          std::uint32_t length) {
  std::vector<coarse::Syllable> w;
  std::uniform_int_distribution<std::uint32_t> vertex(0, gp.vertex_count() - 1);
  for (std::uint32_t i = 0; i < length; ++i) {
    const auto u = vertex(rng);
    const auto order = gp.group(u).order();
    const auto e = std::uniform_int_distribution<std::uint32_t>(1, order - 1)(rng);
    w.push_back({u, e});
  }
  return w;
}

coarse::GraphProduct random_product(std::mt19937_64& rng, std::uint32_t n, double p) {
  std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
  std::bernoulli_distribution edge(p);
  for (std::uint32_t u = 0; u < n; ++u) {
    for (std::uint32_t v = u + 1; v < n; ++v) {
      if (edge(rng)) edges.emplace_back(u, v);
    }
  }
  std::vector<coarse::FiniteGroup> groups;
  for (std::uint32_t u = 0; u < n; ++u) {
    groups.push_back(coarse::FiniteGroup::cyclic(std::bernoulli_distribution(0.5)(rng) ? 2 : 3));
  }
  return coarse::GraphProduct(n, std::move(edges), std::move(groups));
}

}  // namespace oracle
