#include "coarse/invariants.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>

#include "coarse/error.hpp"

namespace coarse {

const char* to_string(InvariantKind kind) {
  switch (kind) {
    case InvariantKind::kCheeger: return "cheeger";
    case InvariantKind::kCut: return "cut";
    case InvariantKind::kPoincare: return "poincare";
  }
  return "?";
}

const char* to_string(Method method) {
  switch (method) {
    case Method::kExhaustive: return "exhaustive";
    case Method::kBranchAndBound: return "branch_and_bound";
    case Method::kSweep: return "sweep";
    case Method::kSampled: return "sampled";
  }
  return "?";
}

namespace {

bool all_trusted(const VertexSet& a, std::uint32_t r) {
  if (!a.trusted()) return false;
  return std::all_of(a.begin(), a.end(),
                     [&](VertexId v) { return a.window().trusted_at(v, r); });
}

VertexSet subset_of(const VertexSet& a, const std::vector<std::uint32_t>& indices) {
  std::vector<VertexId> out;
  out.reserve(indices.size());
  for (auto i : indices) out.push_back(a[i]);
  return VertexSet(a.window(), std::move(out), a.trusted());
}

// ---------------------------------------------------------------- Cheeger

struct CheegerBest {
  std::uint64_t boundary = 1;
  std::uint64_t size = 0;  // 0 means nothing found yet
  std::vector<std::uint32_t> members;

  bool improves(std::uint64_t b, std::uint64_t s) const {
    return size == 0 || b * size < boundary * s;
  }
};

void cheeger_exhaustive(const std::vector<std::uint64_t>& nbr, std::size_t half,
                        CheegerBest& best, std::uint64_t& nodes) {
  const std::size_t n = nbr.size();
  std::vector<std::uint32_t> stack;
  // Preorder DFS with increasing indices visits subsets in lexicographic
  // order, so the first strict improvement is the lex-first minimiser.
  auto rec = [&](auto&& self, std::size_t start, std::uint64_t in, std::uint64_t near) -> void {
    for (std::size_t i = start; i < n; ++i) {
      ++nodes;
      const std::uint64_t in2 = in | (1ull << i);
      const std::uint64_t near2 = near | nbr[i];
      stack.push_back(static_cast<std::uint32_t>(i));
      const auto boundary = static_cast<std::uint64_t>(std::popcount(near2 & ~in2));
      if (best.improves(boundary, stack.size())) {
        best.boundary = boundary;
        best.size = stack.size();
        best.members = stack;
      }
      if (stack.size() < half) self(self, i + 1, in2, near2);
      stack.pop_back();
    }
  };
  rec(rec, 0, 0, 0);
}

void cheeger_sweep(const std::vector<std::vector<std::uint32_t>>& rows, std::size_t half,
                   CheegerBest& best, std::uint64_t& nodes) {
  const std::size_t n = rows.size();
  std::vector<std::size_t> seeds;
  const std::size_t count = std::min<std::size_t>(n, 64);
  for (std::size_t i = 0; i < count; ++i) seeds.push_back(i * n / count);
  for (auto seed : seeds) {
    std::vector<char> in(n, 0), near(n, 0);
    std::vector<std::uint32_t> members;
    std::uint64_t boundary = 0;
    auto add = [&](std::uint32_t v) {
      if (near[v]) --boundary;
      in[v] = 1;
      near[v] = 1;
      members.push_back(v);
      for (auto u : rows[v]) {
        if (!near[u]) {
          near[u] = 1;
          ++boundary;
        }
      }
    };
    add(static_cast<std::uint32_t>(seed));
    while (true) {
      ++nodes;
      if (best.improves(boundary, members.size())) {
        best.boundary = boundary;
        best.size = members.size();
        best.members = members;
        std::sort(best.members.begin(), best.members.end());
      }
      if (members.size() >= half) break;
      // Grow along the boundary, picking the vertex that adds the fewest
      // new boundary points.
      std::optional<std::uint32_t> pick;
      std::int64_t pick_delta = 0;
      for (std::uint32_t v = 0; v < n; ++v) {
        if (in[v] || !near[v]) continue;
        std::int64_t delta = -1;
        for (auto u : rows[v]) delta += near[u] ? 0 : 1;
        if (!pick || delta < pick_delta) {
          pick = v;
          pick_delta = delta;
        }
      }
      if (!pick) {
        for (std::uint32_t v = 0; v < n && !pick; ++v) {
          if (!in[v]) pick = v;
        }
      }
      add(*pick);
    }
  }
}

}  // namespace

InvariantReport cheeger(const VertexSet& a, std::uint32_t r, const CheegerOptions& opts) {
  if (a.empty()) throw Error(ErrorCode::kInvalidArgument, "Cheeger constant of an empty set");
  if (r == 0) throw Error(ErrorCode::kInvalidArgument, "Cheeger scale r must be >= 1");
  if (a.size() < 2) {
    throw Error(ErrorCode::kPrecondition, "Cheeger constant needs |A| >= 2");
  }
  InvariantReport report;
  report.kind = InvariantKind::kCheeger;
  report.r = r;
  report.trusted = all_trusted(a, r);
  report.beta = ambient_growth_at(a.window(), r);
  const auto rows = proximity_graph(a, r);
  const std::size_t half = a.size() / 2;
  CheegerBest best;
  if (opts.exhaustive) {
    const std::size_t cap = std::min<std::size_t>(opts.cap, 63);
    if (a.size() > cap) {
      throw Error(ErrorCode::kBudgetExceeded,
                  "exhaustive Cheeger limited to |A| <= " + std::to_string(cap));
    }
    std::vector<std::uint64_t> nbr(a.size(), 0);
    for (std::size_t i = 0; i < rows.size(); ++i) {
      for (auto j : rows[i]) nbr[i] |= 1ull << j;
    }
    cheeger_exhaustive(nbr, half, best, report.nodes);
    report.method = Method::kExhaustive;
    report.exact = Rational(static_cast<std::int64_t>(best.boundary),
                            static_cast<std::int64_t>(best.size));
    report.lower = *report.exact;
    report.upper = *report.exact;
  } else {
    cheeger_sweep(rows, half, best, report.nodes);
    report.method = Method::kSweep;
    report.lower = 0;
    report.upper = Rational(static_cast<std::int64_t>(best.boundary),
                            static_cast<std::int64_t>(best.size));
  }
  report.witness = subset_of(a, best.members);
  return report;
}

Rational cheeger_ratio(const VertexSet& a, const VertexSet& b, std::uint32_t r) {
  if (b.empty()) throw Error(ErrorCode::kInvalidArgument, "empty Cheeger witness");
  const auto boundary = intersection_size(r_boundary(b, r), a);
  return Rational(static_cast<std::int64_t>(boundary), static_cast<std::int64_t>(b.size()));
}

// -------------------------------------------------------------------- cut

namespace {

struct BudgetHit {};

class CutSearch {
 public:
  CutSearch(std::vector<std::vector<std::uint32_t>> rows, std::size_t cap,
            std::uint64_t budget)
      : rows_(std::move(rows)),
        cap_(cap),
        budget_(budget),
        removed_(rows_.size(), 0),
        forbidden_(rows_.size(), 0),
        stamp_(rows_.size(), 0) {}

  std::uint64_t nodes() const { return nodes_; }

  // Components of the non-removed vertices with more than cap_ members.
  std::vector<std::vector<std::uint32_t>> big_components() {
    std::vector<std::vector<std::uint32_t>> out;
    ++epoch_;
    for (std::uint32_t s = 0; s < rows_.size(); ++s) {
      if (removed_[s] || stamp_[s] == epoch_) continue;
      std::vector<std::uint32_t> comp{s};
      stamp_[s] = epoch_;
      for (std::size_t i = 0; i < comp.size(); ++i) {
        for (auto u : rows_[comp[i]]) {
          if (!removed_[u] && stamp_[u] != epoch_) {
            stamp_[u] = epoch_;
            comp.push_back(u);
          }
        }
      }
      if (comp.size() > cap_) out.push_back(std::move(comp));
    }
    return out;
  }

  // Searches for a completion of the current removal set using at most
  // `left` further vertices. On success the removal set holds the solution.
  bool search(std::size_t left) {
    if (++nodes_ > budget_) throw BudgetHit{};
    auto big = big_components();
    if (big.empty()) return true;
    if (left == 0 || big.size() > left) return false;
    // Any completion must hit every big component; branch on the one with
    // the fewest admissible vertices.
    std::vector<std::uint32_t> choice;
    bool have = false;
    for (auto& comp : big) {
      std::vector<std::uint32_t> allowed;
      for (auto v : comp) {
        if (!forbidden_[v]) allowed.push_back(v);
      }
      if (allowed.empty()) return false;
      if (!have || allowed.size() < choice.size()) {
        choice = std::move(allowed);
        have = true;
      }
    }
    std::sort(choice.begin(), choice.end());
    std::vector<std::uint32_t> banned;
    bool found = false;
    for (auto v : choice) {
      removed_[v] = 1;
      if (search(left - 1)) {
        found = true;
        break;
      }
      removed_[v] = 0;
      forbidden_[v] = 1;
      banned.push_back(v);
    }
    for (auto v : banned) forbidden_[v] = 0;
    return found;
  }

  void reset(const std::vector<std::uint32_t>& removed, const std::vector<std::uint32_t>& forbidden) {
    std::fill(removed_.begin(), removed_.end(), 0);
    std::fill(forbidden_.begin(), forbidden_.end(), 0);
    for (auto v : removed) removed_[v] = 1;
    for (auto v : forbidden) forbidden_[v] = 1;
  }

  std::vector<std::uint32_t> removed() const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t v = 0; v < removed_.size(); ++v) {
      if (removed_[v]) out.push_back(v);
    }
    return out;
  }

  // Greedy upper bound: repeatedly remove the vertex of the largest big
  // component whose removal leaves the smallest largest component.
  std::vector<std::uint32_t> greedy() {
    reset({}, {});
    while (true) {
      auto big = big_components();
      if (big.empty()) break;
      auto& comp = *std::max_element(big.begin(), big.end(), [](auto& x, auto& y) {
        return x.size() < y.size();
      });
      std::sort(comp.begin(), comp.end());
      std::uint32_t pick = comp.front();
      std::size_t pick_score = SIZE_MAX;
      for (auto v : comp) {
        removed_[v] = 1;
        std::size_t score = 0;
        for (auto& c : big_components()) score = std::max(score, c.size());
        removed_[v] = 0;
        if (score < pick_score) {
          pick_score = score;
          pick = v;
        }
      }
      removed_[pick] = 1;
    }
    return removed();
  }

  // Lexicographically least solution of the given (optimal) size.
  std::vector<std::uint32_t> lex_least(std::size_t size) {
    std::vector<std::uint32_t> prefix;
    const auto n = static_cast<std::uint32_t>(rows_.size());
    std::uint32_t next = 0;
    while (prefix.size() < size) {
      bool extended = false;
      for (std::uint32_t v = next; v < n && !extended; ++v) {
        auto trial = prefix;
        trial.push_back(v);
        std::vector<std::uint32_t> skipped;
        for (std::uint32_t u = 0; u < v; ++u) {
          if (!std::binary_search(prefix.begin(), prefix.end(), u)) skipped.push_back(u);
        }
        reset(trial, skipped);
        if (search(size - trial.size())) {
          prefix = std::move(trial);
          next = v + 1;
          extended = true;
        }
      }
      if (!extended) throw Error(ErrorCode::kInternal, "lexicographic cut refinement failed");
    }
    return prefix;
  }

 private:
  std::vector<std::vector<std::uint32_t>> rows_;
  std::size_t cap_;
  std::uint64_t budget_;
  std::uint64_t nodes_ = 0;
  std::vector<char> removed_;
  std::vector<char> forbidden_;
  std::vector<std::uint64_t> stamp_;
  std::uint64_t epoch_ = 0;
};

// floor(delta * n) for 0 < delta < 1.
std::size_t size_cap(const Rational& delta, std::size_t n) {
  return static_cast<std::size_t>(delta.numerator() * static_cast<std::int64_t>(n) /
                                  delta.denominator());
}

void check_delta(const Rational& delta) {
  if (delta <= Rational(0) || delta >= Rational(1)) {
    throw Error(ErrorCode::kInvalidArgument, "delta must satisfy 0 < delta < 1");
  }
}

}  // namespace

InvariantReport cut(const VertexSet& a, std::uint32_t r, const Rational& delta,
                    const CutOptions& opts) {
  if (a.empty()) throw Error(ErrorCode::kInvalidArgument, "cut of an empty set");
  if (r == 0) throw Error(ErrorCode::kInvalidArgument, "cut scale r must be >= 1");
  check_delta(delta);
  InvariantReport report;
  report.kind = InvariantKind::kCut;
  report.r = r;
  report.delta = delta;
  report.trusted = all_trusted(a, r);

  const std::size_t cap = size_cap(delta, a.size());
  CutSearch search(proximity_graph(a, r), cap, opts.budget);
  std::vector<std::uint32_t> witness;
  if (cap == 0) {
    witness.resize(a.size());
    std::iota(witness.begin(), witness.end(), 0u);
    report.exact = static_cast<std::int64_t>(a.size());
  } else {
    witness = search.greedy();
    std::size_t lower = 0;
    search.reset({}, {});
    lower = search.big_components().size();
    if (opts.exact) {
      try {
        std::size_t t = lower;
        for (; t < witness.size(); ++t) {
          search.reset({}, {});
          if (search.search(t)) break;
          lower = t + 1;
        }
        witness = search.lex_least(t);
        report.exact = static_cast<std::int64_t>(t);
      } catch (const BudgetHit&) {
        // Every size below `lower` was refuted in full.
      }
    }
    report.lower = static_cast<std::int64_t>(lower);
  }
  report.method = opts.exact ? Method::kBranchAndBound : Method::kSweep;
  report.nodes = search.nodes();
  report.upper = static_cast<std::int64_t>(witness.size());
  if (report.exact) report.lower = *report.exact;
  report.witness = subset_of(a, witness);
  if (!is_cut(a, report.witness, r, delta)) {
    throw Error(ErrorCode::kInternal, "cut witness failed its re-check");
  }
  if (opts.with_cheeger_bound && a.size() >= 2 && a.size() <= 24) {
    const auto h = cheeger(a, r);
    report.beta = h.beta;
    report.cheeger_bound = cut_lower_from_cheeger(h.lower, a.size(), delta, *h.beta);
  }
  return report;
}

bool is_cut(const VertexSet& a, const VertexSet& s, std::uint32_t r, const Rational& delta) {
  check_delta(delta);
  if (!is_subset(s, a)) return false;
  const std::size_t cap = size_cap(delta, a.size());
  const VertexSet rest = set_difference(a, s);
  if (rest.empty()) return true;
  for (const auto& comp : k_components(rest, r)) {
    if (comp.size() > cap) return false;
  }
  return true;
}

Rational cut_lower_from_cheeger(const Rational& h_lower, std::size_t size_a,
                                const Rational& delta, std::uint64_t beta) {
  check_delta(delta);
  if (beta == 0) throw Error(ErrorCode::kInvalidArgument, "beta must be positive");
  const Rational c = std::min(Rational(1, 4), (Rational(1) - delta) / 2);
  return c / static_cast<std::int64_t>(beta) * h_lower * static_cast<std::int64_t>(size_a);
}

Rational cut_lower_from_cheeger(const VertexSet& a, std::uint32_t r, const Rational& delta) {
  const auto h = cheeger(a, r);
  if (!h.trusted || !ambient_growth(a.window(), std::vector<std::uint32_t>{r}).trusted) {
    throw Error(ErrorCode::kUntrusted, "Cheeger bound needs trusted balls at scale r");
  }
  return cut_lower_from_cheeger(h.lower, a.size(), delta, *h.beta);
}

// --------------------------------------------------------------- Poincare

MetricMeasureSet metric_measure_set(const VertexSet& a) {
  MetricMeasureSet ms;
  ms.window = &a.window();
  ms.points.assign(a.begin(), a.end());
  ms.measure.assign(a.size(), Rational(1));
  ms.dist.assign(a.size(), std::vector<std::uint32_t>(a.size(), kInfinity));
  BoundedBfs bfs(a.window());
  for (std::size_t i = 0; i < a.size(); ++i) {
    bfs.run(a[i], kInfinity);
    for (std::size_t j = 0; j < a.size(); ++j) ms.dist[i][j] = bfs.dist(a[j]);
  }
  return ms;
}

namespace {

std::vector<std::int64_t> integer_weights(const MetricMeasureSet& ms) {
  std::int64_t l = 1;
  for (const auto& m : ms.measure) {
    if (m <= Rational(0)) throw Error(ErrorCode::kInvalidArgument, "measure must be positive");
    l = std::lcm(l, m.denominator());
  }
  std::vector<std::int64_t> w;
  for (const auto& m : ms.measure) w.push_back(m.numerator() * (l / m.denominator()));
  return w;
}

double challenge(const MetricMeasureSet& ms, std::uint32_t k, const PoincareOptions& opts) {
  std::mt19937_64 rng(opts.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const std::size_t n = ms.size();
  double best = INFINITY;
  for (std::uint32_t s = 0; s < opts.starts; ++s) {
    std::vector<double> f(n);
    for (auto& x : f) x = unit(rng);
    double current = poincare_ratio(ms, k, f);
    double step = 0.5;
    for (int round = 0; round < 2000 && step > 1e-7; ++round) {
      bool improved = false;
      for (std::size_t i = 0; i < n; ++i) {
        for (double sign : {1.0, -1.0}) {
          f[i] += sign * step;
          const double trial = poincare_ratio(ms, k, f);
          if (trial < current - 1e-15) {
            current = trial;
            improved = true;
          } else {
            f[i] -= sign * step;
          }
        }
      }
      if (!improved) step /= 2;
    }
    best = std::min(best, current);
  }
  return best;
}

}  // namespace

double poincare_ratio(const MetricMeasureSet& ms, std::uint32_t k, const std::vector<double>& f) {
  const std::size_t n = ms.size();
  double total = 0, mean = 0;
  for (std::size_t i = 0; i < n; ++i) {
    total += to_double(ms.measure[i]);
    mean += to_double(ms.measure[i]) * f[i];
  }
  mean /= total;
  double norm = 0, grad = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double nu = to_double(ms.measure[i]);
    norm += nu * std::abs(f[i] - mean);
    double lo = INFINITY, hi = -INFINITY;
    for (std::size_t j = 0; j < n; ++j) {
      if (ms.dist[i][j] <= k) {
        lo = std::min(lo, f[j]);
        hi = std::max(hi, f[j]);
      }
    }
    grad += nu * (hi - lo);
  }
  return norm == 0 ? INFINITY : grad / norm;
}

InvariantReport poincare_l1(const MetricMeasureSet& ms, std::uint32_t k,
                            const PoincareOptions& opts) {
  const std::size_t n = ms.size();
  if (n < 2) throw Error(ErrorCode::kPrecondition, "Poincare constant needs >= 2 points");
  if (k == 0) throw Error(ErrorCode::kInvalidArgument, "Poincare scale k must be >= 1");
  if (n > std::min<std::size_t>(opts.max_points, 40)) {
    throw Error(ErrorCode::kBudgetExceeded,
                "two-level enumeration limited to " + std::to_string(opts.max_points) + " points");
  }
  const auto w = integer_weights(ms);
  std::vector<std::uint64_t> ball(n, 0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (ms.dist[i][j] <= k) ball[i] |= 1ull << j;
    }
  }
  const std::uint64_t full = (n == 64) ? ~0ull : ((1ull << n) - 1);
  const std::int64_t total = std::accumulate(w.begin(), w.end(), std::int64_t{0});

  InvariantReport report;
  report.kind = InvariantKind::kPoincare;
  report.r = k;
  __int128 best_num = 0, best_den = 0;
  std::uint64_t best_set = 0;
  // The constant function is excluded; B and its complement give the same
  // ratio, so B never contains point 0.
  const std::uint64_t limit = 1ull << (n - 1);
  for (std::uint64_t m = 1; m < limit; ++m) {
    const std::uint64_t b = m << 1;
    std::int64_t wb = 0, wg = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (b >> i & 1) wb += w[i];
      if ((ball[i] & b) && (ball[i] & ~b & full)) wg += w[i];
    }
    const __int128 num = static_cast<__int128>(total) * wg;
    const __int128 den = static_cast<__int128>(2) * wb * (total - wb);
    if (best_den == 0 || num * best_den < best_num * den) {
      best_num = num;
      best_den = den;
      best_set = b;
    }
  }
  report.nodes = limit - 1;
  const Rational value(static_cast<std::int64_t>(best_num), static_cast<std::int64_t>(best_den));
  report.upper = value;
  report.lower = 0;
  std::vector<VertexId> members;
  Rational nu_b = 0, nu_z = 0;
  for (std::size_t i = 0; i < n; ++i) {
    nu_z += ms.measure[i];
    if (best_set >> i & 1) nu_b += ms.measure[i];
  }
  for (std::size_t i = 0; i < n; ++i) {
    const bool in = best_set >> i & 1;
    if (in) members.push_back(ms.points[i]);
    report.function.push_back((in ? Rational(1) : Rational(0)) - nu_b / nu_z);
  }
  report.method = Method::kExhaustive;
  if (opts.sampled) {
    report.method = Method::kSampled;
    report.challenger = challenge(ms, k, opts);
    report.challenger_ok = *report.challenger >= to_double(value) - 1e-9;
  }
  if (n <= 20 && report.challenger_ok) {
    report.exact = value;
    report.lower = value;
  }
  if (ms.window != nullptr) report.witness = VertexSet(*ms.window, std::move(members));
  return report;
}

// ------------------------------------------------------------------- nets

VertexSet separated_net(const VertexSet& a, std::uint32_t eps) {
  if (eps == 0) throw Error(ErrorCode::kInvalidArgument, "net scale eps must be >= 1");
  const GraphWindow& w = a.window();
  BoundedBfs bfs(w);
  std::vector<char> covered(w.size(), 0);
  std::vector<VertexId> net;
  for (VertexId v : a) {
    if (covered[v]) continue;
    net.push_back(v);
    for (VertexId u : bfs.run(v, eps)) covered[u] = 1;
  }
  for (std::size_t i = 0; i < net.size(); ++i) {
    bfs.run(net[i], eps);
    for (std::size_t j = 0; j < net.size(); ++j) {
      if (i != j && bfs.dist(net[j]) != kInfinity) {
        throw Error(ErrorCode::kInternal, "net points closer than eps");
      }
    }
  }
  VertexSet z(w, std::move(net), a.trusted());
  if (!is_subset(a, neighbourhood(z, eps))) {
    throw Error(ErrorCode::kInternal, "net does not cover A at scale eps");
  }
  return z;
}

}  // namespace coarse
