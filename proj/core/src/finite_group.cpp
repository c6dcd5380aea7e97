#include "coarse/finite_group.hpp"

#include <algorithm>
#include <deque>

#include "coarse/error.hpp"
#include "coarse/graph_core.hpp"

namespace coarse {

namespace {

[[noreturn]] void not_a_group(const std::string& what) {
  throw Error(ErrorCode::kNotAGroup, what);
}

}  // namespace

FiniteGroup::FiniteGroup(std::vector<std::vector<GroupElement>> table,
                         std::vector<GroupElement> generators)
    : table_(std::move(table)), generators_(std::move(generators)) {
  const std::size_t n = table_.size();
  if (n == 0) not_a_group("empty table");
  for (const auto& row : table_) {
    if (row.size() != n) not_a_group("table is not square");
    for (auto x : row) {
      if (x >= n) not_a_group("table entry out of range");
    }
  }
  bool found = false;
  for (GroupElement e = 0; e < n && !found; ++e) {
    bool ok = true;
    for (GroupElement x = 0; x < n && ok; ++x) {
      ok = table_[e][x] == x && table_[x][e] == x;
    }
    if (ok) {
      identity_ = e;
      found = true;
    }
  }
  if (!found) not_a_group("no identity element");
  for (GroupElement a = 0; a < n; ++a) {
    for (GroupElement b = 0; b < n; ++b) {
      for (GroupElement c = 0; c < n; ++c) {
        if (table_[table_[a][b]][c] != table_[a][table_[b][c]]) {
          not_a_group("multiplication is not associative");
        }
      }
    }
  }
  inverse_.assign(n, 0);
  for (GroupElement a = 0; a < n; ++a) {
    auto it = std::find(table_[a].begin(), table_[a].end(), identity_);
    if (it == table_[a].end()) not_a_group("element without inverse");
    inverse_[a] = static_cast<GroupElement>(it - table_[a].begin());
    if (table_[inverse_[a]][a] != identity_) not_a_group("left and right inverses differ");
  }

  std::sort(generators_.begin(), generators_.end());
  generators_.erase(std::unique(generators_.begin(), generators_.end()), generators_.end());
  for (auto g : generators_) {
    if (g >= n) not_a_group("generator out of range");
    if (g == identity_) not_a_group("generating set contains the identity");
    if (!is_generator(inverse_[g])) not_a_group("generating set is not symmetric");
  }
  length_.assign(n, kInfinity);
  length_[identity_] = 0;
  std::deque<GroupElement> queue{identity_};
  while (!queue.empty()) {
    auto g = queue.front();
    queue.pop_front();
    for (auto s : generators_) {
      auto h = table_[g][s];
      if (length_[h] == kInfinity) {
        length_[h] = length_[g] + 1;
        queue.push_back(h);
      }
    }
  }
  if (std::count(length_.begin(), length_.end(), kInfinity) > 0) {
    not_a_group("generators do not generate the group");
  }
}

bool FiniteGroup::is_generator(GroupElement g) const {
  return std::binary_search(generators_.begin(), generators_.end(), g);
}

namespace {

std::vector<std::vector<GroupElement>> cyclic_table(std::uint32_t n) {
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "cyclic group needs order >= 2");
  std::vector<std::vector<GroupElement>> table(n, std::vector<GroupElement>(n));
  for (std::uint32_t a = 0; a < n; ++a) {
    for (std::uint32_t b = 0; b < n; ++b) table[a][b] = (a + b) % n;
  }
  return table;
}

}  // namespace

FiniteGroup FiniteGroup::cyclic(std::uint32_t n) {
  return FiniteGroup(cyclic_table(n), {1, n - 1});
}

FiniteGroup FiniteGroup::cyclic_complete(std::uint32_t n) {
  std::vector<GroupElement> gens;
  for (std::uint32_t g = 1; g < n; ++g) gens.push_back(g);
  return FiniteGroup(cyclic_table(n), gens);
}

}  // namespace coarse
