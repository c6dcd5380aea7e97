#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace coarse {

using GroupElement = std::uint32_t;

// A finite group given by its multiplication table, together with a
// symmetric, identity-free generating subset. Construction validates the
// group axioms and throws kNotAGroup on failure.
class FiniteGroup {
 public:
  FiniteGroup() = default;
  FiniteGroup(std::vector<std::vector<GroupElement>> table,
              std::vector<GroupElement> generators);

  // Z/n with generators {1, n-1} (just {1} when n = 2).
  static FiniteGroup cyclic(std::uint32_t n);
  // Z/n with every nontrivial element as a generator.
  static FiniteGroup cyclic_complete(std::uint32_t n);

  std::uint32_t order() const { return static_cast<std::uint32_t>(table_.size()); }
  GroupElement identity() const { return identity_; }
  GroupElement mul(GroupElement a, GroupElement b) const { return table_[a][b]; }
  GroupElement inverse(GroupElement a) const { return inverse_[a]; }
  const std::vector<GroupElement>& generators() const { return generators_; }
  bool is_generator(GroupElement g) const;
  // Word length over generators().
  std::uint32_t word_length(GroupElement g) const { return length_[g]; }
  const std::vector<std::vector<GroupElement>>& table() const { return table_; }

 private:
  std::vector<std::vector<GroupElement>> table_;
  std::vector<GroupElement> generators_;
  std::vector<GroupElement> inverse_;
  std::vector<std::uint32_t> length_;
  GroupElement identity_ = 0;
};

}  // namespace coarse
