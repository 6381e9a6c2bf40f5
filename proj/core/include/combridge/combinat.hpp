#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

#include "combridge/natural.hpp"

namespace combridge {

// C(n, k) computed exactly. Zero when k > n, one when k == 0.
Natural binomial(std::uint64_t n, std::uint64_t k);

// A k-subset of {1..n}, stored as strictly increasing 1-based dense indices.
// The universe size is not part of the value; rank/unrank check it.
class Combination {
 public:
  Combination() = default;
  explicit Combination(std::vector<std::uint32_t> indices);
  Combination(std::initializer_list<std::uint32_t> indices)
      : Combination(std::vector<std::uint32_t>(indices)) {}

  std::size_t size() const noexcept { return indices_.size(); }
  bool empty() const noexcept { return indices_.empty(); }
  std::uint32_t operator[](std::size_t pos) const { return indices_[pos]; }
  std::span<const std::uint32_t> indices() const noexcept { return indices_; }
  auto begin() const noexcept { return indices_.begin(); }
  auto end() const noexcept { return indices_.end(); }

  friend bool operator==(const Combination&, const Combination&) = default;
  friend auto operator<=>(const Combination&, const Combination&) = default;

 private:
  std::vector<std::uint32_t> indices_;
};

/// Lexicographic position (1-based) of `indices` among all k-subsets of
/// {1..n}, where k = indices.size().
///
/// Throws Error{invalid_combination} if the sequence is empty, not strictly
/// increasing, or leaves 1..n; Error{invalid_size} if n == 0.
Natural rank_group(std::span<const std::uint32_t> indices, std::uint32_t n);

inline Natural rank_group(const Combination& c, std::uint32_t n) {
  return rank_group(c.indices(), n);
}

/// Inverse of rank_group: the k-subset of {1..n} whose rank is `h`.
///
/// Throws Error{invalid_size} unless 1 <= k <= n, and
/// Error{rank_out_of_range} unless 1 <= h <= C(n, k).
Combination unrank_group(const Natural& h, std::uint32_t k, std::uint32_t n);

/// All C(n, k) k-subsets of {1..n} in lexicographic order, produced by the
/// successor rule rather than by unranking. Meant for small n.
std::vector<Combination> enumerate_combinations(std::uint32_t n, std::uint32_t k);

}  // namespace combridge
