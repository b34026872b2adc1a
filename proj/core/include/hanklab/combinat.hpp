#pragma once

// Pair partitions of [m] and the partition classes that drive the limiting
// covariance of band Hankel eigenvalue statistics.
//
// Indices are 1-based throughout, matching the combinatorial definitions: a
// partition of [p+q] has a "left" side {1..p} and a "right" side {p+1..p+q}.
// A block straddling the two sides is cross-matched; otherwise self-matched.

#include <array>
#include <cstdint>
#include <functional>
#include <utility>
#include <vector>

namespace hanklab::combinat {

/// Largest partition size enumerated by default. 13!! = 135135 pairings.
inline constexpr int kDefaultEnumerationCap = 14;

using Pair = std::pair<int, int>;

/// Canonical form: each pair ascending, blocks sorted by first element.
struct PairPartition {
  int size = 0;
  std::vector<Pair> blocks;

  friend bool operator==(const PairPartition&, const PairPartition&) = default;
};

struct SplitContext {
  int p = 1;
  int q = 1;

  [[nodiscard]] int size() const noexcept { return p + q; }
  [[nodiscard]] bool left(int index) const noexcept { return index <= p; }
  [[nodiscard]] bool is_cross(const Pair& block) const noexcept {
    return left(block.first) != left(block.second);
  }
  void validate() const;
};

/// One 4-element block plus pairs covering the rest of [size].
struct FourBlockPartition {
  int size = 0;
  std::array<int, 4> quad{};  // ascending
  std::vector<Pair> pairs;    // canonical order
};

struct ClassFlags {
  bool in_delta2 = false;
  bool in_delta2_tilde = false;
};

struct ClassTally {
  int p = 0;
  int q = 0;
  std::uint64_t delta2 = 0;
  std::uint64_t delta2_tilde = 0;
  std::uint64_t delta24 = 0;
  std::uint64_t r_value = 0;  // delta2 + delta2_tilde + 2 * delta24

  friend bool operator==(const ClassTally&, const ClassTally&) = default;
};

/// (m-1)!! for even m >= 0, the number of pair partitions of [m]; 0 for odd m.
std::uint64_t pair_partition_count(int m) noexcept;

/// Visits every pair partition of [m] in lexicographic order of the partner
/// chosen for the smallest unmatched index. Odd m visits nothing. Throws
/// BudgetError when m exceeds `cap`.
void for_each_pair_partition(int m, const std::function<void(const PairPartition&)>& visit,
                             int cap = kDefaultEnumerationCap);

std::vector<PairPartition> enumerate_pair_partitions(int m, int cap = kDefaultEnumerationCap);

/// True iff every block pairs an odd index with an even one.
bool is_odd_even(const PairPartition& partition) noexcept;

/// Membership in Delta_2(p,q) (odd-even with a cross pair) and in the
/// tilde class (a cross pair, self pairs odd-even, cross pairs same parity).
ClassFlags classify(const PairPartition& partition, SplitContext ctx);

/// All partitions of [m] with exactly one block of size 4 and the rest pairs.
void for_each_four_block_partition(int m, const std::function<void(const FourBlockPartition&)>& visit,
                                   int cap = kDefaultEnumerationCap);

/// Conditions (i)-(iv) of Delta_{2,4}(p,q): the 4-block holds an odd-even
/// pair from each side, and every other pair is odd-even and self-matched.
bool is_delta24(const FourBlockPartition& partition, SplitContext ctx);

std::uint64_t count_delta24(int p, int q, int cap = kDefaultEnumerationCap);

/// Exhaustive class counts for the split [p] | [p+1..p+q].
ClassTally class_counts(int p, int q, int cap = kDefaultEnumerationCap);

}  // namespace hanklab::combinat
