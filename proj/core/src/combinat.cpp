#include "hanklab/combinat.hpp"

#include <string>

#include "hanklab/errors.hpp"

namespace hanklab::combinat {
namespace {

bool opposite_parity(int a, int b) noexcept { return ((a ^ b) & 1) != 0; }

void check_cap(int m, int cap) {
  if (m > cap) {
    throw BudgetError("pair-partition enumeration of size " + std::to_string(m) +
                      " exceeds the enumeration cap of " + std::to_string(cap));
  }
}

// Pairs the smallest remaining element with each later one in turn.
// `elements` is sorted; `used` marks consumed positions.
void visit_pairings(const std::vector<int>& elements, std::vector<char>& used, std::vector<Pair>& blocks,
                    const std::function<void(const std::vector<Pair>&)>& visit) {
  std::size_t first = 0;
  while (first < elements.size() && used[first]) ++first;
  if (first == elements.size()) {
    visit(blocks);
    return;
  }
  used[first] = 1;
  for (std::size_t k = first + 1; k < elements.size(); ++k) {
    if (used[k]) continue;
    used[k] = 1;
    blocks.emplace_back(elements[first], elements[k]);
    visit_pairings(elements, used, blocks, visit);
    blocks.pop_back();
    used[k] = 0;
  }
  used[first] = 0;
}

void pairings_of(const std::vector<int>& elements, const std::function<void(const std::vector<Pair>&)>& visit) {
  if (elements.size() % 2 != 0) return;
  std::vector<char> used(elements.size(), 0);
  std::vector<Pair> blocks;
  blocks.reserve(elements.size() / 2);
  visit_pairings(elements, used, blocks, visit);
}

}  // namespace

void SplitContext::validate() const {
  if (p < 1 || q < 1) {
    throw ConfigError("split requires p >= 1 and q >= 1, got p=" + std::to_string(p) + " q=" + std::to_string(q));
  }
}

std::uint64_t pair_partition_count(int m) noexcept {
  if (m < 0 || (m & 1)) return 0;
  std::uint64_t count = 1;
  for (int j = m - 1; j > 1; j -= 2) count *= static_cast<std::uint64_t>(j);
  return count;
}

void for_each_pair_partition(int m, const std::function<void(const PairPartition&)>& visit, int cap) {
  if (m < 1) throw ConfigError("pair partitions need a positive size, got " + std::to_string(m));
  if (m & 1) return;
  check_cap(m, cap);
  std::vector<int> elements(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) elements[static_cast<std::size_t>(i)] = i + 1;
  PairPartition partition;
  partition.size = m;
  pairings_of(elements, [&](const std::vector<Pair>& blocks) {
    partition.blocks = blocks;
    visit(partition);
  });
}

std::vector<PairPartition> enumerate_pair_partitions(int m, int cap) {
  std::vector<PairPartition> out;
  if (m >= 0 && !(m & 1) && m <= cap) out.reserve(pair_partition_count(m));
  for_each_pair_partition(m, [&](const PairPartition& partition) { out.push_back(partition); }, cap);
  return out;
}

bool is_odd_even(const PairPartition& partition) noexcept {
  for (const auto& [a, b] : partition.blocks) {
    if (!opposite_parity(a, b)) return false;
  }
  return true;
}

ClassFlags classify(const PairPartition& partition, SplitContext ctx) {
  ctx.validate();
  if (partition.size != ctx.size()) {
    throw ConfigError("partition of size " + std::to_string(partition.size) + " does not match split p+q=" +
                      std::to_string(ctx.size()));
  }
  bool any_cross = false;
  bool all_odd_even = true;
  bool self_odd_even = true;
  bool cross_same_parity = true;
  for (const auto& block : partition.blocks) {
    const bool mixed = opposite_parity(block.first, block.second);
    all_odd_even = all_odd_even && mixed;
    if (ctx.is_cross(block)) {
      any_cross = true;
      cross_same_parity = cross_same_parity && !mixed;
    } else {
      self_odd_even = self_odd_even && mixed;
    }
  }
  ClassFlags flags;
  flags.in_delta2 = any_cross && all_odd_even;
  flags.in_delta2_tilde = any_cross && self_odd_even && cross_same_parity;
  return flags;
}

void for_each_four_block_partition(int m, const std::function<void(const FourBlockPartition&)>& visit, int cap) {
  if (m < 1) throw ConfigError("four-block partitions need a positive size, got " + std::to_string(m));
  if (m < 4 || (m & 1)) return;
  check_cap(m, cap);
  FourBlockPartition partition;
  partition.size = m;
  std::vector<int> rest;
  rest.reserve(static_cast<std::size_t>(m - 4));
  for (int a = 1; a <= m; ++a) {
    for (int b = a + 1; b <= m; ++b) {
      for (int c = b + 1; c <= m; ++c) {
        for (int d = c + 1; d <= m; ++d) {
          partition.quad = {a, b, c, d};
          rest.clear();
          for (int i = 1; i <= m; ++i) {
            if (i != a && i != b && i != c && i != d) rest.push_back(i);
          }
          pairings_of(rest, [&](const std::vector<Pair>& blocks) {
            partition.pairs = blocks;
            visit(partition);
          });
        }
      }
    }
  }
}

bool is_delta24(const FourBlockPartition& partition, SplitContext ctx) {
  ctx.validate();
  if (partition.size != ctx.size()) {
    throw ConfigError("partition of size " + std::to_string(partition.size) + " does not match split p+q=" +
                      std::to_string(ctx.size()));
  }
  // quad is ascending, so exactly two on the left means the first two.
  const auto& v = partition.quad;
  if (!(ctx.left(v[1]) && !ctx.left(v[2]))) return false;
  if (!opposite_parity(v[0], v[1]) || !opposite_parity(v[2], v[3])) return false;
  for (const auto& block : partition.pairs) {
    if (!opposite_parity(block.first, block.second)) return false;
    if (ctx.is_cross(block)) return false;
  }
  return true;
}

std::uint64_t count_delta24(int p, int q, int cap) {
  const SplitContext ctx{p, q};
  ctx.validate();
  if (((p + q) & 1) || p < 2 || q < 2) return 0;
  std::uint64_t count = 0;
  for_each_four_block_partition(
      p + q, [&](const FourBlockPartition& partition) { count += is_delta24(partition, ctx) ? 1 : 0; }, cap);
  return count;
}

ClassTally class_counts(int p, int q, int cap) {
  const SplitContext ctx{p, q};
  ctx.validate();
  ClassTally tally;
  tally.p = p;
  tally.q = q;
  if ((p + q) & 1) return tally;
  for_each_pair_partition(
      p + q,
      [&](const PairPartition& partition) {
        const ClassFlags flags = classify(partition, ctx);
        tally.delta2 += flags.in_delta2 ? 1 : 0;
        tally.delta2_tilde += flags.in_delta2_tilde ? 1 : 0;
      },
      cap);
  tally.delta24 = count_delta24(p, q, cap);
  tally.r_value = tally.delta2 + tally.delta2_tilde + 2 * tally.delta24;
  return tally;
}

}  // namespace hanklab::combinat
