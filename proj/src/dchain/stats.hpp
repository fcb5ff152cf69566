#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dchain/env.hpp"

namespace dchain {

/// Visit count m_i and reward sum X_i * m_i, the sum kept in units of s/D.
struct NodeStat {
  std::uint64_t visits = 0;
  u128 reward_sum_units = 0;

  friend bool operator==(const NodeStat&, const NodeStat&) = default;
};

/// Exact empirical mean, or nullopt for an unvisited node.
std::optional<Rational> mean(const NodeStat& stat, const ChainSpec& spec);

/// Empirical mean rounded to double. Every score computation goes through
/// this one function so that recomputed scores match the runner bit for bit.
double mean_value(const NodeStat& stat, const ChainSpec& spec);

/// Largest trajectory budget accepted anywhere; keeps 64-bit counts and
/// 128-bit sums clear of overflow.
inline constexpr std::uint64_t kMaxBudget = std::uint64_t{1} << 62;

/// Per-depth statistics of the chain. Only n_0..n_D and n_{1'}..n_{D'} can
/// ever be visited, so the ledger is O(D).
class DepthLedger {
 public:
  explicit DepthLedger(std::uint64_t depth);

  std::uint64_t depth() const { return chain_.size() - 1; }
  std::uint64_t trajectories() const { return trajectories_; }

  NodeStat& chain(std::uint64_t d) { return chain_.at(d); }
  const NodeStat& chain(std::uint64_t d) const { return chain_.at(d); }
  /// Side leaf n_{d'}, 1 <= d <= D.
  NodeStat& leaf(std::uint64_t d);
  const NodeStat& leaf(std::uint64_t d) const;
  NodeStat& at(const NodeRef& node);
  const NodeStat& at(const NodeRef& node) const;

  /// Backs one trajectory's reward up along `path` (which must start at n_0).
  void record_path(std::span<const NodeRef> path, std::uint64_t reward_units);

  /// Direct write access for fixtures and fault injection.
  void set_trajectories(std::uint64_t t) { trajectories_ = t; }

  friend bool operator==(const DepthLedger&, const DepthLedger&) = default;

 private:
  std::vector<NodeStat> chain_;  // index d = 0..D
  std::vector<NodeStat> leaf_;   // index d-1 for d = 1..D
  std::uint64_t trajectories_ = 0;
};

}  // namespace dchain
