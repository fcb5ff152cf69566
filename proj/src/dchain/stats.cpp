#include "dchain/stats.hpp"

#include <limits>
#include <stdexcept>

namespace dchain {

std::optional<Rational> mean(const NodeStat& stat, const ChainSpec& spec) {
  if (stat.visits == 0) return std::nullopt;
  BigInt sum = static_cast<std::uint64_t>(stat.reward_sum_units >> 64);
  sum <<= 64;
  sum += static_cast<std::uint64_t>(stat.reward_sum_units);
  return Rational(sum, BigInt(spec.depth()) * stat.visits) * spec.scale();
}

double mean_value(const NodeStat& stat, const ChainSpec& spec) {
  // sum/visits split into quotient and remainder keeps the conversion within
  // one rounding of the exact unit mean, even for sums past 2^53.
  const u128 q = stat.reward_sum_units / stat.visits;
  const u128 r = stat.reward_sum_units % stat.visits;
  const double units = static_cast<double>(q) +
                       static_cast<double>(static_cast<std::uint64_t>(r)) /
                           static_cast<double>(stat.visits);
  return units * spec.scale_value() / static_cast<double>(spec.depth());
}

DepthLedger::DepthLedger(std::uint64_t depth) : chain_(depth + 1), leaf_(depth) {}

NodeStat& DepthLedger::leaf(std::uint64_t d) {
  if (d < 1 || d > leaf_.size()) throw std::out_of_range("leaf depth out of range");
  return leaf_[d - 1];
}

const NodeStat& DepthLedger::leaf(std::uint64_t d) const {
  if (d < 1 || d > leaf_.size()) throw std::out_of_range("leaf depth out of range");
  return leaf_[d - 1];
}

NodeStat& DepthLedger::at(const NodeRef& node) {
  return node.kind == NodeRef::Kind::Chain ? chain(node.d) : leaf(node.d);
}

const NodeStat& DepthLedger::at(const NodeRef& node) const {
  return node.kind == NodeRef::Kind::Chain ? chain(node.d) : leaf(node.d);
}

void DepthLedger::record_path(std::span<const NodeRef> path, std::uint64_t reward_units) {
  if (path.empty() || !(path.front() == NodeRef::chain(0)))
    throw ContractError("trajectory must start at the root");
  for (const auto& node : path) {
    auto& stat = at(node);
    if (stat.visits == std::numeric_limits<std::uint64_t>::max())
      throw std::overflow_error("visit count overflow at " + to_string(node));
    stat.visits += 1;
    stat.reward_sum_units += reward_units;
  }
  trajectories_ += 1;
}

}  // namespace dchain
