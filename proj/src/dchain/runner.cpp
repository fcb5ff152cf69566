#include "dchain/runner.hpp"

#include <bit>
#include <chrono>

namespace dchain {

std::string to_string(Mode m) {
  return m == Mode::FullTrajectory ? "full" : "iter";
}

Mode parse_mode(const std::string& name) {
  if (name == "full") return Mode::FullTrajectory;
  if (name == "iter") return Mode::IterativeExpansion;
  throw ContractError("unknown mode '" + name + "'");
}

std::uint64_t expansion_backup_units(const PolicySpec& policy, const ChainSpec& spec) {
  if (policy.variant != Variant::Puct || policy.v_init == 0) return 0;
  const Rational units = Rational(policy.v_init) / spec.unit();
  if (boost::multiprecision::denominator(units) != 1)
    throw ContractError("v_init must be a multiple of scale/depth in iterative mode");
  return static_cast<std::uint64_t>(boost::multiprecision::numerator(units));
}

RunRecord run_to_optimum(const ChainSpec& spec, const PolicySpec& policy,
                         const RunConfig& config) {
  validate(policy, spec);
  if (config.budget < 1 || config.budget > kMaxBudget)
    throw ContractError("budget must lie in [1, 2^62]");
  const bool iterative = config.mode == Mode::IterativeExpansion;
  const std::uint64_t backup_units = iterative ? expansion_backup_units(policy, spec) : 0;

  const auto start = std::chrono::steady_clock::now();
  const std::uint64_t D = spec.depth();
  RunRecord rec{spec, policy, config, false, 0, DepthLedger(D), {}, 0};
  DepthLedger& ledger = rec.ledger;

  // Means cached per node, refreshed only for nodes on the last path.
  std::vector<double> chain_mean(D + 1, 0.0), leaf_mean(D + 1, 0.0);
  std::vector<NodeRef> path;
  path.reserve(D + 1);

  auto child_score = [&](const NodeStat& st, double cached, std::uint64_t m_parent) {
    return st.visits == 0 ? score(policy, std::nullopt, 0, m_parent)
                          : score(policy, cached, st.visits, m_parent);
  };

  for (std::uint64_t t = 1; t <= config.budget; ++t) {
    path.clear();
    path.push_back(NodeRef::chain(0));
    std::uint64_t reward = 0;
    bool optimal = false;
    for (std::uint64_t d = 1; d <= D; ++d) {
      const std::uint64_t m_parent = ledger.chain(d - 1).visits;
      const NodeStat& on_chain = ledger.chain(d);
      const NodeStat& side = ledger.leaf(d);
      const double s1 = child_score(on_chain, chain_mean[d], m_parent);
      const double s2 = child_score(side, leaf_mean[d], m_parent);
      if (select(s1, s2) == Action::Two) {
        path.push_back(NodeRef::leaf(d));
        reward = D - d;
        break;
      }
      path.push_back(NodeRef::chain(d));
      if (d == D) {
        optimal = true;
        break;
      }
      if (iterative && on_chain.visits == 0) {
        reward = backup_units;
        break;
      }
    }
    if (optimal) {
      rec.reached = true;
      rec.first_hit = t - 1;
      rec.final_path = path;
      break;
    }
    ledger.record_path(path, reward);
    for (const auto& node : path) {
      const double x = mean_value(ledger.at(node), spec);
      (node.kind == NodeRef::Kind::Chain ? chain_mean : leaf_mean)[node.d] = x;
    }
  }

  rec.wall_ns = static_cast<std::uint64_t>(
      std::chrono::duration_cast<std::chrono::nanoseconds>(
          std::chrono::steady_clock::now() - start)
          .count());
  return rec;
}

std::uint64_t bfs_steps(std::uint64_t depth) {
  if (depth < 1 || depth > kMaxBfsDepth)
    throw ContractError("bfs depth must lie in [1, 40]");
  // Level order of a complete binary tree is heap order, so the queue is
  // implicit: node i has children 2i+1 (action 2) and 2i+2 (action 1).
  std::uint64_t dequeued = 0;
  for (std::uint64_t i = 0;; ++i) {
    ++dequeued;
    const std::uint64_t level = std::bit_width(i + 1) - 1;
    const std::uint64_t offset = (i + 1) - (std::uint64_t{1} << level);
    // All-ones path: the last node of its level.
    if (level == depth && offset == (std::uint64_t{1} << level) - 1) break;
  }
  return dequeued;
}

}  // namespace dchain
