#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "dchain/env.hpp"
#include "dchain/policy.hpp"
#include "dchain/stats.hpp"

namespace dchain {

/// FullTrajectory descends to a terminal every time. IterativeExpansion stops
/// at the first never-visited node (the root counts as already expanded).
enum class Mode { FullTrajectory, IterativeExpansion };

std::string to_string(Mode m);
Mode parse_mode(const std::string& name);

struct RunConfig {
  Mode mode = Mode::FullTrajectory;
  std::uint64_t budget = 1'000'000;

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

struct RunRecord {
  ChainSpec spec;
  PolicySpec policy;
  RunConfig config;
  bool reached = false;
  /// Trajectories completed before the first one reaching n_D.
  std::uint64_t first_hit = 0;
  /// Statistics before the optimal trajectory, or the final state if the
  /// budget ran out.
  DepthLedger ledger;
  std::vector<NodeRef> final_path;
  std::uint64_t wall_ns = 0;
};

/// Reward units backed up when iterative expansion stops at a non-terminal
/// node. Throws unless v_init is an exact multiple of s/D.
std::uint64_t expansion_backup_units(const PolicySpec& policy, const ChainSpec& spec);

/// Runs trajectories until n_D is first reached or `config.budget`
/// trajectories have completed. Deterministic.
RunRecord run_to_optimum(const ChainSpec& spec, const PolicySpec& policy,
                         const RunConfig& config);

/// Nodes dequeued by a breadth-first walk of the complete binary tree of
/// depth D up to and including the all-ones leaf. Children are enqueued
/// action 2 first, so that leaf is the last node of the tree.
std::uint64_t bfs_steps(std::uint64_t depth);

inline constexpr std::uint64_t kMaxBfsDepth = 40;

}  // namespace dchain
