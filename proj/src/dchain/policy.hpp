#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "dchain/env.hpp"
#include "dchain/stats.hpp"

namespace dchain {

enum class Variant { PolyUct, Uct, Puct };

std::string to_string(Variant v);
Variant parse_variant(const std::string& name);

/// Selection rule. `c` is the merged PUCT constant c_puct * P_i with uniform
/// priors; `v_init` is the Q assigned to unvisited PUCT children. Both are 0
/// for the other variants.
struct PolicySpec {
  Variant variant = Variant::PolyUct;
  double c = 0.0;
  double v_init = 0.0;

  static PolicySpec poly_uct() { return {Variant::PolyUct, 0.0, 0.0}; }
  static PolicySpec uct() { return {Variant::Uct, 0.0, 0.0}; }
  static PolicySpec puct(double c, double v_init = 0.0) { return {Variant::Puct, c, v_init}; }

  friend bool operator==(const PolicySpec&, const PolicySpec&) = default;
};

/// Throws ContractError unless c > 0 for PUCT, c = v_init = 0 otherwise,
/// and v_init lies in [0, s].
void validate(const PolicySpec& policy, const ChainSpec& spec);

/// B-value of a child: finite double or +inf (unvisited PolyUCT/UCT child).
/// `child_mean` is empty iff m_child = 0.
double score(const PolicySpec& policy, std::optional<double> child_mean,
             std::uint64_t m_child, std::uint64_t m_parent);

/// Score of a child straight from its ledger entry.
double score(const PolicySpec& policy, const ChainSpec& spec, const NodeStat& child,
             std::uint64_t m_parent);

/// Action One only on a strict win; every tie goes to the side leaf.
inline Action select(double score_one, double score_two) {
  return score_one > score_two ? Action::One : Action::Two;
}

}  // namespace dchain
