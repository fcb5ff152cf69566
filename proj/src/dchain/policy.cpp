#include "dchain/policy.hpp"

#include <cmath>
#include <limits>

namespace dchain {

std::string to_string(Variant v) {
  switch (v) {
    case Variant::PolyUct: return "poly";
    case Variant::Uct: return "uct";
    case Variant::Puct: return "puct";
  }
  return "?";
}

Variant parse_variant(const std::string& name) {
  if (name == "poly") return Variant::PolyUct;
  if (name == "uct") return Variant::Uct;
  if (name == "puct") return Variant::Puct;
  throw ContractError("unknown policy '" + name + "'");
}

void validate(const PolicySpec& policy, const ChainSpec& spec) {
  if (!std::isfinite(policy.c) || !std::isfinite(policy.v_init))
    throw ContractError("policy parameters must be finite");
  if (policy.variant == Variant::Puct) {
    if (!(policy.c > 0)) throw ContractError("PUCT needs c > 0");
    if (policy.v_init < 0 || policy.v_init > spec.scale_value())
      throw ContractError("v_init must lie in [0, scale]");
  } else if (policy.c != 0 || policy.v_init != 0) {
    throw ContractError("c and v_init only apply to PUCT");
  }
}

double score(const PolicySpec& policy, std::optional<double> child_mean,
             std::uint64_t m_child, std::uint64_t m_parent) {
  const double mc = static_cast<double>(m_child);
  const double mp = static_cast<double>(m_parent);
  switch (policy.variant) {
    case Variant::PolyUct:
      if (m_child == 0) return std::numeric_limits<double>::infinity();
      return *child_mean + std::sqrt(std::sqrt(mp) / mc);
    case Variant::Uct:
      if (m_child == 0) return std::numeric_limits<double>::infinity();
      return *child_mean + std::sqrt(2.0 * std::log(mp) / mc);
    case Variant::Puct: {
      const double q = m_child == 0 ? policy.v_init : *child_mean;
      return q + policy.c * std::sqrt(mp) / (mc + 1.0);
    }
  }
  return 0.0;
}

double score(const PolicySpec& policy, const ChainSpec& spec, const NodeStat& child,
             std::uint64_t m_parent) {
  std::optional<double> x;
  if (child.visits > 0) x = mean_value(child, spec);
  return score(policy, x, child.visits, m_parent);
}

}  // namespace dchain
