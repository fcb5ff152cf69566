#include "dchain/env.hpp"

#include <cctype>

namespace dchain {

ChainSpec::ChainSpec(std::uint64_t depth, Rational scale)
    : depth_(depth), scale_(std::move(scale)) {
  if (depth_ < 1) throw ContractError("depth must be at least 1");
  if (scale_ <= 0) throw ContractError("scale must be positive");
  scale_value_ = static_cast<double>(scale_);
}

std::string to_string(const NodeRef& node) {
  if (node.kind == NodeRef::Kind::Chain) return "n" + std::to_string(node.d);
  return "n" + std::to_string(node.d) + "'";
}

bool is_terminal(const ChainSpec& spec, const NodeRef& node) {
  return node.kind == NodeRef::Kind::Leaf || node.d == spec.depth();
}

NodeRef child(const ChainSpec& spec, const NodeRef& node, Action a) {
  if (node.kind != NodeRef::Kind::Chain || node.d >= spec.depth())
    throw ContractError("terminal node " + to_string(node) + " has no children");
  return a == Action::One ? NodeRef::chain(node.d + 1) : NodeRef::leaf(node.d + 1);
}

std::uint64_t terminal_reward_units(const ChainSpec& spec, const NodeRef& node) {
  const auto D = spec.depth();
  if (node.kind == NodeRef::Kind::Chain) {
    if (node.d != D) throw ContractError("non-terminal node " + to_string(node));
    return D;
  }
  if (node.d < 1 || node.d > D) throw ContractError("no such leaf " + to_string(node));
  return D - node.d;
}

Rational terminal_reward(const ChainSpec& spec, const NodeRef& node) {
  return spec.unit() * terminal_reward_units(spec, node);
}

bool is_optimal(const ChainSpec& spec, const NodeRef& node) {
  return node.kind == NodeRef::Kind::Chain && node.d == spec.depth();
}

Rational parse_rational(const std::string& text) {
  auto digits = [&](const std::string& s) {
    if (s.empty()) return false;
    for (char ch : s)
      if (!std::isdigit(static_cast<unsigned char>(ch))) return false;
    return true;
  };
  auto bad = [&]() { return ContractError("not a rational number: '" + text + "'"); };

  if (auto slash = text.find('/'); slash != std::string::npos) {
    const auto num = text.substr(0, slash), den = text.substr(slash + 1);
    if (!digits(num) || !digits(den)) throw bad();
    const BigInt d(den);
    if (d == 0) throw bad();
    return Rational(BigInt(num), d);
  }
  if (auto dot = text.find('.'); dot != std::string::npos) {
    const auto whole = text.substr(0, dot), frac = text.substr(dot + 1);
    if ((!whole.empty() && !digits(whole)) || !digits(frac)) throw bad();
    BigInt den = 1;
    for (std::size_t i = 0; i < frac.size(); ++i) den *= 10;
    return Rational(BigInt(whole.empty() ? "0" : whole) * den + BigInt(frac), den);
  }
  if (!digits(text)) throw bad();
  return Rational(BigInt(text));
}

std::string format_rational(const Rational& r) {
  auto num = boost::multiprecision::numerator(r);
  auto den = boost::multiprecision::denominator(r);
  if (den == 1) return num.str();
  return num.str() + "/" + den.str();
}

}  // namespace dchain
