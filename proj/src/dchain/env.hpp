#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include <boost/multiprecision/cpp_int.hpp>

namespace dchain {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;
using u128 = unsigned __int128;

/// Raised when an argument breaks an operation's contract.
class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Depth-D chain: D action-1 steps from the root reach the reward-s leaf,
/// action 2 at depth d-1 exits to a side leaf worth s*(D-d)/D.
class ChainSpec {
 public:
  ChainSpec(std::uint64_t depth, Rational scale = 1);

  std::uint64_t depth() const { return depth_; }
  const Rational& scale() const { return scale_; }
  double scale_value() const { return scale_value_; }

  /// Size of one reward unit, s/D.
  Rational unit() const { return scale_ / depth_; }

  friend bool operator==(const ChainSpec& a, const ChainSpec& b) {
    return a.depth_ == b.depth_ && a.scale_ == b.scale_;
  }

 private:
  std::uint64_t depth_;
  Rational scale_;
  double scale_value_;
};

enum class Action { One, Two };

/// Either n_d (Chain, 0 <= d <= D) or the side leaf n_{d'} (Leaf, 1 <= d <= D).
struct NodeRef {
  enum class Kind { Chain, Leaf };
  Kind kind = Kind::Chain;
  std::uint64_t d = 0;

  static NodeRef chain(std::uint64_t d) { return {Kind::Chain, d}; }
  static NodeRef leaf(std::uint64_t d) { return {Kind::Leaf, d}; }

  friend bool operator==(const NodeRef&, const NodeRef&) = default;
};

std::string to_string(const NodeRef& node);

bool is_terminal(const ChainSpec& spec, const NodeRef& node);

/// Child of a non-terminal chain node.
NodeRef child(const ChainSpec& spec, const NodeRef& node, Action a);

/// Terminal reward in units of s/D: D-k for Leaf(k), D for Chain(D).
std::uint64_t terminal_reward_units(const ChainSpec& spec, const NodeRef& node);

/// Exact terminal reward s*(D-k)/D, or s at the optimal leaf.
Rational terminal_reward(const ChainSpec& spec, const NodeRef& node);

bool is_optimal(const ChainSpec& spec, const NodeRef& node);

/// Parses "3", "3/2" or a decimal like "0.5" into an exact positive rational.
Rational parse_rational(const std::string& text);
std::string format_rational(const Rational& r);

}  // namespace dchain
