#include "dchain/verifier.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "dchain/format.hpp"

namespace dchain {

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Pass: return "pass";
    case Outcome::Fail: return "fail";
    case Outcome::Skipped: return "skipped";
  }
  return "?";
}

Outcome parse_outcome(const std::string& name) {
  if (name == "pass") return Outcome::Pass;
  if (name == "fail") return Outcome::Fail;
  if (name == "skipped") return Outcome::Skipped;
  throw ContractError("unknown check outcome '" + name + "'");
}

std::size_t CheckReport::passed() const {
  return std::count_if(entries.begin(), entries.end(), [](const CheckEntry& e) {
    return !e.informational && e.outcome == Outcome::Pass;
  });
}

std::size_t CheckReport::failed() const {
  return std::count_if(entries.begin(), entries.end(), [](const CheckEntry& e) {
    return !e.informational && e.outcome == Outcome::Fail;
  });
}

std::size_t CheckReport::skipped() const {
  return std::count_if(entries.begin(), entries.end(),
                       [](const CheckEntry& e) { return e.outcome == Outcome::Skipped; });
}

std::size_t count_passed(const std::vector<CheckReport>& reports) {
  std::size_t n = 0;
  for (const auto& r : reports) n += r.passed();
  return n;
}

std::size_t count_failed(const std::vector<CheckReport>& reports) {
  std::size_t n = 0;
  for (const auto& r : reports) n += r.failed();
  return n;
}

namespace {

using ld = long double;

Outcome verdict(bool ok) { return ok ? Outcome::Pass : Outcome::Fail; }

bool geq_with_slack(ld lhs, ld rhs) {
  if (lhs >= rhs) return true;
  if (!std::isfinite(lhs) || !std::isfinite(rhs)) return false;
  const ld scale = std::max({std::fabs(lhs), std::fabs(rhs), ld{1}});
  return lhs >= rhs - kRelTolerance * scale;
}

BigInt big(u128 v) {
  BigInt b = static_cast<std::uint64_t>(v >> 64);
  b <<= 64;
  b += static_cast<std::uint64_t>(v);
  return b;
}

std::string u128_str(u128 v) { return big(v).str(); }

CheckEntry skipped_entry(std::string name, std::optional<std::uint64_t> depth,
                         std::string note) {
  CheckEntry e;
  e.name = std::move(name);
  e.depth = depth;
  e.outcome = Outcome::Skipped;
  e.note = std::move(note);
  return e;
}

CheckEntry entry(std::string name, std::uint64_t depth, std::string lhs, std::string rhs,
                 bool ok, std::string note = {}) {
  CheckEntry e;
  e.name = std::move(name);
  e.depth = depth;
  e.lhs = std::move(lhs);
  e.rhs = std::move(rhs);
  e.outcome = verdict(ok);
  e.note = std::move(note);
  return e;
}

// Returns a report with a single skipped entry when the derivation checks
// cannot run on this record; nullopt when they can.
std::optional<CheckReport> gate(const RunRecord& rec, const std::string& check,
                                std::optional<Variant> only = std::nullopt) {
  CheckReport rep{check, {}};
  if (only && rec.policy.variant != *only) {
    rep.entries.push_back(
        skipped_entry(check, std::nullopt, "not applicable to " + to_string(rec.policy.variant)));
    return rep;
  }
  if (!rec.reached) {
    rep.entries.push_back(skipped_entry(check, std::nullopt, "optimum not reached"));
    return rep;
  }
  if (rec.spec.depth() < 2) {
    rep.entries.push_back(skipped_entry(check, std::nullopt, "empty depth range"));
    return rep;
  }
  return std::nullopt;
}

std::string rational_str(const Rational& r) { return format_rational(r); }

// m_d <= m_{d'} and m_{d-1} >= 2 m_d.
void push_order_entries(CheckReport& rep, const DepthLedger& L, std::uint64_t d) {
  const auto md = L.chain(d).visits, ml = L.leaf(d).visits, mp = L.chain(d - 1).visits;
  rep.entries.push_back(entry("c.chain_le_leaf", d, std::to_string(md), std::to_string(ml),
                              md <= ml));
  rep.entries.push_back(entry("c.parent_ge_twice_chain", d, std::to_string(mp),
                              u128_str(u128{md} * 2), u128{mp} >= u128{md} * 2));
}

}  // namespace

CheckReport check_ledger_invariants(const RunRecord& rec) {
  CheckReport rep{"ledger_invariants", {}};
  const DepthLedger& L = rec.ledger;
  const std::uint64_t D = rec.spec.depth();
  const bool iterative = rec.config.mode == Mode::IterativeExpansion;
  std::uint64_t backup = 0;
  if (iterative) {
    try {
      backup = expansion_backup_units(rec.policy, rec.spec);
    } catch (const ContractError&) {
      rep.entries.push_back(
          entry("v_init_on_grid", 0, format_double(rec.policy.v_init), "multiple of s/D", false));
    }
  }

  const auto m0 = L.chain(0).visits;
  rep.entries.push_back(entry("root_visits_eq_t", 0, std::to_string(m0),
                              std::to_string(L.trajectories()), m0 == L.trajectories()));
  if (rec.reached)
    rep.entries.push_back(entry("t_eq_first_hit", 0, std::to_string(L.trajectories()),
                                std::to_string(rec.first_hit),
                                L.trajectories() == rec.first_hit));
  rep.entries.push_back(entry("optimum_unvisited", D, std::to_string(L.chain(D).visits), "0",
                              L.chain(D).visits == 0));

  for (std::uint64_t d = 0; d <= D; ++d) {
    const auto& st = L.chain(d);
    if (st.visits == 0)
      rep.entries.push_back(entry("empty_chain_sum_zero", d, u128_str(st.reward_sum_units), "0",
                                  st.reward_sum_units == 0));
  }

  for (std::uint64_t d = 1; d <= D; ++d) {
    const auto& parent = L.chain(d - 1);
    const auto& on_chain = L.chain(d);
    const auto& side = L.leaf(d);
    // An expanded non-root chain node carries one extra visit of its own.
    const std::uint64_t extra = (iterative && d >= 2 && parent.visits >= 1) ? 1 : 0;
    const u128 child_visits = u128{on_chain.visits} + side.visits + extra;
    rep.entries.push_back(entry("visit_conservation", d, std::to_string(parent.visits),
                                u128_str(child_visits), u128{parent.visits} == child_visits));
    const u128 child_sums = on_chain.reward_sum_units + side.reward_sum_units + extra * backup;
    rep.entries.push_back(entry("sum_conservation", d, u128_str(parent.reward_sum_units),
                                u128_str(child_sums), parent.reward_sum_units == child_sums));
    const u128 expect = u128{side.visits} * (D - d);
    rep.entries.push_back(entry("leaf_sum_exact", d, u128_str(side.reward_sum_units),
                                u128_str(expect), side.reward_sum_units == expect));
  }
  return rep;
}

CheckReport check_leaf_visits_and_means(const RunRecord& rec) {
  if (auto g = gate(rec, "leaf_visits_and_means")) return *g;
  CheckReport rep{"leaf_visits_and_means", {}};
  const DepthLedger& L = rec.ledger;
  const auto& spec = rec.spec;
  const std::uint64_t D = spec.depth();
  for (std::uint64_t d = 1; d + 1 <= D; ++d) {
    const auto& side = L.leaf(d);
    rep.entries.push_back(
        entry("leaf_visited", d, std::to_string(side.visits), "1", side.visits >= 1));
    const Rational target = spec.scale() * Rational(D - d, D);
    if (auto x = mean(side, spec)) {
      rep.entries.push_back(
          entry("leaf_mean_exact", d, rational_str(*x), rational_str(target), *x == target));
    } else {
      rep.entries.push_back(skipped_entry("leaf_mean_exact", d, "unvisited leaf"));
    }
    const Rational cap = spec.scale() * Rational(D - d - 1, D);
    if (auto x = mean(L.chain(d), spec)) {
      rep.entries.push_back(
          entry("chain_mean_le_next_leaf", d, rational_str(cap), rational_str(*x), *x <= cap));
    } else {
      rep.entries.push_back(skipped_entry("chain_mean_le_next_leaf", d, "m_d = 0"));
    }
  }
  return rep;
}

CheckReport check_selection_dominance(const RunRecord& rec) {
  if (auto g = gate(rec, "selection_dominance")) return *g;
  CheckReport rep{"selection_dominance", {}};
  const DepthLedger& L = rec.ledger;
  for (std::uint64_t d = 1; d + 1 <= rec.spec.depth(); ++d) {
    const auto mp = L.chain(d - 1).visits;
    const double b_chain = score(rec.policy, rec.spec, L.chain(d), mp);
    const double b_leaf = score(rec.policy, rec.spec, L.leaf(d), mp);
    rep.entries.push_back(entry("chain_score_ge_leaf_score", d, format_double(b_chain),
                                format_double(b_leaf), b_chain >= b_leaf,
                                std::isinf(b_chain) ? "infinite" : ""));
  }
  return rep;
}

CheckReport check_poly_recurrence(const RunRecord& rec) {
  if (auto g = gate(rec, "poly_recurrence", Variant::PolyUct)) return *g;
  CheckReport rep{"poly_recurrence", {}};
  const DepthLedger& L = rec.ledger;
  const auto& spec = rec.spec;
  const std::uint64_t D = spec.depth();
  const ld gap = static_cast<ld>(spec.scale_value()) / D;
  // K = D^2 / s^2 is the recurrence constant.
  const Rational k_inv = spec.scale() * spec.scale() / (BigInt(D) * D);
  for (std::uint64_t d = 1; d + 1 <= D; ++d) {
    const auto mp = L.chain(d - 1).visits, md = L.chain(d).visits, ml = L.leaf(d).visits;
    if (md == 0) {
      rep.entries.push_back(skipped_entry("recurrence", d, "m_d = 0"));
      continue;
    }
    const ld root = std::sqrt(static_cast<ld>(mp));
    const ld lhs = std::sqrt(root / md);
    const ld rhs = std::sqrt(root / ml) + gap;
    rep.entries.push_back(entry("a.bonus_gap", d, format_double(lhs), format_double(rhs),
                                geq_with_slack(lhs, rhs)));
    const Rational bound = (Rational(md) * k_inv) * (Rational(md) * k_inv);
    rep.entries.push_back(entry("b.squared", d, std::to_string(mp), rational_str(bound),
                                Rational(mp) >= bound));
    push_order_entries(rep, L, d);
  }
  return rep;
}

CheckReport check_doubling_chain(const RunRecord& rec) {
  if (!rec.reached) return *gate(rec, "doubling_chain");
  CheckReport rep{"doubling_chain", {}};
  const DepthLedger& L = rec.ledger;
  const std::uint64_t D = rec.spec.depth();
  // The root is never an expansion target, so with D = 1 iterative runs fall
  // back to the full-trajectory base m_{D-1} = 1.
  const bool expanded_base = rec.config.mode == Mode::IterativeExpansion && D >= 2;
  const std::uint64_t base = expanded_base ? 2 : 1;
  const auto last = L.chain(D - 1).visits;
  rep.entries.push_back(entry("last_chain_visits_exact", D - 1, std::to_string(last),
                              std::to_string(base), last == base));
  for (std::uint64_t d = 0; d < D; ++d) {
    const std::uint64_t exponent = D - 1 - d + (expanded_base ? 1 : 0);
    const BigInt bound = BigInt(1) << exponent;
    const auto m = L.chain(d).visits;
    rep.entries.push_back(entry("visits_ge_power_of_two", d, std::to_string(m), bound.str(),
                                BigInt(m) >= bound));
  }
  return rep;
}

CheckReport check_global_unroll(const RunRecord& rec) {
  if (auto g = gate(rec, "global_unroll", Variant::PolyUct)) return *g;
  CheckReport rep{"global_unroll", {}};
  const DepthLedger& L = rec.ledger;
  const std::uint64_t D = rec.spec.depth();
  // log2 K with K = D^2 / s^2.
  const ld log2_k = 2 * std::log2(static_cast<ld>(D)) -
                    2 * std::log2(static_cast<ld>(rec.spec.scale_value()));
  const ld lhs = std::log2(static_cast<ld>(L.chain(0).visits));
  for (std::uint64_t d = 1; d + 1 <= D; ++d) {
    const auto md = L.chain(d).visits;
    if (md == 0) {
      rep.entries.push_back(skipped_entry("log2_root_ge_unrolled", d, "m_d = 0"));
      continue;
    }
    const ld pow = std::ldexp(ld{1}, static_cast<int>(std::min<std::uint64_t>(d, 16000)));
    ld rhs = pow * (std::log2(static_cast<ld>(md)) - 2 * log2_k);
    // K < 1 (s > D) weakens the last unrolling step; use the exact exponent.
    if (log2_k < 0) rhs = pow * std::log2(static_cast<ld>(md)) - (2 * pow - 2) * log2_k;
    rep.entries.push_back(entry("log2_root_ge_unrolled", d, format_double(lhs),
                                format_double(rhs), geq_with_slack(lhs, rhs)));
  }
  return rep;
}

CheckReport check_puct_recurrence(const RunRecord& rec) {
  if (auto g = gate(rec, "puct_recurrence", Variant::Puct)) return *g;
  CheckReport rep{"puct_recurrence", {}};
  const DepthLedger& L = rec.ledger;
  const auto& spec = rec.spec;
  const std::uint64_t D = spec.depth();
  const Rational c(rec.policy.c);
  const Rational s = spec.scale();

  // sqrt(M)/(a+1) >= sqrt(M)/(b+1) + gap, decided exactly by squaring.
  auto bonus_gap_holds = [](std::uint64_t M, std::uint64_t a, std::uint64_t b,
                            const Rational& gap) {
    if (b < a || M == 0) return gap <= 0;
    const Rational diff(BigInt(b) - a, BigInt(a + 1) * BigInt(b + 1));
    return Rational(M) * diff * diff >= gap * gap;
  };

  for (std::uint64_t d = 1; d + 1 <= D; ++d) {
    const auto mp = L.chain(d - 1).visits, md = L.chain(d).visits, ml = L.leaf(d).visits;
    const ld root = std::sqrt(static_cast<ld>(mp));
    const ld first = root / (static_cast<ld>(md) + 1);
    const ld second = root / (static_cast<ld>(ml) + 1);

    const Rational gap = s / (c * D);
    rep.entries.push_back(entry("a.bonus_gap", d, format_double(first),
                                format_double(second + static_cast<ld>(gap)),
                                bonus_gap_holds(mp, md, ml, gap)));
    // Form printed without the constant c on the reward gap.
    const Rational literal_gap = s / D;
    auto literal = entry("a.bonus_gap_without_c", d, format_double(first),
                         format_double(second + static_cast<ld>(literal_gap)),
                         bonus_gap_holds(mp, md, ml, literal_gap), "informational");
    literal.informational = true;
    rep.entries.push_back(std::move(literal));

    const Rational scaled = Rational(md) * s / (c * D);
    const Rational bound = scaled * scaled;
    rep.entries.push_back(entry("b.squared", d, std::to_string(mp), rational_str(bound),
                                Rational(mp) >= bound));
    push_order_entries(rep, L, d);
  }
  return rep;
}

CheckReport check_uct_recurrence(const RunRecord& rec) {
  if (auto g = gate(rec, "uct_recurrence", Variant::Uct)) return *g;
  CheckReport rep{"uct_recurrence", {}};
  const DepthLedger& L = rec.ledger;
  const std::uint64_t D = rec.spec.depth();
  const ld gap = static_cast<ld>(rec.spec.scale_value()) / D;
  for (std::uint64_t d = 1; d + 1 <= D; ++d) {
    const auto mp = L.chain(d - 1).visits, md = L.chain(d).visits;
    if (md == 0) {
      rep.entries.push_back(skipped_entry("recurrence", d, "m_d = 0"));
      continue;
    }
    const ld log_parent = std::log(static_cast<ld>(mp));
    const ld bonus = std::sqrt(2 * log_parent / md);
    rep.entries.push_back(entry("a.bonus_ge_gap", d, format_double(bonus), format_double(gap),
                                geq_with_slack(bonus, gap)));
    // m_{d-1} >= exp(m_d s^2 / 2D^2), compared as logarithms.
    const ld exponent = static_cast<ld>(md) * gap * gap / 2;
    rep.entries.push_back(entry("b.log_parent_ge_exponent", d, format_double(log_parent),
                                format_double(exponent), geq_with_slack(log_parent, exponent),
                                "natural log of both sides"));
    push_order_entries(rep, L, d);
  }
  return rep;
}

std::vector<CheckReport> verify_all(const RunRecord& rec) {
  std::vector<CheckReport> out;
  out.push_back(check_ledger_invariants(rec));
  out.push_back(check_leaf_visits_and_means(rec));
  out.push_back(check_selection_dominance(rec));
  out.push_back(check_doubling_chain(rec));
  switch (rec.policy.variant) {
    case Variant::PolyUct:
      out.push_back(check_poly_recurrence(rec));
      out.push_back(check_global_unroll(rec));
      break;
    case Variant::Puct:
      out.push_back(check_puct_recurrence(rec));
      break;
    case Variant::Uct:
      out.push_back(check_uct_recurrence(rec));
      break;
  }
  return out;
}

}  // namespace dchain
