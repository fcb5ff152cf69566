#include "dchain/report.hpp"

#include <algorithm>
#include <limits>
#include <sstream>

#include <json.hpp>

#include "dchain/format.hpp"

namespace dchain {

using json = nlohmann::ordered_json;

namespace {

json sum_to_json(u128 v) {
  if (v <= std::numeric_limits<std::uint64_t>::max()) return static_cast<std::uint64_t>(v);
  BigInt b = static_cast<std::uint64_t>(v >> 64);
  b <<= 64;
  b += static_cast<std::uint64_t>(v);
  return b.str();
}

u128 sum_from_json(const json& j) {
  if (j.is_number_unsigned()) return j.get<std::uint64_t>();
  const BigInt b(j.get<std::string>());
  if (b < 0 || b > (BigInt(1) << 128) - 1) throw ContractError("reward sum out of range");
  return (u128{static_cast<std::uint64_t>(b >> 64)} << 64) |
         static_cast<std::uint64_t>(b & std::numeric_limits<std::uint64_t>::max());
}

std::string mean_str(const NodeStat& st, const ChainSpec& spec) {
  auto m = mean(st, spec);
  return m ? format_rational(*m) : "-";
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

}  // namespace

Format parse_format(const std::string& name) {
  if (name == "table") return Format::Table;
  if (name == "json") return Format::Json;
  if (name == "csv") return Format::Csv;
  throw ContractError("unknown format '" + name + "'");
}

std::string to_json(const RunReport& report, bool include_timing) {
  const RunRecord& rec = report.record;
  json j;
  j["policy"] = {{"variant", to_string(rec.policy.variant)},
                 {"c", rec.policy.c},
                 {"v_init", rec.policy.v_init}};
  j["env"] = {{"D", rec.spec.depth()}, {"scale", format_rational(rec.spec.scale())}};
  j["config"] = {{"mode", to_string(rec.config.mode)}, {"budget", rec.config.budget}};
  j["result"] = {{"reached", rec.reached},
                 {"T", rec.reached ? json(rec.first_hit) : json(nullptr)},
                 {"trajectories", rec.ledger.trajectories()},
                 {"wall_ns", include_timing ? rec.wall_ns : 0}};
  json ledger = json::array();
  for (std::uint64_t d = 0; d <= rec.spec.depth(); ++d) {
    json row;
    row["d"] = d;
    row["m_chain"] = rec.ledger.chain(d).visits;
    row["sum_chain"] = sum_to_json(rec.ledger.chain(d).reward_sum_units);
    if (d == 0) {
      row["m_leaf"] = nullptr;
      row["sum_leaf"] = nullptr;
    } else {
      row["m_leaf"] = rec.ledger.leaf(d).visits;
      row["sum_leaf"] = sum_to_json(rec.ledger.leaf(d).reward_sum_units);
    }
    ledger.push_back(std::move(row));
  }
  j["ledger"] = std::move(ledger);
  if (report.checks) {
    json checks = json::array();
    for (const auto& rep : *report.checks) {
      for (const auto& e : rep.entries) {
        checks.push_back({{"name", rep.check + ":" + e.name},
                          {"depth", e.depth ? json(*e.depth) : json(nullptr)},
                          {"lhs", e.lhs},
                          {"rhs", e.rhs},
                          {"pass", e.outcome == Outcome::Skipped
                                       ? json(nullptr)
                                       : json(e.outcome == Outcome::Pass)},
                          {"status", to_string(e.outcome)},
                          {"informational", e.informational},
                          {"note", e.note}});
      }
    }
    j["checks"] = std::move(checks);
  }
  return j.dump(2) + "\n";
}

RunReport from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
    const auto& p = j.at("policy");
    PolicySpec policy{parse_variant(p.at("variant").get<std::string>()), p.at("c").get<double>(),
                      p.at("v_init").get<double>()};
    ChainSpec spec(j.at("env").at("D").get<std::uint64_t>(),
                   parse_rational(j.at("env").at("scale").get<std::string>()));
    RunConfig config{parse_mode(j.at("config").at("mode").get<std::string>()),
                     j.at("config").at("budget").get<std::uint64_t>()};
    const auto& r = j.at("result");
    RunRecord rec{spec, policy, config, r.at("reached").get<bool>(), 0,
                  DepthLedger(spec.depth()), {}, r.at("wall_ns").get<std::uint64_t>()};
    if (rec.reached) {
      rec.first_hit = r.at("T").get<std::uint64_t>();
      for (std::uint64_t d = 0; d <= spec.depth(); ++d) rec.final_path.push_back(NodeRef::chain(d));
    }
    rec.ledger.set_trajectories(r.at("trajectories").get<std::uint64_t>());
    const auto& rows = j.at("ledger");
    if (rows.size() != spec.depth() + 1) throw ContractError("ledger has wrong length");
    for (const auto& row : rows) {
      const auto d = row.at("d").get<std::uint64_t>();
      rec.ledger.chain(d) = {row.at("m_chain").get<std::uint64_t>(), sum_from_json(row.at("sum_chain"))};
      if (d > 0)
        rec.ledger.leaf(d) = {row.at("m_leaf").get<std::uint64_t>(), sum_from_json(row.at("sum_leaf"))};
    }
    RunReport out{std::move(rec), std::nullopt};
    if (j.contains("checks")) {
      std::vector<CheckReport> reports;
      for (const auto& c : j.at("checks")) {
        const auto full = c.at("name").get<std::string>();
        const auto colon = full.find(':');
        if (colon == std::string::npos) throw ContractError("check name lacks a group: " + full);
        const auto group = full.substr(0, colon);
        if (reports.empty() || reports.back().check != group) reports.push_back({group, {}});
        CheckEntry e;
        e.name = full.substr(colon + 1);
        if (!c.at("depth").is_null()) e.depth = c.at("depth").get<std::uint64_t>();
        e.lhs = c.at("lhs").get<std::string>();
        e.rhs = c.at("rhs").get<std::string>();
        e.outcome = parse_outcome(c.at("status").get<std::string>());
        e.informational = c.at("informational").get<bool>();
        e.note = c.at("note").get<std::string>();
        reports.back().entries.push_back(std::move(e));
      }
      out.checks = std::move(reports);
    }
    return out;
  } catch (const json::exception& e) {
    throw ContractError(std::string("malformed run record: ") + e.what());
  }
}

std::string csv_header() {
  return "policy,c,v_init,D,scale,mode,budget,reached,T,m0,checks_passed,checks_failed,wall_ns";
}

std::string csv_row(const RunReport& report, bool include_timing) {
  const RunRecord& rec = report.record;
  std::ostringstream os;
  os << to_string(rec.policy.variant) << ',' << format_double(rec.policy.c) << ','
     << format_double(rec.policy.v_init) << ',' << rec.spec.depth() << ','
     << format_rational(rec.spec.scale()) << ',' << to_string(rec.config.mode) << ','
     << rec.config.budget << ',' << (rec.reached ? "true" : "false") << ',';
  if (rec.reached) os << rec.first_hit;
  os << ',' << rec.ledger.chain(0).visits << ',';
  if (report.checks) os << count_passed(*report.checks);
  os << ',';
  if (report.checks) os << count_failed(*report.checks);
  os << ',' << (include_timing ? rec.wall_ns : 0);
  return os.str();
}

std::string to_table(const RunReport& report, bool include_timing) {
  const RunRecord& rec = report.record;
  std::ostringstream os;
  os << "policy   " << to_string(rec.policy.variant);
  if (rec.policy.variant == Variant::Puct)
    os << " (c=" << format_double(rec.policy.c) << ", v_init=" << format_double(rec.policy.v_init)
       << ")";
  os << "\nenv      D=" << rec.spec.depth() << " scale=" << format_rational(rec.spec.scale())
     << "\nconfig   mode=" << to_string(rec.config.mode) << " budget=" << rec.config.budget
     << "\nresult   ";
  if (rec.reached)
    os << "reached, T=" << rec.first_hit;
  else
    os << "budget exhausted after " << rec.ledger.trajectories() << " trajectories";
  if (include_timing) os << ", wall_ns=" << rec.wall_ns;
  os << "\n\n"
     << pad("d", 6) << pad("m_chain", 14) << pad("X_chain", 14) << pad("m_leaf", 14) << "X_leaf\n";
  for (std::uint64_t d = 0; d <= rec.spec.depth(); ++d) {
    const auto& ch = rec.ledger.chain(d);
    os << pad(std::to_string(d), 6) << pad(std::to_string(ch.visits), 14)
       << pad(mean_str(ch, rec.spec), 14);
    if (d == 0) {
      os << pad("-", 14) << "-";
    } else {
      const auto& lf = rec.ledger.leaf(d);
      os << pad(std::to_string(lf.visits), 14) << mean_str(lf, rec.spec);
    }
    os << '\n';
  }
  if (report.checks) {
    os << "\nchecks   passed=" << count_passed(*report.checks)
       << " failed=" << count_failed(*report.checks) << '\n';
    for (const auto& rep : *report.checks) {
      os << "  " << pad(rep.check, 24) << (rep.ok() ? "ok" : "FAILED") << " (" << rep.passed()
         << " pass, " << rep.failed() << " fail, " << rep.skipped() << " skipped)\n";
      for (const auto& e : rep.entries) {
        if (e.outcome != Outcome::Fail) continue;
        os << "    FAIL " << e.name << " d=" << (e.depth ? std::to_string(*e.depth) : "-")
           << ": " << e.lhs << " vs " << e.rhs << '\n';
      }
    }
  }
  return os.str();
}

std::string render(const RunReport& report, Format format, bool include_timing) {
  switch (format) {
    case Format::Json: return to_json(report, include_timing);
    case Format::Csv: return csv_header() + "\n" + csv_row(report, include_timing) + "\n";
    case Format::Table: return to_table(report, include_timing);
  }
  return {};
}

namespace {

struct BoundsRow {
  std::string which;
  std::uint64_t depth = 0;
  std::string c;
  std::int64_t cutoff_two = 0;
  std::int64_t cutoff_e = 0;
  std::string bound_two;
  std::string bound_e;
  std::string extra;
};

std::string tower_bound(std::uint64_t depth, std::int64_t count) {
  if (depth < 2 || count < 0) return "vacuous";
  return uct_tower(depth, count).to_string();
}

std::vector<BoundsRow> bound_rows(const BoundsQuery& q) {
  std::vector<BoundsRow> rows;
  for (std::uint64_t D = q.lo; D <= q.hi; ++D) {
    if (q.poly) {
      BoundsRow r{"poly", D, "", hat_d_poly(D, LogBase::Two), hat_d_poly(D, LogBase::E), {}, {}, {}};
      r.bound_two = DoubleExp::from_cutoff(r.cutoff_two).to_string();
      r.bound_e = DoubleExp::from_cutoff(r.cutoff_e).to_string();
      if (D >= 2) {
        const auto best = poly_best_bound(D);
        r.extra = best.is_vacuous() ? "best_log2=vacuous"
                                    : "best_log2=" + format_double(*best.log2) +
                                          "@d=" + std::to_string(best.best_d);
      }
      rows.push_back(std::move(r));
    }
    if (q.puct) {
      BoundsRow r{"puct", D, format_double(q.c), hat_d_puct(D, q.c, LogBase::Two),
                  hat_d_puct(D, q.c, LogBase::E), {}, {}, {}};
      r.bound_two = DoubleExp::from_cutoff(r.cutoff_two).to_string();
      r.bound_e = DoubleExp::from_cutoff(r.cutoff_e).to_string();
      rows.push_back(std::move(r));
    }
    if (q.uct) {
      BoundsRow r{"uct", D, "", uct_exp_count(D, LogBase::Two), uct_exp_count(D, LogBase::E), {}, {}, {}};
      r.bound_two = tower_bound(D, r.cutoff_two);
      r.bound_e = tower_bound(D, r.cutoff_e);
      if (D >= 2)
        r.extra = std::string(check_fixed_point(D).holds ? "fixed_point=true" : "fixed_point=false") +
                  ";tower_k2=" + uct_tower(D, 2).to_string();
      rows.push_back(std::move(r));
    }
  }
  return rows;
}

}  // namespace

std::string bounds_table(const BoundsQuery& q, Format format) {
  if (q.lo < 1 || q.hi < q.lo) throw ContractError("invalid depth range");
  if (!q.base_two && !q.base_e) throw ContractError("no log base selected");
  if (q.puct && !(q.c > 0)) throw ContractError("c must be positive");
  const auto rows = bound_rows(q);
  const bool both = q.base_two && q.base_e;

  std::vector<std::string> header{"which", "D", "c"};
  if (q.base_two) header.insert(header.end(), {"cutoff_log2", "bound_log2"});
  if (q.base_e) header.insert(header.end(), {"cutoff_ln", "bound_ln"});
  if (both) header.push_back("discrepant");
  header.push_back("extra");

  std::vector<std::vector<std::string>> cells;
  for (const auto& r : rows) {
    std::vector<std::string> line{r.which, std::to_string(r.depth), r.c};
    if (q.base_two) line.insert(line.end(), {std::to_string(r.cutoff_two), r.bound_two});
    if (q.base_e) line.insert(line.end(), {std::to_string(r.cutoff_e), r.bound_e});
    if (both) line.push_back(r.cutoff_two != r.cutoff_e ? "yes" : "no");
    line.push_back(r.extra);
    cells.push_back(std::move(line));
  }

  std::ostringstream os;
  if (format == Format::Json) {
    json arr = json::array();
    for (const auto& line : cells) {
      json obj;
      for (std::size_t i = 0; i < header.size(); ++i) obj[header[i]] = line[i];
      arr.push_back(std::move(obj));
    }
    return arr.dump(2) + "\n";
  }
  if (format == Format::Csv) {
    auto join = [&](const std::vector<std::string>& v) {
      for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
      os << '\n';
    };
    join(header);
    for (const auto& line : cells) join(line);
    return os.str();
  }
  std::vector<std::size_t> width(header.size());
  for (std::size_t i = 0; i < header.size(); ++i) width[i] = header[i].size();
  for (const auto& line : cells)
    for (std::size_t i = 0; i < line.size(); ++i) width[i] = std::max(width[i], line[i].size());
  auto emit = [&](const std::vector<std::string>& v) {
    for (std::size_t i = 0; i < v.size(); ++i)
      os << (i + 1 < v.size() ? pad(v[i], width[i] + 2) : v[i]);
    os << '\n';
  };
  emit(header);
  for (const auto& line : cells) emit(line);
  return os.str();
}

}  // namespace dchain
