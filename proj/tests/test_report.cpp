#include "dchain/report.hpp"

#include <json.hpp>

#include "doctest.h"

using namespace dchain;

namespace {

RunReport verified(std::uint64_t depth, PolicySpec policy, Mode mode = Mode::FullTrajectory,
                   std::uint64_t budget = 1000000, Rational scale = 1) {
  RunReport r{run_to_optimum(ChainSpec(depth, scale), policy, RunConfig{mode, budget}),
              std::nullopt};
  r.checks = verify_all(r.record);
  return r;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> out(1);
  for (char ch : line) {
    if (ch == ',')
      out.emplace_back();
    else
      out.back() += ch;
  }
  return out;
}

}  // namespace

TEST_CASE("JSON round-trip is byte-identical") {
  const RunReport reports[] = {
      verified(2, PolicySpec::poly_uct()),
      verified(4, PolicySpec::puct(2.0, 0.5), Mode::IterativeExpansion),
      verified(3, PolicySpec::uct(), Mode::FullTrajectory, 1000000, Rational(3, 2)),
      verified(12, PolicySpec::poly_uct(), Mode::FullTrajectory, 500),
      {run_to_optimum(ChainSpec(3), PolicySpec::poly_uct(), RunConfig{}), std::nullopt},
  };
  for (const auto& r : reports) {
    for (bool timing : {false, true}) {
      const auto text = to_json(r, timing);
      const auto back = from_json(text);
      CHECK(to_json(back, timing) == text);
      CHECK(back.record.ledger == r.record.ledger);
      CHECK(back.record.first_hit == r.record.first_hit);
      CHECK(back.checks.has_value() == r.checks.has_value());
      if (r.checks) CHECK(*back.checks == *r.checks);
    }
  }
}

TEST_CASE("JSON layout") {
  const auto r = verified(2, PolicySpec::poly_uct());
  const auto j = nlohmann::json::parse(to_json(r, false));
  CHECK(j["result"]["T"] == 4);
  CHECK(j["result"]["reached"] == true);
  CHECK(j["result"]["wall_ns"] == 0);
  CHECK(j["env"]["scale"] == "1");
  CHECK(j["ledger"].size() == 3);
  CHECK(j["ledger"][1]["m_leaf"] == 3);
  CHECK(j["ledger"][0]["m_leaf"].is_null());
  std::size_t entries = 0;
  for (const auto& rep : *r.checks) entries += rep.entries.size();
  CHECK(j["checks"].size() == entries);
  CHECK(j["checks"][0]["name"] == "ledger_invariants:root_visits_eq_t");
  const auto unverified = RunReport{r.record, std::nullopt};
  CHECK_FALSE(nlohmann::json::parse(to_json(unverified, false)).contains("checks"));
}

TEST_CASE("unreached record has null T") {
  const auto r = verified(10, PolicySpec::poly_uct(), Mode::FullTrajectory, 100);
  const auto j = nlohmann::json::parse(to_json(r, false));
  CHECK(j["result"]["T"].is_null());
  CHECK(j["result"]["trajectories"] == 100);
}

TEST_CASE("malformed JSON is rejected") {
  CHECK_THROWS_AS(from_json("{"), ContractError);
  CHECK_THROWS_AS(from_json("{}"), ContractError);
  auto j = nlohmann::json::parse(to_json(verified(2, PolicySpec::poly_uct()), false));
  j["ledger"].erase(0);
  CHECK_THROWS_AS(from_json(j.dump()), ContractError);
  auto k = nlohmann::json::parse(to_json(verified(2, PolicySpec::poly_uct()), false));
  k["policy"]["variant"] = "ucb";
  CHECK_THROWS_AS(from_json(k.dump()), ContractError);
}

TEST_CASE("CSV row") {
  const auto r = verified(2, PolicySpec::poly_uct());
  const auto header = split_csv(csv_header());
  const auto row = split_csv(csv_row(r, false));
  REQUIRE(header.size() == row.size());
  auto col = [&](const std::string& name) {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return row[i];
    return std::string("?");
  };
  CHECK(col("policy") == "poly");
  CHECK(col("D") == "2");
  CHECK(col("reached") == "true");
  CHECK(col("T") == "4");
  CHECK(col("m0") == "4");
  CHECK(col("checks_failed") == "0");
  CHECK(col("wall_ns") == "0");
  CHECK(csv_row(r, false) == csv_row(verified(2, PolicySpec::poly_uct()), false));
}

TEST_CASE("table output") {
  const auto r = verified(2, PolicySpec::poly_uct());
  const auto text = to_table(r, false);
  CHECK(text.find("reached, T=4") != std::string::npos);
  CHECK(text.find("1/2") != std::string::npos);
  CHECK(text.find("failed=0") != std::string::npos);
  CHECK(render(r, Format::Csv, false) == csv_header() + "\n" + csv_row(r, false) + "\n");
}

TEST_CASE("bounds table rows") {
  BoundsQuery q;
  q.puct = q.uct = false;
  q.lo = q.hi = 25;
  const auto csv = bounds_table(q, Format::Csv);
  CHECK(csv.find("poly,25,,4,2^(2^4),10,2^(2^10),yes,best_log2=22.79") != std::string::npos);

  BoundsQuery u;
  u.poly = u.puct = false;
  u.lo = u.hi = 16;
  const auto j = nlohmann::json::parse(bounds_table(u, Format::Json));
  REQUIRE(j.size() == 1);
  CHECK(j[0]["cutoff_log2"] == "1");
  CHECK(j[0]["cutoff_ln"] == "4");
  CHECK(j[0]["discrepant"] == "yes");
  CHECK(j[0]["extra"].get<std::string>().rfind("fixed_point=true;tower_k2=exp^2(25.76167537496", 0) == 0);

  BoundsQuery p;
  p.poly = p.uct = false;
  p.lo = p.hi = 20;
  p.base_two = false;
  const auto pj = nlohmann::json::parse(bounds_table(p, Format::Json));
  CHECK(pj[0]["bound_ln"] == "2^(2^11)");
  CHECK_FALSE(pj[0].contains("discrepant"));

  BoundsQuery bad;
  bad.lo = 5;
  bad.hi = 4;
  CHECK_THROWS_AS(bounds_table(bad, Format::Table), ContractError);
}

TEST_CASE("format names") {
  CHECK(parse_format("json") == Format::Json);
  CHECK(parse_format("csv") == Format::Csv);
  CHECK(parse_format("table") == Format::Table);
  CHECK_THROWS_AS(parse_format("xml"), ContractError);
}
