// Command-line driver. Talks to the library only through the C API.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <tuple>
#include <vector>

#include <CLI11.hpp>

#include "dchain/dchain.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitCheckFailed = 1;
constexpr int kExitExhausted = 2;
constexpr int kExitUsage = 64;
constexpr int kExitIo = 74;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RecordDeleter {
  void operator()(dchain_record* r) const { dchain_record_free(r); }
};
using Record = std::unique_ptr<dchain_record, RecordDeleter>;

std::string take(char* s) {
  std::string out = s ? s : "";
  dchain_string_free(s);
  return out;
}

dchain_variant parse_variant(const std::string& s) {
  if (s == "poly") return DCHAIN_POLY_UCT;
  if (s == "uct") return DCHAIN_UCT;
  if (s == "puct") return DCHAIN_PUCT;
  throw UsageError("unknown policy '" + s + "'");
}

dchain_mode parse_mode(const std::string& s) {
  if (s == "full") return DCHAIN_MODE_FULL;
  if (s == "iter") return DCHAIN_MODE_ITER;
  throw UsageError("unknown mode '" + s + "'");
}

dchain_format parse_format(const std::string& s) {
  if (s == "table") return DCHAIN_FORMAT_TABLE;
  if (s == "json") return DCHAIN_FORMAT_JSON;
  if (s == "csv") return DCHAIN_FORMAT_CSV;
  throw UsageError("unknown format '" + s + "'");
}

std::pair<std::uint64_t, std::uint64_t> parse_range(const std::string& s) {
  try {
    const auto dots = s.find("..");
    std::size_t used = 0;
    if (dots == std::string::npos) {
      const auto v = std::stoull(s, &used);
      if (used != s.size()) throw UsageError("");
      return {v, v};
    }
    const auto a = s.substr(0, dots), b = s.substr(dots + 2);
    const auto lo = std::stoull(a, &used);
    if (used != a.size()) throw UsageError("");
    const auto hi = std::stoull(b, &used);
    if (used != b.size()) throw UsageError("");
    if (lo < 1 || hi < lo) throw UsageError("");
    return {lo, hi};
  } catch (const std::exception&) {
    throw UsageError("invalid depth range '" + s + "' (expected A..B with 1 <= A <= B)");
  }
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ','))
    if (!item.empty()) out.push_back(item);
  if (out.empty()) throw UsageError("empty list '" + s + "'");
  return out;
}

Record run_or_throw(const dchain_run_options& opts) {
  dchain_record* raw = nullptr;
  const auto status = dchain_run(&opts, &raw);
  if (status == DCHAIN_ERR_INVALID_ARGUMENT) throw UsageError(dchain_last_error());
  if (status != DCHAIN_OK)
    throw std::runtime_error(std::string(dchain_status_string(status)) + ": " + dchain_last_error());
  return Record(raw);
}

std::uint64_t failed_checks(const dchain_record* r) {
  std::uint64_t passed = 0, failed = 0;
  dchain_record_check_counts(r, &passed, &failed);
  return failed;
}

// ---------------------------------------------------------------- run

struct RunArgs {
  std::string policy;
  std::optional<double> c;
  std::optional<double> v_init;
  std::uint64_t depth = 0;
  std::string scale = "1";
  std::string mode = "full";
  std::uint64_t budget = 1'000'000;
  std::string format = "table";
  bool verify = false;
  bool timing = false;
};

dchain_run_options make_options(const std::string& policy, std::optional<double> c,
                                std::optional<double> v_init, std::uint64_t depth,
                                const std::string& scale, const std::string& mode,
                                std::uint64_t budget) {
  dchain_run_options o = dchain_run_options_default(depth);
  o.variant = parse_variant(policy);
  if (o.variant != DCHAIN_PUCT && (c || v_init))
    throw UsageError("--c and --v-init only apply to --policy puct");
  o.c = o.variant == DCHAIN_PUCT ? c.value_or(2.0) : 0.0;
  o.v_init = v_init.value_or(0.0);
  o.scale = scale.c_str();
  o.mode = parse_mode(mode);
  o.budget = budget;
  return o;
}

int cmd_run(const RunArgs& a) {
  const auto fmt = parse_format(a.format);
  const auto opts = make_options(a.policy, a.c, a.v_init, a.depth, a.scale, a.mode, a.budget);
  Record rec = run_or_throw(opts);
  if (a.verify && dchain_record_verify(rec.get()) != DCHAIN_OK)
    throw std::runtime_error(dchain_last_error());
  char* text = nullptr;
  if (dchain_record_render(rec.get(), fmt, a.timing, &text) != DCHAIN_OK)
    throw std::runtime_error(dchain_last_error());
  std::cout << take(text) << std::flush;
  if (a.verify && failed_checks(rec.get()) > 0) return kExitCheckFailed;
  return dchain_record_reached(rec.get()) ? kExitOk : kExitExhausted;
}

// ---------------------------------------------------------------- sweep

struct SweepArgs {
  std::string policies = "poly,uct,puct";
  std::string c_list = "2";
  double v_init = 0.0;
  std::string depth_range;
  std::string scales = "1";
  std::string modes = "full";
  std::uint64_t budget = 1'000'000;
  std::string format = "csv";
  std::string out;
  unsigned jobs = 0;
  bool timing = false;
};

struct Cell {
  std::string policy;
  double c = 0.0;
  double v_init = 0.0;
  std::uint64_t depth = 0;
  std::string scale;
  double scale_key = 0.0;
  std::string mode;

  auto key() const { return std::tie(policy, c, v_init, depth, scale_key, scale, mode); }
};

double scale_value(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) return std::stod(s);
  return std::stod(s.substr(0, slash)) / std::stod(s.substr(slash + 1));
}

struct CellResult {
  std::string csv;
  std::string json;
  bool reached = false;
  std::uint64_t failed = 0;
  std::string error;
};

int cmd_sweep(const SweepArgs& a) {
  const auto fmt = parse_format(a.format);
  if (fmt == DCHAIN_FORMAT_TABLE) throw UsageError("sweep writes csv or json");
  const auto [lo, hi] = parse_range(a.depth_range);

  std::vector<Cell> cells;
  for (const auto& policy : split_list(a.policies)) {
    parse_variant(policy);
    std::vector<double> cs{0.0};
    if (policy == "puct") {
      cs.clear();
      for (const auto& c : split_list(a.c_list)) cs.push_back(std::stod(c));
    }
    for (double c : cs)
      for (auto D = lo; D <= hi; ++D)
        for (const auto& s : split_list(a.scales))
          for (const auto& mode : split_list(a.modes)) {
            parse_mode(mode);
            const std::string scale = s == "D" ? std::to_string(D) : s;
            cells.push_back({policy, c, policy == "puct" ? a.v_init : 0.0, D, scale,
                             scale_value(scale), mode});
          }
  }
  std::sort(cells.begin(), cells.end(),
            [](const Cell& x, const Cell& y) { return x.key() < y.key(); });

  // Flag-level errors surface here, before any cell runs.
  std::vector<dchain_run_options> options;
  for (const auto& cell : cells) {
    options.push_back(make_options(cell.policy,
                                   cell.policy == "puct" ? std::optional(cell.c) : std::nullopt,
                                   cell.policy == "puct" ? std::optional(cell.v_init) : std::nullopt,
                                   cell.depth, cell.scale, cell.mode, a.budget));
  }

  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!a.out.empty()) {
    file.open(a.out, std::ios::binary | std::ios::trunc);
    if (!file) {
      std::cerr << "dchain: cannot open '" << a.out << "' for writing\n";
      return kExitIo;
    }
    out = &file;
  }

  std::vector<CellResult> results(cells.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < cells.size(); i = next++) {
      CellResult& r = results[i];
      dchain_record* raw = nullptr;
      if (dchain_run(&options[i], &raw) != DCHAIN_OK) {
        r.error = dchain_last_error();
        continue;
      }
      Record rec(raw);
      dchain_record_verify(rec.get());
      r.reached = dchain_record_reached(rec.get());
      r.failed = failed_checks(rec.get());
      char* text = nullptr;
      dchain_record_csv_row(rec.get(), a.timing, &text);
      r.csv = take(text);
      if (fmt == DCHAIN_FORMAT_JSON) {
        dchain_record_render(rec.get(), DCHAIN_FORMAT_JSON, a.timing, &text);
        r.json = take(text);
      }
    }
  };
  unsigned jobs = a.jobs ? a.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min<unsigned>(jobs, std::max<std::size_t>(1, cells.size()));
  std::vector<std::thread> pool;
  for (unsigned j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  bool clean = true;
  if (fmt == DCHAIN_FORMAT_CSV) *out << dchain_csv_header() << '\n';
  else *out << "[\n";
  for (std::size_t i = 0; i < results.size(); ++i) {
    const auto& r = results[i];
    if (!r.error.empty()) {
      std::cerr << "dchain: cell " << i << " failed: " << r.error << '\n';
      clean = false;
      continue;
    }
    if (r.failed > 0) clean = false;
    if (fmt == DCHAIN_FORMAT_CSV) {
      *out << r.csv << '\n';
    } else {
      std::string body = r.json;
      while (!body.empty() && body.back() == '\n') body.pop_back();
      *out << body << (i + 1 < results.size() ? ",\n" : "\n");
    }
  }
  if (fmt == DCHAIN_FORMAT_JSON) *out << "]\n";
  out->flush();
  if (!*out) {
    std::cerr << "dchain: write failed\n";
    return kExitIo;
  }
  return clean ? kExitOk : kExitCheckFailed;
}

// ---------------------------------------------------------------- bounds

struct BoundsArgs {
  std::string which = "all";
  std::string depth_range;
  double c = 2.0;
  std::string log_base = "both";
  std::string format = "table";
};

int cmd_bounds(const BoundsArgs& a) {
  unsigned which = 0;
  if (a.which == "poly") which = DCHAIN_BOUNDS_POLY;
  else if (a.which == "puct") which = DCHAIN_BOUNDS_PUCT;
  else if (a.which == "uct") which = DCHAIN_BOUNDS_UCT;
  else if (a.which == "all") which = DCHAIN_BOUNDS_POLY | DCHAIN_BOUNDS_PUCT | DCHAIN_BOUNDS_UCT;
  else throw UsageError("unknown bound family '" + a.which + "'");
  unsigned bases = 0;
  if (a.log_base == "2") bases = DCHAIN_BASE_2;
  else if (a.log_base == "e") bases = DCHAIN_BASE_E;
  else if (a.log_base == "both") bases = DCHAIN_BASE_2 | DCHAIN_BASE_E;
  else throw UsageError("unknown log base '" + a.log_base + "'");
  const auto [lo, hi] = parse_range(a.depth_range);
  char* text = nullptr;
  const auto status = dchain_bounds_table(which, lo, hi, a.c, bases, parse_format(a.format), &text);
  if (status == DCHAIN_ERR_INVALID_ARGUMENT) throw UsageError(dchain_last_error());
  if (status != DCHAIN_OK) throw std::runtime_error(dchain_last_error());
  std::cout << take(text) << std::flush;
  return kExitOk;
}

// ---------------------------------------------------------------- bfs

int cmd_bfs(std::uint64_t depth) {
  const auto start = std::chrono::steady_clock::now();
  std::uint64_t nodes = 0;
  if (dchain_bfs_steps(depth, &nodes) != DCHAIN_OK) throw UsageError(dchain_last_error());
  const auto ns = std::chrono::duration_cast<std::chrono::nanoseconds>(
                      std::chrono::steady_clock::now() - start)
                      .count();
  std::cout << "depth=" << depth << " nodes=" << nodes << " wall_ns=" << ns << '\n';
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"D-chain tree-search lower-bound simulator and verifier", "dchain"};
  app.require_subcommand(1);

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run one policy until the optimal leaf is reached");
  run_cmd->add_option("--policy", run.policy, "poly | uct | puct")->required();
  run_cmd->add_option("--c", run.c, "PUCT constant c = c_puct * P (default 2)");
  run_cmd->add_option("--v-init", run.v_init, "PUCT value of unvisited children (default 0)");
  run_cmd->add_option("--depth", run.depth, "Chain depth D")->required();
  run_cmd->add_option("--scale", run.scale, "Reward scale s, e.g. 1, 5, 3/2");
  run_cmd->add_option("--mode", run.mode, "full | iter");
  run_cmd->add_option("--budget", run.budget, "Maximum number of trajectories");
  run_cmd->add_option("--format", run.format, "table | json | csv");
  run_cmd->add_flag("--verify", run.verify, "Run every applicable verifier check");
  run_cmd->add_flag("--timing", run.timing, "Report wall time (otherwise printed as 0)");

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Run and verify a grid of configurations");
  sweep_cmd->add_option("--policies", sweep.policies, "Comma list of poly,uct,puct");
  sweep_cmd->add_option("--c", sweep.c_list, "Comma list of PUCT constants");
  sweep_cmd->add_option("--v-init", sweep.v_init, "PUCT v_init");
  sweep_cmd->add_option("--depth-range", sweep.depth_range, "A..B")->required();
  sweep_cmd->add_option("--scales", sweep.scales, "Comma list of scales; 'D' means s = D");
  sweep_cmd->add_option("--modes", sweep.modes, "Comma list of full,iter");
  sweep_cmd->add_option("--budget", sweep.budget, "Trajectory budget per cell");
  sweep_cmd->add_option("--format", sweep.format, "csv | json");
  sweep_cmd->add_option("--out", sweep.out, "Output file (default stdout)");
  sweep_cmd->add_option("--jobs", sweep.jobs, "Worker threads (default: all cores)");
  sweep_cmd->add_flag("--timing", sweep.timing, "Report wall time (otherwise printed as 0)");

  BoundsArgs bounds;
  auto* bounds_cmd = app.add_subcommand("bounds", "Evaluate the closed-form lower bounds");
  bounds_cmd->add_option("--which", bounds.which, "poly | puct | uct | all");
  bounds_cmd->add_option("--depth-range", bounds.depth_range, "A..B")->required();
  bounds_cmd->add_option("--c", bounds.c, "PUCT constant");
  bounds_cmd->add_option("--log-base", bounds.log_base, "2 | e | both");
  bounds_cmd->add_option("--format", bounds.format, "table | json | csv");

  std::uint64_t bfs_depth = 0;
  auto* bfs_cmd = app.add_subcommand("bfs", "Breadth-first baseline on the complete binary tree");
  bfs_cmd->add_option("--depth", bfs_depth, "Tree depth, at most 40")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "dchain: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  }

  try {
    if (*run_cmd) return cmd_run(run);
    if (*sweep_cmd) return cmd_sweep(sweep);
    if (*bounds_cmd) return cmd_bounds(bounds);
    if (*bfs_cmd) return cmd_bfs(bfs_depth);
  } catch (const UsageError& e) {
    std::cerr << "dchain: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "dchain: invalid number: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "dchain: " << e.what() << '\n';
    return kExitCheckFailed;
  }
  return kExitUsage;
}
