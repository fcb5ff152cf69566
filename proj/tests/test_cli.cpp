#include <sys/wait.h>

#include <array>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#include "doctest.h"

namespace {

struct Result {
  int code = -1;
  std::string out;
};

Result cli(const std::string& args) {
  const std::string cmd = std::string(DCHAIN_CLI_PATH) + " " + args + " 2>/dev/null";
  Result r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe);
  std::array<char, 4096> buf;
  std::size_t n;
  while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char ch : s) n += ch == '\n';
  return n;
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("run: golden D=2 with verification") {
  const auto r = cli("run --policy poly --depth 2 --verify --format json");
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["result"]["T"] == 4);
  for (const auto& c : j["checks"]) CHECK(c["status"] != "fail");
}

TEST_CASE("run: exhausted budget exits 2") {
  const auto r = cli("run --policy poly --depth 25 --budget 1000000");
  CHECK(r.code == 2);
  CHECK(r.out.find("budget exhausted") != std::string::npos);
}

TEST_CASE("run: PUCT iterative D=1") {
  const auto r = cli("run --policy puct --c 2 --depth 1 --mode iter");
  CHECK(r.code == 0);
  CHECK(r.out.find("reached, T=1") != std::string::npos);
}

TEST_CASE("run: output is byte-identical across invocations") {
  const std::string args = "run --policy uct --depth 5 --mode iter --verify --format json";
  CHECK(cli(args).out == cli(args).out);
}

TEST_CASE("run: --timing reports wall time") {
  const auto j =
      nlohmann::json::parse(cli("run --policy poly --depth 4 --format json --timing").out);
  CHECK(j["result"]["wall_ns"].get<std::uint64_t>() > 0);
}

TEST_CASE("run: usage errors exit 64") {
  CHECK(cli("run --depth 2").code == 64);
  CHECK(cli("run --policy ucb --depth 2").code == 64);
  CHECK(cli("run --policy poly --depth 0").code == 64);
  CHECK(cli("run --policy poly --c 2 --depth 2").code == 64);
  CHECK(cli("run --policy puct --c -1 --depth 2").code == 64);
  CHECK(cli("run --policy poly --depth 2 --format xml").code == 64);
  CHECK(cli("run --policy poly --depth 2 --budget 0").code == 64);
  CHECK(cli("frobnicate").code == 64);
  CHECK(cli("").code == 64);
}

TEST_CASE("sweep: rows and determinism") {
  const std::string args = "sweep --policies poly --depth-range 1..6 --modes full --jobs 3";
  const auto a = cli(args), b = cli(args);
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  CHECK(count_lines(a.out) == 7);
  CHECK(a.out.rfind("policy,c,v_init,D,", 0) == 0);
}

TEST_CASE("sweep: exhausted cell is not a failure") {
  const auto r = cli("sweep --policies poly --depth-range 25..25 --budget 1000000");
  CHECK(r.code == 0);
  CHECK(r.out.find(",false,,1000000,") != std::string::npos);
}

TEST_CASE("sweep: writes files and JSON") {
  const auto dir = std::filesystem::temp_directory_path() / "dchain_cli_tests";
  std::filesystem::create_directories(dir);
  const auto path = dir / "sweep.csv";
  const auto r = cli("sweep --policies poly,puct --c 1,2 --depth-range 2..3 --modes full,iter "
                     "--out " + path.string());
  CHECK(r.code == 0);
  CHECK(count_lines(read_file(path)) == 1 + 3 * 2 * 2);
  const auto j = nlohmann::json::parse(
      cli("sweep --policies uct --depth-range 2..3 --scales 1,D --format json").out);
  CHECK(j.size() == 4);
  std::filesystem::remove_all(dir);
}

TEST_CASE("sweep: I/O and usage errors") {
  CHECK(cli("sweep --policies poly --depth-range 1..2 --out /nonexistent/dir/x.csv").code == 74);
  CHECK(cli("sweep --policies poly --depth-range 3..1").code == 64);
  CHECK(cli("sweep --policies poly --depth-range 1..2 --format table").code == 64);
}

TEST_CASE("bounds: calculator rows") {
  const auto poly = cli("bounds --which poly --depth-range 25..25 --log-base both --format csv");
  CHECK(poly.code == 0);
  CHECK(poly.out.find("poly,25,,4,2^(2^4),10,2^(2^10),yes") != std::string::npos);

  const auto uct = cli("bounds --which uct --depth-range 16..16 --format json");
  CHECK(uct.code == 0);
  const auto j = nlohmann::json::parse(uct.out);
  CHECK(j[0]["cutoff_log2"] == "1");
  CHECK(j[0]["cutoff_ln"] == "4");

  const auto puct = cli("bounds --which puct --c 2 --depth-range 20..20 --log-base e --format csv");
  CHECK(puct.code == 0);
  CHECK(puct.out.find("puct,20,2,11,2^(2^11)") != std::string::npos);

  CHECK(cli("bounds --which all --depth-range 1..30").code == 0);
  CHECK(cli("bounds --depth-range 5..4").code == 64);
  CHECK(cli("bounds --depth-range 1..3 --log-base 10").code == 64);
}

TEST_CASE("bfs") {
  auto r = cli("bfs --depth 1");
  CHECK(r.code == 0);
  CHECK(r.out.find("nodes=3 ") != std::string::npos);
  CHECK(cli("bfs --depth 2").out.find("nodes=7 ") != std::string::npos);
  CHECK(cli("bfs --depth 41").code == 64);
}
