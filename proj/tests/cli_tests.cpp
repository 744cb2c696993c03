// Drives the hoppetree binary end to end: flags, formats, exit codes,
// byte-level determinism.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#ifndef HOPPETREE_CLI_PATH
#error "HOPPETREE_CLI_PATH must be defined"
#endif

namespace {

const std::string kCli = HOPPETREE_CLI_PATH;

int run(const std::string& args, const std::string& stdout_path = "/dev/null") {
  const std::string cmd = kCli + " " + args + " >" + stdout_path + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WEXITSTATUS(status);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

std::string tmp_path(const std::string& name) {
  return "/tmp/hoppetree_test_" + name;
}

}  // namespace

TEST_CASE("simulate writes constant depth rows for n=2") {
  const std::string out = tmp_path("sim_n2.csv");
  REQUIRE(run("simulate --theta 1 --nodes 2 --replicates 10 --seed 5 --stat depth --out " +
              out) == 0);
  const auto lines = lines_of(slurp(out));
  REQUIRE(lines.size() == 11);
  CHECK(lines[0] == "replicate,depth");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    CHECK(lines[i] == std::to_string(i - 1) + ",1");
  }
}

TEST_CASE("simulate is byte-identical across runs and worker counts") {
  const std::string a = tmp_path("det_a.csv");
  const std::string b = tmp_path("det_b.csv");
  const std::string c = tmp_path("det_c.csv");
  const std::string base =
      "simulate --theta 2 --nodes 1000 --replicates 1000 --seed 7 --stat leaves";
  REQUIRE(run(base + " --workers 1 --out " + a) == 0);
  REQUIRE(run(base + " --workers 1 --out " + b) == 0);
  REQUIRE(run(base + " --workers 4 --out " + c) == 0);
  const std::string bytes = slurp(a);
  CHECK(bytes == slurp(b));
  CHECK(bytes == slurp(c));
}

TEST_CASE("simulate json carries the schema and summary") {
  const std::string out = tmp_path("sim.json");
  REQUIRE(run("simulate --theta 1 --nodes 50 --replicates 200 --seed 3 --stat ipl "
              "--format json --out " + out) == 0);
  const auto doc = nlohmann::json::parse(slurp(out));
  CHECK(doc.at("schema") == "hoppetree/1");
  CHECK(doc.at("statistic") == "ipl");
  CHECK(doc.at("values").size() == 200);
  CHECK(doc.at("summary").at("count") == 200);
}

TEST_CASE("simulate summary mean tracks the exact leaf mean") {
  const std::string out = tmp_path("sim_leaves.json");
  REQUIRE(run("simulate --theta 1 --nodes 10000 --replicates 2000 --seed 12 "
              "--stat leaves --format json --out " + out) == 0);
  const auto doc = nlohmann::json::parse(slurp(out));
  const double mean = doc.at("summary").at("mean").get<double>();
  // leaf_mean_exact(1, 1e4) = 4999.5 + 9999/19998; se = sqrt(n/12/R) ~ 0.65.
  CHECK(std::abs(mean - 5000.0) <= 4.0 * 0.65);
}

TEST_CASE("invalid flags exit with 2") {
  CHECK(run("simulate --nodes 2 --replicates 1 --seed 1") == 2);   // missing theta
  CHECK(run("simulate --theta -1 --nodes 2 --replicates 1 --seed 1") == 2);
  CHECK(run("simulate --theta 1 --nodes 0 --replicates 1 --seed 1") == 2);
  CHECK(run("simulate --theta 1 --nodes 2 --replicates 1 --seed 1 --stat bogus") == 2);
  CHECK(run("simulate --theta 1 --nodes 1 --replicates 1 --seed 1 --stat subtree") == 2);
  CHECK(run("exact --nodes 4 --stat depth --format yaml") == 2);
  CHECK(run("nonsense") == 2);
  CHECK(run("limit --theta 1 --population 100 --seed 1") == 2);
}

TEST_CASE("exact depth pmf rows") {
  const std::string out = tmp_path("exact_depth.csv");
  REQUIRE(run("exact --theta 1 --nodes 4 --stat depth --pmf --out " + out) == 0);
  const auto lines = lines_of(slurp(out));
  REQUIRE(lines.size() == 4);
  CHECK(lines[0] == "value,probability");
  CHECK(lines[1].substr(0, 2) == "1,");
  CHECK(std::stod(lines[1].substr(2)) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(std::stod(lines[2].substr(2)) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(std::stod(lines[3].substr(2)) == doctest::Approx(1.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("exact leaves moments") {
  const std::string out = tmp_path("exact_leaves.json");
  REQUIRE(run("exact --theta 2 --nodes 3 --stat leaves --format json --out " + out) == 0);
  const auto doc = nlohmann::json::parse(slurp(out));
  CHECK(doc.at("mean").get<double>() == doctest::Approx(5.0 / 3.0).epsilon(1e-12));
  CHECK(doc.at("variance").get<double>() == doctest::Approx(2.0 / 9.0).epsilon(1e-12));
}

TEST_CASE("exact ipl at n=1 is zero") {
  const std::string out = tmp_path("exact_ipl.json");
  REQUIRE(run("exact --nodes 1 --stat ipl --format json --out " + out) == 0);
  const auto doc = nlohmann::json::parse(slurp(out));
  CHECK(doc.at("mean").get<double>() == 0.0);
}

TEST_CASE("exact ancestor stats") {
  const std::string out = tmp_path("exact_anc.json");
  REQUIRE(run("exact --theta 2 --nodes 5 --stat ancestor --index 3 --format json --out " +
              out) == 0);
  const auto doc = nlohmann::json::parse(slurp(out));
  CHECK(doc.at("probability").get<double>() == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(doc.at("expected_descendants").get<double>() == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(run("exact --theta 2 --nodes 5 --stat ancestor") == 2);  // missing --index
}

TEST_CASE("verify exact tier passes and the fault hook trips it") {
  const std::string out = tmp_path("verify.txt");
  REQUIRE(run("verify --tier exact", out) == 0);
  const std::string text = slurp(out);
  CHECK(text.find("PASS") != std::string::npos);
  CHECK(text.find("FAIL") == std::string::npos);
  CHECK(run("verify --tier exact --inject-fault") == 1);
  CHECK(run("verify --tier bogus") == 2);
}

TEST_CASE("limit with zero iterations emits a zero population") {
  const std::string out = tmp_path("limit0.csv");
  REQUIRE(run("limit --theta 1 --population 10000 --iterations 0 --seed 2 --out " + out) == 0);
  const auto lines = lines_of(slurp(out));
  REQUIRE(lines.size() == 10001);
  const auto header = nlohmann::json::parse(lines[0]);
  CHECK(header.at("schema") == "hoppetree/1");
  CHECK(header.at("stage").at("achieved").at("mean").get<double>() == 0.0);
  for (std::size_t i = 1; i < lines.size(); ++i) {
    CHECK(lines[i] == "0");
  }
}

TEST_CASE("limit records both stages for theta != 1") {
  const std::string out = tmp_path("limit2.csv");
  REQUIRE(run("limit --theta 2 --population 10000 --iterations 6 --seed 2 --out " + out) == 0);
  const auto header = nlohmann::json::parse(lines_of(slurp(out))[0]);
  CHECK(header.contains("stage1"));
  CHECK(header.at("stage1").at("theta").get<double>() == 1.0);
  CHECK(header.at("stage").at("theta").get<double>() == 2.0);
}

TEST_CASE("limit is byte-identical across runs and worker counts") {
  const std::string a = tmp_path("limit_a.csv");
  const std::string b = tmp_path("limit_b.csv");
  const std::string c = tmp_path("limit_c.csv");
  const std::string base = "limit --theta 1 --population 10000 --iterations 5 --seed 4";
  REQUIRE(run(base + " --workers 1 --out " + a) == 0);
  REQUIRE(run(base + " --workers 1 --out " + b) == 0);
  REQUIRE(run(base + " --workers 4 --out " + c) == 0);
  const std::string bytes = slurp(a);
  CHECK(bytes == slurp(b));
  CHECK(bytes == slurp(c));
}
