#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

#include <json.hpp>

#ifndef STC_CLI_PATH
#error "STC_CLI_PATH must be defined"
#endif
#ifndef STC_FIXTURES_DIR
#error "STC_FIXTURES_DIR must be defined"
#endif

static int run(const std::string& args) {
  std::string cmd = std::string(STC_CLI_PATH) + " " + args + " > /dev/null 2>&1";
  int rc = std::system(cmd.c_str());
  return WEXITSTATUS(rc);
}

static std::string slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

static std::string fixture(const std::string& name) {
  return std::string(STC_FIXTURES_DIR) + "/" + name;
}

TEST_CASE("algebra run is deterministic and exits 0") {
  CHECK(run("algebra --dims 3..3 --ranks 1..2 --trials 2 --seed 5 --out /tmp/r1.ndjson") == 0);
  CHECK(run("algebra --dims 3..3 --ranks 1..2 --trials 2 --seed 5 --out /tmp/r2.ndjson") == 0);
  CHECK(slurp("/tmp/r1.ndjson") == slurp("/tmp/r2.ndjson"));
  CHECK(slurp("/tmp/r1.ndjson").find("\"summary\"") != std::string::npos);
}

TEST_CASE("algebra exact mode exits 0") {
  CHECK(run("algebra --dims 3..3 --ranks 2..2 --trials 1 --exact") == 0);
}

TEST_CASE("zero trials produce an empty passing report") {
  CHECK(run("algebra --dims 3..6 --ranks 1..5 --trials 0 --out /tmp/r0.ndjson") == 0);
  nlohmann::json last;
  std::istringstream in(slurp("/tmp/r0.ndjson"));
  std::string line, prev;
  while (std::getline(in, line))
    if (!line.empty()) prev = line;
  last = nlohmann::json::parse(prev);
  CHECK(last.at("checks").get<int>() == 0);
  CHECK(last.at("pass").get<bool>());
}

TEST_CASE("malformed and out-of-range configuration exits 2") {
  CHECK(run("algebra --dims 5..3 --ranks 1..2 --trials 1") == 2);
  CHECK(run("algebra --dims 3..abc --ranks 1..2 --trials 1") == 2);
  CHECK(run("algebra --dims 3..13 --ranks 1..2 --trials 1") == 2);
  CHECK(run("algebra --dims 3..9 --ranks 1..2 --trials 1 --exact") == 2);
  CHECK(run("chart --fixture no-such-chart") == 2);
  CHECK(run("chart --exact") == 2);
  CHECK(run("solution --input /nonexistent/file.json") == 2);
  CHECK(run("definitely-not-a-subcommand") == 2);
}

TEST_CASE("graph construction emits a tensor certificate") {
  CHECK(run("construct graph-poly --edges " + fixture("k4.txt") +
            " --tensor-out /tmp/k4-tensor.json --out /tmp/k4.ndjson") == 0);
  nlohmann::json doc = nlohmann::json::parse(slurp("/tmp/k4-tensor.json"));
  CHECK(doc.at("sigma-coefficient").get<std::string>() == "4");
  CHECK(doc.at("kappa").get<std::string>() == "-24");
  CHECK(doc.at("tensor").at("dim").get<int>() == 6);
  CHECK(doc.at("tensor").at("rank").get<int>() == 3);
}

TEST_CASE("petersen graph construction") {
  CHECK(run("construct graph-poly --edges " + fixture("petersen.txt") +
            " --tensor-out /tmp/pet-tensor.json") == 0);
  nlohmann::json doc = nlohmann::json::parse(slurp("/tmp/pet-tensor.json"));
  CHECK(doc.at("tensor").at("dim").get<int>() == 15);
}

TEST_CASE("solution certification fixtures") {
  CHECK(run("solution --input " + fixture("clifford.json")) == 0);
  CHECK(run("solution --input " + fixture("su3.json")) == 0);
  CHECK(run("solution --input " + fixture("su2.json")) == 1);
  CHECK(run("solution --input " + fixture("su3-energy.json")) == 1);
  CHECK(run("solution --input " + fixture("clifford-torus.json")) == 0);
}

TEST_CASE("chart run on the sphere fixture") {
  CHECK(run("chart --fixture sphere --dim 3 --points 1 --seed 2") == 0);
}
