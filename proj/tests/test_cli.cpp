#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "doctest.h"
#include "json.hpp"

#include "fraclap/cli.hpp"

namespace fs = std::filesystem;
using fraclap::cli::run;

namespace {

struct Scratch {
  fs::path dir;
  fs::path old;
  Scratch() {
    old = fs::current_path();
    dir = fs::temp_directory_path() / ("fraclap_cli_" + std::to_string(::getpid()));
    fs::remove_all(dir);
    fs::create_directories(dir);
    fs::current_path(dir);
  }
  ~Scratch() {
    fs::current_path(old);
    fs::remove_all(dir);
  }
};

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome call(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}

// Column `col` of a CSV with a header row.
std::vector<double> column(const fs::path& p, int col) {
  std::ifstream in(p);
  std::string line;
  std::getline(in, line);
  std::vector<double> v;
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string cell;
    for (int i = 0; i <= col; ++i) std::getline(ss, cell, ',');
    v.push_back(std::stod(cell));
  }
  return v;
}

}  // namespace

TEST_CASE("fraclap of a constant vanishes") {
  Scratch s;
  const Outcome o = call({"fraclap", "--target", "const:1", "--s", "0.5"});
  REQUIRE(o.code == 0);
  const auto v = column("fraclap.csv", 2);
  CHECK(v.size() == 101);
  for (double x : v) CHECK(x == 0.0);
  CHECK(slurp("fraclap.csv").starts_with("x,value,fraclap_value,tail_halfwidth\n"));
}

TEST_CASE("fraclap of a block is small") {
  Scratch s;
  const Outcome o = call({"fraclap", "--target", "block:t=1", "--s", "0.6", "--grid", "21"});
  REQUIRE(o.code == 0);
  const auto v = column("fraclap.csv", 2);
  CHECK(v.size() == 21);
  for (double x : v) CHECK(std::abs(x) <= 1e-4);
}

TEST_CASE("exit codes") {
  Scratch s;
  CHECK(call({"fraclap", "--target", "const:1", "--bogus"}).code == 2);
  CHECK_FALSE(fs::exists("fraclap.csv"));
  CHECK(call({"fraclap", "--target", "const:1", "--s", "abc"}).code == 2);
  CHECK(call({"fraclap", "--target", "const:1", "--s", "1.5"}).code == 2);
  CHECK(call({"fraclap", "--target", "x2"}).code == 2);
  CHECK(call({"fraclap", "--target", "const:1", "--grid", "1"}).code == 2);
  CHECK(call({"nonsense"}).code == 2);
  CHECK_FALSE(fs::exists("fraclap.csv"));

  const Outcome missing = call({"fraclap", "--target", "csv:/no/such/file.csv"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("/no/such/file.csv") != std::string::npos);

  {
    std::ofstream f("nan.csv");
    f << "x,value\n0,1\n1,nan\n2,1\n";
  }
  CHECK(call({"fraclap", "--target", "csv:nan.csv"}).code == 2);

  CHECK(call({"approximate", "--target", "exp", "--epsilon", "1e-12", "--max-degree", "3"}).code == 4);
  CHECK(fs::exists("approx.report.json"));
  const auto rep = nlohmann::json::parse(slurp("approx.report.json"));
  CHECK(rep.at("success") == false);
  CHECK(rep.at("stage") == "chebyshev");

  CHECK(call({"--help"}).code == 0);
}

TEST_CASE("approximate writes report, combo and trace") {
  Scratch s;
  const Outcome o = call({"approximate", "--target", "x2", "--epsilon", "0.0625", "--s", "0.5"});
  REQUIRE(o.code == 0);
  const auto rep = nlohmann::json::parse(slurp("approx.report.json"));
  CHECK(rep.at("epsilon_total").get<double>() <= 0.0625);
  const auto combo = nlohmann::json::parse(slurp("approx.combo.json"));
  CHECK(combo.at("blocks").size() == rep.at("blocks").get<std::size_t>());
  CHECK(slurp("approx.csv").starts_with("x,target,approx,diff,residual\n"));
  for (double d : column("approx.csv", 3)) CHECK(std::abs(d) <= 0.0625);
  for (double r : column("approx.csv", 4)) CHECK(std::abs(r) <= 1e-3);

  REQUIRE(call({"approximate", "--target", "const:0", "--output", "zero"}).code == 0);
  const auto zero = nlohmann::json::parse(slurp("zero.combo.json"));
  CHECK(zero.at("blocks").empty());
}

TEST_CASE("reruns are byte identical") {
  Scratch s;
  REQUIRE(call({"approximate", "--target", "sin", "--epsilon", "0.1", "--output", "a"}).code == 0);
  REQUIRE(call({"approximate", "--target", "sin", "--epsilon", "0.1", "--output", "b"}).code == 0);
  for (const char* ext : {".report.json", ".combo.json", ".csv"}) {
    CHECK(slurp(std::string("a") + ext) == slurp(std::string("b") + ext));
  }
}

TEST_CASE("config file with flag precedence") {
  Scratch s;
  {
    std::ofstream f("run.cfg");
    f << "# quadrature run\ntarget = gauss\ns = 0.9\ngrid = 5\n";
  }
  REQUIRE(call({"fraclap", "--config", "run.cfg", "--s", "0.5"}).code == 0);
  REQUIRE(call({"fraclap", "--target", "gauss", "--s", "0.5", "--grid", "5", "--output", "direct.csv"}).code == 0);
  CHECK(slurp("fraclap.csv") == slurp("direct.csv"));
  {
    std::ofstream f("bad.cfg");
    f << "grid 5\n";
  }
  CHECK(call({"fraclap", "--config", "bad.cfg"}).code == 2);
  {
    std::ofstream f("unknown.cfg");
    f << "colour = red\n";
  }
  CHECK(call({"fraclap", "--config", "unknown.cfg", "--target", "gauss"}).code == 2);
  CHECK(call({"fraclap", "--config", "missing.cfg"}).code == 2);
}

TEST_CASE("demos") {
  Scratch s;
  const Outcome h = call({"demo", "harnack", "--s", "0.5"});
  REQUIRE(h.code == 0);
  const auto hj = nlohmann::json::parse(slurp("harnack.json"));
  CHECK(hj.at("inf_inner").get<double>() <= 1e-10);
  CHECK(hj.at("exterior_negative") == true);
  CHECK(slurp("harnack.csv").starts_with("x,v,u\n"));

  const Outcome l = call({"demo", "logistic", "--sigma", "const:1", "--mu", "const:1", "--epsilon", "0.05"});
  REQUIRE(l.code == 0);
  const auto lj = nlohmann::json::parse(slurp("logistic.json"));
  CHECK(lj.at("sigma_error").get<double>() <= 0.05);
  CHECK(slurp("logistic.csv").starts_with("x,u,sigma,sigma_eps,residual\n"));
  CHECK(call({"demo", "logistic", "--sigma", "const:-1"}).code == 2);

  const Outcome m = call({"demo", "meanvalue", "--target", "x2"});
  REQUIRE(m.code == 0);
  for (double b : column("meanvalue.csv", 1)) CHECK(std::abs(b + 2.0) < 1e-6);
  for (double sp : column("meanvalue.csv", 2)) CHECK(std::abs(sp + 2.0) < 1e-9);
  CHECK(m.out.find("rho") != std::string::npos);

  CHECK(call({"demo", "juggle"}).code == 2);
}
