#include <cmath>
#include <sstream>

#include "doctest.h"

#include "fraclap/errors.hpp"
#include "fraclap/grid_function.hpp"

using namespace fraclap;

namespace {

double quintic(double x) { return 0.3 - x + 2.0 * x * x - 0.5 * std::pow(x, 3) + 0.25 * std::pow(x, 5); }
double quintic1(double x) { return -1.0 + 4.0 * x - 1.5 * x * x + 1.25 * std::pow(x, 4); }
double quintic2(double x) { return 4.0 - 3.0 * x + 5.0 * std::pow(x, 3); }

GridFunction sampled_quintic(int n) {
  std::vector<double> v, d1, d2;
  for (int i = 0; i < n; ++i) {
    const double x = -1.0 + 2.0 * i / (n - 1);
    v.push_back(quintic(x));
    d1.push_back(quintic1(x));
    d2.push_back(quintic2(x));
  }
  return GridFunction(-1.0, 1.0, v, d1, d2);
}

}  // namespace

TEST_CASE("quintic Hermite reproduces quintics") {
  const GridFunction g = sampled_quintic(7);
  for (double x : {-0.97, -0.5, -0.123, 0.0, 0.31, 0.77, 1.0}) {
    CHECK(g.evaluate(x) == doctest::Approx(quintic(x)).epsilon(1e-12));
    CHECK(g.evaluate(x, 1) == doctest::Approx(quintic1(x)).epsilon(1e-11));
    CHECK(g.evaluate(x, 2) == doctest::Approx(quintic2(x)).epsilon(1e-10));
  }
}

TEST_CASE("constant extension outside the grid") {
  const GridFunction g = sampled_quintic(5);
  CHECK(g.evaluate(-3.0) == quintic(-1.0));
  CHECK(g.evaluate(4.0) == quintic(1.0));
  CHECK(g.evaluate(4.0, 1) == 0.0);
  CHECK(g.evaluate(1.0, 1) == doctest::Approx(quintic1(1.0)));
}

TEST_CASE("value-only grids are linear and refuse derivatives") {
  const GridFunction g(0.0, 2.0, {0.0, 1.0, 4.0});
  CHECK(g.evaluate(0.5) == doctest::Approx(0.5));
  CHECK(g.evaluate(1.5) == doctest::Approx(2.5));
  CHECK_THROWS_AS(g.evaluate(0.5, 1), DomainError);
}

TEST_CASE("CSV round trip is exact") {
  const GridFunction g = sampled_quintic(9);
  std::stringstream ss;
  g.write_csv(ss);
  const GridFunction h = GridFunction::parse_csv(ss, "memory");
  REQUIRE(h.size() == g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(h.values()[i] == g.values()[i]);
    CHECK(h.deriv2()[i] == g.deriv2()[i]);
  }
}

TEST_CASE("CSV errors name the origin") {
  auto parse = [](const std::string& text) {
    std::stringstream ss(text);
    return GridFunction::parse_csv(ss, "input.csv");
  };
  CHECK_THROWS_AS(parse("x,y\n0,1\n1,2\n"), ConfigError);
  CHECK_THROWS_AS(parse("x,value\n0,1\n"), ConfigError);
  CHECK_THROWS_AS(parse("x,value\n0,1\n1,2\n3,4\n"), ConfigError);
  CHECK_THROWS_AS(parse("x,value\n0,1\n1,abc\n"), ConfigError);
  try {
    parse("x,value\n0,1\n1,abc\n");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("input.csv:3") != std::string::npos);
  }
  CHECK_THROWS_AS(GridFunction::read_csv("/nonexistent/grid.csv"), ConfigError);
}
