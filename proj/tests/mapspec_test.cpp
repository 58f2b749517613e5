#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <fstream>

#include "pmk/mapspec.hpp"

using namespace pmk;

namespace {
Rational rat(long n, long d = 1) { return Rational(Integer(n), Integer(d)); }
}

TEST_CASE("full specification with comments and metadata") {
  MapSpec spec = parse_spec_text(
      "# doubling family instance\n"
      "name = doubling map  # trailing note\n"
      "\n"
      "breakpoints = 0 1/2 1\n"
      "values = 0 2 0\n"
      "source = handwritten\n");
  CHECK(spec.name == "doubling map");
  CHECK(spec.breakpoints == std::vector<Rational>{rat(0), rat(1, 2), rat(1)});
  CHECK(spec.values == std::vector<Rational>{rat(0), rat(2), rat(0)});
  REQUIRE(spec.metadata.size() == 1);
  CHECK(spec.metadata[0] == std::pair<std::string, std::string>{"source",
                                                                "handwritten"});
  PLCircleMap map = spec_to_map(spec);
  CHECK(map.degree() == 0);
  CHECK(map.critical_points().size() == 2);
}

TEST_CASE("fractional start value is allowed") {
  MapSpec spec = parse_spec_text(
      "breakpoints = 0 1/2 1\n"
      "values = 1/2 5/2 1/2\n");
  PLCircleMap map = spec_to_map(spec);
  CHECK(map.lift().values().front() == rat(1, 2));
}

TEST_CASE("parse diagnostics point at the offending field") {
  CHECK_THROWS_WITH(parse_spec_text("values = 0 2 0\n"),
                    Catch::Matchers::ContainsSubstring("breakpoints"));
  CHECK_THROWS_AS(parse_spec_text("breakpoints = 0 1/2 1\n"), ParseError);
  CHECK_THROWS_WITH(
      parse_spec_text("breakpoints = 0 1/x 1\nvalues = 0 2 0\n"),
      Catch::Matchers::ContainsSubstring("1/x"));
  CHECK_THROWS_WITH(
      parse_spec_text("breakpoints = 0 2/3 1/3 1\nvalues = 0 1 2 1\n"),
      Catch::Matchers::ContainsSubstring("ascending"));
  CHECK_THROWS_WITH(
      parse_spec_text("breakpoints = 1/4 1/2 1\nvalues = 0 2 0\n"),
      Catch::Matchers::ContainsSubstring("start at 0"));
  CHECK_THROWS_WITH(
      parse_spec_text("breakpoints = 0 1/2 3/4\nvalues = 0 2 0\n"),
      Catch::Matchers::ContainsSubstring("end at 1"));
  CHECK_THROWS_WITH(
      parse_spec_text("breakpoints = 0 1/2 1\nvalues = 0 2\n"),
      Catch::Matchers::ContainsSubstring("2 entries for 3 breakpoints"));
  CHECK_THROWS_WITH(
      parse_spec_text("breakpoints = 0 1\nbreakpoints = 0 1\nvalues = 0 1\n"),
      Catch::Matchers::ContainsSubstring("twice"));
  CHECK_THROWS_WITH(parse_spec_text("breakpoints 0 1/2 1\n"),
                    Catch::Matchers::ContainsSubstring("key = value"));
  CHECK_THROWS_AS(parse_spec_text("= 3\n"), ParseError);
}

TEST_CASE("lift validation failures keep their own error class") {
  CHECK_THROWS_AS(
      spec_to_map(parse_spec_text("breakpoints = 0 1/2 1\nvalues = 0 0 0\n")),
      InvalidLift);
  CHECK_THROWS_AS(
      spec_to_map(parse_spec_text("breakpoints = 0 1/2 1\nvalues = 1 3 1\n")),
      InvalidLift);
  CHECK_THROWS_AS(
      spec_to_map(parse_spec_text("breakpoints = 0 1/2 1\nvalues = 0 2 1/2\n")),
      InvalidLift);
}

TEST_CASE("file round trip") {
  std::string path = "mapspec_test_tmp.map";
  {
    std::ofstream out(path);
    out << "name = swap tent\nbreakpoints = 0 1/2 1\nvalues = 1/2 2 1/2\n";
  }
  PLCircleMap map = load_map(path);
  CHECK(map.degree() == 0);
  std::remove(path.c_str());
  CHECK_THROWS_AS(load_map(path), ParseError);
}
