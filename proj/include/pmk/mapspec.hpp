#pragma once

#include <fstream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "pmk/lift.hpp"

namespace pmk {

// In-memory form of a map description file. The format is line oriented:
// one `key = value` pair per line, `#` starts a comment, blank lines are
// skipped. `breakpoints` and `values` hold whitespace-separated rationals
// written as "p/q" or plain integers. `name` and any other keys are carried
// along verbatim.
struct MapSpec {
  std::vector<Rational> breakpoints;
  std::vector<Rational> values;
  std::string name;
  std::vector<std::pair<std::string, std::string>> metadata;
};

namespace detail {

inline std::string trim_copy(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

inline std::vector<Rational> parse_rational_list(const std::string& text,
                                                 const std::string& key) {
  std::vector<Rational> out;
  std::istringstream in(text);
  std::string tok;
  while (in >> tok) {
    try {
      out.push_back(Rational::parse(tok));
    } catch (const ParseError& e) {
      throw ParseError(key + ": " + e.what());
    }
  }
  if (out.empty()) throw ParseError(key + " is empty");
  return out;
}

}  // namespace detail

inline MapSpec parse_spec_text(const std::string& text) {
  MapSpec spec;
  bool have_breakpoints = false, have_values = false;
  std::istringstream in(text);
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = detail::trim_copy(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("line " + std::to_string(lineno) +
                       ": expected `key = value`, got '" + line + "'");
    std::string key = detail::trim_copy(line.substr(0, eq));
    std::string value = detail::trim_copy(line.substr(eq + 1));
    if (key.empty())
      throw ParseError("line " + std::to_string(lineno) + ": missing key");
    if (key == "breakpoints") {
      if (have_breakpoints) throw ParseError("breakpoints given twice");
      spec.breakpoints = detail::parse_rational_list(value, key);
      have_breakpoints = true;
    } else if (key == "values") {
      if (have_values) throw ParseError("values given twice");
      spec.values = detail::parse_rational_list(value, key);
      have_values = true;
    } else if (key == "name") {
      spec.name = value;
    } else {
      spec.metadata.emplace_back(key, value);
    }
  }
  if (!have_breakpoints) throw ParseError("missing breakpoints");
  if (!have_values) throw ParseError("missing values");
  if (spec.breakpoints.front() != Rational(0))
    throw ParseError("breakpoints must start at 0, got " +
                     spec.breakpoints.front().str());
  if (spec.breakpoints.back() != Rational(1))
    throw ParseError("breakpoints must end at 1, got " +
                     spec.breakpoints.back().str());
  for (size_t i = 0; i + 1 < spec.breakpoints.size(); ++i)
    if (!(spec.breakpoints[i] < spec.breakpoints[i + 1]))
      throw ParseError("breakpoints must be strictly ascending; entry " +
                       std::to_string(i + 1) + " is " +
                       spec.breakpoints[i + 1].str() + " after " +
                       spec.breakpoints[i].str());
  if (spec.values.size() != spec.breakpoints.size())
    throw ParseError("values lists " + std::to_string(spec.values.size()) +
                     " entries for " + std::to_string(spec.breakpoints.size()) +
                     " breakpoints");
  return spec;
}

inline PLCircleMap spec_to_map(const MapSpec& spec) {
  return PLCircleMap(PLLift(spec.breakpoints, spec.values));
}

inline MapSpec parse_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec_text(buf.str());
}

inline PLCircleMap load_map(const std::string& path) {
  return spec_to_map(parse_spec_file(path));
}

}  // namespace pmk
