#pragma once

#include <string>

#include "pmk/rational.hpp"

namespace pmk {

// Point of the circle T = R/Z, stored as the unique representative in [0,1).
class CirclePoint {
 public:
  CirclePoint() : t_(0) {}
  explicit CirclePoint(const Rational& t) : t_(t.frac()) {}

  const Rational& value() const { return t_; }

  bool operator==(const CirclePoint& o) const { return t_ == o.t_; }
  bool operator!=(const CirclePoint& o) const { return t_ != o.t_; }
  bool operator<(const CirclePoint& o) const { return t_ < o.t_; }

  std::string str() const { return t_.str(); }

 private:
  Rational t_;
};

// Open counterclockwise arc (start, end). start == end is rejected by the
// public constructor; the punctured() factory builds the full-circle-minus-
// one-point arc that shows up as the single partition component when the
// partition set has one element.
class CircleInterval {
 public:
  CircleInterval(const CirclePoint& start, const CirclePoint& end)
      : start_(start), end_(end), punctured_(false) {
    if (start == end) throw Error("empty circle interval (start == end)");
  }

  static CircleInterval punctured(const CirclePoint& p) {
    CircleInterval iv;
    iv.start_ = p;
    iv.end_ = p;
    iv.punctured_ = true;
    return iv;
  }

  const CirclePoint& start() const { return start_; }
  const CirclePoint& end() const { return end_; }
  bool is_punctured_circle() const { return punctured_; }

  // arc length in (0, 1]
  Rational length() const {
    if (punctured_) return Rational(1);
    return (end_.value() - start_.value()).frac();
  }

  bool contains(const CirclePoint& x) const {
    Rational rel = (x.value() - start_.value()).frac();
    if (rel.is_zero()) return false;
    if (punctured_) return true;
    return rel < length();
  }

  bool operator==(const CircleInterval& o) const {
    return start_ == o.start_ && end_ == o.end_ && punctured_ == o.punctured_;
  }

  std::string str() const {
    if (punctured_)
      return "(" + start_.str() + "," + (start_.value() + Rational(1)).str() + ")";
    return "(" + start_.str() + "," + end_.str() + ")";
  }

 private:
  CircleInterval() = default;
  CirclePoint start_, end_;
  bool punctured_ = false;
};

}  // namespace pmk
