#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <string>
#include <string_view>

#include "pmk/errors.hpp"

namespace pmk {

using Integer = boost::multiprecision::cpp_int;

inline Integer abs_int(const Integer& a) { return a < 0 ? Integer(-a) : a; }

// floor division, exact for any sign of a (b > 0 assumed)
inline Integer floor_div(const Integer& a, const Integer& b) {
  Integer q = a / b;
  if (a % b != 0 && (a < 0) != (b < 0)) --q;
  return q;
}

// Exact rational number, always in lowest terms with positive denominator.
class Rational {
 public:
  Rational() : num_(0), den_(1) {}
  Rational(int n) : num_(n), den_(1) {}            // NOLINT: implicit by design
  Rational(Integer n) : num_(std::move(n)), den_(1) {}  // NOLINT
  Rational(Integer n, Integer d) : num_(std::move(n)), den_(std::move(d)) {
    if (den_ == 0) throw Error("rational with zero denominator");
    normalize();
  }

  const Integer& num() const { return num_; }
  const Integer& den() const { return den_; }

  bool is_integer() const { return den_ == 1; }
  bool is_zero() const { return num_ == 0; }
  int sign() const { return num_ == 0 ? 0 : (num_ < 0 ? -1 : 1); }

  Integer floor() const { return floor_div(num_, den_); }
  Integer ceil() const { return -floor_div(-num_, den_); }
  Rational frac() const { return *this - Rational(floor()); }

  Rational operator-() const {
    Rational r;
    r.num_ = -num_;
    r.den_ = den_;
    return r;
  }
  Rational operator+(const Rational& o) const {
    return Rational(num_ * o.den_ + o.num_ * den_, den_ * o.den_);
  }
  Rational operator-(const Rational& o) const {
    return Rational(num_ * o.den_ - o.num_ * den_, den_ * o.den_);
  }
  Rational operator*(const Rational& o) const {
    return Rational(num_ * o.num_, den_ * o.den_);
  }
  Rational operator/(const Rational& o) const {
    if (o.num_ == 0) throw Error("rational division by zero");
    return Rational(num_ * o.den_, den_ * o.num_);
  }
  Rational& operator+=(const Rational& o) { return *this = *this + o; }
  Rational& operator-=(const Rational& o) { return *this = *this - o; }
  Rational& operator*=(const Rational& o) { return *this = *this * o; }
  Rational& operator/=(const Rational& o) { return *this = *this / o; }

  bool operator==(const Rational& o) const {
    return num_ == o.num_ && den_ == o.den_;
  }
  bool operator!=(const Rational& o) const { return !(*this == o); }
  bool operator<(const Rational& o) const {
    return num_ * o.den_ < o.num_ * den_;
  }
  bool operator>(const Rational& o) const { return o < *this; }
  bool operator<=(const Rational& o) const { return !(o < *this); }
  bool operator>=(const Rational& o) const { return !(*this < o); }

  Rational abs() const { return num_ < 0 ? -*this : *this; }

  // "p/q", or "p" when the value is an integer
  std::string str() const {
    std::string s = num_.str();
    if (den_ != 1) s += "/" + den_.str();
    return s;
  }

  // accepts "p", "-p", "p/q" with optional surrounding whitespace
  static Rational parse(std::string_view text) {
    auto trim = [](std::string_view v) {
      while (!v.empty() && (v.front() == ' ' || v.front() == '\t')) v.remove_prefix(1);
      while (!v.empty() && (v.back() == ' ' || v.back() == '\t')) v.remove_suffix(1);
      return v;
    };
    std::string_view t = trim(text);
    if (t.empty()) throw ParseError("empty rational");
    auto slash = t.find('/');
    std::string_view np = slash == std::string_view::npos ? t : trim(t.substr(0, slash));
    std::string_view dp = slash == std::string_view::npos
                              ? std::string_view("1")
                              : trim(t.substr(slash + 1));
    auto parse_int = [&](std::string_view v) -> Integer {
      if (v.empty()) throw ParseError("malformed rational '" + std::string(text) + "'");
      size_t i = (v[0] == '-' || v[0] == '+') ? 1 : 0;
      if (i == v.size()) throw ParseError("malformed rational '" + std::string(text) + "'");
      for (size_t j = i; j < v.size(); ++j)
        if (v[j] < '0' || v[j] > '9')
          throw ParseError("malformed rational '" + std::string(text) + "'");
      return Integer(std::string(v));
    };
    Integer n = parse_int(np);
    Integer d = parse_int(dp);
    if (d == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
    return Rational(n, d);
  }

 private:
  void normalize() {
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    Integer g = boost::multiprecision::gcd(abs_int(num_), den_);
    if (g > 1) {
      num_ /= g;
      den_ /= g;
    }
    if (num_ == 0) den_ = 1;
  }

  Integer num_, den_;
};

}  // namespace pmk
