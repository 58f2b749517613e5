#pragma once

#include <algorithm>
#include <cstdlib>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "pmk/circle.hpp"
#include "pmk/errors.hpp"
#include "pmk/rational.hpp"
#include "pmk/valency.hpp"

namespace pmk {

inline size_t default_breakpoint_cap() {
  if (const char* env = std::getenv("PMK_MAX_BREAKPOINTS")) {
    long v = std::atol(env);
    if (v > 1) return static_cast<size_t>(v);
  }
  return 1000000;
}

// Exact piecewise-linear lift f : [0,1] -> R of a circle map.
// Breakpoints 0 = c_0 < ... < c_N = 1, values f(c_i); f(0) in [0,1),
// f(1) - f(0) an integer (the degree), every piece strictly monotone.
class PLLift {
 public:
  PLLift(std::vector<Rational> breakpoints, std::vector<Rational> values)
      : breaks_(std::move(breakpoints)), vals_(std::move(values)) {
    if (breaks_.size() != vals_.size())
      throw InvalidLift("breakpoints and values must have the same length");
    if (breaks_.size() < 2) throw InvalidLift("a lift needs at least two breakpoints");
    if (breaks_.front() != Rational(0) || breaks_.back() != Rational(1))
      throw InvalidLift("breakpoints must start at 0 and end at 1");
    for (size_t i = 0; i + 1 < breaks_.size(); ++i)
      if (!(breaks_[i] < breaks_[i + 1]))
        throw InvalidLift("breakpoints must be strictly ascending");
    if (vals_.front() < Rational(0) || vals_.front() >= Rational(1))
      throw InvalidLift("f(0) must lie in [0,1)");
    if (!(vals_.back() - vals_.front()).is_integer())
      throw InvalidLift("f(1) - f(0) must be an integer (the degree)");
    for (size_t i = 0; i + 1 < vals_.size(); ++i)
      if (vals_[i + 1] == vals_[i])
        throw InvalidLift("zero slope on piece " + std::to_string(i + 1));
  }

  size_t pieces() const { return breaks_.size() - 1; }
  const std::vector<Rational>& breakpoints() const { return breaks_; }
  const std::vector<Rational>& values() const { return vals_; }

  Integer degree() const { return (vals_.back() - vals_.front()).num(); }

  Rational slope(size_t piece) const {
    return (vals_[piece + 1] - vals_[piece]) / (breaks_[piece + 1] - breaks_[piece]);
  }

  Rational min_value() const { return *std::min_element(vals_.begin(), vals_.end()); }
  Rational max_value() const { return *std::max_element(vals_.begin(), vals_.end()); }

  // index of the piece [c_i, c_{i+1}) containing t; t = 1 falls in the last piece
  size_t piece_of(const Rational& t) const {
    if (t < Rational(0) || t > Rational(1)) throw Error("piece_of: t outside [0,1]");
    size_t lo = 0, hi = pieces() - 1;
    while (lo < hi) {
      size_t mid = (lo + hi + 1) / 2;
      if (breaks_[mid] <= t) lo = mid; else hi = mid - 1;
    }
    return lo;
  }

  // f(t) for t in [0,1]
  Rational eval01(const Rational& t) const {
    size_t i = piece_of(t);
    return vals_[i] + slope(i) * (t - breaks_[i]);
  }

  // periodic extension F(t + n) = f(t) + n * degree, defined on all of R
  Rational eval_ext(const Rational& y) const {
    Integer n = y.floor();
    return eval01(y - Rational(n)) + Rational(n * degree());
  }

  // Extremes of the extension over [a, b]. Pieces are strictly monotone, so
  // the extremes occur at a, b, or an extended breakpoint in between; the
  // flags record every place each extreme is attained.
  struct Extremes {
    Rational min, max;
    bool min_interior = false, min_at_left = false, min_at_right = false;
    bool max_interior = false, max_at_left = false, max_at_right = false;
  };
  Extremes extremes(const Rational& a, const Rational& b) const {
    if (b < a) throw Error("extremes: empty interval");
    Extremes ex;
    ex.min = ex.max = eval_ext(a);
    ex.min_at_left = ex.max_at_left = true;
    enum Where { Left, Interior, Right };
    auto consider = [&](const Rational& t, Where w) {
      Rational v = eval_ext(t);
      if (v < ex.min) {
        ex.min = v;
        ex.min_interior = ex.min_at_left = ex.min_at_right = false;
      }
      if (v == ex.min) {
        if (w == Interior) ex.min_interior = true;
        if (w == Left) ex.min_at_left = true;
        if (w == Right) ex.min_at_right = true;
      }
      if (v > ex.max) {
        ex.max = v;
        ex.max_interior = ex.max_at_left = ex.max_at_right = false;
      }
      if (v == ex.max) {
        if (w == Interior) ex.max_interior = true;
        if (w == Left) ex.max_at_left = true;
        if (w == Right) ex.max_at_right = true;
      }
    };
    consider(b, Right);
    for (Integer n = a.floor(); Rational(n) <= b; ++n)
      for (size_t i = 0; i + 1 < breaks_.size(); ++i) {
        Rational t = breaks_[i] + Rational(n);
        if (a < t && t < b) consider(t, Interior);
      }
    return ex;
  }

 private:
  std::vector<Rational> breaks_, vals_;
};

// lift of f o g, normalized so the value at 0 lies in [0,1)
inline PLLift compose_lift(const PLLift& f, const PLLift& g,
                           size_t cap = default_breakpoint_cap()) {
  std::set<Rational> bps(g.breakpoints().begin(), g.breakpoints().end());
  const auto& gb = g.breakpoints();
  const auto& gv = g.values();
  for (size_t i = 0; i + 1 < gb.size(); ++i) {
    Rational ga = gv[i], gbv = gv[i + 1];
    Rational lo = std::min(ga, gbv), hi = std::max(ga, gbv);
    Rational s = g.slope(i);
    // crossings of g with the extended breakpoints of f
    for (size_t j = 0; j + 1 < f.breakpoints().size(); ++j) {
      const Rational& c = f.breakpoints()[j];
      for (Integer n = (lo - c).floor(); Rational(n) + c <= hi; ++n) {
        Rational y = c + Rational(n);
        if (lo < y && y < hi) {
          Rational t = gb[i] + (y - ga) / s;
          bps.insert(t);
          if (bps.size() > cap)
            throw ResourceLimit("composed lift exceeds breakpoint cap");
        }
      }
    }
  }
  std::vector<Rational> nb(bps.begin(), bps.end());
  std::vector<Rational> nv;
  nv.reserve(nb.size());
  for (const Rational& t : nb) nv.push_back(f.eval_ext(g.eval01(t)));
  Integer shift = nv.front().floor();
  if (shift != 0)
    for (Rational& v : nv) v -= Rational(shift);
  return PLLift(std::move(nb), std::move(nv));
}

// Continuous piecewise-linear circle map, carried by its lift. Caches the
// degree and the critical set C_1 (the points with a genuine fold; breakpoints
// without a direction change are kept in the lift but are not critical).
class PLCircleMap {
 public:
  explicit PLCircleMap(PLLift lift) : lift_(std::move(lift)), degree_(lift_.degree()) {
    size_t n = lift_.pieces();
    for (size_t i = 0; i < n; ++i) {
      Rational left = lift_.slope(i == 0 ? n - 1 : i - 1);
      Rational right = lift_.slope(i);
      Valency v = valency_from_signs(left.sign() > 0, right.sign() > 0);
      if (is_critical(v))
        critical_.emplace_back(CirclePoint(lift_.breakpoints()[i]), v);
    }
  }

  const PLLift& lift() const { return lift_; }
  const Integer& degree() const { return degree_; }
  const std::vector<std::pair<CirclePoint, Valency>>& critical_points() const {
    return critical_;
  }

  bool locally_injective() const { return critical_.empty(); }
  bool expanding() const {
    for (size_t i = 0; i < lift_.pieces(); ++i)
      if (lift_.slope(i).abs() <= Rational(1)) return false;
    return true;
  }
  // surjectivity of the circle map: the lift's range spans a full period
  bool surjective() const {
    return lift_.max_value() - lift_.min_value() >= Rational(1);
  }

  CirclePoint evaluate(const CirclePoint& x) const {
    return CirclePoint(lift_.eval01(x.value()));
  }

  Valency valency(const CirclePoint& x) const {
    const Rational& t = x.value();
    size_t n = lift_.pieces();
    const auto& bp = lift_.breakpoints();
    size_t i = lift_.piece_of(t);
    if (bp[i] == t) {
      Rational left = lift_.slope(i == 0 ? n - 1 : i - 1);
      Rational right = lift_.slope(i);
      return valency_from_signs(left.sign() > 0, right.sign() > 0);
    }
    return lift_.slope(i).sign() > 0 ? Valency::PP : Valency::MM;
  }

  // val(phi^n, x), folded along the orbit; the later iterate is the outer factor
  Valency valency_iterate(size_t n, const CirclePoint& x) const {
    if (n == 0) return Valency::PP;
    Valency acc = valency(x);
    CirclePoint p = x;
    for (size_t j = 1; j < n; ++j) {
      p = evaluate(p);
      acc = compose_valency(valency(p), acc);
    }
    return acc;
  }

  // all exact solutions of phi(x) = y, sorted, each with its valency
  std::vector<std::pair<CirclePoint, Valency>> preimages(const CirclePoint& y) const {
    std::vector<std::pair<CirclePoint, Valency>> out;
    const auto& bp = lift_.breakpoints();
    const auto& fv = lift_.values();
    for (size_t i = 0; i + 1 < bp.size(); ++i) {
      Rational fa = fv[i], fb = fv[i + 1];
      Rational s = lift_.slope(i);
      Rational lo = std::min(fa, fb), hi = std::max(fa, fb);
      // solve f(t) = y + n on the half-open piece [c_i, c_{i+1})
      for (Integer n = (lo - y.value()).floor(); Rational(n) + y.value() <= hi; ++n) {
        Rational target = y.value() + Rational(n);
        if (target < lo || target > hi) continue;
        if (target == fb) continue;  // t = c_{i+1} belongs to the next piece
        Rational t = bp[i] + (target - fa) / s;
        CirclePoint p(t);
        out.emplace_back(p, valency(p));
      }
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
  }

  // exact solutions of f(t) - t in Z on [0,1); a piece fixed pointwise is an error
  std::vector<std::pair<CirclePoint, Valency>> fixed_points() const {
    std::vector<std::pair<CirclePoint, Valency>> out;
    const auto& bp = lift_.breakpoints();
    const auto& fv = lift_.values();
    for (size_t i = 0; i + 1 < bp.size(); ++i) {
      Rational ga = fv[i] - bp[i], gb = fv[i + 1] - bp[i + 1];
      if (ga == gb) {
        if (ga.is_integer())
          throw DegeneratePiece("piece " + std::to_string(i + 1) +
                                " is fixed pointwise");
        continue;
      }
      Rational lo = std::min(ga, gb), hi = std::max(ga, gb);
      Rational s = (gb - ga) / (bp[i + 1] - bp[i]);
      for (Integer n = lo.floor(); Rational(n) <= hi; ++n) {
        Rational target(n);
        if (target < lo || target > hi || target == gb) continue;
        Rational t = bp[i] + (target - ga) / s;
        CirclePoint p(t);
        out.emplace_back(p, valency(p));
      }
    }
    std::sort(out.begin(), out.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const auto& a, const auto& b) { return a.first == b.first; }),
              out.end());
    return out;
  }

 private:
  PLLift lift_;
  Integer degree_;
  std::vector<std::pair<CirclePoint, Valency>> critical_;
};

// lift of phi^n
inline PLLift iterate_lift(const PLCircleMap& map, size_t n,
                           size_t cap = default_breakpoint_cap()) {
  if (n == 0) throw Error("iterate_lift needs n >= 1");
  PLLift acc = map.lift();
  for (size_t i = 1; i < n; ++i) acc = compose_lift(map.lift(), acc, cap);
  return acc;
}

}  // namespace pmk
