#pragma once

#include <numeric>
#include <optional>
#include <queue>
#include <set>
#include <string>
#include <vector>

#include "pmk/intmatrix.hpp"
#include "pmk/lift.hpp"

namespace pmk {

enum class Verdict { Yes, No, Undetermined };

inline const char* verdict_str(Verdict v) {
  switch (v) {
    case Verdict::Yes: return "yes";
    case Verdict::No: return "no";
    default: return "undetermined";
  }
}

// One monotone piece of a partition interval, in the chart that places the
// interval at [start, start + length] on the lift's axis.
struct RefinementPiece {
  Rational lo, hi;  // chart coordinates, lo < hi
  size_t target;    // index of the partition interval it maps onto
  int sign;         // +1 increasing, -1 decreasing
};

struct MarkovStructure {
  std::vector<CirclePoint> D;            // forward-closed set of critical values
  std::vector<CircleInterval> intervals; // components of the complement of D
  std::vector<std::vector<RefinementPiece>> pieces;  // per interval, left to right
  IntMatrix incidence;          // [target][source] lap counts
  IntMatrix doubled_incidence;  // 0/1 on states (interval, sign); (i,+)=2i, (i,-)=2i+1
  bool strict = false;          // critical values are themselves critical points
  size_t order = 0;             // filled in by markov_order users; 0 = unset
};

// Finite partition generated by the forward orbit of the critical values.
// Returns nothing when that orbit fails to close up within orbit_cap points;
// strict is set when the critical values are critical points, the condition
// the K-theory pipeline requires.
inline std::optional<MarkovStructure> markov_check(const PLCircleMap& map,
                                                   size_t orbit_cap = 1024) {
  if (map.locally_injective())
    throw LocallyInjective("map has no critical points");
  if (!map.surjective())
    throw NotSurjective("lift range spans less than one period");

  MarkovStructure ms;
  ms.strict = true;
  std::set<CirclePoint> dset;
  std::queue<CirclePoint> work;
  for (const auto& [c, v] : map.critical_points()) {
    CirclePoint w = map.evaluate(c);
    work.push(w);
    if (!is_critical(map.valency(w))) ms.strict = false;
  }
  while (!work.empty()) {
    CirclePoint x = work.front();
    work.pop();
    if (dset.count(x)) continue;
    dset.insert(x);
    if (dset.size() > orbit_cap) return std::nullopt;
    work.push(map.evaluate(x));
  }
  ms.D.assign(dset.begin(), dset.end());

  size_t n = ms.D.size();
  for (size_t i = 0; i < n; ++i)
    ms.intervals.push_back(n == 1 ? CircleInterval::punctured(ms.D[0])
                                  : CircleInterval(ms.D[i], ms.D[(i + 1) % n]));

  ms.incidence = IntMatrix(n, n);
  ms.doubled_incidence = IntMatrix(2 * n, 2 * n);
  ms.pieces.resize(n);
  for (size_t j = 0; j < n; ++j) {
    const CircleInterval& J = ms.intervals[j];
    Rational s = J.start().value();
    Rational len = J.length();
    std::set<Rational> offs;
    for (const CirclePoint& d : ms.D)
      for (const auto& [x, v] : map.preimages(d))
        if (J.contains(x)) offs.insert((x.value() - s).frac());
    std::vector<Rational> edges{Rational(0)};
    edges.insert(edges.end(), offs.begin(), offs.end());
    edges.push_back(len);
    for (size_t p = 0; p + 1 < edges.size(); ++p) {
      RefinementPiece piece;
      piece.lo = s + edges[p];
      piece.hi = s + edges[p + 1];
      Rational mid = (piece.lo + piece.hi) / Rational(2);
      CirclePoint image = CirclePoint(map.lift().eval_ext(mid));
      Valency v = map.valency(CirclePoint(mid));
      if (is_critical(v))
        throw Inconsistency("critical point inside a refinement piece");
      piece.sign = valency_parity(v);
      size_t target = n;
      for (size_t i = 0; i < n; ++i)
        if (ms.intervals[i].contains(image)) {
          target = i;
          break;
        }
      if (target == n)
        throw Inconsistency("refinement piece image misses the partition");
      piece.target = target;
      // the piece must cover its target exactly once
      auto ex = map.lift().extremes(piece.lo, piece.hi);
      const CircleInterval& I = ms.intervals[target];
      if (ex.max - ex.min != I.length() || CirclePoint(ex.min) != I.start() ||
          CirclePoint(ex.max) != I.end())
        throw Inconsistency("refinement piece does not map onto one component");
      ms.incidence.at(target, j) += 1;
      for (int t : {+1, -1}) {
        size_t from = 2 * j + (t == +1 ? 0 : 1);
        size_t to = 2 * target + (piece.sign * t == +1 ? 0 : 1);
        ms.doubled_incidence.at(to, from) = 1;
      }
      ms.pieces[j].push_back(std::move(piece));
    }
  }
  return ms;
}

struct MatrixTests {
  bool irreducible = false;
  bool primitive = false;
  size_t period = 0;  // 0 when not irreducible
};

inline MatrixTests matrix_tests(const IntMatrix& M) {
  if (M.rows() != M.cols()) throw Error("incidence matrix must be square");
  size_t n = M.rows();
  for (size_t i = 0; i < n; ++i)
    for (size_t j = 0; j < n; ++j)
      if (M.at(i, j) < 0) throw Error("incidence matrix must be nonnegative");
  MatrixTests out;
  if (n == 0) return out;

  // edge j -> i when column j covers row i
  auto bfs = [&](bool forward) {
    std::vector<int> level(n, -1);
    std::queue<size_t> q;
    level[0] = 0;
    q.push(0);
    while (!q.empty()) {
      size_t u = q.front();
      q.pop();
      for (size_t w = 0; w < n; ++w) {
        bool edge = forward ? M.at(w, u) > 0 : M.at(u, w) > 0;
        if (edge && level[w] < 0) {
          level[w] = level[u] + 1;
          q.push(w);
        }
      }
    }
    return level;
  };
  std::vector<int> fwd = bfs(true), back = bfs(false);
  bool connected = true;
  for (size_t i = 0; i < n; ++i)
    if (fwd[i] < 0 || back[i] < 0) connected = false;
  out.irreducible = connected && (n > 1 || M.at(0, 0) > 0);
  if (!out.irreducible) return out;

  long long g = 0;
  for (size_t u = 0; u < n; ++u)
    for (size_t w = 0; w < n; ++w)
      if (M.at(w, u) > 0) g = std::gcd(g, (long long)fwd[u] + 1 - fwd[w]);
  out.period = (size_t)g;
  out.primitive = out.period == 1;
  return out;
}

struct GlobalPeriod {
  size_t p = 0;
  // closed arcs [first, second], cyclically permuted in listed order
  std::vector<std::pair<CirclePoint, CirclePoint>> arcs;
};

struct DynamicsVerdicts {
  Verdict transitive = Verdict::Undetermined;
  Verdict exact = Verdict::Undetermined;
  std::optional<GlobalPeriod> global_period;
};

inline DynamicsVerdicts dynamics_verdicts(const PLCircleMap& map,
                                          const MarkovStructure& ms) {
  DynamicsVerdicts out;
  if (!map.expanding()) return out;  // undecidable here without expansivity
  MatrixTests mt = matrix_tests(ms.incidence);
  out.transitive = mt.irreducible ? Verdict::Yes : Verdict::No;
  out.exact = mt.primitive ? Verdict::Yes : Verdict::No;
  if (mt.irreducible && mt.period > 1) {
    size_t n = ms.intervals.size(), p = mt.period;
    std::vector<int> level(n, -1);
    std::queue<size_t> q;
    level[0] = 0;
    q.push(0);
    while (!q.empty()) {
      size_t u = q.front();
      q.pop();
      for (size_t w = 0; w < n; ++w)
        if (ms.incidence.at(w, u) > 0 && level[w] < 0) {
          level[w] = level[u] + 1;
          q.push(w);
        }
    }
    GlobalPeriod gp;
    gp.p = p;
    for (size_t r = 0; r < p; ++r) {
      std::vector<std::pair<CirclePoint, CirclePoint>> parts;
      for (size_t i = 0; i < n; ++i)
        if ((size_t)(level[i] % (int)p) == r)
          parts.emplace_back(ms.intervals[i].start(), ms.intervals[i].end());
      for (bool merged = true; merged;) {
        merged = false;
        for (size_t a = 0; a < parts.size() && !merged; ++a)
          for (size_t b = 0; b < parts.size() && !merged; ++b)
            if (a != b && parts[a].second == parts[b].first) {
              parts[a].second = parts[b].second;
              parts.erase(parts.begin() + b);
              merged = true;
            }
      }
      if (parts.size() != 1)
        throw Inconsistency("period class does not merge into one closed arc");
      gp.arcs.push_back(parts[0]);
    }
    out.global_period = gp;
  }
  return out;
}

// fixed points whose only other preimages are folds
inline std::vector<CirclePoint> exceptional_fixed_points(const PLCircleMap& map) {
  std::vector<CirclePoint> out;
  for (const auto& [x, v] : map.fixed_points()) {
    if (is_critical(v)) continue;
    bool exceptional = true;
    for (const auto& [y, w] : map.preimages(x)) {
      if (y == x) continue;
      if (!is_critical(w)) {
        exceptional = false;
        break;
      }
    }
    if (exceptional) out.push_back(x);
  }
  return out;
}

// the critical value all of whose preimages are folds; at most one can exist
inline std::optional<CirclePoint> exceptional_critical_value(const PLCircleMap& map) {
  std::optional<CirclePoint> out;
  std::set<CirclePoint> candidates;
  for (const auto& [c, v] : map.critical_points())
    candidates.insert(map.evaluate(c));
  for (const CirclePoint& z : candidates) {
    bool all_critical = true;
    for (const auto& [y, w] : map.preimages(z))
      if (!is_critical(w)) {
        all_critical = false;
        break;
      }
    if (all_critical) {
      if (out && !(*out == z))
        throw Inconsistency("two distinct critical values have only folded preimages");
      out = z;
    }
  }
  return out;
}

inline std::vector<CirclePoint> iterated_preimages(const PLCircleMap& map, size_t j,
                                                   const CirclePoint& x,
                                                   size_t cap = default_breakpoint_cap()) {
  std::vector<CirclePoint> cur{x};
  size_t total = 1;
  for (size_t t = 0; t < j; ++t) {
    std::set<CirclePoint> next;
    for (const CirclePoint& y : cur)
      for (const auto& [z, v] : map.preimages(y)) next.insert(z);
    total += next.size();
    if (total > cap) throw ResourceLimit("preimage enumeration exceeds the cap");
    cur.assign(next.begin(), next.end());
  }
  return cur;
}

// Does every point of the circle have monotone j-fold preimages of both signs?
// Interior points are decided per (interval, sign) by path reachability in the
// doubled incidence graph; partition points by exact enumeration.
inline bool order_condition_holds(const PLCircleMap& map, const MarkovStructure& ms,
                                  size_t j, size_t cap = default_breakpoint_cap()) {
  size_t n2 = 2 * ms.intervals.size();
  std::vector<bool> reach(n2, false);
  for (size_t i = 0; i < ms.intervals.size(); ++i) reach[2 * i] = true;
  for (size_t step = 0; step < j; ++step) {
    std::vector<bool> next(n2, false);
    for (size_t from = 0; from < n2; ++from)
      if (reach[from])
        for (size_t to = 0; to < n2; ++to)
          if (ms.doubled_incidence.at(to, from) > 0) next[to] = true;
    reach = next;
  }
  for (bool r : reach)
    if (!r) return false;

  for (const CirclePoint& x : ms.D) {
    bool has_regular_preimage = false;
    for (const auto& [y, v] : map.preimages(x))
      if (!is_critical(v)) {
        has_regular_preimage = true;
        break;
      }
    if (!has_regular_preimage) continue;  // not a value of the fold-free part
    bool pp = false, mm = false;
    for (const CirclePoint& y : iterated_preimages(map, j, x, cap)) {
      Valency v = map.valency_iterate(j, y);
      if (v == Valency::PP) pp = true;
      if (v == Valency::MM) mm = true;
    }
    if (!pp || !mm) return false;
  }
  return true;
}

// Least exponent certified by the doubling-pair argument (plus two), or the
// least j0 from which the condition holds through that certified bound.
inline size_t markov_order(const PLCircleMap& map, const MarkovStructure& ms,
                           bool minimize, size_t cap = default_breakpoint_cap()) {
  if (!matrix_tests(ms.incidence).primitive)
    throw NotSimple("covering order is defined only for exact maps");
  const auto& crit = map.critical_points();
  std::vector<Rational> cs;
  for (const auto& [c, v] : crit) cs.push_back(c.value());

  size_t best_n = 0;
  bool have = false;
  for (size_t i = 0; i < cs.size(); ++i) {
    Rational c = cs[i];
    Rational next = i + 1 < cs.size() ? cs[i + 1] : cs[0] + Rational(1);
    Rational prev = i > 0 ? cs[i - 1] : cs.back() - Rational(1);
    Rational fc = map.lift().eval01(c);
    Rational var_up = (map.lift().eval_ext(next) - fc).abs();
    Rational var_down = (fc - map.lift().eval_ext(prev)).abs();
    Rational common = std::min(std::min(var_up, var_down), Rational(1));
    Valency v = map.valency(CirclePoint(c));
    Rational lo = v == Valency::PM ? fc - common : fc;
    Rational hi = v == Valency::PM ? fc : fc + common;
    bool lo_in = false, hi_in = false;
    const size_t kMaxSteps = 4096;
    size_t n = 0;
    for (size_t step = 1; step <= kMaxSteps; ++step) {
      auto ex = map.lift().extremes(lo, hi);
      bool nlo = ex.min_interior || (ex.min_at_left && lo_in) || (ex.min_at_right && hi_in);
      bool nhi = ex.max_interior || (ex.max_at_left && lo_in) || (ex.max_at_right && hi_in);
      lo = ex.min;
      hi = ex.max;
      lo_in = nlo;
      hi_in = nhi;
      Rational len = hi - lo;
      if (len > Rational(1) || (len == Rational(1) && (lo_in || hi_in))) {
        n = step;
        break;
      }
      Integer shift = lo.floor();
      lo -= Rational(shift);
      hi -= Rational(shift);
    }
    if (n == 0) throw ResourceLimit("arc iteration did not cover the circle");
    if (!have || n < best_n) {
      best_n = n;
      have = true;
    }
  }
  size_t bound = best_n + 2;
  if (!minimize) return bound;
  size_t j0 = bound;
  while (j0 > 1 && order_condition_holds(map, ms, j0 - 1, cap)) --j0;
  return j0;
}

struct StructureReport {
  Integer degree;
  bool expanding = false;
  bool markov = false;  // critical values are critical points
  Verdict transitive = Verdict::Undetermined;
  Verdict exact = Verdict::Undetermined;
  std::optional<GlobalPeriod> global_period;
  std::vector<CirclePoint> exceptional_fixed_points;
  std::optional<CirclePoint> exceptional_critical_value;
  Verdict simple = Verdict::Undetermined;
  std::optional<std::string> quotient_form;
  std::optional<MarkovStructure> structure;
};

inline StructureReport structure_report(const PLCircleMap& map,
                                        size_t orbit_cap = 1024) {
  StructureReport r;
  r.degree = map.degree();
  r.expanding = map.expanding();
  auto ms = markov_check(map, orbit_cap);
  r.exceptional_fixed_points = exceptional_fixed_points(map);
  r.exceptional_critical_value = exceptional_critical_value(map);
  if (ms) {
    r.markov = ms->strict;
    DynamicsVerdicts dv = dynamics_verdicts(map, *ms);
    r.transitive = dv.transitive;
    r.exact = dv.exact;
    r.global_period = dv.global_period;
    r.structure = std::move(ms);
  }

  if (r.exact == Verdict::Yes)
    r.simple = r.exceptional_fixed_points.empty() ? Verdict::Yes : Verdict::No;
  else if (r.exact == Verdict::No)
    r.simple = Verdict::No;
  else
    r.simple = r.exceptional_fixed_points.empty() ? Verdict::Undetermined
                                                  : Verdict::No;

  if (r.simple == Verdict::No && r.transitive == Verdict::Yes) {
    const Integer& d = r.degree;
    if (abs_int(d) == 1 && r.exact == Verdict::Yes &&
        !r.exceptional_fixed_points.empty())
      r.quotient_form = "C(T)";
    else if (d == 1 && r.exact == Verdict::No)
      r.quotient_form = "C(T)⊗M_p";
    else if (d == -1 && r.exact == Verdict::No)
      r.quotient_form = "C(T)⊕C(T)";
    else if (d == 0 && r.exact == Verdict::No)
      r.quotient_form = "C(T)⊗M_2";
  }
  return r;
}

}  // namespace pmk
