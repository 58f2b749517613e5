#pragma once

#include <algorithm>
#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "pmk/ktheory.hpp"

namespace pmk {

struct OracleInclusions {
  IntMatrix I0, U0;
};

// Recomputes the two point-to-interval inclusion matrices from first
// principles: refine the circle by the order-k preimages of the partition
// points, evaluate the k-th iterate on each refined arc, and read off which
// side of every labeled point sees which component. Every preimage of a
// partition point is tried as a representative and all of them must agree.
inline OracleInclusions oracle_I0_U0(const PLCircleMap& map,
                                     const MarkovStructure& ms,
                                     const SignedIndexSets& sets,
                                     size_t cap = default_breakpoint_cap()) {
  if (sets.k > 2) throw Error("the matrix oracle is limited to orders 1 and 2");
  std::set<CirclePoint> fine_set;
  for (const CirclePoint& d : ms.D)
    for (const CirclePoint& x : iterated_preimages(map, sets.k, d, cap))
      fine_set.insert(x);
  std::vector<CirclePoint> fine(fine_set.begin(), fine_set.end());
  size_t n = fine.size();

  // Monotone data of each refined arc (fine[i], fine[i+1]): the sign of the
  // k-th iterate there and the partition component its image lies in.
  std::vector<Valency> arc_val(n);
  std::vector<size_t> arc_target(n);
  for (size_t i = 0; i < n; ++i) {
    Rational lo = fine[i].value();
    Rational hi = i + 1 < n ? fine[i + 1].value() : fine[0].value() + 1;
    CirclePoint mid((lo + hi) / 2);
    Valency v = map.valency_iterate(sets.k, mid);
    if (is_critical(v))
      throw Inconsistency("refined arc contains a fold of the iterate");
    arc_val[i] = v;
    CirclePoint image = map.evaluate(mid);
    for (size_t t = 1; t < sets.k; ++t) image = map.evaluate(image);
    bool found = false;
    for (size_t j = 0; j < ms.intervals.size(); ++j) {
      if (!ms.intervals[j].contains(image)) continue;
      arc_target[i] = j;
      found = true;
      break;
    }
    if (!found)
      throw Inconsistency("iterate image of a refined arc misses the partition");
  }

  auto arc_row = [&](size_t i) {
    return SignedIndexSets::i_index(arc_target[i], arc_val[i]);
  };

  OracleInclusions out{IntMatrix(sets.ipm.size(), sets.dpm.size()),
                       IntMatrix(sets.ipm.size(), sets.dpm.size())};
  for (size_t c = 0; c < sets.dpm.size(); ++c) {
    const auto& [d, v] = sets.dpm[c];
    std::optional<std::pair<std::vector<Integer>, std::vector<Integer>>> seen;
    for (const CirclePoint& x : iterated_preimages(map, sets.k, d, cap)) {
      if (map.valency_iterate(sets.k, x) != v) continue;
      size_t i = std::lower_bound(fine.begin(), fine.end(), x) - fine.begin();
      size_t right = i, left = (i + n - 1) % n;
      std::vector<Integer> icol(sets.ipm.size(), Integer(0));
      std::vector<Integer> ucol(sets.ipm.size(), Integer(0));
      if (arc_val[right] == Valency::PP) icol[arc_row(right)] += 1;
      if (arc_val[left] == Valency::MM) icol[arc_row(left)] += 1;
      if (arc_val[right] == Valency::MM) ucol[arc_row(right)] += 1;
      if (arc_val[left] == Valency::PP) ucol[arc_row(left)] += 1;
      if (seen && *seen != std::pair{icol, ucol})
        throw Inconsistency("inclusion columns disagree across representatives");
      seen = {icol, ucol};
    }
    if (!seen) throw Inconsistency("labeled pair has no representative");
    for (size_t r = 0; r < sets.ipm.size(); ++r) {
      out.I0.at(r, c) = seen->first[r];
      out.U0.at(r, c) = seen->second[r];
    }
  }
  return out;
}

struct RestrictedOrbit {
  CirclePoint root;
  size_t depth = 0;
  std::set<CirclePoint> members;
};

// Grand orbit of x truncated at the given depth, restricted to points whose
// iterates meet the forward orbit of x with the same accumulated valency.
inline RestrictedOrbit restricted_orbit(const PLCircleMap& map,
                                        const CirclePoint& x, size_t depth,
                                        size_t cap = default_breakpoint_cap()) {
  RestrictedOrbit out{x, depth, {}};
  CirclePoint cur = x;
  Valency val = Valency::PP;
  for (size_t n = 0; n <= depth; ++n) {
    for (size_t m = 0; m <= depth; ++m)
      for (const CirclePoint& y : iterated_preimages(map, m, cur, cap))
        if (map.valency_iterate(m, y) == val) out.members.insert(y);
    if (n < depth) {
      val = compose_valency(map.valency(cur), val);
      cur = map.evaluate(cur);
    }
  }
  return out;
}

struct ExpectedFamilyResult {
  FGAbelianGroup k0, k1, coker_A;
  std::vector<Integer> unit_class;
};

// Closed-form K-theory of the doubling family, written down independently of
// the matrix pipeline. Conjugate (negative) parameter pairs reduce to the
// positive pair with the roles of the two slopes exchanged.
inline ExpectedFamilyResult expected_family_result(long m, long k) {
  if (m <= -2 && k <= -2) {
    long t = -m;
    m = -k;
    k = t;
  }
  if (m < 2 || k < 2) throw Error("family parameters must both be at least 2");
  ExpectedFamilyResult out;
  if (k == m - 1) {
    out.k0 = FGAbelianGroup{2, {Integer(m - 1)}};
    out.k1 = FGAbelianGroup{2, {}};
    out.coker_A = FGAbelianGroup{1, {Integer(m - 1)}};
    out.unit_class = {Integer(m - 1), Integer(0)};
    return out;
  }
  Integer g = boost::multiprecision::gcd(Integer(k), Integer(m - 1));
  Integer big = abs_int(Integer(k) * k - Integer(m - 1) * (m - 1)) / g;
  std::vector<Integer> torsion;
  if (g > 1) torsion.push_back(g);
  if (big > 1) torsion.push_back(big);
  out.coker_A = FGAbelianGroup{0, torsion};
  out.k0 = FGAbelianGroup{1, torsion};
  out.k1 = FGAbelianGroup{1, {}};

  // Bezout pair k*x + (m-1)*y = g with |x| minimal (ties toward positive x).
  Integer a = k, b = m - 1, x0 = 1, x1 = 0;
  while (b != 0) {
    Integer q = a / b, r = a % b;
    a = b;
    b = r;
    Integer nx = x0 - q * x1;
    x0 = x1;
    x1 = nx;
  }
  Integer mod = Integer(m - 1) / g;
  Integer x = x0 % mod;
  if (2 * x > mod) x -= mod;
  if (2 * x < -mod) x += mod;
  if (g > 1) out.unit_class.push_back(((-x) % g + g) % g);
  if (big > 1) out.unit_class.push_back((Integer(m - 1) / g) % big);
  return out;
}

// Orbit of an element's coordinate tuple under automorphisms of the group,
// for groups of rank at most one with at most one torsion factor. Elements
// are equal up to automorphism exactly when these tuples are equal.
inline std::vector<Integer> element_invariant(const FGAbelianGroup& g,
                                              std::vector<Integer> coords) {
  if (g.rank > 1 || g.torsion.size() > 1)
    throw Error("element invariant needs rank and torsion length at most one");
  if (coords.size() != g.rank + g.torsion.size())
    throw Error("coordinate length does not match the group");
  using boost::multiprecision::gcd;
  if (g.torsion.empty()) {
    if (g.rank == 1) coords[0] = abs_int(coords[0]);
    return coords;
  }
  const Integer& d = g.torsion[0];
  Integer t = ((coords.back() % d) + d) % d;
  Integer tor = t == 0 ? d : gcd(t, d);
  if (g.rank == 0) return {tor};
  Integer a = abs_int(coords[0]);
  return {a, a == 0 ? tor : gcd(tor, gcd(a, d))};
}

}  // namespace pmk
