#pragma once

#include <optional>
#include <set>
#include <utility>
#include <vector>

#include "pmk/intmatrix.hpp"
#include "pmk/markov.hpp"

namespace pmk {

// Index sets for the K-theory pipeline. dpm lists the pairs (d, v) where d is
// a partition point and v a valency realized by some order-k preimage of d;
// it is sorted by d and then by valency in the order (-,+) < (+,-) < (+,+) <
// (-,-). ipm pairs each partition component with the two fold-free valencies.
struct SignedIndexSets {
  std::vector<std::pair<CirclePoint, Valency>> dpm;
  std::vector<std::pair<size_t, Valency>> ipm;
  size_t k = 0;

  size_t d_index(const CirclePoint& d, Valency v) const {
    for (size_t i = 0; i < dpm.size(); ++i)
      if (dpm[i].first == d && dpm[i].second == v) return i;
    throw LabelOutsideIndex("label (" + d.str() + ", " + valency_str(v) +
                            ") is missing from the signed point index");
  }

  static size_t i_index(size_t interval, Valency v) {
    return 2 * interval + (v == Valency::PP ? 0 : 1);
  }
};

inline SignedIndexSets signed_index_sets(const PLCircleMap& map,
                                         const MarkovStructure& ms, size_t k,
                                         size_t cap = default_breakpoint_cap()) {
  if (k == 0) throw Error("covering order must be positive");
  auto collect = [&](size_t kk) {
    std::vector<std::pair<CirclePoint, Valency>> out;
    for (const CirclePoint& d : ms.D) {
      std::set<Valency> present;
      for (const CirclePoint& x : iterated_preimages(map, kk, d, cap))
        present.insert(map.valency_iterate(kk, x));
      for (Valency v : {Valency::MP, Valency::PM, Valency::PP, Valency::MM})
        if (present.count(v)) out.emplace_back(d, v);
    }
    return out;
  };
  SignedIndexSets sets;
  sets.k = k;
  sets.dpm = collect(k);
  if (collect(k + 1) != sets.dpm)
    throw StabilityViolation(
        "signed point index changes between consecutive covering orders");
  for (size_t i = 0; i < ms.intervals.size(); ++i) {
    sets.ipm.emplace_back(i, Valency::PP);
    sets.ipm.emplace_back(i, Valency::MM);
  }
  return sets;
}

// Partition component whose closure touches d from the counterclockwise side.
inline size_t interval_right_of(const MarkovStructure& ms, const CirclePoint& d) {
  for (size_t i = 0; i < ms.intervals.size(); ++i)
    if (ms.intervals[i].start() == d) return i;
  throw LabelOutsideIndex("no partition component starts at " + d.str());
}

inline size_t interval_left_of(const MarkovStructure& ms, const CirclePoint& d) {
  for (size_t i = 0; i < ms.intervals.size(); ++i)
    if (ms.intervals[i].end() == d) return i;
  throw LabelOutsideIndex("no partition component ends at " + d.str());
}

// Inclusion of the point algebra into the interval algebra, reading each
// point pair (d, v) against the component on its counterclockwise side.
inline IntMatrix matrix_I0(const MarkovStructure& ms, const SignedIndexSets& sets) {
  IntMatrix m(sets.ipm.size(), sets.dpm.size());
  for (size_t c = 0; c < sets.dpm.size(); ++c) {
    const auto& [d, v] = sets.dpm[c];
    size_t ip = interval_right_of(ms, d);
    if (v == Valency::PP || v == Valency::MP)
      m.at(SignedIndexSets::i_index(ip, Valency::PP), c) += 1;
    if (v == Valency::MM || v == Valency::MP)
      m.at(SignedIndexSets::i_index(ip, Valency::MM), c) += 1;
  }
  return m;
}

// Companion inclusion reading each point pair against the clockwise side.
inline IntMatrix matrix_U0(const MarkovStructure& ms, const SignedIndexSets& sets) {
  IntMatrix m(sets.ipm.size(), sets.dpm.size());
  for (size_t c = 0; c < sets.dpm.size(); ++c) {
    const auto& [d, v] = sets.dpm[c];
    size_t im = interval_left_of(ms, d);
    if (v == Valency::PP || v == Valency::PM)
      m.at(SignedIndexSets::i_index(im, Valency::PP), c) += 1;
    if (v == Valency::MM || v == Valency::PM)
      m.at(SignedIndexSets::i_index(im, Valency::MM), c) += 1;
  }
  return m;
}

// Endomorphism of the point index induced by the map. Each column (d, v)
// records the image of d with the one-step valency at d, plus contributions
// from every point of the counterclockwise neighbor of d that lands on the
// partition, filtered by which side of d the pair (d, v) can see.
inline IntMatrix matrix_A(const PLCircleMap& map, const MarkovStructure& ms,
                          const SignedIndexSets& sets) {
  size_t n = sets.dpm.size();
  IntMatrix m(n, n);
  for (size_t c = 0; c < n; ++c) {
    const auto& [d, v] = sets.dpm[c];
    m.at(sets.d_index(map.evaluate(d), map.valency(d)), c) += 1;
    if (v == Valency::PM) continue;
    const CircleInterval& right = ms.intervals[interval_right_of(ms, d)];
    for (const CirclePoint& dd : ms.D) {
      for (const auto& [z, w] : map.preimages(dd)) {
        if (!right.contains(z)) continue;
        CirclePoint fz = map.evaluate(z);
        if (v == Valency::PP || v == Valency::MP)
          m.at(sets.d_index(fz, compose_valency(w, Valency::PP)), c) += 1;
        if (v == Valency::MM || v == Valency::MP)
          m.at(sets.d_index(fz, compose_valency(w, Valency::MM)), c) += 1;
      }
    }
  }
  return m;
}

// Which fold-free monotone piece of each component represents it.
enum class PiecePolicy { Leftmost, Rightmost };

// Endomorphism of the interval index: each component acts through one of its
// fold-free monotone pieces, signed by the piece's orientation.
inline IntMatrix matrix_B(const MarkovStructure& ms, const SignedIndexSets& sets,
                          PiecePolicy policy = PiecePolicy::Leftmost) {
  IntMatrix m(sets.ipm.size(), sets.ipm.size());
  for (size_t j = 0; j < ms.intervals.size(); ++j) {
    if (ms.pieces[j].empty())
      throw NoValidSubinterval("partition component has no fold-free piece");
    const RefinementPiece& jp = policy == PiecePolicy::Leftmost
                                    ? ms.pieces[j].front()
                                    : ms.pieces[j].back();
    Valency w = jp.sign > 0 ? Valency::PP : Valency::MM;
    Integer sgn = jp.sign > 0 ? 1 : -1;
    for (Valency v : {Valency::PP, Valency::MM})
      m.at(SignedIndexSets::i_index(jp.target, compose_valency(w, v)),
           SignedIndexSets::i_index(j, v)) += sgn;
  }
  return m;
}

// Multiplicity vector of the unit: counts order-k preimages of each partition
// point by the valency of the k-th iterate there. Lies in ker(I0 - U0).
inline std::vector<Integer> unit_vector(const PLCircleMap& map,
                                        const MarkovStructure& ms,
                                        const SignedIndexSets& sets,
                                        size_t cap = default_breakpoint_cap()) {
  std::vector<Integer> u(sets.dpm.size(), Integer(0));
  for (const CirclePoint& d : ms.D)
    for (const CirclePoint& x : iterated_preimages(map, sets.k, d, cap))
      u[sets.d_index(d, map.valency_iterate(sets.k, x))] += 1;
  std::vector<Integer> r = (matrix_I0(ms, sets) - matrix_U0(ms, sets)) * u;
  for (const Integer& e : r)
    if (e != 0) throw UnitNotInKernel("unit vector escapes ker(I0 - U0)");
  return u;
}

struct KTheoryOptions {
  std::optional<size_t> order;
  PiecePolicy policy = PiecePolicy::Leftmost;
  size_t orbit_cap = 1024;
  size_t cap = default_breakpoint_cap();
  // Skip the simplicity gate (the partition gate still applies).
  bool force = false;
};

struct KTheoryResult {
  StructureReport report;
  size_t order = 0;
  SignedIndexSets sets;
  IntMatrix I0, U0, A, B;
  IntMatrix kernel;  // columns span ker(I0 - U0)
  IntMatrix Atilde;  // A written in the kernel basis
  IntMatrix Btilde;  // B induced on coker(I0 - U0), canonical coordinates
  FGAbelianGroup coker_A, ker_A;  // of 1 - Atilde
  FGAbelianGroup coker_B, ker_B;  // of 1 - Btilde
  FGAbelianGroup k0, k1;
  bool k0_extension_split = false;
  std::vector<Integer> unit;         // multiplicity vector over dpm
  std::vector<Integer> unit_class;   // its canonical coordinates in coker_A
};

// K0 = coker(1 - Atilde) + ker(1 - Btilde), with the unit class landing in
// the cokernel part; K1 = coker(1 - Btilde) + ker(1 - Atilde).
inline KTheoryResult compute_ktheory(const PLCircleMap& map,
                                     KTheoryOptions options = {}) {
  KTheoryResult res;
  res.report = structure_report(map, options.orbit_cap);
  if (!res.report.markov || !res.report.structure)
    throw NotMarkov("the forward orbit of the critical set must be finite and "
                    "forward invariant");
  if (!options.force && res.report.simple != Verdict::Yes)
    throw NotSimple("map is not verified simple; rerun with force to proceed");
  const MarkovStructure& ms = *res.report.structure;
  res.order =
      options.order ? *options.order : markov_order(map, ms, true, options.cap);
  res.sets = signed_index_sets(map, ms, res.order, options.cap);
  res.I0 = matrix_I0(ms, res.sets);
  res.U0 = matrix_U0(ms, res.sets);
  res.A = matrix_A(map, ms, res.sets);
  res.B = matrix_B(ms, res.sets, options.policy);
  res.unit = unit_vector(map, ms, res.sets, options.cap);

  IntMatrix M = res.I0 - res.U0;
  res.kernel = kernel_basis(M);
  res.Atilde = restrict_to_kernel(res.A, res.kernel);

  Subquotient SA{res.kernel.rows(), res.kernel, std::nullopt};
  GroupWithElement ga = group_and_unit(SA, res.Atilde, res.unit);
  res.coker_A = ga.fixed_quotient;
  res.ker_A = ga.fixed_subgroup;
  res.unit_class = ga.element_coords;

  res.Btilde = induce_on_cokernel(res.B, M).canonical;
  Subquotient SB{res.B.rows(), IntMatrix::identity(res.B.rows()), M};
  GroupWithElement gb = group_and_unit(SB, res.B, std::nullopt);
  res.coker_B = gb.fixed_quotient;
  res.ker_B = gb.fixed_subgroup;

  res.k0 = res.coker_A.direct_sum(res.ker_B);
  res.k1 = res.coker_B.direct_sum(res.ker_A);
  res.k0_extension_split = res.ker_B.torsion.empty();
  return res;
}

}  // namespace pmk
