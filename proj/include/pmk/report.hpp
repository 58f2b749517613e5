#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "pmk/ktheory.hpp"
#include "pmk/mapspec.hpp"
#include "pmk/version.hpp"

namespace pmk {

using ordered_json = nlohmann::ordered_json;

inline std::string fnv1a64_hex(const std::string& data) {
  uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[i] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

inline std::vector<std::string> point_labels(const SignedIndexSets& sets) {
  std::vector<std::string> out;
  for (const auto& [d, v] : sets.dpm)
    out.push_back("(d=" + d.str() + ", " + valency_str(v) + ")");
  return out;
}

inline std::vector<std::string> interval_labels(const MarkovStructure& ms,
                                                const SignedIndexSets& sets) {
  std::vector<std::string> out;
  for (const auto& [i, v] : sets.ipm)
    out.push_back("(I=" + ms.intervals[i].str() + ", " + valency_str(v) + ")");
  return out;
}

inline std::vector<std::string> anonymous_labels(const std::string& stem,
                                                 size_t n) {
  std::vector<std::string> out;
  for (size_t i = 0; i < n; ++i) out.push_back(stem + std::to_string(i));
  return out;
}

// Matrices carry their labels so the index-ordering convention is visible in
// every report. Entries are decimal strings: they can exceed double range.
inline ordered_json matrix_json(const IntMatrix& m,
                                const std::vector<std::string>& rows,
                                const std::vector<std::string>& cols) {
  ordered_json out;
  out["rows"] = rows;
  out["cols"] = cols;
  ordered_json entries = ordered_json::array();
  for (size_t i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (size_t j = 0; j < m.cols(); ++j) row.push_back(m.at(i, j).str());
    entries.push_back(row);
  }
  out["entries"] = entries;
  return out;
}

inline ordered_json group_json(const FGAbelianGroup& g) {
  ordered_json out;
  out["rank"] = g.rank;
  ordered_json tor = ordered_json::array();
  for (const Integer& d : g.torsion) tor.push_back(d.str());
  out["torsion"] = tor;
  out["display"] = g.str();
  return out;
}

inline ordered_json integer_list_json(const std::vector<Integer>& v) {
  ordered_json out = ordered_json::array();
  for (const Integer& e : v) out.push_back(e.str());
  return out;
}

// Why each verdict holds, phrased against the computed evidence.
inline std::string transitive_reason(const StructureReport& r) {
  switch (r.transitive) {
    case Verdict::Yes:
      return "the map is expanding and its incidence matrix is irreducible";
    case Verdict::No:
      return "the incidence matrix is reducible";
    default:
      return r.markov ? "the map is not expanding"
                      : "no finite forward-invariant critical partition found";
  }
}

inline std::string exact_reason(const StructureReport& r) {
  switch (r.exact) {
    case Verdict::Yes:
      return "the map is expanding and its incidence matrix is primitive";
    case Verdict::No:
      return r.global_period ? "the incidence matrix has period " +
                                   std::to_string(r.global_period->p)
                             : "the incidence matrix is reducible";
    default:
      return r.markov ? "the map is not expanding"
                      : "no finite forward-invariant critical partition found";
  }
}

inline std::string simple_reason(const StructureReport& r) {
  switch (r.simple) {
    case Verdict::Yes:
      return "the map is exact and no fixed point is pinched to one side";
    case Verdict::No:
      return r.exceptional_fixed_points.empty()
                 ? "the map is not exact"
                 : "a fixed point is pinched to one side";
    default:
      return "exactness is undetermined";
  }
}

inline ordered_json verdict_json(Verdict v, const std::string& reason) {
  ordered_json out;
  out["verdict"] = verdict_str(v);
  out["reason"] = reason;
  return out;
}

inline ordered_json structure_json(const StructureReport& r) {
  ordered_json out;
  out["degree"] = r.degree.str();
  out["expanding"] = r.expanding;
  out["markov"] = r.markov;
  if (r.structure) {
    const MarkovStructure& ms = *r.structure;
    ordered_json points = ordered_json::array();
    for (const CirclePoint& d : ms.D) points.push_back(d.str());
    ordered_json comps = ordered_json::array();
    for (const CircleInterval& c : ms.intervals) comps.push_back(c.str());
    out["partition"] = {{"points", points}, {"components", comps}};
    std::vector<std::string> labels;
    for (const CircleInterval& c : ms.intervals) labels.push_back(c.str());
    out["incidence"] = matrix_json(ms.incidence, labels, labels);
  } else {
    out["partition"] = nullptr;
    out["incidence"] = nullptr;
  }
  out["transitive"] = verdict_json(r.transitive, transitive_reason(r));
  out["exact"] = verdict_json(r.exact, exact_reason(r));
  if (r.global_period) {
    ordered_json arcs = ordered_json::array();
    for (const auto& [a, b] : r.global_period->arcs)
      arcs.push_back(ordered_json::array({a.str(), b.str()}));
    out["global_period"] = {{"period", r.global_period->p}, {"arcs", arcs}};
  } else {
    out["global_period"] = nullptr;
  }
  ordered_json efp = ordered_json::array();
  for (const CirclePoint& e : r.exceptional_fixed_points) efp.push_back(e.str());
  out["exceptional_fixed_points"] = efp;
  out["exceptional_critical_value"] =
      r.exceptional_critical_value ? ordered_json(r.exceptional_critical_value->str())
                                   : ordered_json(nullptr);
  out["simple"] = verdict_json(r.simple, simple_reason(r));
  out["quotient_form"] =
      r.quotient_form ? ordered_json(*r.quotient_form) : ordered_json(nullptr);
  ordered_json warnings = ordered_json::array();
  if (!r.expanding)
    warnings.push_back("map is not expanding; dynamical verdicts stay undetermined");
  if (!r.structure)
    warnings.push_back("critical orbit closure exceeded the cap; no partition");
  else if (!r.markov)
    warnings.push_back("some critical value is not a critical point; "
                       "the partition is not forward closed on fold points");
  out["warnings"] = warnings;
  return out;
}

inline ordered_json ktheory_json(const KTheoryResult& res, bool verbose) {
  const MarkovStructure& ms = *res.report.structure;
  std::vector<std::string> pts = point_labels(res.sets);
  std::vector<std::string> ivs = interval_labels(ms, res.sets);
  ordered_json out;
  out["order"] = res.order;
  out["point_index"] = pts;
  out["interval_index"] = ivs;
  out["K0"] = group_json(res.k0);
  out["K1"] = group_json(res.k1);
  out["unit_class"] = integer_list_json(res.unit_class);
  out["k0_extension_split"] = res.k0_extension_split;
  out["cokernel_A"] = group_json(res.coker_A);
  out["kernel_A"] = group_json(res.ker_A);
  out["cokernel_B"] = group_json(res.coker_B);
  out["kernel_B"] = group_json(res.ker_B);
  out["unit_vector"] = integer_list_json(res.unit);
  if (verbose) {
    std::vector<std::string> ker = anonymous_labels("v", res.kernel.cols());
    std::vector<std::string> ind = anonymous_labels("g", res.Btilde.rows());
    ordered_json mats;
    mats["I0"] = matrix_json(res.I0, ivs, pts);
    mats["U0"] = matrix_json(res.U0, ivs, pts);
    mats["A"] = matrix_json(res.A, pts, pts);
    mats["B"] = matrix_json(res.B, ivs, ivs);
    mats["kernel_basis"] = matrix_json(res.kernel, pts, ker);
    mats["A_compressed"] = matrix_json(res.Atilde, ker, ker);
    mats["B_induced"] = matrix_json(res.Btilde, ind, ind);
    out["matrices"] = mats;
  }
  return out;
}

inline ordered_json report_envelope(const std::string& command,
                                    const std::string& name,
                                    const std::string& input_text,
                                    ordered_json result) {
  ordered_json out;
  out["tool"] = "pmk";
  out["version"] = kVersion;
  out["command"] = command;
  out["input"] = {{"name", name}, {"hash", "fnv1a64:" + fnv1a64_hex(input_text)}};
  out["result"] = std::move(result);
  return out;
}

// Plain-text rendering used by the default CLI format.

inline std::string verdict_line(const std::string& what, const ordered_json& v) {
  return what + ": " + v["verdict"].get<std::string>() + "  [" +
         v["reason"].get<std::string>() + "]\n";
}

inline std::string structure_text(const StructureReport& r,
                                  const std::string& name) {
  ordered_json j = structure_json(r);
  std::string out;
  if (!name.empty()) out += "name: " + name + "\n";
  out += "degree: " + r.degree.str() + "\n";
  out += std::string("expanding: ") + (r.expanding ? "yes" : "no") + "\n";
  out += std::string("markov partition: ") + (r.markov ? "yes" : "no");
  if (r.structure)
    out += " (" + std::to_string(r.structure->D.size()) + " point" +
           (r.structure->D.size() == 1 ? "" : "s") + ")";
  out += "\n";
  out += verdict_line("transitive", j["transitive"]);
  out += verdict_line("exact", j["exact"]);
  if (r.global_period)
    out += "global period: " + std::to_string(r.global_period->p) + "\n";
  if (!r.exceptional_fixed_points.empty()) {
    out += "one-sided fixed points:";
    for (const CirclePoint& e : r.exceptional_fixed_points)
      out += " " + e.str();
    out += "\n";
  }
  if (r.exceptional_critical_value)
    out += "pinched critical value: " + r.exceptional_critical_value->str() + "\n";
  out += verdict_line("simple", j["simple"]);
  if (r.quotient_form) out += "quotient form: " + *r.quotient_form + "\n";
  for (const auto& w : j["warnings"])
    out += "warning: " + w.get<std::string>() + "\n";
  return out;
}

inline std::string matrix_text(const std::string& title, const IntMatrix& m,
                               const std::vector<std::string>& rows,
                               const std::vector<std::string>& cols) {
  std::string out = title + "  [columns: ";
  for (size_t j = 0; j < cols.size(); ++j)
    out += (j ? ", " : "") + cols[j];
  out += "]\n";
  for (size_t i = 0; i < m.rows(); ++i) {
    out += "  " + rows[i] + " |";
    for (size_t j = 0; j < m.cols(); ++j) out += " " + m.at(i, j).str();
    out += "\n";
  }
  return out;
}

inline std::string integer_list_text(const std::vector<Integer>& v) {
  std::string out = "[";
  for (size_t i = 0; i < v.size(); ++i) out += (i ? ", " : "") + v[i].str();
  return out + "]";
}

inline std::string ktheory_text(const KTheoryResult& res,
                                const std::string& name, bool verbose) {
  const MarkovStructure& ms = *res.report.structure;
  std::vector<std::string> pts = point_labels(res.sets);
  std::vector<std::string> ivs = interval_labels(ms, res.sets);
  std::string out;
  if (!name.empty()) out += "name: " + name + "\n";
  out += "order: " + std::to_string(res.order) + "\n";
  out += "K0: " + res.k0.str() + "\n";
  out += "K1: " + res.k1.str() + "\n";
  out += "unit class in coker(1-A~): " + integer_list_text(res.unit_class) +
         " of " + res.coker_A.str() + "\n";
  out += std::string("K0 extension splits: ") +
         (res.k0_extension_split ? "yes" : "no") + "\n";
  if (verbose) {
    out += "unit vector: " + integer_list_text(res.unit) + "\n";
    std::vector<std::string> ker = anonymous_labels("v", res.kernel.cols());
    std::vector<std::string> ind = anonymous_labels("g", res.Btilde.rows());
    out += matrix_text("I0", res.I0, ivs, pts);
    out += matrix_text("U0", res.U0, ivs, pts);
    out += matrix_text("A", res.A, pts, pts);
    out += matrix_text("B", res.B, ivs, ivs);
    out += matrix_text("kernel basis of I0-U0", res.kernel, pts, ker);
    out += matrix_text("A compressed to the kernel", res.Atilde, ker, ker);
    out += matrix_text("B induced on the cokernel", res.Btilde, ind, ind);
  }
  return out;
}

}  // namespace pmk
