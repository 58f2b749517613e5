#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "pmk/family.hpp"
#include "pmk/oracle.hpp"
#include "pmk/report.hpp"

using namespace pmk;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

struct Input {
  PLCircleMap map;
  std::string name;
  std::string text;  // hashed into reports
};

Input input_from_file(const std::string& path) {
  std::string text = read_file(path);
  MapSpec spec = parse_spec_text(text);
  return {spec_to_map(spec), spec.name, text};
}

Input input_from_family(long long m, long long k) {
  std::string name =
      "family(" + std::to_string(m) + "," + std::to_string(k) + ")";
  return {make_family(static_cast<long>(m), static_cast<long>(k)), name,
          name + "\n"};
}

int run_analyze(const Input& in, const std::string& format) {
  StructureReport rep = structure_report(in.map);
  if (format == "json")
    std::cout << report_envelope("analyze", in.name, in.text,
                                 structure_json(rep))
                     .dump(2)
              << "\n";
  else
    std::cout << structure_text(rep, in.name);
  return 0;
}

int run_ktheory(const Input& in, std::optional<size_t> order, bool verbose,
                bool force, const std::string& format) {
  KTheoryOptions opt;
  opt.order = order;
  opt.force = force;
  KTheoryResult res = compute_ktheory(in.map, opt);
  if (format == "json")
    std::cout << report_envelope("ktheory", in.name, in.text,
                                 ktheory_json(res, verbose))
                     .dump(2)
              << "\n";
  else
    std::cout << ktheory_text(res, in.name, verbose);
  return 0;
}

struct CheckOutcome {
  bool failed = false;
  void report(const std::string& name, bool pass, const std::string& detail) {
    std::cout << "check " << name << ": " << (pass ? "pass" : "FAIL") << "\n";
    if (!pass) {
      failed = true;
      std::cout << detail;
    }
  }
  void skip(const std::string& name, const std::string& why) {
    std::cout << "check " << name << ": skipped (" << why << ")\n";
  }
};

std::string groups_detail(const std::string& tag, const FGAbelianGroup& k0,
                          const FGAbelianGroup& k1,
                          const FGAbelianGroup& coker) {
  return "  " + tag + ": K0 = " + k0.str() + ", K1 = " + k1.str() +
         ", coker(1-A~) = " + coker.str() + "\n";
}

int run_oracle(const Input& in, std::optional<std::pair<long, long>> family) {
  StructureReport rep = structure_report(in.map);
  if (!rep.markov || !rep.structure)
    throw NotMarkov(
        "oracle checks need a finite forward-invariant critical partition");
  const MarkovStructure& ms = *rep.structure;
  CheckOutcome out;

  SignedIndexSets sets = signed_index_sets(in.map, ms, 1);
  IntMatrix i0 = matrix_I0(ms, sets), u0 = matrix_U0(ms, sets);
  OracleInclusions oracle = oracle_I0_U0(in.map, ms, sets);
  {
    std::vector<std::string> pts = point_labels(sets);
    std::vector<std::string> ivs = interval_labels(ms, sets);
    std::string detail = matrix_text("  closed-form I0", i0, ivs, pts) +
                         matrix_text("  refined-partition I0", oracle.I0, ivs, pts) +
                         matrix_text("  closed-form U0", u0, ivs, pts) +
                         matrix_text("  refined-partition U0", oracle.U0, ivs, pts);
    out.report("inclusion-matrices", oracle.I0 == i0 && oracle.U0 == u0, detail);
  }

  if (rep.simple == Verdict::Yes) {
    KTheoryOptions left, right;
    right.policy = PiecePolicy::Rightmost;
    KTheoryResult a = compute_ktheory(in.map, left);
    KTheoryResult b = compute_ktheory(in.map, right);
    bool same = a.Btilde == b.Btilde && a.k0 == b.k0 && a.k1 == b.k1 &&
                a.unit_class == b.unit_class;
    out.report("piece-policy", same,
               groups_detail("leftmost", a.k0, a.k1, a.coker_A) +
                   groups_detail("rightmost", b.k0, b.k1, b.coker_A));

    if (family) {
      ExpectedFamilyResult expect =
          expected_family_result(family->first, family->second);
      bool groups = a.k0 == expect.k0 && a.k1 == expect.k1 &&
                    a.coker_A == expect.coker_A;
      out.report("k-groups-closed-form", groups,
                 groups_detail("computed", a.k0, a.k1, a.coker_A) +
                     groups_detail("expected", expect.k0, expect.k1,
                                   expect.coker_A));
      if (expect.coker_A.rank <= 1 && expect.coker_A.torsion.size() <= 1 &&
          groups) {
        std::vector<Integer> ci = element_invariant(a.coker_A, a.unit_class);
        std::vector<Integer> ei =
            element_invariant(expect.coker_A, expect.unit_class);
        out.report("unit-class-closed-form", ci == ei,
                   "  computed class " + integer_list_text(a.unit_class) +
                       ", orbit invariant " + integer_list_text(ci) + "\n" +
                       "  expected class " +
                       integer_list_text(expect.unit_class) +
                       ", orbit invariant " + integer_list_text(ei) + "\n");
      } else {
        out.skip("unit-class-closed-form",
                 groups ? "no orbit invariant for this group shape"
                        : "groups already disagree");
      }
    }
  } else {
    out.skip("piece-policy", "map is not verified simple");
    if (family) out.skip("k-groups-closed-form", "map is not verified simple");
  }
  return out.failed ? 4 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"piecewise-linear circle map classifier"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(0, 1);

  std::string analyze_file, ktheory_file, oracle_file;
  std::string analyze_format = "text", ktheory_format = "text";
  size_t order_value = 0;
  bool verbose = false, force = false;
  std::vector<long long> family_args;

  CLI::App* analyze = app.add_subcommand("analyze", "classify a map");
  analyze->add_option("file", analyze_file, "map description file")->required();
  analyze->add_option("--format", analyze_format, "output format")
      ->check(CLI::IsMember({"json", "text"}));

  CLI::App* ktheory =
      app.add_subcommand("ktheory", "compute K-theory of a simple map");
  ktheory->add_option("file", ktheory_file, "map description file")->required();
  CLI::Option* order_opt =
      ktheory->add_option("--order", order_value, "covering order to use")
          ->check(CLI::PositiveNumber);
  ktheory->add_flag("--verbose", verbose, "include intermediate matrices");
  ktheory->add_flag("--force", force, "skip the simplicity gate");
  ktheory->add_option("--format", ktheory_format, "output format")
      ->check(CLI::IsMember({"json", "text"}));

  CLI::App* oracle =
      app.add_subcommand("oracle", "cross-check pipeline against references");
  CLI::Option* oracle_file_opt =
      oracle->add_option("file", oracle_file, "map description file");
  CLI::Option* family_opt =
      oracle->add_option("--family", family_args, "family parameters M K")
          ->expected(2);
  oracle_file_opt->excludes(family_opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    std::cout << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    std::cout << kVersion << "\n";
    return 0;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }

  try {
    if (analyze->parsed()) return run_analyze(input_from_file(analyze_file),
                                              analyze_format);
    if (ktheory->parsed()) {
      std::optional<size_t> order;
      if (order_opt->count()) order = order_value;
      return run_ktheory(input_from_file(ktheory_file), order, verbose, force,
                         ktheory_format);
    }
    if (oracle->parsed()) {
      if (!family_args.empty()) {
        long long m = family_args[0], k = family_args[1];
        bool valid = (m >= 2 && k >= 2) || (m <= -2 && k <= -2);
        if (!valid) {
          std::cerr << "error: family parameters must be both >= 2 "
                       "or both <= -2\n";
          return 1;
        }
        return run_oracle(input_from_family(m, k),
                          std::pair<long, long>{m, k});
      }
      if (oracle_file.empty()) {
        std::cerr << "error: oracle needs a file or --family M K\n";
        return 1;
      }
      return run_oracle(input_from_file(oracle_file), std::nullopt);
    }
    std::cerr << app.help();
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const InvalidLift& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NotSurjective& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const LocallyInjective& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NotMarkov& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const NotSimple& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const DegeneratePiece& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const ResourceLimit& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const Inconsistency& e) {
    std::cerr << "internal inconsistency: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 4;
  }
}
