#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "mpf/decide.hpp"
#include "mpf/represent.hpp"

namespace mpf::cli {

namespace {

constexpr const char* kGrammars = R"txt(Signature lists: comma separated families from comp,adom,meet,pref,fix,tie
(zero, pi and dom are always available once comp and adom are).

Term grammar (whitespace insignificant):
  term  := VAR | "zero" | "pi" IDX | "comp(" term {"," term} ";" term ")"
         | "meet(" term "," term ")" | "dom" IDX "(" term ")" | "adom" IDX "(" term ")"
         | "fix" IDX "(" term ")" | "tie" IDX "(" term "," term ")" | "pref(" term "," term ")"
  VAR   := [a-z][a-z0-9_]* excluding keywords; IDX := positive decimal, 1..n
Equation text: term "=" term

Propositional formulas:
  phi := LETTER | "~" phi | "(" phi "&" phi ")"

Exit codes: 0 pass/valid/representable, 1 fail/refuted/not representable,
2 usage or format error.)txt";

// Errors that map to exit code 2.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

FiniteAlgebra load_algebra(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  return read_algebra(in);
}

// Writes to `path`, or to `out` when path is empty.
template <class Fn>
void emit(const std::string& path, std::ostream& out, Fn&& write) {
  if (path.empty()) {
    write(out);
    return;
  }
  std::ofstream file(path);
  if (!file) throw UsageError("cannot write '" + path + "'");
  write(file);
}

Signature parse_sig(const std::string& list, int n) {
  if (list.empty()) throw UsageError("--sig must not be empty");
  return Signature::parse(list, n);
}

struct Options {
  std::string sig = "comp,adom";
  bool injective = false;
  std::string file;
  std::string output;
  std::string rep_file;
  int square_max = 0;
  int n = 0;
  std::string eq;
  int max_base = 0;
  bool exhaustive = false;
  bool shrink = false;
  std::string phi;
  int index = 1;
  bool use_meet = false;
  bool decide = false;
  std::string kind;
  bool quotient = false;
};

int check_axioms_cmd(const Options& o, std::ostream& out) {
  FiniteAlgebra alg = load_algebra(o.file);
  Report report = check_axioms(alg, parse_sig(o.sig, alg.arity()), o.injective);
  out << "suite " << report.suite.name << " (" << to_string(report.suite.classification) << ")\n";
  out << report.format();
  return report.all_pass() ? 0 : 1;
}

int represent_cmd(const Options& o, std::ostream& out) {
  FiniteAlgebra alg = load_algebra(o.file);
  const Signature sig = parse_sig(o.sig, alg.arity());
  RepresentOutcome res = represent(alg, sig, o.injective);
  if (!res.rep) {
    out << res.report.format();
    for (const auto& line : res.report.lines)
      if (!line.pass) {
        out << "not representable: " << line.tag << " fails\n";
        break;
      }
    return 1;
  }
  const Representation& rep = *res.rep;
  emit(o.output, out, [&](std::ostream& s) { write_representation(s, alg, rep); });
  if (!o.output.empty()) {
    out << "representable: base " << rep.base->size << " points, " << rep.atoms.size() << " ultrafilters, square "
        << (rep.square() ? "yes" : "no") << "\n";
  }
  if (o.square_max > 0) {
    auto found = find_square_representation(alg, res.report.suite.sig, o.square_max);
    out << "square search up to " << o.square_max << " points: ";
    if (found) out << "found on " << found->base->size << " points\n";
    else out << "none\n";
  }
  return 0;
}

int verify_rep_cmd(const Options& o, std::ostream& out) {
  FiniteAlgebra alg = load_algebra(o.file);
  std::ifstream in(o.rep_file);
  if (!in) throw UsageError("cannot open '" + o.rep_file + "'");
  Representation rep = read_representation(in, alg);
  RepresentationCheck check = verify_representation(alg, rep);
  out << check.format();
  return check.all_pass() ? 0 : 1;
}

int classify_cmd(const Options& o, std::ostream& out) {
  FiniteAlgebra alg = load_algebra(o.file);
  Report report = check_axioms(alg, Signature(alg.arity(), {OpFamily::comp, OpFamily::adom}), false);
  if (!report.all_pass()) {
    out << report.format() << "classification needs the comp,adom suite to pass\n";
    return 1;
  }
  const std::vector<int> inj = injective_elements(alg);
  out << "injective:";
  for (int e : inj) out << ' ' << alg.element_name(e);
  out << "\nnot injective:";
  for (int e = 0; e < alg.size(); ++e)
    if (!std::binary_search(inj.begin(), inj.end(), e)) out << ' ' << alg.element_name(e);
  out << "\n";
  if (alg.provides(OpFamily::meet) && alg.provides(OpFamily::tie)) {
    const bool agree = tie_injective_elements(alg) == inj;
    out << "tie-injective cross-check: " << (agree ? "agrees" : "DISAGREES") << "\n";
    if (!agree) return 1;
  }
  return 0;
}

int decide_cmd(const Options& o, std::ostream& out) {
  if (o.n < 1) throw UsageError("--n must be at least 1");
  const Signature sig = parse_sig(o.sig, o.n);
  const Equation eq = parse_equation(o.eq, sig);
  SearchBudget budget;
  budget.max_base = o.max_base;
  Decision d = o.exhaustive ? decide_exhaustive(eq, sig, budget) : decide_equation(eq, sig, budget);
  out << d.verdict() << "\n";
  if (d.outcome == Outcome::valid_complete && d.searched < d.complete_bound)
    out << "search space exhausted at " << d.searched << " points (complete bound " << d.complete_bound << ")\n";
  else
    out << "searched bases up to " << d.searched << " points (complete bound " << d.complete_bound << ")\n";
  if (!d.model) return 0;
  CounterModel cm = o.shrink ? shrink_counterexample(eq, *d.model) : *d.model;
  emit(o.output, out, [&](std::ostream& s) { write_counter_model(s, cm); });
  return 1;
}

int reduce_cmd(const Options& o, std::ostream& out) {
  if (o.n < 1) throw UsageError("--n must be at least 1");
  const PropFormula phi = parse_prop(o.phi);
  const Equation eq = reduce_tautology(phi, o.index, o.n, o.use_meet);
  out << print_equation(eq) << "\n";
  if (!o.decide) return 0;
  Decision d = decide_equation(eq, reduction_signature(o.n, o.use_meet));
  out << d.verdict() << "\n";
  return d.outcome == Outcome::refuted ? 1 : 0;
}

int gen_cmd(const Options& o, std::ostream& out) {
  if (o.n < 1) throw UsageError("--n must be at least 1");
  std::optional<FiniteAlgebra> alg;
  if (o.kind == "quotient-example") {
    auto ex = build_quotient_example(o.n);
    alg = to_finite_algebra(ex.alg, "quotient_example", ex.names);
    if (o.quotient) alg = quotient(*alg, quotient_example_partition(o.n));
  } else if (o.kind == "one-point-product") {
    if (o.quotient) throw UsageError("--quotient applies to quotient-example only");
    alg = build_one_point_example(o.n).AxA;
  } else {
    throw UsageError("unknown example '" + o.kind + "'");
  }
  emit(o.output, out, [&](std::ostream& s) { write_algebra(s, *alg); });
  return 0;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Finite algebras of n-ary partial functions: axiom checking, representation and validity."};
  app.name("mpf");
  app.footer(kGrammars);
  app.require_subcommand(1);
  Options o;

  auto* check = app.add_subcommand("check-axioms", "Check the axiom suite of a signature on an algebra file");
  check->add_option("--sig", o.sig, "Signature list")->capture_default_str();
  check->add_flag("--injective", o.injective, "Use the injective suite");
  check->add_option("FILE", o.file, "Algebra file")->required();

  auto* rep = app.add_subcommand("represent", "Build and verify a representation");
  rep->add_option("--sig", o.sig, "Signature list")->capture_default_str();
  rep->add_flag("--injective", o.injective, "Demand injective images");
  rep->add_option("FILE", o.file, "Algebra file")->required();
  rep->add_option("-o,--output", o.output, "Representation file (default: standard output)");
  rep->add_option("--square-search-max-base", o.square_max, "Also search square representations up to this size")
      ->check(CLI::NonNegativeNumber);

  auto* verify = app.add_subcommand("verify-rep", "Verify a representation file against an algebra");
  verify->add_option("ALG", o.file, "Algebra file")->required();
  verify->add_option("REP", o.rep_file, "Representation file")->required();

  auto* classify = app.add_subcommand("classify-injective", "List the injective elements of an algebra");
  classify->add_option("FILE", o.file, "Algebra file")->required();

  auto* dec = app.add_subcommand("decide", "Search for a counter-model to an equation");
  dec->add_option("--sig", o.sig, "Signature list")->capture_default_str();
  dec->add_option("--n", o.n, "Arity")->required();
  dec->add_option("--eq", o.eq, "Equation S=T")->required();
  dec->add_option("--max-base", o.max_base, "Largest base size (default: the complete bound)")
      ->check(CLI::NonNegativeNumber);
  dec->add_flag("--exhaustive", o.exhaustive, "Enumerate every base and assignment");
  dec->add_flag("--shrink", o.shrink, "Restrict the counter-model to the points it needs");
  dec->add_option("-o,--output", o.output, "Counter-model file (default: standard output)");

  auto* red = app.add_subcommand("reduce-taut", "Translate a propositional formula into an equation");
  red->add_option("PHI", o.phi, "Formula")->required();
  red->add_option("--i", o.index, "Index i")->required();
  red->add_option("--n", o.n, "Arity")->required();
  red->add_flag("--use-meet", o.use_meet, "Encode conjunction with meet");
  red->add_flag("--decide", o.decide, "Also decide the resulting equation");

  auto* gen = app.add_subcommand("gen", "Write a built-in example algebra");
  gen->add_option("KIND", o.kind, "quotient-example | one-point-product")->required();
  gen->add_option("--n", o.n, "Arity")->required();
  gen->add_flag("--quotient", o.quotient, "Write the quotient identifying the two-point-domain elements");
  gen->add_option("-o,--output", o.output, "Output file (default: standard output)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (check->parsed()) return check_axioms_cmd(o, out);
    if (rep->parsed()) return represent_cmd(o, out);
    if (verify->parsed()) return verify_rep_cmd(o, out);
    if (classify->parsed()) return classify_cmd(o, out);
    if (dec->parsed()) return decide_cmd(o, out);
    if (red->parsed()) return reduce_cmd(o, out);
    if (gen->parsed()) return gen_cmd(o, out);
  } catch (const FormatError& e) {
    err << "format error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const RepresentationError& e) {
    err << "internal error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace mpf::cli
