#include "doctest.h"

#include <numeric>
#include <random>
#include <sstream>

#include "mpf/finalg.hpp"
#include "support/random_algebras.hpp"
#include "support/random_tables.hpp"

using namespace mpf;

namespace {

FiniteAlgebra tables_of(const NamedConcreteAlgebra& a, const std::string& name) {
  return to_finite_algebra(a.alg, name, a.names);
}

// Naive checker: every assignment in enumeration order through eval_abstract.
Verdict naive_holds(const FiniteAlgebra& alg, const Quasiequation& q) {
  Verdict v;
  v.vars = variables(q);
  std::vector<int> values(v.vars.size(), 0);
  while (true) {
    AbstractAssignment as;
    for (std::size_t k = 0; k < values.size(); ++k) as[v.vars[k]] = values[k];
    bool premises = true;
    for (const Equation& e : q.premises)
      premises = premises && eval_abstract(e.lhs, alg, as) == eval_abstract(e.rhs, alg, as);
    if (premises && eval_abstract(q.conclusion.lhs, alg, as) != eval_abstract(q.conclusion.rhs, alg, as)) {
      v.holds = false;
      v.witness = values;
      return v;
    }
    int p = static_cast<int>(values.size()) - 1;
    while (p >= 0 && ++values[p] == alg.size()) values[p--] = 0;
    if (p < 0) return v;
  }
}

bool all_injective(const ConcreteAlgebra& a) {
  for (const auto& f : a.elements)
    if (!is_injective_fn(f)) return false;
  return true;
}

}  // namespace

TEST_CASE("the example algebra on three points") {
  for (int n : {1, 2, 3}) {
    auto ex = build_quotient_example(n);
    CHECK(ex.alg.elements.size() == static_cast<std::size_t>(2 * (n + 3)));
    auto alg = tables_of(ex, "ex");
    CHECK(alg.element_name(alg.zero()) == "z");
    CHECK(alg.element_name(alg.adom(1, alg.element_index("p1"))) == "zu");
    CHECK(alg.element_name(alg.adom(1, alg.zero())) == "p1u");
    CHECK(alg.element_name(alg.proj(n)) == "p" + std::to_string(n) + "u");
    // zero evaluated from its definition on any element
    Signature sig(n, {OpFamily::comp, OpFamily::adom});
    for (int a = 0; a < alg.size(); ++a) {
      std::vector<int> args;
      for (int i = 1; i <= n; ++i) args.push_back(alg.adom(i, a));
      CHECK(alg.comp(args, a) == alg.element_index("z"));
    }
    CHECK(check_axioms(alg, sig, false).all_pass());
  }
}

TEST_CASE("identifying the elements with the two-point domain breaks only the quasiequation") {
  for (int n : {1, 2}) {
    auto ex = build_quotient_example(n);
    auto alg = tables_of(ex, "ex");
    auto q = quotient(alg, quotient_example_partition(n));
    // z, the merged class, and the n+3 extended elements
    CHECK(q.size() == n + 5);
    Report r = check_axioms(q, Signature(n, {OpFamily::comp, OpFamily::adom}), false);
    for (const ReportLine& line : r.lines) CHECK_MESSAGE(line.pass == (line.tag != "(7)"), line.format());

    const ReportLine* seven = r.find("(7)");
    REQUIRE(seven);
    REQUIRE(seven->witness.size() == 3);
    std::map<std::string, int> w;
    for (const auto& [var, elem] : seven->witness) w[var] = q.element_index(elem);
    // a is the merged class; b and c agree on both halves yet differ
    CHECK(q.element_name(w["a"]) == "p1");
    CHECK(w["b"] != w["c"]);
    std::vector<int> D, A;
    for (int i = 1; i <= n; ++i) {
      D.push_back(q.dom(i, w["a"]));
      A.push_back(q.adom(i, w["a"]));
    }
    CHECK(q.comp(D, w["b"]) == q.comp(D, w["c"]));
    CHECK(q.comp(A, w["b"]) == q.comp(A, w["c"]));

    // the constant-2 and constant-3 extensions refute it as well
    HoldsOptions pinned;
    pinned.fixed = {{"a", q.element_index("p1")}, {"b", q.element_index("c2u")}, {"c", q.element_index("c3u")}};
    for (const Sentence& s : axiom_suite(Signature(n, {OpFamily::comp, OpFamily::adom}), false).sentences)
      if (s.tag == "(7)") CHECK_FALSE(holds(q, s.q, pinned).holds);
  }
}

TEST_CASE("quotient rejects a partition that is not a congruence") {
  auto alg = tables_of(build_quotient_example(2), "ex");
  std::vector<int> part(static_cast<std::size_t>(alg.size()));
  std::iota(part.begin(), part.end(), 0);
  part[alg.element_index("z")] = part[alg.element_index("zu")];
  CHECK_THROWS_AS(quotient(alg, part), AlgebraError);
  // the identity partition is fine
  std::iota(part.begin(), part.end(), 0);
  CHECK(quotient(alg, part).size() == alg.size());
}

TEST_CASE("one-point algebra and its square") {
  for (int n : {1, 2}) {
    auto ex = build_one_point_example(n);
    auto A = tables_of(ex.A, "A");
    CHECK(A.size() == 2);
    CHECK(ex.AxA.size() == 4);
    CHECK(ex.AxA.element_names() == std::vector<std::string>{"z_z", "z_t", "t_z", "t_t"});
    const int zt = ex.AxA.element_index("z_t");
    const int tz = ex.AxA.element_index("t_z");
    CHECK(ex.AxA.adom(1, zt) == tz);
    CHECK(ex.AxA.element_name(ex.AxA.zero()) == "z_z");
    std::vector<int> args(static_cast<std::size_t>(n), zt);
    CHECK(ex.AxA.comp(args, tz) == ex.AxA.zero());
    CHECK(check_axioms(ex.AxA, Signature(n, {OpFamily::comp, OpFamily::adom}), false).all_pass());
  }
}

TEST_CASE("suite catalog matches the classification table") {
  struct Row {
    const char* sig;
    bool inj;
    const char* cls;
  };
  const Row rows[] = {
      {"comp,adom", false, "proper quasivariety"}, {"comp,adom", true, "quasivariety"},
      {"comp,adom,meet", false, "variety"},        {"comp,adom,meet", true, "variety"},
      {"comp,adom,pref", false, "variety"},        {"comp,adom,pref", true, "quasivariety"},
      {"comp,adom,meet,pref", false, "variety"},   {"comp,adom,meet,pref", true, "variety"},
      {"comp,adom,fix", false, "quasivariety"},    {"comp,adom,fix", true, "quasivariety"},
      {"comp,adom,fix,pref", false, "quasivariety"}, {"comp,adom,fix,pref", true, "quasivariety"},
  };
  for (const Row& row : rows) {
    auto suite = axiom_suite(Signature::parse(row.sig, 2), row.inj);
    CHECK_MESSAGE(to_string(suite.classification) == row.cls, row.sig, row.inj);
    // equational rows have no premises outside derivable sentences
    bool equational = true;
    for (const Sentence& s : suite.sentences)
      if (!s.q.premises.empty() && !s.derivable) equational = false;
    CHECK(equational == (std::string(row.cls) == "variety"));
  }

  using V = std::vector<std::string>;
  auto tags = [](const char* sig, bool inj) { return axiom_suite(Signature::parse(sig, 2), inj).tags(); };
  CHECK(tags("comp,adom", false) == V{"(1)", "(2)", "(3)", "(4)", "(5)", "(6)", "(7)", "(8)", "(9)"});
  CHECK(tags("comp,adom,pref", true) ==
        V{"(1)", "(2)", "(3)", "(4)", "(5)", "(6)", "(7)", "(8)", "(9)", "(28)", "(18)", "(19)"});
  CHECK(tags("comp,adom,meet", false) == V{"(1)", "(2)", "(3)", "(4)", "(5)", "(6)", "(7)", "(8)", "(9)", "(29)",
                                           "(30)", "(31)", "(32)", "(33)", "(34)", "(35)"});
  CHECK(tags("comp,adom,meet,pref", true).back() == "(19)");
  CHECK(tags("comp,adom,fix", true).back() == "fix3");
  // dom, zero and proj are ignored
  CHECK(tags("comp,adom,dom,zero,pi", false) == tags("comp,adom", false));

  auto meet_suite = axiom_suite(Signature::parse("comp,adom,meet", 2), false);
  for (const Sentence& s : meet_suite.sentences) CHECK(s.derivable == (s.tag == "(7)"));

  CHECK_THROWS_AS(axiom_suite(Signature::parse("comp,meet", 2), false), UnsupportedSignature);
  CHECK_THROWS_AS(axiom_suite(Signature::parse("comp,adom,tie", 2), false), UnsupportedSignature);
  CHECK_THROWS_AS(axiom_suite(Signature::parse("comp,adom,meet,fix", 2), false), UnsupportedSignature);
}

TEST_CASE("report formatting") {
  ReportLine pass{"(4)", true, false, {}, {}};
  CHECK(pass.format() == "(4) PASS");
  ReportLine fail{"(4)", false, false, "i=2", {{"a1", "z"}, {"b", "p1"}}};
  CHECK(fail.format() == "(4) FAIL i=2 a1=z b=p1");
  ReportLine derivable{"(7)", true, true, {}, {}};
  CHECK(derivable.format() == "(7) PASS derivable");
}

TEST_CASE("compiled checking agrees with naive evaluation") {
  std::mt19937 rng(23);
  for (int round = 0; round < 60; ++round) {
    const int n = 1 + round % 2;
    auto alg = testgen::random_tables(rng, n, n == 1 ? 5 : 3);
    std::vector<Sentence> sentences = axiom_suite(Signature(n, {OpFamily::comp, OpFamily::adom}), true).sentences;
    for (Sentence& s : derived_laws(n)) sentences.push_back(std::move(s));
    for (const Sentence& s : sentences) {
      Verdict fast = holds(alg, s.q);
      Verdict slow = naive_holds(alg, s.q);
      CHECK_MESSAGE(fast.holds == slow.holds, s.tag, " ", s.instance);
      CHECK(fast.vars == slow.vars);
      CHECK(fast.witness == slow.witness);
    }
  }
}

TEST_CASE("pinned variables and the budget") {
  auto alg = tables_of(build_quotient_example(2), "ex");
  Signature sig(2, {OpFamily::comp, OpFamily::adom});
  auto q = parse_quasiequation("comp(a,a;b) = b", sig);
  Verdict free = holds(alg, q);
  CHECK_FALSE(free.holds);
  HoldsOptions opts;
  opts.fixed["a"] = alg.proj(1);
  Verdict pinned = holds(alg, q, opts);
  CHECK(pinned.vars == std::vector<std::string>{"b"});
  CHECK_FALSE(pinned.holds);
  opts.fixed["b"] = alg.zero();
  CHECK(holds(alg, q, opts).holds);

  HoldsOptions tiny;
  tiny.budget = 50;
  CHECK_THROWS_AS(holds(alg, q, tiny), BudgetExceeded);
}

TEST_CASE("tables from concrete algebras agree with concrete evaluation") {
  std::mt19937 rng(41);
  Signature sig = Signature::parse("comp,adom,meet,pref,fix", 2);
  for (int round = 0; round < 15; ++round) {
    auto conc = testgen::random_algebra(rng, sig, 3, testgen::element_cap(2));
    auto alg = to_finite_algebra(conc, "r");
    std::uniform_int_distribution<int> pick(0, alg.size() - 1);
    for (const Sentence& s : axiom_suite(Signature::parse("comp,adom,meet", 2), true).sentences)
      for (int trial = 0; trial < 5; ++trial) {
        AbstractAssignment abs;
        Assignment as;
        for (const auto& v : variables(s.q)) {
          abs[v] = pick(rng);
          as.emplace(v, conc.elements[abs[v]]);
        }
        const Term& t = s.q.conclusion.lhs;
        CHECK(conc.elements[eval_abstract(t, alg, abs)] == eval_concrete(t, as, conc.base, 2));
      }
  }
}

TEST_CASE("function algebras satisfy their suites") {
  const char* sigs[] = {"comp,adom", "comp,adom,meet", "comp,adom,pref", "comp,adom,meet,pref",
                        "comp,adom,fix", "comp,adom,fix,pref"};
  std::mt19937 rng(7);
  for (int n = 1; n <= 3; ++n)
    for (const char* text : sigs) {
      Signature sig = Signature::parse(text, n);
      for (int round = 0; round < 4; ++round) {
        auto conc = testgen::random_algebra(rng, sig, n == 3 ? 3 : 4, testgen::element_cap(n));
        auto alg = to_finite_algebra(conc, "r");
        Report plain = check_axioms(alg, sig, false);
        CHECK_MESSAGE(plain.all_pass(), text, " n=", n, "\n", plain.format());
        if (all_injective(conc)) {
          Report inj = check_axioms(alg, sig, true);
          CHECK_MESSAGE(inj.all_pass(), text, " n=", n, " injective\n", inj.format());
        }
      }
    }
}

TEST_CASE("injective function algebras satisfy the injective suites") {
  // one-point classes keep projections injective
  std::mt19937 rng(19);
  int checked = 0;
  for (int n = 1; n <= 2; ++n)
    for (const char* text : {"comp,adom", "comp,adom,meet", "comp,adom,pref", "comp,adom,fix"}) {
      Signature sig = Signature::parse(text, n);
      for (int round = 0; round < 6; ++round) {
        auto base = std::make_shared<const Base>(Base::with_classes({0, 1, 2}));
        std::vector<PartialFunction> gens = {testgen::random_function(rng, base, n, 0.6)};
        auto conc = generate_subalgebra(gens, sig, 64);
        if (!all_injective(conc)) continue;
        ++checked;
        Report r = check_axioms(to_finite_algebra(conc, "r"), sig, true);
        CHECK_MESSAGE(r.all_pass(), text, "\n", r.format());
      }
    }
  CHECK(checked > 10);
}

TEST_CASE("derived laws hold in function algebras") {
  std::mt19937 rng(29);
  for (int n = 1; n <= 3; ++n) {
    Signature sig(n, {OpFamily::comp, OpFamily::adom});
    auto laws = derived_laws(n);
    for (int round = 0; round < 5; ++round) {
      auto alg = to_finite_algebra(testgen::random_algebra(rng, sig, n == 3 ? 3 : 4, testgen::element_cap(n)), "r");
      for (const Sentence& s : laws) CHECK_MESSAGE(holds(alg, s.q).holds, s.tag, " ", s.instance);
    }
  }
}

TEST_CASE("order and products") {
  std::mt19937 rng(3);
  Signature sig(2, {OpFamily::comp, OpFamily::adom});
  auto alg = to_finite_algebra(testgen::random_algebra(rng, sig, 3, 14), "r");
  for (int a = 0; a < alg.size(); ++a) {
    CHECK(leq(alg, alg.zero(), a));
    CHECK(leq(alg, a, a));
  }
  auto ex = tables_of(build_quotient_example(2), "ex");
  auto one = build_one_point_example(2);
  auto prod = product({ex, tables_of(one.A, "A")});
  CHECK(prod.size() == ex.size() * 2);
  CHECK(check_axioms(prod, sig, false).all_pass());
  CHECK_THROWS_AS(product({ex, ex.reduct(Signature(2, {OpFamily::comp, OpFamily::adom, OpFamily::dom}))}),
                  AlgebraError);
}

TEST_CASE("missing tables and ill-formed zero are rejected") {
  FiniteAlgebra alg("bad", Signature(1, {OpFamily::comp, OpFamily::adom}), {"x", "y"});
  alg.set_comp({0, 1, 1, 0});
  CHECK_THROWS_AS(alg.finalize(), AlgebraError);
  alg.set_table(OpFamily::adom, 1, {1, 0});
  // <A x> o x = comp(y; x) = 1, <A y> o y = comp(x; y) = 1: constant
  alg.finalize();
  CHECK(alg.zero() == 1);
  alg.set_table(OpFamily::adom, 1, {0, 0});
  CHECK_THROWS_WITH_AS(alg.finalize(), doctest::Contains("not constant"), AlgebraError);
  CHECK_THROWS_AS(alg.set_comp({0, 1}), AlgebraError);
}

TEST_CASE("algebra file round trip") {
  auto ex = tables_of(build_quotient_example(1), "ex1");
  std::ostringstream out;
  write_algebra(out, ex);
  CHECK(out.str().rfind("algebra ex1\nn 1\nsignature comp adom\nelements z p1 c2 c3 zu p1u c2u c3u\n", 0) == 0);
  std::istringstream in(out.str());
  auto back = read_algebra(in);
  CHECK(back.element_names() == ex.element_names());
  CHECK(std::equal(ex.comp_table(), ex.comp_table() + 8 * 8, back.comp_table()));
  CHECK(check_axioms(back, Signature(1, {OpFamily::comp, OpFamily::adom}), false).all_pass());

  auto two = build_one_point_example(2).AxA;
  std::ostringstream out2;
  write_algebra(out2, two);
  std::istringstream in2(out2.str());
  CHECK(read_algebra(in2).element_names() == two.element_names());

  auto fails = [](const std::string& text) {
    std::istringstream s(text);
    CHECK_THROWS_AS(read_algebra(s), FormatError);
  };
  const std::string head = "algebra t\nn 1\nsignature comp adom\nelements x\n";
  fails(head + "table comp x ; x -> x\nend\n");  // adom missing
  fails(head + "table comp x ; x -> x\ntable adom1 x -> x\n");  // no end
  fails(head + "table comp x x -> x\ntable adom1 x -> x\nend\n");
  fails(head + "table comp x ; x -> y\ntable adom1 x -> x\nend\n");
  fails(head + "table comp x ; x -> x\ntable comp x ; x -> x\ntable adom1 x -> x\nend\n");
  fails(head + "table meet x x -> x\nend\n");
  std::istringstream ok(head + "table comp x ; x -> x   # trivial\ntable adom1 x -> x\nend\n");
  CHECK(read_algebra(ok).size() == 1);
}
