#include "doctest.h"

#include <random>
#include <sstream>

#include "mpf/decide.hpp"
#include "support/random_algebras.hpp"
#include "support/random_terms.hpp"

using namespace mpf;

namespace {

Signature plain(int n) { return Signature(n, {OpFamily::comp, OpFamily::adom}); }
const Signature kAll2 = Signature::parse("comp,adom,meet,pref,fix,tie", 2);

const char* kNaiveTwisted = "comp(a1,a2;adom1(b)) = comp(adom1(comp(a1,a2;b)),adom2(comp(a1,a2;b));a1)";

// Same assignment with extra unused points appended to the base.
CounterModel pad(const CounterModel& cm, int extra) {
  CounterModel out = cm;
  out.base = std::make_shared<const Base>(Base::square(cm.base->size + extra));
  for (auto& [name, f] : out.assign) {
    std::vector<std::pair<Tuple, int>> pairs;
    for (const auto& e : f.graph()) pairs.emplace_back(f.decode(e.code), e.value);
    f = PartialFunction::from_pairs(out.base, cm.n, pairs);
  }
  return out;
}

}  // namespace

TEST_CASE("valid equations are confirmed at the complete bound") {
  for (const char* text : {"comp(pi1,pi2;a) = a", "comp(dom1(a),dom2(a);a) = a",
                           "adom1(adom1(a)) = adom1(adom2(a))", "meet(a,a) = a", "meet(a,b) = meet(b,a)"}) {
    CAPTURE(text);
    auto d = decide_equation(parse_equation(text, kAll2), kAll2);
    CHECK(d.outcome == Outcome::valid_complete);
    CHECK(d.verdict() == "VALID (complete)");
    CHECK_FALSE(d.model);
  }
}

TEST_CASE("the naive twisted law fails on one point") {
  Equation eq = parse_equation(kNaiveTwisted, plain(2));
  auto d = decide_equation(eq, plain(2));
  REQUIRE(d.outcome == Outcome::refuted);
  CHECK(d.verdict() == "REFUTED");
  const CounterModel& cm = *d.model;
  CHECK(cm.base->size == 1);
  CHECK(cm.assign.at("a1").size() == 1);
  CHECK(cm.assign.at("a2").empty());
  CHECK(cm.assign.at("b").empty());
  CHECK(cm.lhs_value == -1);
  CHECK(cm.rhs_value == 0);
  CHECK(refutes(eq, cm));

  auto same = shrink_counterexample(eq, cm);
  CHECK(same.base->size == 1);
  auto padded = pad(cm, 3);
  REQUIRE(refutes(eq, padded));
  auto shrunk = shrink_counterexample(eq, padded);
  CHECK(shrunk.base->size == 1);
  CHECK(refutes(eq, shrunk));

  // the law does hold for n = 1
  Equation unary = parse_equation("comp(a1;adom1(b)) = comp(adom1(comp(a1;b));a1)", plain(1));
  CHECK(decide_equation(unary, plain(1)).outcome == Outcome::valid_complete);
}

TEST_CASE("bounded verdicts") {
  Equation eq = parse_equation("comp(pi1,pi2;a) = a", plain(2));
  SearchBudget tight;
  tight.max_base = 1;
  auto d = decide_equation(eq, plain(2), tight);
  CHECK(d.outcome == Outcome::bounded);
  CHECK(d.verdict() == "NO COUNTEREXAMPLE (bounded)");
  CHECK(d.searched == 1);

  SearchBudget starved;
  starved.max_nodes = 3;
  auto e = decide_equation(parse_equation("meet(a,b) = meet(b,a)", kAll2), kAll2, starved);
  CHECK(e.outcome == Outcome::bounded);
  CHECK(e.searched == 0);

  CHECK_THROWS_AS(decide_equation(parse_equation("meet(a,b) = a", kAll2), plain(2)), SignatureError);
}

TEST_CASE("lazy and exhaustive searches agree") {
  std::mt19937 rng(77);
  int refuted = 0;
  for (int round = 0; round < 150; ++round) {
    const int n = 1;
    Signature sig = Signature::parse("comp,adom,meet,pref,fix,tie", n);
    Equation eq{testgen::random_term(rng, n, 2), testgen::random_term(rng, n, 2)};
    SearchBudget b;
    b.max_base = 2;
    auto lazy = decide_equation(eq, sig, b);
    auto full = decide_exhaustive(eq, sig, b);
    CAPTURE(print_equation(eq));
    REQUIRE((full.outcome != Outcome::bounded || full.searched == 2));
    CHECK((lazy.outcome == Outcome::refuted) == (full.outcome == Outcome::refuted));
    if (full.outcome == Outcome::refuted) {
      ++refuted;
      CHECK(lazy.searched == full.searched);
      CHECK(refutes(eq, *full.model));
      CHECK(refutes(eq, *lazy.model));
    }
  }
  CHECK(refuted > 20);
}

TEST_CASE("the exhaustive search covers non-square bases") {
  Equation eq = parse_equation(kNaiveTwisted, plain(2));
  SearchBudget b;
  b.max_base = 1;
  auto d = decide_exhaustive(eq, plain(2), b);
  REQUIRE(d.outcome == Outcome::refuted);
  CHECK(d.model->base->size == 1);
  CHECK(refutes(eq, *d.model));

  b.max_base = 2;
  b.max_functions = 10;
  auto capped = decide_exhaustive(parse_equation("comp(pi1,pi2;a) = a", plain(2)), plain(2), b);
  CHECK(capped.outcome == Outcome::bounded);
}

TEST_CASE("witness restriction clauses") {
  auto base = std::make_shared<const Base>(Base::square(3));
  Assignment f;
  f.emplace("a", PartialFunction::from_pairs(base, 2, {{{0, 1}, 2}}));
  const Tuple x{0, 1};
  CHECK(witness_restriction(Term::var("a"), f, x) == std::set<int>{0, 1, 2});
  CHECK(witness_restriction(Term::zero(), f, x) == std::set<int>{0, 1});
  CHECK(witness_restriction(Term::adom(1, Term::var("a")), f, x) == witness_restriction(Term::var("a"), f, x));

  // the literal clause loses the point that keeps a head undefined
  auto b1 = std::make_shared<const Base>(Base::square(2));
  Assignment g;
  g.emplace("a", PartialFunction::from_pairs(b1, 1, {{{0}, 1}}));
  g.emplace("b", PartialFunction::from_pairs(b1, 1, {{{0}, 0}}));
  Term t = Term::comp({Term::adom(1, Term::var("a"))}, Term::var("b"));
  auto restricted_value = [&](const std::set<int>& y) {
    std::vector<bool> keep(2, false);
    for (int p : y) keep[p] = true;
    Assignment h;
    for (const auto& [name, fn] : g) h.emplace(name, fn.restrict_to(keep));
    return eval_at(t, h, {0});
  };
  const auto lit = witness_restriction(t, g, {0}, RestrictionClause::literal);
  CHECK(lit == std::set<int>{0});
  CHECK(eval_at(t, g, {0}) == -1);
  CHECK(restricted_value(lit) == 0);
  CHECK(restricted_value(witness_restriction(t, g, {0})) == -1);
}

TEST_CASE("restriction lemma on random terms") {
  std::mt19937 rng(2024);
  int checked = 0;
  for (int round = 0; round < 3000; ++round) {
    const int n = 1 + round % 3;
    auto base = testgen::random_base(rng, 4);
    Term t = testgen::random_term(rng, n, 3);
    Assignment f;
    for (const char* v : {"a", "b", "c2", "x_1"}) f.emplace(v, testgen::random_function(rng, base, n));
    auto codes = uniform_codes(*base, n);
    const Tuple x = PartialFunction(base, n).decode(codes[rng() % codes.size()]);
    auto y = witness_restriction(t, f, x);
    CHECK(y.size() <= term_length(t) + n);
    std::vector<bool> keep(static_cast<std::size_t>(base->size), false);
    for (int p : y) keep[p] = true;
    Assignment g;
    for (const auto& [name, fn] : f) g.emplace(name, fn.restrict_to(keep));
    CHECK(eval_at(t, f, x) == eval_at(t, g, x));
    CHECK(eval_at(t, f, x) == eval_concrete(t, f, base, n).at(x).value_or(-1));
    ++checked;
  }
  CHECK(checked == 3000);
}

TEST_CASE("shrinking random counter-models") {
  std::mt19937 rng(99);
  int shrunk = 0;
  for (int round = 0; round < 300; ++round) {
    const int n = 1 + round % 2;
    auto base = testgen::random_base(rng, 5);
    Equation eq{testgen::random_term(rng, n, 3), testgen::random_term(rng, n, 3)};
    Assignment f;
    for (const char* v : {"a", "b", "c2", "x_1"}) f.emplace(v, testgen::random_function(rng, base, n));
    auto l = eval_concrete(eq.lhs, f, base, n), r = eval_concrete(eq.rhs, f, base, n);
    for (auto c : uniform_codes(*base, n)) {
      if (l.value_at(c) == r.value_at(c)) continue;
      CounterModel cm{base, n, f, l.decode(c), l.value_at(c), r.value_at(c)};
      auto s = shrink_counterexample(eq, cm);
      CHECK(refutes(eq, s));
      CHECK(s.base->size <= complete_bound(eq, n));
      CHECK(s.base->size <= base->size);
      ++shrunk;
      break;
    }
  }
  CHECK(shrunk > 50);
}

TEST_CASE("propositional formulas") {
  auto f = parse_prop("~(p & ~p)");
  CHECK(f.to_string() == "~(p & ~p)");
  CHECK(f.depth() == 4);
  CHECK(f.tautology());
  CHECK_FALSE(parse_prop("p").tautology());
  CHECK_FALSE(parse_prop("(~p & p)").tautology());
  CHECK(parse_prop(" ( q1 &~ r ) ").letters() == std::vector<std::string>{"q1", "r"});
  CHECK_THROWS_AS(parse_prop("(p & q"), ParseError);
  CHECK_THROWS_AS(parse_prop("p q"), ParseError);
  CHECK_THROWS_AS(parse_prop("pi1"), ParseError);
  CHECK_THROWS_AS(parse_prop("(p | q)"), ParseError);

  auto small = all_formulas({"p", "q"}, 3);
  CHECK(small.size() == 8 + 8 + 8 * 8);  // F(d) = 2 F(d-1) + F(d-1)^2, F(1) = 2
  for (const auto& g : small) CHECK(g.depth() <= 3);
  CHECK(all_formulas({"p", "q", "r"}, 4).size() == 65535);
}

TEST_CASE("reduction of tautologies") {
  Equation eq = reduce_tautology(parse_prop("p"), 1, 2, false);
  CHECK(print_equation(eq) == print_equation(parse_equation("dom1(p) = pi1", plain(2))));
  auto d = decide_equation(eq, reduction_signature(2, false));
  REQUIRE(d.outcome == Outcome::refuted);
  CHECK(d.model->base->size == 1);
  CHECK(d.model->assign.at("p").empty());

  auto contra = decide_equation(reduce_tautology(parse_prop("(~p & p)"), 1, 2, false), reduction_signature(2, false));
  REQUIRE(contra.outcome == Outcome::refuted);
  CHECK(contra.model->base->size == 1);

  CHECK(decide_equation(reduce_tautology(parse_prop("~(p & ~p)"), 1, 2, false), reduction_signature(2, false))
            .outcome == Outcome::valid_complete);
  CHECK_THROWS(reduce_tautology(parse_prop("p"), 3, 2, true));

  for (int n : {1, 2})
    for (int i = 1; i <= n; ++i)
      for (bool meet : {false, true})
        for (const auto& phi : all_formulas({"p", "q"}, 3)) {
          CAPTURE(phi.to_string());
          auto v = decide_equation(reduce_tautology(phi, i, n, meet), reduction_signature(n, meet));
          CHECK(v.outcome != Outcome::bounded);
          CHECK(phi.tautology() == (v.outcome == Outcome::valid_complete));
        }
}

TEST_CASE("counter-model files round trip") {
  Equation eq = parse_equation(kNaiveTwisted, plain(2));
  auto d = decide_equation(eq, plain(2));
  REQUIRE(d.model);
  std::ostringstream w;
  write_counter_model(w, *d.model);
  CHECK(w.str().find("at (0,0)\nlhs undef\nrhs 0\n") != std::string::npos);
  std::istringstream r(w.str());
  auto back = read_counter_model(r);
  CHECK(back.point == d.model->point);
  CHECK(back.lhs_value == -1);
  CHECK(back.rhs_value == 0);
  CHECK(back.assign.at("a1") == d.model->assign.at("a1"));
  CHECK(refutes(eq, back));

  std::istringstream missing("base 1\nn 1\nat (0)\n");
  CHECK_THROWS_AS(read_counter_model(missing), FormatError);
  std::istringstream outside("base 1\nn 1\nat (3)\nlhs 0\nrhs undef\n");
  CHECK_THROWS_AS(read_counter_model(outside), FormatError);
}
