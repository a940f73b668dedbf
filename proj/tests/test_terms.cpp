#include "doctest.h"

#include <functional>
#include <random>

#include "mpf/terms.hpp"
#include "support/random_terms.hpp"

using namespace mpf;

namespace {

const Signature kFull2 = Signature::parse("comp,meet,adom,dom,fix,tie,pref,zero,proj", 2);

}  // namespace

TEST_CASE("grammar instances parse to the expected trees") {
  Term t = parse_term("comp(a,b;c)", kFull2);
  CHECK(t == Term::comp({Term::var("a"), Term::var("b")}, Term::var("c")));
  CHECK(parse_term("adom1(zero)", kFull2) == Term::adom(1, Term::zero()));
  CHECK(parse_term(" tie2 ( a , pi1 ) ", kFull2) == Term::tie(2, Term::var("a"), Term::proj(1)));
}

TEST_CASE("parse errors carry a reason and position") {
  try {
    parse_term("comp(a;b)", kFull2);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("expected 2 arguments before ';'") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_term("adom3(a)", kFull2), ParseError);
  CHECK_THROWS_AS(parse_term("meet(a,b)", Signature::parse("comp,adom", 2)), ParseError);
  CHECK_THROWS_AS(parse_term("comp(a,b;c) d", kFull2), ParseError);
  CHECK_THROWS_AS(parse_term("Abc", kFull2), ParseError);
  CHECK_THROWS_AS(parse_term("pi0", kFull2), ParseError);
}

TEST_CASE("derived operators parse when definable") {
  Signature ca = Signature::parse("comp,adom", 2);
  CHECK_NOTHROW(parse_term("dom1(zero)", ca));
  CHECK_NOTHROW(parse_term("pi2", ca));
  CHECK_THROWS_AS(parse_term("fix1(a)", ca), ParseError);
  CHECK_NOTHROW(parse_term("fix1(a)", ca.with(OpFamily::meet)));
}

TEST_CASE("canonical printing") {
  CHECK(print_term(Term::adom(2, Term::var("a"))) == "adom2(a)");
  CHECK(print_term(Term::comp({Term::proj(1), Term::proj(2)}, Term::var("b"))) == "comp(pi1,pi2;b)");
  CHECK(print_term(Term::pref(Term::var("f"), Term::var("g"))) == "pref(f,g)");
  Quasiequation q = parse_quasiequation("a = b & b=c => a=c", kFull2);
  CHECK(print_quasiequation(q) == "a = b & b = c => a = c");
}

TEST_CASE("print then parse is the identity on random terms") {
  std::mt19937 rng(7);
  for (int n = 1; n <= 3; ++n) {
    Signature sig = Signature::parse("comp,meet,adom,dom,fix,tie,pref", n);
    for (int k = 0; k < 500; ++k) {
      Term t = testgen::random_term(rng, n, 4);
      CHECK(parse_term(print_term(t), sig) == t);
    }
  }
}

TEST_CASE("term length counts nodes") {
  CHECK(term_length(Term::var("a")) == 1);
  CHECK(term_length(Term::adom(1, Term::var("a"))) == 2);
  CHECK(term_length(parse_term("comp(a,b;c)", kFull2)) == 4);
}

TEST_CASE("definitional expansion") {
  Signature ca = Signature::parse("comp,adom", 2);
  Term x0 = Term::var("x0");
  CHECK(expand_derived(Term::proj(1), ca) ==
        Term::adom(1, Term::comp({Term::adom(1, x0), Term::adom(2, x0)}, x0)));
  CHECK(expand_derived(Term::dom(2, Term::var("a")), ca) ==
        Term::adom(2, Term::adom(2, Term::var("a"))));

  // the witness avoids the term's own variables
  Term z = expand_derived(parse_term("comp(x0,zero;b)", ca), ca);
  CHECK(variables(z) == std::vector<std::string>{"b", "x0", "x0_"});

  Signature cam = ca.with(OpFamily::meet);
  ExpandOptions opts;
  opts.tie = true;
  opts.fix = true;
  Term e = expand_derived(parse_term("tie1(fix2(a),b)", cam), cam, opts);
  std::function<void(const Term&)> only_primitives = [&](const Term& s) {
    CHECK((s.kind() == TermKind::var || s.kind() == TermKind::comp ||
           s.kind() == TermKind::adom || s.kind() == TermKind::meet));
    for (const Term& c : s.children()) only_primitives(c);
  };
  only_primitives(e);
  CHECK_THROWS_AS(expand_derived(Term::tie(1, Term::var("a"), Term::var("b")), ca, opts),
                  SignatureError);
}

TEST_CASE("signature parsing and definability") {
  Signature s = Signature::parse("comp, adom ,pref", 3);
  CHECK(s.arity() == 3);
  CHECK(s.to_string() == "comp,adom,pref");
  CHECK(s.provides(OpFamily::dom));
  CHECK_FALSE(s.provides(OpFamily::meet));
  CHECK_THROWS_AS(Signature::parse("comp,bogus", 2), SignatureError);
}

TEST_CASE("flattening resolves variables") {
  std::vector<std::string> vars = {"a", "b"};
  FlatTerm ft;
  ft.root = flatten_into(parse_term("comp(a,b;a)", kFull2), vars, ft);
  REQUIRE(ft.nodes.size() == 4);
  CHECK(ft.nodes[ft.root].kind == TermKind::comp);
  CHECK(ft.nodes[0].var == 0);
  CHECK(ft.nodes[1].var == 1);
  CHECK_THROWS(flatten_into(Term::var("zz"), vars, ft));
}
