#include <algorithm>
#include <sstream>

#include "mpf/finalg.hpp"

namespace mpf {

namespace {

// Term-building shorthand for an arity n.
struct Builder {
  int n;

  Term v(const std::string& name) const { return Term::var(name); }
  std::vector<Term> vec(const std::string& prefix) const {
    std::vector<Term> out;
    for (int i = 1; i <= n; ++i) out.push_back(Term::var(prefix + std::to_string(i)));
    return out;
  }
  Term comp(std::vector<Term> args, Term tail) const { return Term::comp(std::move(args), std::move(tail)); }
  std::vector<Term> A(const Term& a) const {
    std::vector<Term> out;
    for (int i = 1; i <= n; ++i) out.push_back(Term::adom(i, a));
    return out;
  }
  std::vector<Term> D(const Term& a) const {
    std::vector<Term> out;
    for (int i = 1; i <= n; ++i) out.push_back(Term::dom(i, a));
    return out;
  }
  std::vector<Term> pis() const {
    std::vector<Term> out;
    for (int i = 1; i <= n; ++i) out.push_back(Term::proj(i));
    return out;
  }
  // alpha +_i beta := A_i(<A_1..A_n alpha> o A_i beta)
  Term plus(int i, const Term& alpha, const Term& beta) const {
    return Term::adom(i, comp(A(alpha), Term::adom(i, beta)));
  }
};

Quasiequation eq(Term l, Term r) { return Quasiequation{{}, Equation{std::move(l), std::move(r)}}; }

std::string idx(int i) { return "i=" + std::to_string(i); }

using Sentences = std::vector<Sentence>;

void add(Sentences& out, const std::string& tag, Quasiequation q, std::string instance = {}) {
  out.push_back(Sentence{tag, std::move(instance), std::move(q), false});
}

Sentences superassociativity(const Builder& B) {
  std::vector<Term> left;
  for (const Term& b : B.vec("b")) left.push_back(B.comp(B.vec("a"), b));
  Sentences out;
  add(out, "(1)", eq(B.comp(left, B.v("c")), B.comp(B.vec("a"), B.comp(B.vec("b"), B.v("c")))));
  return out;
}

Sentences projections(const Builder& B) {
  Sentences out;
  add(out, "(2)", eq(B.comp(B.pis(), B.v("a")), B.v("a")));
  return out;
}

Sentences zero_law(const Builder& B) {
  Sentences out;
  add(out, "(3)", eq(B.comp(B.A(B.v("a")), B.v("a")), Term::zero()));
  return out;
}

Sentences zero_argument(const Builder& B) {
  Sentences out;
  for (int i = 1; i <= B.n; ++i) {
    auto args = B.vec("a");
    args[i - 1] = Term::zero();
    add(out, "(4)", eq(B.comp(args, B.v("b")), Term::zero()), idx(i));
  }
  return out;
}

Sentences zero_tail(const Builder& B) {
  Sentences out;
  add(out, "(5)", eq(B.comp(B.vec("a"), Term::zero()), Term::zero()));
  return out;
}

Sentences twisted(const Builder& B) {
  Sentences out;
  const auto a = B.vec("a");
  const Term b = B.v("b");
  for (int i = 1; i <= B.n; ++i) {
    Term chain = a[i - 1];
    for (int k = B.n; k >= 1; --k) chain = B.comp(B.D(a[k - 1]), chain);
    Term rhs = B.comp(B.A(B.comp(a, b)), chain);
    add(out, "(6)", eq(B.comp(a, Term::adom(i, b)), rhs), idx(i));
  }
  return out;
}

Sentences quasi(const Builder& B, bool derivable) {
  const Term a = B.v("a"), b = B.v("b"), c = B.v("c");
  Quasiequation q{{Equation{B.comp(B.D(a), b), B.comp(B.D(a), c)},
                   Equation{B.comp(B.A(a), b), B.comp(B.A(a), c)}},
                  Equation{b, c}};
  Sentences out;
  add(out, "(7)", std::move(q));
  out.back().derivable = derivable;
  return out;
}

Sentences domain_restricts(const Builder& B) {
  Sentences out;
  add(out, "(8)", eq(B.comp(B.D(B.v("a")), B.v("a")), B.v("a")));
  return out;
}

Sentences double_antidomain(const Builder& B) {
  Sentences out;
  const Term a = B.v("a");
  for (int i = 1; i <= B.n; ++i)
    for (int j = 1; j <= B.n; ++j)
      for (int k = j + 1; k <= B.n; ++k)
        add(out, "(9)", eq(Term::adom(i, Term::adom(j, a)), Term::adom(i, Term::adom(k, a))),
            "i=" + std::to_string(i) + ",j=" + std::to_string(j) + ",k=" + std::to_string(k));
  return out;
}

Sentences injective(const Builder& B) {
  Sentences out;
  const Term a = B.v("a");
  for (int i = 1; i <= B.n; ++i) {
    Quasiequation q{{Equation{B.comp(B.vec("b"), a), B.comp(B.vec("c"), a)}},
                    Equation{B.comp(B.vec("b"), Term::dom(i, a)), B.comp(B.vec("c"), Term::dom(i, a))}};
    add(out, "(28)", std::move(q), idx(i));
  }
  return out;
}

Sentences meet_laws(const Builder& B) {
  const Term a = B.v("a"), b = B.v("b"), c = B.v("c");
  Sentences out;
  add(out, "(29)", eq(Term::meet(a, a), a));
  add(out, "(30)", eq(Term::meet(a, b), Term::meet(b, a)));
  add(out, "(31)", eq(B.comp(B.vec("a"), Term::meet(b, c)),
                      Term::meet(B.comp(B.vec("a"), b), B.comp(B.vec("a"), c))));
  add(out, "(32)", eq(B.comp(B.D(Term::meet(a, b)), a), Term::meet(a, b)));

  std::vector<Term> ties;
  for (int i = 1; i <= B.n; ++i) ties.push_back(Term::tie(i, a, b));
  add(out, "(33)", eq(B.comp(ties, a), B.comp(ties, b)));

  // The tuple <A_1 x..A_n x> ranges over all <alpha_1..alpha_n> for A-elements alpha.
  const auto alpha = B.A(B.v("x"));
  for (int i = 1; i <= B.n; ++i) {
    Term left = B.comp(alpha, Term::dom(i, B.comp(alpha, Term::meet(a, b))));
    Term right = B.comp(alpha, B.comp(B.A(B.comp(alpha, a)), Term::adom(i, B.comp(alpha, b))));
    add(out, "(34)", eq(B.plus(i, left, right), B.comp(alpha, Term::tie(i, a, b))), idx(i));
  }
  for (int i = 1; i <= B.n; ++i) {
    Term t = Term::tie(i, b, c);
    add(out, "(35)", eq(B.plus(i, B.comp(B.D(a), t), B.comp(B.A(a), t)), t), idx(i));
  }
  return out;
}

Sentences tie_injective(const Builder& B) {
  Sentences out;
  const Term a = B.v("a");
  const auto bs = B.vec("b");
  const auto cs = B.vec("c");
  for (int i = 1; i <= B.n; ++i) {
    Term both = Term::meet(B.comp(bs, a), B.comp(cs, a));
    add(out, "tie-inj",
        eq(B.comp(B.D(both), Term::adom(i, Term::tie(i, bs[i - 1], cs[i - 1]))), Term::zero()), idx(i));
  }
  return out;
}

Sentences pref_laws(const Builder& B, bool with_bonus) {
  const Term a = B.v("a"), b = B.v("b");
  Sentences out;
  add(out, "(18)", eq(B.comp(B.D(a), Term::pref(a, b)), a));
  add(out, "(19)", eq(B.comp(B.A(a), Term::pref(a, b)), B.comp(B.A(a), b)));
  if (with_bonus)
    add(out, "bonus", eq(Term::pref(B.comp(B.D(a), b), B.comp(B.A(a), b)), b));
  return out;
}

Sentences fix_laws(const Builder& B) {
  const Term a = B.v("a");
  Sentences out;
  for (int i = 1; i <= B.n; ++i) add(out, "fix1", eq(Term::dom(i, Term::fix(i, a)), Term::fix(i, a)), idx(i));
  for (int i = 1; i <= B.n; ++i)
    add(out, "fix2", eq(B.comp(B.D(Term::fix(i, a)), a), Term::fix(i, a)), idx(i));
  const auto bs = B.vec("b");
  for (int i = 1; i <= B.n; ++i) {
    Quasiequation q{{Equation{B.comp(bs, a), bs[i - 1]}}, Equation{B.comp(bs, Term::fix(i, a)), bs[i - 1]}};
    add(out, "fix3", std::move(q), idx(i));
  }
  return out;
}

void append(Sentences& out, Sentences more) {
  for (auto& s : more) out.push_back(std::move(s));
}

// (1)-(6), then (7) (possibly marked derivable), then (8), (9).
Sentences core(const Builder& B, bool quasi_derivable) {
  Sentences out;
  append(out, superassociativity(B));
  append(out, projections(B));
  append(out, zero_law(B));
  append(out, zero_argument(B));
  append(out, zero_tail(B));
  append(out, twisted(B));
  append(out, quasi(B, quasi_derivable));
  append(out, domain_restricts(B));
  append(out, double_antidomain(B));
  return out;
}

}  // namespace

std::string to_string(Classification c) {
  switch (c) {
    case Classification::quasivariety: return "quasivariety";
    case Classification::variety: return "variety";
    case Classification::proper_quasivariety: return "proper quasivariety";
  }
  return "?";
}

std::vector<std::string> AxiomSuite::tags() const {
  std::vector<std::string> out;
  for (const Sentence& s : sentences)
    if (std::find(out.begin(), out.end(), s.tag) == out.end()) out.push_back(s.tag);
  return out;
}

AxiomSuite axiom_suite(const Signature& sig, bool inj) {
  if (!sig.has(OpFamily::comp) || !sig.has(OpFamily::adom))
    throw UnsupportedSignature("axiom suites need comp and adom");
  for (OpFamily f : sig.families())
    if (f == OpFamily::tie)
      throw UnsupportedSignature("no axiom suite for signatures with tie (use meet)");
  const bool m = sig.has(OpFamily::meet), p = sig.has(OpFamily::pref), x = sig.has(OpFamily::fix);
  if (m && x) throw UnsupportedSignature("fix is definable from meet; drop it from the signature");

  const Builder B{sig.arity()};
  AxiomSuite suite;
  suite.sig = Signature(sig.arity(), {OpFamily::comp, OpFamily::adom});
  if (m) suite.sig = suite.sig.with(OpFamily::meet);
  if (p) suite.sig = suite.sig.with(OpFamily::pref);
  if (x) suite.sig = suite.sig.with(OpFamily::fix);
  suite.injective = inj;
  suite.name = suite.sig.to_string() + (inj ? " (injective)" : "");

  if (m) {
    // equational: (7) follows from the intersection equations
    suite.sentences = core(B, true);
    append(suite.sentences, meet_laws(B));
    if (inj) append(suite.sentences, tie_injective(B));
    if (p) append(suite.sentences, pref_laws(B, false));
    suite.classification = Classification::variety;
  } else if (p && !x && !inj) {
    suite.sentences = core(B, true);
    append(suite.sentences, pref_laws(B, true));
    suite.classification = Classification::variety;
  } else {
    suite.sentences = core(B, false);
    if (inj) append(suite.sentences, injective(B));
    if (p) append(suite.sentences, pref_laws(B, false));
    if (x) append(suite.sentences, fix_laws(B));
    suite.classification = (!p && !x && !inj) ? Classification::proper_quasivariety
                                              : Classification::quasivariety;
  }
  return suite;
}

std::string ReportLine::format() const {
  std::string out = tag + (pass ? " PASS" : " FAIL");
  if (!pass) {
    if (!instance.empty()) out += " " + instance;
    for (const auto& [var, elem] : witness) out += " " + var + "=" + elem;
  }
  if (derivable) out += " derivable";
  return out;
}

bool Report::all_pass() const {
  return std::all_of(lines.begin(), lines.end(), [](const ReportLine& l) { return l.pass; });
}

const ReportLine* Report::find(const std::string& tag) const {
  for (const ReportLine& l : lines)
    if (l.tag == tag) return &l;
  return nullptr;
}

std::string Report::format() const {
  std::string out;
  for (const ReportLine& l : lines) out += l.format() + "\n";
  return out;
}

Report check_axioms(const FiniteAlgebra& alg, const Signature& sig, bool inj, const HoldsOptions& opts) {
  if (sig.arity() != alg.arity()) throw UnsupportedSignature("signature arity differs from the algebra");
  Report report{axiom_suite(sig, inj), {}};
  if (!alg.sig().contains(report.suite.sig))
    throw UnsupportedSignature("algebra '" + alg.name() + "' lacks operations of " +
                               report.suite.sig.to_string());
  const FiniteAlgebra reduct = alg.reduct(report.suite.sig);
  for (const Sentence& s : report.suite.sentences) {
    ReportLine* line = nullptr;
    for (ReportLine& l : report.lines)
      if (l.tag == s.tag) line = &l;
    if (!line) {
      report.lines.push_back(ReportLine{s.tag, true, s.derivable, {}, {}});
      line = &report.lines.back();
    }
    if (!line->pass) continue;  // first failure per tag is reported
    Verdict v = holds(reduct, s.q, opts);
    if (!v.holds) {
      line->pass = false;
      line->instance = s.instance;
      for (std::size_t k = 0; k < v.vars.size(); ++k)
        line->witness.emplace_back(v.vars[k], alg.element_name(v.witness[k]));
    }
  }
  return report;
}

std::vector<Quasiequation> injectivity_sentences(int n) {
  std::vector<Quasiequation> out;
  for (Sentence& s : injective(Builder{n})) out.push_back(std::move(s.q));
  return out;
}

std::vector<Quasiequation> tie_injectivity_sentences(int n) {
  std::vector<Quasiequation> out;
  for (Sentence& s : tie_injective(Builder{n})) out.push_back(std::move(s.q));
  return out;
}

std::vector<Sentence> derived_laws(int n) {
  const Builder B{n};
  const Term a = B.v("a"), b = B.v("b"), c = B.v("c");
  const auto as = B.vec("a");
  Sentences out;
  for (int i = 1; i <= n; ++i) {
    add(out, "restricted twisted law",
        eq(B.comp(B.A(a), Term::adom(i, b)), B.comp(B.A(B.comp(B.A(a), b)), Term::adom(i, a))), idx(i));
    add(out, "antidomain idempotence", eq(B.comp(B.A(a), Term::adom(i, a)), Term::adom(i, a)), idx(i));
    add(out, "antidomain commutativity",
        eq(B.comp(B.A(a), Term::adom(i, b)), B.comp(B.A(b), Term::adom(i, a))), idx(i));
    add(out, "domain kills antidomain", eq(B.comp(B.D(a), Term::adom(i, a)), Term::zero()), idx(i));
    add(out, "twisted law for domain",
        eq(B.comp(as, Term::dom(i, b)), B.comp(B.D(B.comp(as, b)), as[i - 1])), idx(i));
    // <A a> o b = 0  =>  A_i a <= A_i b
    add(out, "maximality",
        Quasiequation{{Equation{B.comp(B.A(a), b), Term::zero()}},
                      Equation{B.comp(B.D(Term::adom(i, a)), Term::adom(i, b)), Term::adom(i, a)}},
        idx(i));
    for (int j = 1; j <= n; ++j) {
      const std::string ij = "i=" + std::to_string(i) + ",j=" + std::to_string(j);
      add(out, "domain switch",
          eq(Term::dom(j, B.comp(B.A(a), Term::adom(i, b))), B.comp(B.A(a), Term::adom(j, b))), ij);
      add(out, "antidomain switch",
          eq(Term::adom(j, B.comp(B.A(a), Term::adom(i, b))), Term::adom(j, B.comp(B.A(a), Term::adom(j, b)))),
          ij);
      add(out, "domain preservation",
          eq(B.comp(B.D(B.comp(as, b)), Term::dom(i, as[j - 1])), Term::dom(i, B.comp(as, b))), ij);
      add(out, "annihilation transfer",
          Quasiequation{{Equation{B.comp(as, Term::adom(i, b)), Term::zero()}},
                        Equation{B.comp(as, Term::adom(j, b)), Term::zero()}},
          ij);
    }
  }
  add(out, "antidomain tuples commute",
      eq(B.comp(B.A(a), B.comp(B.A(b), c)), B.comp(B.A(b), B.comp(B.A(a), c))));
  add(out, "domain kills antidomain tuple", eq(B.comp(B.D(a), B.comp(B.A(a), b)), Term::zero()));
  add(out, "auxiliary domain law", eq(B.comp(B.D(a), b), B.comp(B.A(B.comp(B.A(a), b)), b)));
  return out;
}

}  // namespace mpf
