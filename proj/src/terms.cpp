#include "mpf/terms.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace mpf {

namespace {

constexpr OpFamily kAllFamilies[] = {OpFamily::comp, OpFamily::meet, OpFamily::zero,
                                     OpFamily::proj, OpFamily::dom,  OpFamily::adom,
                                     OpFamily::fix,  OpFamily::tie,  OpFamily::pref};

OpFamily family_of(TermKind k) {
  switch (k) {
    case TermKind::zero: return OpFamily::zero;
    case TermKind::proj: return OpFamily::proj;
    case TermKind::comp: return OpFamily::comp;
    case TermKind::meet: return OpFamily::meet;
    case TermKind::dom: return OpFamily::dom;
    case TermKind::adom: return OpFamily::adom;
    case TermKind::fix: return OpFamily::fix;
    case TermKind::tie: return OpFamily::tie;
    case TermKind::pref: return OpFamily::pref;
    case TermKind::var: break;
  }
  throw std::logic_error("variables have no operation family");
}

bool is_indexed(TermKind k) {
  return k == TermKind::proj || k == TermKind::dom || k == TermKind::adom ||
         k == TermKind::fix || k == TermKind::tie;
}

}  // namespace

std::string_view family_name(OpFamily f) {
  switch (f) {
    case OpFamily::comp: return "comp";
    case OpFamily::meet: return "meet";
    case OpFamily::zero: return "zero";
    case OpFamily::proj: return "proj";
    case OpFamily::dom: return "dom";
    case OpFamily::adom: return "adom";
    case OpFamily::fix: return "fix";
    case OpFamily::tie: return "tie";
    case OpFamily::pref: return "pref";
  }
  return "?";
}

Signature::Signature(int n, std::initializer_list<OpFamily> ops) : n_(n) {
  if (n < 1) throw SignatureError("arity must be at least 1");
  for (OpFamily f : ops) mask_ |= static_cast<unsigned>(f);
}

Signature Signature::parse(std::string_view list, int n) {
  Signature sig(n, {});
  std::size_t start = 0;
  while (start <= list.size()) {
    std::size_t end = list.find(',', start);
    if (end == std::string_view::npos) end = list.size();
    std::string_view tok = list.substr(start, end - start);
    while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.front()))) tok.remove_prefix(1);
    while (!tok.empty() && std::isspace(static_cast<unsigned char>(tok.back()))) tok.remove_suffix(1);
    if (!tok.empty()) {
      bool found = false;
      for (OpFamily f : kAllFamilies) {
        if (family_name(f) == tok || (f == OpFamily::proj && tok == "pi")) {
          sig.mask_ |= static_cast<unsigned>(f);
          found = true;
        }
      }
      if (!found) throw SignatureError("unknown operation '" + std::string(tok) + "'");
    }
    start = end + 1;
  }
  return sig;
}

bool Signature::provides(OpFamily f) const {
  if (has(f)) return true;
  const bool ca = has(OpFamily::comp) && has(OpFamily::adom);
  switch (f) {
    case OpFamily::zero:
    case OpFamily::proj:
    case OpFamily::dom: return ca;
    case OpFamily::tie:
    case OpFamily::fix: return ca && has(OpFamily::meet);
    case OpFamily::meet: return has(OpFamily::comp) && has(OpFamily::tie);
    default: return false;
  }
}

Signature Signature::with(OpFamily f) const {
  Signature s = *this;
  s.mask_ |= static_cast<unsigned>(f);
  return s;
}

Signature Signature::without(OpFamily f) const {
  Signature s = *this;
  s.mask_ &= ~static_cast<unsigned>(f);
  return s;
}

std::vector<OpFamily> Signature::families() const {
  std::vector<OpFamily> out;
  for (OpFamily f : kAllFamilies)
    if (has(f)) out.push_back(f);
  return out;
}

std::string Signature::to_string() const {
  std::string out;
  for (OpFamily f : families()) {
    if (!out.empty()) out += ',';
    out += family_name(f);
  }
  return out;
}

// ---------------------------------------------------------------------------

Term Term::make(TermKind k, int index, std::string name, std::vector<Term> children) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->index = index;
  n->name = std::move(name);
  n->children = std::move(children);
  return Term(std::move(n));
}

Term Term::var(std::string name) { return make(TermKind::var, 0, std::move(name), {}); }
Term Term::zero() { return make(TermKind::zero, 0, {}, {}); }
Term Term::proj(int i) { return make(TermKind::proj, i, {}, {}); }

Term Term::comp(std::vector<Term> args, Term tail) {
  if (args.empty()) throw std::invalid_argument("comp needs at least one argument");
  args.push_back(std::move(tail));
  return make(TermKind::comp, 0, {}, std::move(args));
}

Term Term::meet(Term l, Term r) { return make(TermKind::meet, 0, {}, {std::move(l), std::move(r)}); }
Term Term::dom(int i, Term t) { return make(TermKind::dom, i, {}, {std::move(t)}); }
Term Term::adom(int i, Term t) { return make(TermKind::adom, i, {}, {std::move(t)}); }
Term Term::fix(int i, Term t) { return make(TermKind::fix, i, {}, {std::move(t)}); }
Term Term::tie(int i, Term l, Term r) {
  return make(TermKind::tie, i, {}, {std::move(l), std::move(r)});
}
Term Term::pref(Term l, Term r) { return make(TermKind::pref, 0, {}, {std::move(l), std::move(r)}); }

std::span<const Term> Term::comp_args() const {
  std::span<const Term> all = node_->children;
  return all.first(all.size() - 1);
}

bool operator==(const Term& a, const Term& b) {
  if (a.node_ == b.node_) return true;
  if (a.kind() != b.kind() || a.index() != b.index() || a.name() != b.name()) return false;
  auto ca = a.children();
  auto cb = b.children();
  return std::equal(ca.begin(), ca.end(), cb.begin(), cb.end());
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

bool is_family_with_index(std::string_view id, std::string_view prefix) {
  if (id.size() <= prefix.size() || id.substr(0, prefix.size()) != prefix) return false;
  return std::all_of(id.begin() + static_cast<long>(prefix.size()), id.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)); });
}

class Parser {
 public:
  Parser(std::string_view text, const Signature& sig) : text_(text), sig_(sig) {}

  Term term() {
    skip_ws();
    const std::size_t start = pos_;
    if (pos_ >= text_.size() || !std::islower(static_cast<unsigned char>(text_[pos_])))
      fail("expected a term");
    std::string id = identifier();
    if (id == "zero") {
      require(OpFamily::zero, start);
      return Term::zero();
    }
    if (id == "comp") {
      require(OpFamily::comp, start);
      expect('(');
      std::vector<Term> args;
      args.push_back(term());
      while (peek(',')) {
        expect(',');
        args.push_back(term());
      }
      if (!peek(';')) {
        skip_ws();
        if (pos_ < text_.size() && text_[pos_] == ')')
          fail("expected " + std::to_string(sig_.arity()) + " arguments before ';'");
        fail("expected ';'");
      }
      if (static_cast<int>(args.size()) != sig_.arity())
        fail("expected " + std::to_string(sig_.arity()) + " arguments before ';'");
      expect(';');
      Term tail = term();
      expect(')');
      return Term::comp(std::move(args), std::move(tail));
    }
    if (id == "meet" || id == "pref") {
      const bool is_meet = id == "meet";
      require(is_meet ? OpFamily::meet : OpFamily::pref, start);
      expect('(');
      Term l = term();
      expect(',');
      Term r = term();
      expect(')');
      return is_meet ? Term::meet(std::move(l), std::move(r)) : Term::pref(std::move(l), std::move(r));
    }
    if (is_family_with_index(id, "pi")) {
      int i = index_of(id, 2, start);
      require(OpFamily::proj, start);
      return Term::proj(i);
    }
    if (is_family_with_index(id, "adom")) {
      int i = index_of(id, 4, start);
      require(OpFamily::adom, start);
      return Term::adom(i, unary_body());
    }
    if (is_family_with_index(id, "dom")) {
      int i = index_of(id, 3, start);
      require(OpFamily::dom, start);
      return Term::dom(i, unary_body());
    }
    if (is_family_with_index(id, "fix")) {
      int i = index_of(id, 3, start);
      require(OpFamily::fix, start);
      return Term::fix(i, unary_body());
    }
    if (is_family_with_index(id, "tie")) {
      int i = index_of(id, 3, start);
      require(OpFamily::tie, start);
      expect('(');
      Term l = term();
      expect(',');
      Term r = term();
      expect(')');
      return Term::tie(i, std::move(l), std::move(r));
    }
    if (is_keyword(id)) fail("reserved word '" + id + "' cannot be a variable", start);
    return Term::var(std::move(id));
  }

  Equation equation() {
    Term l = term();
    expect('=');
    Term r = term();
    return {std::move(l), std::move(r)};
  }

  void expect_end() {
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
  }

  bool at_implication() {
    skip_ws();
    return text_.substr(pos_, 2) == "=>";
  }
  bool peek(char c) {
    skip_ws();
    return pos_ < text_.size() && text_[pos_] == c;
  }
  void expect(char c) {
    skip_ws();
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }
  void expect_implication() {
    if (!at_implication()) fail("expected '=>'");
    pos_ += 2;
  }

 private:
  Term unary_body() {
    expect('(');
    Term t = term();
    expect(')');
    return t;
  }

  int index_of(const std::string& id, std::size_t prefix, std::size_t start) {
    const std::string digits = id.substr(prefix);
    if (digits.size() > 6) fail("index out of range in '" + id + "'", start);
    const int i = std::stoi(digits);
    if (i < 1 || i > sig_.arity())
      fail("index out of range in '" + id + "' (n = " + std::to_string(sig_.arity()) + ")", start);
    return i;
  }

  void require(OpFamily f, std::size_t start) {
    if (!sig_.provides(f))
      fail("operator '" + std::string(family_name(f)) + "' not in signature", start);
  }

  std::string identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::islower(static_cast<unsigned char>(text_[pos_])) ||
            std::isdigit(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, pos_); }
  [[noreturn]] void fail(const std::string& msg, std::size_t at) { throw ParseError(msg, at); }

  std::string_view text_;
  const Signature& sig_;
  std::size_t pos_ = 0;
};

}  // namespace

bool is_keyword(std::string_view id) {
  static const std::set<std::string_view> plain = {"zero", "comp", "meet", "pref", "pi",
                                                   "dom",  "adom", "fix",  "tie"};
  if (plain.count(id)) return true;
  for (std::string_view p : {"pi", "dom", "adom", "fix", "tie"})
    if (is_family_with_index(id, p)) return true;
  return false;
}

Term parse_term(std::string_view text, const Signature& sig) {
  Parser p(text, sig);
  Term t = p.term();
  p.expect_end();
  return t;
}

Equation parse_equation(std::string_view text, const Signature& sig) {
  Parser p(text, sig);
  Equation e = p.equation();
  p.expect_end();
  return e;
}

Quasiequation parse_quasiequation(std::string_view text, const Signature& sig) {
  Parser p(text, sig);
  std::vector<Equation> eqs;
  eqs.push_back(p.equation());
  while (p.peek('&')) {
    p.expect('&');
    eqs.push_back(p.equation());
  }
  if (!p.at_implication()) {
    if (eqs.size() != 1) throw ParseError("expected '=>' after premises", text.size());
    p.expect_end();
    return Quasiequation{{}, std::move(eqs.front())};
  }
  p.expect_implication();
  Quasiequation q{std::move(eqs), p.equation()};
  p.expect_end();
  return q;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

void print_into(const Term& t, std::string& out) {
  switch (t.kind()) {
    case TermKind::var: out += t.name(); return;
    case TermKind::zero: out += "zero"; return;
    case TermKind::proj: out += "pi" + std::to_string(t.index()); return;
    case TermKind::comp: {
      out += "comp(";
      bool first = true;
      for (const Term& a : t.comp_args()) {
        if (!first) out += ',';
        first = false;
        print_into(a, out);
      }
      out += ';';
      print_into(t.comp_tail(), out);
      out += ')';
      return;
    }
    case TermKind::meet:
    case TermKind::pref:
      out += t.kind() == TermKind::meet ? "meet(" : "pref(";
      print_into(t.lhs(), out);
      out += ',';
      print_into(t.rhs(), out);
      out += ')';
      return;
    case TermKind::tie:
      out += "tie" + std::to_string(t.index()) + "(";
      print_into(t.lhs(), out);
      out += ',';
      print_into(t.rhs(), out);
      out += ')';
      return;
    case TermKind::dom:
    case TermKind::adom:
    case TermKind::fix: {
      const char* name = t.kind() == TermKind::dom ? "dom" : t.kind() == TermKind::adom ? "adom" : "fix";
      out += name + std::to_string(t.index()) + "(";
      print_into(t.operand(), out);
      out += ')';
      return;
    }
  }
}

}  // namespace

std::string print_term(const Term& t) {
  std::string out;
  print_into(t, out);
  return out;
}

std::string print_equation(const Equation& e) {
  return print_term(e.lhs) + " = " + print_term(e.rhs);
}

std::string print_quasiequation(const Quasiequation& q) {
  std::string out;
  for (std::size_t k = 0; k < q.premises.size(); ++k) {
    if (k) out += " & ";
    out += print_equation(q.premises[k]);
  }
  if (!q.premises.empty()) out += " => ";
  out += print_equation(q.conclusion);
  return out;
}

// ---------------------------------------------------------------------------

void check_term(const Term& t, const Signature& sig) {
  if (t.kind() != TermKind::var) {
    OpFamily f = family_of(t.kind());
    if (!sig.provides(f))
      throw SignatureError("operator '" + std::string(family_name(f)) + "' not in signature");
    if (is_indexed(t.kind()) && (t.index() < 1 || t.index() > sig.arity()))
      throw SignatureError("index out of range: " + std::to_string(t.index()));
    if (t.kind() == TermKind::comp && static_cast<int>(t.comp_args().size()) != sig.arity())
      throw SignatureError("comp expects " + std::to_string(sig.arity()) + " arguments");
  }
  for (const Term& c : t.children()) check_term(c, sig);
}

std::size_t term_length(const Term& t) {
  std::size_t n = 1;
  for (const Term& c : t.children()) n += term_length(c);
  return n;
}

namespace {

void collect_vars(const Term& t, std::set<std::string>& out) {
  if (t.kind() == TermKind::var) out.insert(t.name());
  for (const Term& c : t.children()) collect_vars(c, out);
}

}  // namespace

std::vector<std::string> variables(const Term& t) {
  std::set<std::string> s;
  collect_vars(t, s);
  return {s.begin(), s.end()};
}

std::vector<std::string> variables(const Quasiequation& q) {
  std::set<std::string> s;
  for (const Equation& e : q.premises) {
    collect_vars(e.lhs, s);
    collect_vars(e.rhs, s);
  }
  collect_vars(q.conclusion.lhs, s);
  collect_vars(q.conclusion.rhs, s);
  return {s.begin(), s.end()};
}

Term dom_tuple_comp(const Term& a, const Term& tail, int n) {
  std::vector<Term> args;
  for (int i = 1; i <= n; ++i) args.push_back(Term::dom(i, a));
  return Term::comp(std::move(args), tail);
}

Term adom_tuple_comp(const Term& a, const Term& tail, int n) {
  std::vector<Term> args;
  for (int i = 1; i <= n; ++i) args.push_back(Term::adom(i, a));
  return Term::comp(std::move(args), tail);
}

// ---------------------------------------------------------------------------
// Derived-operation expansion

std::string fresh_witness(const Term& t, std::string_view base) {
  const auto vars = variables(t);
  std::string name(base);
  while (std::binary_search(vars.begin(), vars.end(), name)) name += '_';
  return name;
}

namespace {

class Expander {
 public:
  Expander(const Signature& sig, const ExpandOptions& opts, std::string witness)
      : sig_(sig), opts_(opts), witness_(std::move(witness)) {}

  Term run(const Term& t) {
    const int n = sig_.arity();
    switch (t.kind()) {
      case TermKind::var: return t;
      case TermKind::zero: {
        need(OpFamily::comp);
        need(OpFamily::adom);
        Term b = Term::var(witness_);
        std::vector<Term> args;
        for (int i = 1; i <= n; ++i) args.push_back(Term::adom(i, b));
        return Term::comp(std::move(args), b);
      }
      case TermKind::proj: return Term::adom(t.index(), run(Term::zero()));
      case TermKind::dom: {
        need(OpFamily::adom);
        Term inner = run(t.operand());
        return Term::adom(t.index(), Term::adom(t.index(), inner));
      }
      case TermKind::fix:
        if (opts_.fix) {
          need(OpFamily::meet);
          return Term::meet(run(Term::proj(t.index())), run(t.operand()));
        }
        return Term::fix(t.index(), run(t.operand()));
      case TermKind::tie:
        if (opts_.tie) {
          // a tie_i b := D_i(a meet b) +_i <A_1..A_n a> o A_i b
          need(OpFamily::meet);
          const int i = t.index();
          Term a = run(t.lhs());
          Term b = run(t.rhs());
          Term alpha = Term::adom(i, Term::adom(i, Term::meet(a, b)));
          std::vector<Term> args;
          for (int j = 1; j <= n; ++j) args.push_back(Term::adom(j, a));
          Term beta = Term::comp(std::move(args), Term::adom(i, b));
          return plus(i, alpha, beta);
        }
        return Term::tie(t.index(), run(t.lhs()), run(t.rhs()));
      case TermKind::comp: {
        std::vector<Term> args;
        for (const Term& a : t.comp_args()) args.push_back(run(a));
        return Term::comp(std::move(args), run(t.comp_tail()));
      }
      case TermKind::meet: return Term::meet(run(t.lhs()), run(t.rhs()));
      case TermKind::pref: return Term::pref(run(t.lhs()), run(t.rhs()));
      case TermKind::adom: return Term::adom(t.index(), run(t.operand()));
    }
    return t;
  }

 private:
  // alpha +_i beta := A_i(<A_1 alpha .. A_n alpha> o A_i beta)
  Term plus(int i, const Term& alpha, const Term& beta) {
    std::vector<Term> args;
    for (int j = 1; j <= sig_.arity(); ++j) args.push_back(Term::adom(j, alpha));
    return Term::adom(i, Term::comp(std::move(args), Term::adom(i, beta)));
  }

  void need(OpFamily f) {
    if (!sig_.has(f))
      throw SignatureError("expansion needs '" + std::string(family_name(f)) +
                           "', which is not in the signature");
  }

  const Signature& sig_;
  const ExpandOptions& opts_;
  std::string witness_;
};

}  // namespace

Term expand_derived(const Term& t, const Signature& sig, const ExpandOptions& opts) {
  if (!sig.has(OpFamily::comp) || !sig.has(OpFamily::adom))
    throw SignatureError("expansion needs comp and adom in the signature");
  std::string witness = opts.witness.empty() ? fresh_witness(t) : opts.witness;
  return Expander(sig, opts, std::move(witness)).run(t);
}

// ---------------------------------------------------------------------------

int flatten_into(const Term& t, std::span<const std::string> vars, FlatTerm& out) {
  FlatTerm::Node node;
  node.kind = t.kind();
  node.index = t.index();
  for (const Term& c : t.children()) node.kids.push_back(flatten_into(c, vars, out));
  if (t.kind() == TermKind::var) {
    auto it = std::find(vars.begin(), vars.end(), t.name());
    if (it == vars.end()) throw std::invalid_argument("unbound variable '" + t.name() + "'");
    node.var = static_cast<int>(it - vars.begin());
  }
  out.nodes.push_back(std::move(node));
  return static_cast<int>(out.nodes.size()) - 1;
}

}  // namespace mpf
