#pragma once

// Signatures, term syntax, parsing and printing for algebras of n-ary
// partial functions.

#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mpf {

/// Operation families. Indexed families (proj, dom, adom, fix, tie) stand for
/// all n members at once.
enum class OpFamily : std::uint16_t {
  comp = 1u << 0,
  meet = 1u << 1,
  zero = 1u << 2,
  proj = 1u << 3,
  dom = 1u << 4,
  adom = 1u << 5,
  fix = 1u << 6,
  tie = 1u << 7,
  pref = 1u << 8,
};

std::string_view family_name(OpFamily f);

class Signature {
 public:
  Signature() = default;
  Signature(int n, std::initializer_list<OpFamily> ops);

  /// Parses a comma separated list such as "comp,adom,meet".
  static Signature parse(std::string_view list, int n);

  int arity() const { return n_; }
  bool has(OpFamily f) const { return (mask_ & static_cast<unsigned>(f)) != 0; }
  /// True when `f` is in the signature or definable from it.
  bool provides(OpFamily f) const;
  Signature with(OpFamily f) const;
  Signature without(OpFamily f) const;
  unsigned mask() const { return mask_; }
  bool contains(const Signature& other) const {
    return (other.mask_ & ~mask_) == 0;
  }
  std::vector<OpFamily> families() const;
  std::string to_string() const;

  friend bool operator==(const Signature&, const Signature&) = default;

 private:
  int n_ = 1;
  unsigned mask_ = 0;
};

enum class TermKind : std::uint8_t { var, zero, proj, comp, meet, dom, adom, fix, tie, pref };

/// Immutable term tree. Copies share structure.
class Term {
 public:
  static Term var(std::string name);
  static Term zero();
  static Term proj(int i);
  static Term comp(std::vector<Term> args, Term tail);
  static Term meet(Term l, Term r);
  static Term dom(int i, Term t);
  static Term adom(int i, Term t);
  static Term fix(int i, Term t);
  static Term tie(int i, Term l, Term r);
  static Term pref(Term l, Term r);

  TermKind kind() const { return node_->kind; }
  /// Operation index for proj/dom/adom/fix/tie, 0 otherwise.
  int index() const { return node_->index; }
  const std::string& name() const { return node_->name; }
  /// Children in order; for comp the n arguments come first, then the tail.
  std::span<const Term> children() const { return node_->children; }
  std::span<const Term> comp_args() const;
  const Term& comp_tail() const { return node_->children.back(); }
  const Term& lhs() const { return node_->children.at(0); }
  const Term& rhs() const { return node_->children.at(1); }
  const Term& operand() const { return node_->children.at(0); }

  /// Identity of the shared node; used for memoisation.
  const void* id() const { return node_.get(); }

  friend bool operator==(const Term& a, const Term& b);

 private:
  struct Node {
    TermKind kind;
    int index = 0;
    std::string name;
    std::vector<Term> children;
  };
  explicit Term(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Term make(TermKind k, int index, std::string name, std::vector<Term> children);

  std::shared_ptr<const Node> node_;
};

struct Equation {
  Term lhs;
  Term rhs;
  friend bool operator==(const Equation&, const Equation&) = default;
};

struct Quasiequation {
  std::vector<Equation> premises;
  Equation conclusion;
  friend bool operator==(const Quasiequation&, const Quasiequation&) = default;
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

class SignatureError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Term parse_term(std::string_view text, const Signature& sig);
Equation parse_equation(std::string_view text, const Signature& sig);
Quasiequation parse_quasiequation(std::string_view text, const Signature& sig);

std::string print_term(const Term& t);
std::string print_equation(const Equation& e);
std::string print_quasiequation(const Quasiequation& q);

/// True for identifiers that the term grammar reserves.
bool is_keyword(std::string_view ident);

/// Throws SignatureError if `t` uses an index outside 1..n, a comp with the
/// wrong argument count, or an operator that `sig` neither has nor defines.
void check_term(const Term& t, const Signature& sig);

struct ExpandOptions {
  bool tie = false;  ///< rewrite tie via domain, meet and the +_i sum
  bool fix = false;  ///< rewrite fix_i(f) as meet(pi_i, f)
  /// Variable standing for the witness b in 0 := <A_1..A_n b> o b. Empty means
  /// "x0", suffixed with '_' until it avoids the term's own variables.
  std::string witness;
};

/// Rewrites zero, proj and dom (and optionally tie, fix) into comp/adom
/// (and meet) primitives.
Term expand_derived(const Term& t, const Signature& sig, const ExpandOptions& opts = {});

/// Name of the witness variable expand_derived would pick for `t`.
std::string fresh_witness(const Term& t, std::string_view base = "x0");

/// Number of AST nodes.
std::size_t term_length(const Term& t);

/// Variables of the term, sorted by name, without duplicates.
std::vector<std::string> variables(const Term& t);
std::vector<std::string> variables(const Quasiequation& q);

// Sugar used when writing axiom suites.
Term dom_tuple_comp(const Term& a, const Term& tail, int n);   ///< <D_1 a..D_n a> o tail
Term adom_tuple_comp(const Term& a, const Term& tail, int n);  ///< <A_1 a..A_n a> o tail

/// Post-order flattening of a term, sharing nothing. Children are referenced by
/// slot index; var nodes carry the position of their variable in `vars`.
struct FlatTerm {
  struct Node {
    TermKind kind;
    int index = 0;
    int var = -1;
    std::vector<int> kids;
  };
  std::vector<Node> nodes;  ///< children precede parents
  int root = -1;
};

/// Appends the nodes of `t` to `out`, resolving variables against `vars`, and
/// returns the slot of its root.
int flatten_into(const Term& t, std::span<const std::string> vars, FlatTerm& out);

}  // namespace mpf
