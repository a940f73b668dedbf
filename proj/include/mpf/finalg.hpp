#pragma once

// Finite abstract algebras given by operation tables, brute-force checking of
// (quasi)equations, and the catalog of axiom suites.

#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mpf/pfun.hpp"
#include "mpf/terms.hpp"

namespace mpf {

class AlgebraError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class BudgetExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Operation tables over elements 0..size-1. Primitive tables are supplied by
/// the caller; finalize() validates them and fills in everything definable
/// (0, pi_i, D_i from comp/adom; tie/fix from meet; meet from tie).
class FiniteAlgebra {
 public:
  FiniteAlgebra(std::string name, Signature sig, std::vector<std::string> elements);

  /// comp table indexed by ((a_1 * s + a_2) * s + ... + a_n) * s + b.
  void set_comp(std::vector<int> table);
  /// Unary tables (adom, dom, fix) take i in 1..n; binary tables (meet, pref)
  /// take i = 0 and tie takes i in 1..n. Binary tables are indexed a * s + b.
  void set_table(OpFamily f, int i, std::vector<int> table);
  /// Constants for signatures listing zero/proj without comp/adom.
  void set_constant(OpFamily f, int i, int value);
  /// Validates and derives. Throws AlgebraError, e.g. when <A_1..A_n a> o a is
  /// not the same element for every a.
  void finalize();

  const std::string& name() const { return name_; }
  const Signature& sig() const { return sig_; }
  int arity() const { return sig_.arity(); }
  int size() const { return static_cast<int>(elements_.size()); }
  const std::vector<std::string>& element_names() const { return elements_; }
  const std::string& element_name(int e) const { return elements_.at(e); }
  /// -1 when absent.
  int element_index(const std::string& name) const;

  /// True when a table (primitive or derived) for `f` is available.
  bool provides(OpFamily f) const;
  /// True when the table for `f` was supplied rather than derived.
  bool primitive(OpFamily f) const { return sig_.has(f); }

  int comp(std::span<const int> args, int tail) const;
  int adom(int i, int a) const { return unary(OpFamily::adom, i, a); }
  int dom(int i, int a) const { return unary(OpFamily::dom, i, a); }
  int fix(int i, int a) const { return unary(OpFamily::fix, i, a); }
  int meet(int a, int b) const { return binary(OpFamily::meet, 0, a, b); }
  int pref(int a, int b) const { return binary(OpFamily::pref, 0, a, b); }
  int tie(int i, int a, int b) const { return binary(OpFamily::tie, i, a, b); }
  int zero() const;
  int proj(int i) const;

  int unary(OpFamily f, int i, int a) const;
  int binary(OpFamily f, int i, int a, int b) const;

  /// Raw table access for compiled evaluation; nullptr when unavailable.
  const int* comp_table() const { return comp_.empty() ? nullptr : comp_.data(); }
  const int* table(OpFamily f, int i) const;

  /// Same elements, only the operations of `sub` (which must be contained in
  /// this algebra's signature); derived tables are recomputed.
  FiniteAlgebra reduct(const Signature& sub) const;
  FiniteAlgebra renamed(std::string name) const;

 private:
  static int key(OpFamily f, int i) { return static_cast<int>(f) * 64 + i; }
  void check_table(const std::vector<int>& t, std::size_t expected, const std::string& what) const;
  void require_finalized() const;

  std::string name_;
  Signature sig_;
  std::vector<std::string> elements_;
  std::vector<int> comp_;
  std::map<int, std::vector<int>> tables_;
  std::map<int, int> constants_;
  bool finalized_ = false;
};

using AbstractAssignment = std::map<std::string, int>;

int eval_abstract(const Term& t, const FiniteAlgebra& alg, const AbstractAssignment& assign);

struct HoldsOptions {
  std::uint64_t budget = 100000000;  ///< max |alg|^#vars per sentence
  /// Variables pinned to an element; they are not enumerated and do not
  /// appear in the witness.
  AbstractAssignment fixed;
};

struct Verdict {
  bool holds = true;
  std::vector<std::string> vars;  ///< sorted by name
  std::vector<int> witness;       ///< least refuting assignment, parallel to vars
};

/// Brute force over all assignments, variables sorted by name (first most
/// significant), elements by index.
Verdict holds(const FiniteAlgebra& alg, const Quasiequation& q, const HoldsOptions& opts = {});
Verdict holds(const FiniteAlgebra& alg, const Equation& e, const HoldsOptions& opts = {});

// ---------------------------------------------------------------------------
// Axiom suites

enum class Classification { quasivariety, variety, proper_quasivariety };

std::string to_string(Classification c);

struct Sentence {
  std::string tag;  ///< e.g. "(7)", "fix3", "tie-inj"
  std::string instance;  ///< e.g. "i=2" for indexed families, empty otherwise
  Quasiequation q;
  bool derivable = false;  ///< kept for traceability, follows from the rest
};

struct AxiomSuite {
  std::string name;
  Signature sig;
  bool injective = false;
  std::vector<Sentence> sentences;
  Classification classification = Classification::quasivariety;

  /// Tags in first-appearance order.
  std::vector<std::string> tags() const;
};

class UnsupportedSignature : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Suite for one of the six signatures {comp,adom} plus one of {}, {meet},
/// {pref}, {meet,pref}, {fix}, {fix,pref}. dom/zero/proj in `sig` are
/// ignored (definable).
AxiomSuite axiom_suite(const Signature& sig, bool injective);

struct ReportLine {
  std::string tag;
  bool pass = true;
  bool derivable = false;
  std::string instance;  ///< failing member of an indexed family
  std::vector<std::pair<std::string, std::string>> witness;  ///< var, element name

  std::string format() const;
};

struct Report {
  AxiomSuite suite;
  std::vector<ReportLine> lines;  ///< one per tag

  bool all_pass() const;
  const ReportLine* find(const std::string& tag) const;
  std::string format() const;
};

Report check_axioms(const FiniteAlgebra& alg, const Signature& sig, bool injective,
                    const HoldsOptions& opts = {});

/// Laws derived from the {comp,adom} axioms; used as regression sentences.
std::vector<Sentence> derived_laws(int n);

/// The injectivity quasiequations for a fixed element `a` (indices 1..n).
std::vector<Quasiequation> injectivity_sentences(int n);
/// The tie-injective equations for a fixed element `a` (indices 1..n); need meet.
std::vector<Quasiequation> tie_injectivity_sentences(int n);

// ---------------------------------------------------------------------------
// Constructions

/// a <= b iff <D_1 a..D_n a> o b = a.
bool leq(const FiniteAlgebra& alg, int a, int b);

/// `partition[e]` is the class id of e. Throws AlgebraError when not a
/// congruence. Classes are ordered by least member; each is named after it.
FiniteAlgebra quotient(const FiniteAlgebra& alg, const std::vector<int>& partition);

/// Componentwise tables; elements ordered with the first factor most
/// significant and named "x_y".
FiniteAlgebra product(const std::vector<FiniteAlgebra>& algs);

/// Element names "e0", "e1", ... unless `names` is given.
FiniteAlgebra to_finite_algebra(const ConcreteAlgebra& alg, std::string name,
                                std::vector<std::string> names = {});

struct NamedConcreteAlgebra {
  ConcreteAlgebra alg;
  std::vector<std::string> names;
};

/// Base {1,2,3} (points 0,1,2) with classes {1},{2,3}; the 2(n+3) elements
/// z, p1..pn, c2, c3 on {2,3}^n and their copies with (1..1)->1 adjoined
/// (suffix "u").
NamedConcreteAlgebra build_quotient_example(int n);

/// Partition identifying every element of the quotient example whose domain
/// is {2,3}^n.
std::vector<int> quotient_example_partition(int n);

struct OnePointExample {
  NamedConcreteAlgebra A;  ///< both n-ary partial functions on one point: z, t
  FiniteAlgebra AxA;
};

OnePointExample build_one_point_example(int n);

// ---------------------------------------------------------------------------
// Algebra files

FiniteAlgebra read_algebra(std::istream& in);
void write_algebra(std::ostream& out, const FiniteAlgebra& alg);

}  // namespace mpf
