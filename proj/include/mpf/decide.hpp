#pragma once

// Equational validity over algebras of n-ary partial functions: bounded
// counter-model search, counter-model shrinking, and the reduction from
// propositional tautologies.

#include <chrono>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "mpf/pfun.hpp"
#include "mpf/terms.hpp"

namespace mpf {

struct SearchBudget {
  int max_base = 0;                  ///< point ceiling; 0 means the complete bound
  int max_class_count = 0;           ///< exhaustive mode only; 0 means no ceiling
  std::uint64_t max_functions = 1u << 20;  ///< exhaustive mode: functions per variable
  std::uint64_t max_nodes = 50000000;      ///< lazy mode: search nodes
  std::chrono::milliseconds time_limit{0}; ///< 0 means none
};

/// A refuting assignment: lhs and rhs differ at `point` (undefined is -1).
struct CounterModel {
  BasePtr base;
  int n = 1;
  std::map<std::string, PartialFunction> assign;
  Tuple point;
  int lhs_value = -1;
  int rhs_value = -1;
};

enum class Outcome { refuted, valid_complete, bounded };

struct Decision {
  Outcome outcome = Outcome::bounded;
  std::optional<CounterModel> model;
  int searched = 0;        ///< largest base size searched to the end
  int complete_bound = 0;  ///< term_length(lhs) + term_length(rhs) + n
  std::uint64_t nodes = 0;

  /// "REFUTED", "VALID (complete)" or "NO COUNTEREXAMPLE (bounded)".
  std::string verdict() const;
};

/// Base size past which a counter-model, if any exists, has a restriction.
int complete_bound(const Equation& eq, int n);

/// Lazy search: functions get a value only when evaluation looks it up, and
/// bases grow one point at a time, so the first counter-model found has the
/// fewest points. Square bases suffice since evaluation at a uniform tuple never
/// leaves its class.
Decision decide_equation(const Equation& eq, const Signature& sig, const SearchBudget& budget = {});

/// Enumerates every base up to the budget (all partitions into classes), every
/// assignment of partial functions and every uniform tuple.
Decision decide_exhaustive(const Equation& eq, const Signature& sig, const SearchBudget& budget = {});

/// Value of `t` at the single tuple `x`; -1 when undefined.
int eval_at(const Term& t, const Assignment& assign, const Tuple& x);

/// Independent re-check: lhs and rhs differ at the model's point.
bool refutes(const Equation& eq, const CounterModel& cm);

enum class RestrictionClause {
  corrected,  ///< an undefined head keeps the heads' own points
  literal,    ///< an undefined head keeps only {x_1..x_n}
};

/// The points evaluation of `t` at `x` depends on.
std::set<int> witness_restriction(const Term& t, const Assignment& assign, const Tuple& x,
                                  RestrictionClause clause = RestrictionClause::corrected);

/// Restricts the model to the points both sides depend on. Throws
/// std::logic_error if the restricted model no longer refutes.
CounterModel shrink_counterexample(const Equation& eq, const CounterModel& cm);

// ---------------------------------------------------------------------------
// Propositional formulas

class PropFormula {
 public:
  enum class Kind { letter, negation, conjunction };

  static PropFormula letter(std::string name);
  static PropFormula negation(PropFormula f);
  static PropFormula conjunction(PropFormula l, PropFormula r);

  Kind kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }
  const PropFormula& left() const { return node_->kids.at(0); }
  const PropFormula& right() const { return node_->kids.at(1); }

  /// Letters count 1; each connective adds 1.
  int depth() const;
  std::vector<std::string> letters() const;
  bool eval(const std::map<std::string, bool>& v) const;
  bool tautology() const;
  std::string to_string() const;

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::vector<PropFormula> kids;
  };
  explicit PropFormula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// phi := LETTER | "~" phi | "(" phi "&" phi ")"; letters are term variables.
PropFormula parse_prop(std::string_view text);

/// Every formula over `letters` of depth at most `max_depth`.
std::vector<PropFormula> all_formulas(const std::vector<std::string>& letters, int max_depth);

/// p -> dom_i(p), ~ -> adom_i, & -> meet or <D_1 u..D_n u> o v; the equation is
/// phi* = pi_i.
Equation reduce_tautology(const PropFormula& phi, int i, int n, bool use_meet);

/// Signature the reduction's output lives in.
Signature reduction_signature(int n, bool use_meet);

// ---------------------------------------------------------------------------
// Counter-model files: the pfun format plus `at (x1,...,xn)`, `lhs v|undef`,
// `rhs v|undef`.

void write_counter_model(std::ostream& out, const CounterModel& cm);
CounterModel read_counter_model(std::istream& in);

}  // namespace mpf
