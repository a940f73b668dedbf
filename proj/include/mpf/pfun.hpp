#pragma once

// Concrete n-ary partial functions over a finite base with an equivalence
// relation, and the algebras they generate.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <map>
#include <memory>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mpf/terms.hpp"

namespace mpf {

using Tuple = std::vector<int>;

/// Points 0..size-1; E is the kernel of `eclass`. The empty base carries only
/// the empty function.
struct Base {
  int size = 0;
  std::vector<int> eclass;

  static Base square(int size);
  static Base with_classes(std::vector<int> eclass);

  bool is_square() const;
  bool equivalent(int x, int y) const { return eclass[x] == eclass[y]; }
  /// Points of each class, classes in order of first appearance.
  std::vector<std::vector<int>> classes() const;

  friend bool operator==(const Base&, const Base&) = default;
};

inline bool is_square(const Base& b) { return b.is_square(); }

using BasePtr = std::shared_ptr<const Base>;

class BaseMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Sparse graph of an n-ary partial function. Tuples are coded big-endian in
/// base `size`, so code order is lexicographic tuple order.
class PartialFunction {
 public:
  using Code = std::uint64_t;
  struct Entry {
    Code code;
    int value;
    friend bool operator==(const Entry&, const Entry&) = default;
  };

  PartialFunction(BasePtr base, int n);
  /// Validates functionality and E-uniformity.
  static PartialFunction from_pairs(BasePtr base, int n,
                                    const std::vector<std::pair<Tuple, int>>& pairs);
  /// Takes entries already sorted by code, unique, E-uniform.
  static PartialFunction from_sorted(BasePtr base, int n, std::vector<Entry> graph);

  const Base& base() const { return *base_; }
  const BasePtr& base_ptr() const { return base_; }
  int arity() const { return n_; }
  const std::vector<Entry>& graph() const { return graph_; }
  std::size_t size() const { return graph_.size(); }
  bool empty() const { return graph_.empty(); }

  /// Value at a tuple code, or -1 when undefined.
  int value_at(Code code) const;
  std::optional<int> at(const Tuple& x) const;

  Code encode(const Tuple& x) const;
  Tuple decode(Code code) const;

  /// Same graph restricted to tuples whose points (and values) all lie in `keep`.
  PartialFunction restrict_to(const std::vector<bool>& keep) const;

  std::string to_string() const;

  /// Graph equality; throws BaseMismatch when bases differ.
  friend bool operator==(const PartialFunction& f, const PartialFunction& g);
  /// Lexicographic order of graphs (used only for canonical sorting).
  friend bool operator<(const PartialFunction& f, const PartialFunction& g);

 private:
  BasePtr base_;
  int n_;
  std::vector<Entry> graph_;
};

struct PartialFunctionHash {
  std::size_t operator()(const PartialFunction& f) const;
};

/// Codes of the E-uniform n-tuples, ascending.
std::vector<PartialFunction::Code> uniform_codes(const Base& base, int n);

PartialFunction compose(std::span<const PartialFunction> fs, const PartialFunction& g);
PartialFunction meet(const PartialFunction& f, const PartialFunction& g);
PartialFunction zero(const BasePtr& base, int n);
PartialFunction proj(int i, const BasePtr& base, int n);
PartialFunction dom(int i, const PartialFunction& f);
PartialFunction adom(int i, const PartialFunction& f);
PartialFunction fixset(int i, const PartialFunction& f);
PartialFunction tie(int i, const PartialFunction& f, const PartialFunction& g);
PartialFunction pref(const PartialFunction& f, const PartialFunction& g);

bool is_injective_fn(const PartialFunction& f);

using Assignment = std::map<std::string, PartialFunction>;

/// Structural evaluation. `base` and `n` are needed for variable-free terms.
PartialFunction eval_concrete(const Term& t, const Assignment& assign, const BasePtr& base,
                              int n);

struct ConcreteAlgebra {
  BasePtr base;
  int n = 1;
  Signature sig;
  std::vector<PartialFunction> elements;

  /// Index of `f` among the elements, or -1.
  int index_of(const PartialFunction& f) const;
};

class ClosureOverflow : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Least operation-closed set containing `gens`, generators first, new
/// elements in discovery order. Throws ClosureOverflow past `budget` elements.
ConcreteAlgebra generate_subalgebra(const std::vector<PartialFunction>& gens, const Signature& sig,
                                    std::size_t budget = 1000000);

/// Tagged union of bases; point (part k, x) becomes offsets[k] + x, classes are
/// renumbered so no two parts share one.
struct DisjointUnion {
  BasePtr base;
  std::vector<int> offsets;

  /// Union of renamed graphs, one function per part.
  PartialFunction combine(std::span<const PartialFunction> parts) const;
};

DisjointUnion disjoint_union(std::span<const Base> parts);

/// images[k][e] is the image of element e under the k-th homomorphism; the
/// result maps e to the union of its images.
std::vector<PartialFunction> disjoint_union(const std::vector<std::vector<PartialFunction>>& images);

/// Restricts every function to the points marked in `keep` and renumbers them
/// in order on a sub-base that inherits the classes.
std::vector<PartialFunction> restrict_points(const std::vector<PartialFunction>& fs, const std::vector<bool>& keep);

// ---------------------------------------------------------------------------
// Text format

class FormatError : public std::runtime_error {
 public:
  FormatError(const std::string& msg, int line)
      : std::runtime_error("line " + std::to_string(line) + ": " + msg), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

struct PfunFile {
  BasePtr base;
  int n = 1;
  std::vector<std::pair<std::string, PartialFunction>> funs;

  const PartialFunction* find(const std::string& name) const;
};

/// Splits a line into whitespace separated tokens after removing '#' comments.
std::vector<std::string> tokenize_line(const std::string& line);

/// Reads the base/function format. Lines whose first token is not one of
/// base/eclass/n/fun are handed to `extra` (with the line number); it returns
/// false to reject them.
PfunFile read_pfun(std::istream& in,
                   const std::function<bool(const std::vector<std::string>&, int)>& extra = {});
void write_pfun(std::ostream& out, const PfunFile& file);

std::string format_tuple(const Tuple& x);
/// Parses "(x1,...,xn)" and checks the arity.
Tuple parse_tuple(const std::string& text, int n, int line);

}  // namespace mpf
