#include "mpf/finalg.hpp"

#include <algorithm>
#include <numeric>

namespace mpf {

namespace {

bool is_unary(OpFamily f) {
  return f == OpFamily::adom || f == OpFamily::dom || f == OpFamily::fix;
}
bool is_binary(OpFamily f) {
  return f == OpFamily::meet || f == OpFamily::pref || f == OpFamily::tie;
}
bool is_indexed(OpFamily f) { return f != OpFamily::meet && f != OpFamily::pref && f != OpFamily::comp; }

std::string table_name(OpFamily f, int i) {
  std::string s(family_name(f));
  if (i > 0) s += std::to_string(i);
  return s;
}

}  // namespace

FiniteAlgebra::FiniteAlgebra(std::string name, Signature sig, std::vector<std::string> elements)
    : name_(std::move(name)), sig_(sig), elements_(std::move(elements)) {
  if (elements_.empty()) throw AlgebraError("an algebra needs at least one element");
  std::vector<std::string> sorted = elements_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    throw AlgebraError("element names must be distinct");
}

int FiniteAlgebra::element_index(const std::string& name) const {
  auto it = std::find(elements_.begin(), elements_.end(), name);
  return it == elements_.end() ? -1 : static_cast<int>(it - elements_.begin());
}

void FiniteAlgebra::check_table(const std::vector<int>& t, std::size_t expected,
                                const std::string& what) const {
  if (t.size() != expected)
    throw AlgebraError("table " + what + " has " + std::to_string(t.size()) + " entries, expected " +
                       std::to_string(expected));
  for (int v : t)
    if (v < 0 || v >= size()) throw AlgebraError("table " + what + " leaves the carrier");
}

void FiniteAlgebra::set_comp(std::vector<int> table) {
  std::size_t expected = 1;
  for (int k = 0; k <= arity(); ++k) expected *= static_cast<std::size_t>(size());
  check_table(table, expected, "comp");
  comp_ = std::move(table);
  finalized_ = false;
}

void FiniteAlgebra::set_table(OpFamily f, int i, std::vector<int> table) {
  const std::size_t s = static_cast<std::size_t>(size());
  if (!is_unary(f) && !is_binary(f)) throw AlgebraError("no table for " + std::string(family_name(f)));
  if (is_indexed(f) ? (i < 1 || i > arity()) : i != 0)
    throw AlgebraError("bad index for table " + table_name(f, i));
  check_table(table, is_unary(f) ? s : s * s, table_name(f, i));
  tables_[key(f, i)] = std::move(table);
  finalized_ = false;
}

void FiniteAlgebra::set_constant(OpFamily f, int i, int value) {
  if (f != OpFamily::zero && f != OpFamily::proj) throw AlgebraError("only zero and proj are constants");
  if (value < 0 || value >= size()) throw AlgebraError("constant outside the carrier");
  constants_[key(f, f == OpFamily::zero ? 0 : i)] = value;
  finalized_ = false;
}

void FiniteAlgebra::require_finalized() const {
  if (!finalized_) throw AlgebraError("algebra '" + name_ + "' used before finalize()");
}

const int* FiniteAlgebra::table(OpFamily f, int i) const {
  auto it = tables_.find(key(f, i));
  return it == tables_.end() ? nullptr : it->second.data();
}

bool FiniteAlgebra::provides(OpFamily f) const {
  switch (f) {
    case OpFamily::comp: return !comp_.empty();
    case OpFamily::zero: return constants_.count(key(f, 0)) > 0;
    case OpFamily::proj: return constants_.count(key(f, 1)) > 0;
    case OpFamily::meet:
    case OpFamily::pref: return tables_.count(key(f, 0)) > 0;
    default: return tables_.count(key(f, 1)) > 0;
  }
}

int FiniteAlgebra::comp(std::span<const int> args, int tail) const {
  if (comp_.empty()) throw AlgebraError("missing table comp");
  std::size_t idx = 0;
  for (int a : args) idx = idx * static_cast<std::size_t>(size()) + static_cast<std::size_t>(a);
  return comp_[idx * static_cast<std::size_t>(size()) + static_cast<std::size_t>(tail)];
}

int FiniteAlgebra::unary(OpFamily f, int i, int a) const {
  const int* t = table(f, i);
  if (!t) throw AlgebraError("missing table " + table_name(f, i));
  return t[a];
}

int FiniteAlgebra::binary(OpFamily f, int i, int a, int b) const {
  const int* t = table(f, i);
  if (!t) throw AlgebraError("missing table " + table_name(f, i));
  return t[a * size() + b];
}

int FiniteAlgebra::zero() const {
  auto it = constants_.find(key(OpFamily::zero, 0));
  if (it == constants_.end()) throw AlgebraError("zero is not available");
  return it->second;
}

int FiniteAlgebra::proj(int i) const {
  auto it = constants_.find(key(OpFamily::proj, i));
  if (it == constants_.end()) throw AlgebraError("pi" + std::to_string(i) + " is not available");
  return it->second;
}

void FiniteAlgebra::finalize() {
  const int n = arity();
  const int s = size();
  for (OpFamily f : sig_.families()) {
    if (f == OpFamily::comp) {
      if (comp_.empty()) throw AlgebraError("missing table comp");
    } else if (f == OpFamily::zero || f == OpFamily::proj) {
      continue;  // constants are checked after derivation
    } else if (is_indexed(f)) {
      for (int i = 1; i <= n; ++i)
        if (!table(f, i)) throw AlgebraError("missing table " + table_name(f, i));
    } else if (!table(f, 0)) {
      throw AlgebraError("missing table " + table_name(f, 0));
    }
  }
  // Drop previously derived tables so refinalizing after edits is sound.
  for (auto it = tables_.begin(); it != tables_.end();) {
    const OpFamily f = static_cast<OpFamily>(it->first / 64);
    it = sig_.has(f) ? std::next(it) : tables_.erase(it);
  }
  for (auto it = constants_.begin(); it != constants_.end();) {
    const OpFamily f = static_cast<OpFamily>(it->first / 64);
    it = sig_.has(f) ? std::next(it) : constants_.erase(it);
  }
  finalized_ = true;

  std::vector<int> args(static_cast<std::size_t>(n));
  auto adom_tuple = [&](int a) {
    for (int i = 1; i <= n; ++i) args[i - 1] = adom(i, a);
    return std::span<const int>(args);
  };

  if (sig_.has(OpFamily::comp) && sig_.has(OpFamily::adom)) {
    const int z = comp(adom_tuple(0), 0);
    for (int a = 1; a < s; ++a) {
      if (comp(adom_tuple(a), a) != z)
        throw AlgebraError("<A_1..A_n a> o a is not constant (differs at " + elements_[a] + ")");
    }
    if (sig_.has(OpFamily::zero) && zero() != z)
      throw AlgebraError("zero table disagrees with <A_1..A_n a> o a");
    constants_[key(OpFamily::zero, 0)] = z;
    for (int i = 1; i <= n; ++i) {
      constants_[key(OpFamily::proj, i)] = adom(i, z);
      if (!sig_.has(OpFamily::dom)) {
        std::vector<int> t(static_cast<std::size_t>(s));
        for (int a = 0; a < s; ++a) t[a] = adom(i, adom(i, a));
        tables_[key(OpFamily::dom, i)] = std::move(t);
      }
    }
    if (sig_.has(OpFamily::meet) && !sig_.has(OpFamily::tie)) {
      // a tie_i b := D_i(a meet b) +_i <A_1..A_n a> o A_i b
      for (int i = 1; i <= n; ++i) {
        auto plus = [&](int alpha, int beta) { return adom(i, comp(adom_tuple(alpha), adom(i, beta))); };
        std::vector<int> t(static_cast<std::size_t>(s) * s);
        for (int a = 0; a < s; ++a)
          for (int b = 0; b < s; ++b) {
            const int left = dom(i, meet(a, b));
            const int right = comp(adom_tuple(a), adom(i, b));
            t[a * s + b] = plus(left, right);
          }
        tables_[key(OpFamily::tie, i)] = std::move(t);
      }
    }
  }
  if (sig_.has(OpFamily::comp) && sig_.has(OpFamily::tie) && !sig_.has(OpFamily::meet)) {
    std::vector<int> t(static_cast<std::size_t>(s) * s);
    for (int a = 0; a < s; ++a)
      for (int b = 0; b < s; ++b) {
        for (int i = 1; i <= n; ++i) args[i - 1] = tie(i, a, b);
        t[a * s + b] = comp(args, a);
      }
    tables_[key(OpFamily::meet, 0)] = std::move(t);
  }
  if (!sig_.has(OpFamily::fix) && provides(OpFamily::meet) && provides(OpFamily::proj)) {
    for (int i = 1; i <= n; ++i) {
      std::vector<int> t(static_cast<std::size_t>(s));
      for (int a = 0; a < s; ++a) t[a] = meet(proj(i), a);
      tables_[key(OpFamily::fix, i)] = std::move(t);
    }
  }
  if (sig_.has(OpFamily::zero) && !provides(OpFamily::zero)) throw AlgebraError("missing constant zero");
  if (sig_.has(OpFamily::proj))
    for (int i = 1; i <= n; ++i)
      if (!constants_.count(key(OpFamily::proj, i)))
        throw AlgebraError("missing constant pi" + std::to_string(i));
}

FiniteAlgebra FiniteAlgebra::reduct(const Signature& sub) const {
  require_finalized();
  if (sub.arity() != arity()) throw AlgebraError("reduct changes the arity");
  FiniteAlgebra out(name_, sub, elements_);
  for (OpFamily f : sub.families()) {
    if (f == OpFamily::comp) {
      if (comp_.empty()) throw AlgebraError("reduct needs comp");
      out.comp_ = comp_;
    } else if (f == OpFamily::zero) {
      out.constants_[key(f, 0)] = zero();
    } else if (f == OpFamily::proj) {
      for (int i = 1; i <= arity(); ++i) out.constants_[key(f, i)] = proj(i);
    } else {
      const int lo = is_indexed(f) ? 1 : 0;
      const int hi = is_indexed(f) ? arity() : 0;
      for (int i = lo; i <= hi; ++i) {
        auto it = tables_.find(key(f, i));
        if (it == tables_.end()) throw AlgebraError("reduct needs " + table_name(f, i));
        out.tables_[key(f, i)] = it->second;
      }
    }
  }
  out.finalize();
  return out;
}

FiniteAlgebra FiniteAlgebra::renamed(std::string name) const {
  FiniteAlgebra out = *this;
  out.name_ = std::move(name);
  return out;
}

// ---------------------------------------------------------------------------
// Evaluation

int eval_abstract(const Term& t, const FiniteAlgebra& alg, const AbstractAssignment& assign) {
  auto rec = [&](const Term& s) { return eval_abstract(s, alg, assign); };
  switch (t.kind()) {
    case TermKind::var: {
      auto it = assign.find(t.name());
      if (it == assign.end()) throw std::invalid_argument("unbound variable '" + t.name() + "'");
      return it->second;
    }
    case TermKind::zero: return alg.zero();
    case TermKind::proj: return alg.proj(t.index());
    case TermKind::comp: {
      std::vector<int> args;
      for (const Term& a : t.comp_args()) args.push_back(rec(a));
      return alg.comp(args, rec(t.comp_tail()));
    }
    case TermKind::meet: return alg.meet(rec(t.lhs()), rec(t.rhs()));
    case TermKind::pref: return alg.pref(rec(t.lhs()), rec(t.rhs()));
    case TermKind::tie: return alg.tie(t.index(), rec(t.lhs()), rec(t.rhs()));
    case TermKind::dom: return alg.dom(t.index(), rec(t.operand()));
    case TermKind::adom: return alg.adom(t.index(), rec(t.operand()));
    case TermKind::fix: return alg.fix(t.index(), rec(t.operand()));
  }
  throw std::logic_error("unknown term kind");
}

namespace {

// Straight-line program over slots, ordered so that everything depending only
// on the first k variables comes before anything depending on variable k+1.
class Program {
 public:
  Program(const FiniteAlgebra& alg, const std::vector<Term>& terms, const std::vector<std::string>& vars,
          const AbstractAssignment& fixed)
      : alg_(alg), s_(static_cast<std::size_t>(alg.size())) {
    std::vector<std::string> all = vars;
    std::vector<int> fixed_values;
    for (const auto& [name, value] : fixed) {
      if (value < 0 || value >= alg.size()) throw std::invalid_argument("fixed value out of range");
      all.push_back(name);
      fixed_values.push_back(value);
    }
    for (const Term& t : terms) roots_.push_back(flatten_into(t, all, flat_));
    const int k = static_cast<int>(vars.size());
    std::vector<int> level(flat_.nodes.size(), -1);
    for (std::size_t x = 0; x < flat_.nodes.size(); ++x) {
      const auto& node = flat_.nodes[x];
      if (node.kind == TermKind::var) level[x] = node.var < k ? node.var : -1;
      for (int c : node.kids) level[x] = std::max(level[x], level[c]);
    }
    order_.resize(flat_.nodes.size());
    std::iota(order_.begin(), order_.end(), 0);
    std::stable_sort(order_.begin(), order_.end(), [&](int a, int b) { return level[a] < level[b]; });
    start_.assign(static_cast<std::size_t>(k) + 1, static_cast<int>(order_.size()));
    for (int p = k - 1; p >= 0; --p) {
      start_[p] = start_[p + 1];
      for (std::size_t q = 0; q < order_.size(); ++q)
        if (level[order_[q]] >= p) {
          start_[p] = static_cast<int>(q);
          break;
        }
    }
    tables_.resize(flat_.nodes.size(), nullptr);
    for (std::size_t x = 0; x < flat_.nodes.size(); ++x) {
      const auto& node = flat_.nodes[x];
      switch (node.kind) {
        case TermKind::comp:
          tables_[x] = alg.comp_table();
          if (!tables_[x]) throw AlgebraError("missing table comp");
          break;
        case TermKind::adom: case TermKind::dom: case TermKind::fix: case TermKind::tie: {
          OpFamily f = node.kind == TermKind::adom ? OpFamily::adom
                       : node.kind == TermKind::dom ? OpFamily::dom
                       : node.kind == TermKind::fix ? OpFamily::fix : OpFamily::tie;
          tables_[x] = alg.table(f, node.index);
          if (!tables_[x]) throw AlgebraError("missing table " + std::string(family_name(f)));
          break;
        }
        case TermKind::meet: case TermKind::pref:
          tables_[x] = alg.table(node.kind == TermKind::meet ? OpFamily::meet : OpFamily::pref, 0);
          if (!tables_[x]) throw AlgebraError("missing table meet/pref");
          break;
        default: break;
      }
    }
    slot_.assign(flat_.nodes.size(), 0);
    values_.assign(all.size(), 0);
    for (std::size_t j = 0; j < fixed_values.size(); ++j) values_[vars.size() + j] = fixed_values[j];
    // constants and fixed-only subterms
    run(0, start_.empty() ? static_cast<int>(order_.size()) : start_[0]);
  }

  std::vector<int>& values() { return values_; }

  /// Recompute everything depending on variables at positions >= p.
  void update(int p) { run(start_[p], static_cast<int>(order_.size())); }
  void update_all() { run(0, static_cast<int>(order_.size())); }

  int root(std::size_t k) const { return slot_[roots_[k]]; }

 private:
  void run(int from, int to) {
    const std::size_t s = s_;
    for (int q = from; q < to; ++q) {
      const int x = order_[q];
      const auto& node = flat_.nodes[x];
      const int* t = tables_[x];
      int v = 0;
      switch (node.kind) {
        case TermKind::var: v = values_[node.var]; break;
        case TermKind::zero: v = alg_.zero(); break;
        case TermKind::proj: v = alg_.proj(node.index); break;
        case TermKind::comp: {
          std::size_t idx = 0;
          for (int c : node.kids) idx = idx * s + static_cast<std::size_t>(slot_[c]);
          v = t[idx];
          break;
        }
        case TermKind::adom: case TermKind::dom: case TermKind::fix:
          v = t[slot_[node.kids[0]]];
          break;
        case TermKind::meet: case TermKind::pref: case TermKind::tie:
          v = t[static_cast<std::size_t>(slot_[node.kids[0]]) * s + static_cast<std::size_t>(slot_[node.kids[1]])];
          break;
      }
      slot_[x] = v;
    }
  }

  const FiniteAlgebra& alg_;
  std::size_t s_;
  FlatTerm flat_;
  std::vector<int> roots_;
  std::vector<int> order_;
  std::vector<int> start_;
  std::vector<const int*> tables_;
  std::vector<int> slot_;
  std::vector<int> values_;
};

}  // namespace

Verdict holds(const FiniteAlgebra& alg, const Quasiequation& q, const HoldsOptions& opts) {
  Verdict verdict;
  for (const std::string& v : variables(q))
    if (!opts.fixed.count(v)) verdict.vars.push_back(v);
  const int k = static_cast<int>(verdict.vars.size());
  const std::uint64_t s = static_cast<std::uint64_t>(alg.size());
  std::uint64_t count = 1;
  for (int j = 0; j < k; ++j) {
    if (count > opts.budget / s + 1) throw BudgetExceeded("assignment space exceeds budget");
    count *= s;
  }
  if (count > opts.budget)
    throw BudgetExceeded(std::to_string(count) + " assignments exceed the budget of " +
                         std::to_string(opts.budget));

  std::vector<Term> terms;
  for (const Equation& e : q.premises) {
    terms.push_back(e.lhs);
    terms.push_back(e.rhs);
  }
  terms.push_back(q.conclusion.lhs);
  terms.push_back(q.conclusion.rhs);
  Program prog(alg, terms, verdict.vars, opts.fixed);
  const std::size_t np = q.premises.size();

  std::vector<int>& values = prog.values();
  prog.update_all();
  while (true) {
    bool premises = true;
    for (std::size_t e = 0; e < np && premises; ++e) premises = prog.root(2 * e) == prog.root(2 * e + 1);
    if (premises && prog.root(2 * np) != prog.root(2 * np + 1)) {
      verdict.holds = false;
      verdict.witness.assign(values.begin(), values.begin() + k);
      return verdict;
    }
    int p = k - 1;
    while (p >= 0 && ++values[p] == alg.size()) values[p--] = 0;
    if (p < 0) break;
    prog.update(p);
  }
  return verdict;
}

Verdict holds(const FiniteAlgebra& alg, const Equation& e, const HoldsOptions& opts) {
  return holds(alg, Quasiequation{{}, e}, opts);
}

bool leq(const FiniteAlgebra& alg, int a, int b) {
  std::vector<int> args;
  for (int i = 1; i <= alg.arity(); ++i) args.push_back(alg.dom(i, a));
  return alg.comp(args, b) == a;
}

}  // namespace mpf
