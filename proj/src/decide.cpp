#include "mpf/decide.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <map>
#include <ostream>
#include <stdexcept>

namespace mpf {

std::string Decision::verdict() const {
  switch (outcome) {
    case Outcome::refuted: return "REFUTED";
    case Outcome::valid_complete: return "VALID (complete)";
    case Outcome::bounded: return "NO COUNTEREXAMPLE (bounded)";
  }
  return "";
}

int complete_bound(const Equation& eq, int n) {
  return static_cast<int>(term_length(eq.lhs) + term_length(eq.rhs)) + n;
}

int eval_at(const Term& t, const Assignment& assign, const Tuple& x) {
  auto rec = [&](const Term& s) { return eval_at(s, assign, x); };
  switch (t.kind()) {
    case TermKind::var: {
      auto it = assign.find(t.name());
      if (it == assign.end()) throw std::invalid_argument("unbound variable '" + t.name() + "'");
      return it->second.at(x).value_or(-1);
    }
    case TermKind::zero: return -1;
    case TermKind::proj: return x.at(t.index() - 1);
    case TermKind::comp: {
      Tuple y;
      for (const Term& a : t.comp_args()) {
        const int v = rec(a);
        if (v < 0) return -1;
        y.push_back(v);
      }
      return eval_at(t.comp_tail(), assign, y);
    }
    case TermKind::meet: {
      const int l = rec(t.lhs());
      return l >= 0 && l == rec(t.rhs()) ? l : -1;
    }
    case TermKind::dom: return rec(t.operand()) >= 0 ? x.at(t.index() - 1) : -1;
    case TermKind::adom: return rec(t.operand()) < 0 ? x.at(t.index() - 1) : -1;
    case TermKind::fix: return rec(t.operand()) == x.at(t.index() - 1) ? x.at(t.index() - 1) : -1;
    case TermKind::tie: return rec(t.lhs()) == rec(t.rhs()) ? x.at(t.index() - 1) : -1;
    case TermKind::pref: {
      const int l = rec(t.lhs());
      return l >= 0 ? l : rec(t.rhs());
    }
  }
  throw std::logic_error("unknown term kind");
}

bool refutes(const Equation& eq, const CounterModel& cm) {
  const PartialFunction l = eval_concrete(eq.lhs, cm.assign, cm.base, cm.n);
  const PartialFunction r = eval_concrete(eq.rhs, cm.assign, cm.base, cm.n);
  const auto code = l.encode(cm.point);
  return l.value_at(code) != r.value_at(code);
}

namespace {

class Timer {
 public:
  explicit Timer(std::chrono::milliseconds limit)
      : limit_(limit), start_(std::chrono::steady_clock::now()) {}
  bool expired() const {
    return limit_.count() > 0 && std::chrono::steady_clock::now() - start_ > limit_;
  }

 private:
  std::chrono::milliseconds limit_;
  std::chrono::steady_clock::time_point start_;
};

struct OutOfBudget {};

// Tuples with x[0] = 0 and each entry at most one above the running maximum.
std::vector<Tuple> growth_tuples(int len) {
  std::vector<Tuple> out;
  Tuple x(static_cast<std::size_t>(len), 0);
  auto rec = [&](auto& self, int pos, int top) -> void {
    if (pos == len) {
      out.push_back(x);
      return;
    }
    for (int v = 0; v <= top + 1; ++v) {
      x[pos] = v;
      self(self, pos + 1, std::max(top, v));
    }
  };
  if (len == 0) return {Tuple{}};
  x[0] = 0;
  rec(rec, 1, 0);
  return out;
}

class LazySearch {
 public:
  LazySearch(const Equation& eq, int n, const SearchBudget& budget, const Timer& timer)
      : eq_(eq), n_(n), budget_(budget), timer_(timer) {
    std::vector<std::string> names = variables(Quasiequation{{}, eq});
    for (std::size_t k = 0; k < names.size(); ++k) index_[names[k]] = static_cast<int>(k);
    names_ = names;
  }

  // True when a counter-model with at most k points exists; `denied` reports
  // whether the cap cut off any branch.
  bool run(int k) {
    cap_ = k;
    denied_ = false;
    for (const Tuple& x : growth_tuples(n_)) {
      const int distinct = x.empty() ? 0 : *std::max_element(x.begin(), x.end()) + 1;
      if (distinct > k) {
        denied_ = true;
        continue;
      }
      x_ = x;
      used_ = distinct;
      tables_.assign(names_.size(), {});
      if (dfs()) return true;
    }
    return false;
  }

  bool denied() const { return denied_; }
  std::uint64_t nodes() const { return nodes_; }

  CounterModel model() const {
    CounterModel cm;
    cm.base = std::make_shared<const Base>(Base::square(found_used_));
    cm.n = n_;
    for (std::size_t v = 0; v < names_.size(); ++v) {
      std::vector<std::pair<Tuple, int>> pairs;
      for (const auto& [t, val] : tables_[v])
        if (val >= 0) pairs.emplace_back(t, val);
      cm.assign.emplace(names_[v], PartialFunction::from_pairs(cm.base, n_, pairs));
    }
    cm.point = x_;
    cm.lhs_value = lhs_value_;
    cm.rhs_value = rhs_value_;
    return cm;
  }

 private:
  struct Eval {
    int value = -1;
    int need = -1;  ///< variable whose value at `at` is not chosen yet
    Tuple at;
  };

  Eval eval(const Term& t, const Tuple& x) {
    auto defined = [](int v) { return Eval{v, -1, {}}; };
    switch (t.kind()) {
      case TermKind::var: {
        const int v = index_.at(t.name());
        auto it = tables_[v].find(x);
        if (it == tables_[v].end()) return Eval{-1, v, x};
        return defined(it->second);
      }
      case TermKind::zero: return defined(-1);
      case TermKind::proj: return defined(x[t.index() - 1]);
      case TermKind::comp: {
        Tuple y;
        for (const Term& a : t.comp_args()) {
          Eval e = eval(a, x);
          if (e.need >= 0 || e.value < 0) return e;
          y.push_back(e.value);
        }
        return eval(t.comp_tail(), y);
      }
      case TermKind::dom:
      case TermKind::adom:
      case TermKind::fix: {
        Eval e = eval(t.operand(), x);
        if (e.need >= 0) return e;
        const int xi = x[t.index() - 1];
        if (t.kind() == TermKind::dom) return defined(e.value >= 0 ? xi : -1);
        if (t.kind() == TermKind::adom) return defined(e.value < 0 ? xi : -1);
        return defined(e.value == xi ? xi : -1);
      }
      case TermKind::pref: {
        Eval l = eval(t.lhs(), x);
        if (l.need >= 0 || l.value >= 0) return l;
        return eval(t.rhs(), x);
      }
      case TermKind::meet:
      case TermKind::tie: {
        Eval l = eval(t.lhs(), x);
        if (l.need >= 0) return l;
        Eval r = eval(t.rhs(), x);
        if (r.need >= 0) return r;
        if (t.kind() == TermKind::meet) return defined(l.value >= 0 && l.value == r.value ? l.value : -1);
        return defined(l.value == r.value ? x[t.index() - 1] : -1);
      }
    }
    throw std::logic_error("unknown term kind");
  }

  bool dfs() {
    if (++nodes_ > budget_.max_nodes) throw OutOfBudget{};
    if ((nodes_ & 4095) == 0 && timer_.expired()) throw OutOfBudget{};
    Eval l = eval(eq_.lhs, x_);
    if (l.need >= 0) return branch(l);
    Eval r = eval(eq_.rhs, x_);
    if (r.need >= 0) return branch(r);
    if (l.value == r.value) return false;
    lhs_value_ = l.value;
    rhs_value_ = r.value;
    found_used_ = used_;
    return true;
  }

  bool branch(const Eval& e) {
    auto& table = tables_[e.need];
    for (int v = -1; v <= used_; ++v) {
      const bool fresh = v == used_;
      if (fresh && used_ >= cap_) {
        denied_ = true;
        break;
      }
      table[e.at] = v;
      if (fresh) ++used_;
      const bool found = dfs();
      if (fresh) --used_;
      if (found) return true;
      table.erase(e.at);
    }
    return false;
  }

  const Equation& eq_;
  int n_;
  const SearchBudget& budget_;
  const Timer& timer_;
  std::map<std::string, int> index_;
  std::vector<std::string> names_;
  int cap_ = 0;
  int used_ = 0;
  bool denied_ = false;
  std::uint64_t nodes_ = 0;
  Tuple x_;
  std::vector<std::map<Tuple, int>> tables_;
  int lhs_value_ = -1, rhs_value_ = -1;
  int found_used_ = 0;
};

void check_sides(const Equation& eq, const Signature& sig) {
  check_term(eq.lhs, sig);
  check_term(eq.rhs, sig);
}

}  // namespace

Decision decide_equation(const Equation& eq, const Signature& sig, const SearchBudget& budget) {
  check_sides(eq, sig);
  const int n = sig.arity();
  Decision d;
  d.complete_bound = complete_bound(eq, n);
  const int max_base = budget.max_base > 0 ? budget.max_base : d.complete_bound;
  Timer timer(budget.time_limit);
  LazySearch search(eq, n, budget, timer);
  for (int k = 1; k <= max_base; ++k) {
    bool found = false;
    try {
      found = search.run(k);
    } catch (const OutOfBudget&) {
      d.nodes = search.nodes();
      return d;
    }
    d.nodes = search.nodes();
    if (found) {
      d.outcome = Outcome::refuted;
      d.searched = k;
      d.model = search.model();
      if (!refutes(eq, *d.model)) throw std::logic_error("counter-model fails to refute on re-evaluation");
      return d;
    }
    d.searched = k;
    if (!search.denied() || k >= d.complete_bound) {
      d.outcome = Outcome::valid_complete;
      return d;
    }
  }
  return d;
}

namespace {

std::vector<std::vector<int>> partitions(int k, int max_classes) {
  std::vector<std::vector<int>> out;
  for (Tuple t : growth_tuples(k)) {
    const int classes = t.empty() ? 0 : *std::max_element(t.begin(), t.end()) + 1;
    if (max_classes <= 0 || classes <= max_classes) out.push_back(t);
  }
  return out;
}

}  // namespace

Decision decide_exhaustive(const Equation& eq, const Signature& sig, const SearchBudget& budget) {
  check_sides(eq, sig);
  const int n = sig.arity();
  Decision d;
  d.complete_bound = complete_bound(eq, n);
  const int max_base = budget.max_base > 0 ? budget.max_base : d.complete_bound;
  const std::vector<std::string> vars = variables(Quasiequation{{}, eq});
  Timer timer(budget.time_limit);
  for (int k = 1; k <= max_base; ++k) {
    for (const auto& eclass : partitions(k, budget.max_class_count)) {
      auto base = std::make_shared<const Base>(Base::with_classes(eclass));
      const auto codes = uniform_codes(*base, n);
      PartialFunction probe(base, n);
      // options per tuple: undefined, then each point of the tuple's class
      std::vector<std::vector<int>> options;
      long double per_var = 1;
      for (auto c : codes) {
        std::vector<int> opt{-1};
        const int cls = base->eclass[probe.decode(c)[0]];
        for (int p = 0; p < k; ++p)
          if (base->eclass[p] == cls) opt.push_back(p);
        per_var *= static_cast<long double>(opt.size());
        options.push_back(std::move(opt));
      }
      if (per_var > static_cast<long double>(budget.max_functions)) return d;

      const std::size_t slots = codes.size() * vars.size();
      std::vector<int> digit(slots, 0);
      while (true) {
        if (++d.nodes > budget.max_nodes || ((d.nodes & 1023) == 0 && timer.expired())) return d;
        Assignment assign;
        for (std::size_t v = 0; v < vars.size(); ++v) {
          std::vector<PartialFunction::Entry> graph;
          for (std::size_t t = 0; t < codes.size(); ++t) {
            const int val = options[t][digit[v * codes.size() + t]];
            if (val >= 0) graph.push_back({codes[t], val});
          }
          assign.emplace(vars[v], PartialFunction::from_sorted(base, n, std::move(graph)));
        }
        const PartialFunction l = eval_concrete(eq.lhs, assign, base, n);
        const PartialFunction r = eval_concrete(eq.rhs, assign, base, n);
        for (auto c : codes)
          if (l.value_at(c) != r.value_at(c)) {
            CounterModel cm{base, n, std::move(assign), probe.decode(c), l.value_at(c), r.value_at(c)};
            d.outcome = Outcome::refuted;
            d.searched = k;
            d.model = std::move(cm);
            return d;
          }
        std::size_t s = slots;
        while (s > 0) {
          const std::size_t t = (s - 1) % codes.size();
          if (++digit[s - 1] < static_cast<int>(options[t].size())) break;
          digit[--s] = 0;
        }
        if (s == 0) break;
      }
    }
    d.searched = k;
  }
  if (max_base >= d.complete_bound) d.outcome = Outcome::valid_complete;
  return d;
}

std::set<int> witness_restriction(const Term& t, const Assignment& assign, const Tuple& x,
                                  RestrictionClause clause) {
  std::set<int> out(x.begin(), x.end());
  auto add = [&](const std::set<int>& s) { out.insert(s.begin(), s.end()); };
  auto rec = [&](const Term& s, const Tuple& at) { return witness_restriction(s, assign, at, clause); };
  switch (t.kind()) {
    case TermKind::var: {
      const int v = eval_at(t, assign, x);
      if (v >= 0) out.insert(v);
      return out;
    }
    case TermKind::zero:
    case TermKind::proj: return out;
    case TermKind::comp: {
      std::set<int> heads;
      Tuple y;
      bool all_defined = true;
      for (const Term& a : t.comp_args()) {
        const std::set<int> ya = rec(a, x);
        heads.insert(ya.begin(), ya.end());
        const int v = eval_at(a, assign, x);
        if (v < 0) all_defined = false;
        y.push_back(v);
      }
      if (all_defined) {
        add(heads);
        add(rec(t.comp_tail(), y));
      } else if (clause == RestrictionClause::corrected) {
        add(heads);
      }
      return out;
    }
    case TermKind::dom:
    case TermKind::adom:
    case TermKind::fix: add(rec(t.operand(), x)); return out;
    case TermKind::meet:
    case TermKind::tie:
    case TermKind::pref:
      add(rec(t.lhs(), x));
      add(rec(t.rhs(), x));
      return out;
  }
  throw std::logic_error("unknown term kind");
}

CounterModel shrink_counterexample(const Equation& eq, const CounterModel& cm) {
  if (!refutes(eq, cm)) throw std::invalid_argument("model does not refute the equation");
  std::set<int> keep_set = witness_restriction(eq.lhs, cm.assign, cm.point);
  const std::set<int> r = witness_restriction(eq.rhs, cm.assign, cm.point);
  keep_set.insert(r.begin(), r.end());
  std::vector<bool> keep(static_cast<std::size_t>(cm.base->size), false);
  for (int p : keep_set) keep[p] = true;

  std::vector<PartialFunction> fs{PartialFunction(cm.base, cm.n)};
  for (const auto& [name, f] : cm.assign) fs.push_back(f);
  fs = restrict_points(fs, keep);
  std::vector<int> renum(keep.size(), -1);
  int next = 0;
  for (std::size_t p = 0; p < keep.size(); ++p)
    if (keep[p]) renum[p] = next++;

  CounterModel out;
  out.base = fs.front().base_ptr();
  out.n = cm.n;
  std::size_t k = 1;
  for (const auto& [name, f] : cm.assign) out.assign.emplace(name, fs[k++]);
  for (int p : cm.point) out.point.push_back(renum[p]);
  out.lhs_value = eval_at(eq.lhs, out.assign, out.point);
  out.rhs_value = eval_at(eq.rhs, out.assign, out.point);
  if (out.lhs_value == out.rhs_value || !refutes(eq, out))
    throw std::logic_error("restricted model no longer refutes the equation");
  return out;
}

// ---------------------------------------------------------------------------
// Propositional formulas

PropFormula PropFormula::letter(std::string name) {
  return PropFormula(std::make_shared<const Node>(Node{Kind::letter, std::move(name), {}}));
}
PropFormula PropFormula::negation(PropFormula f) {
  return PropFormula(std::make_shared<const Node>(Node{Kind::negation, {}, {std::move(f)}}));
}
PropFormula PropFormula::conjunction(PropFormula l, PropFormula r) {
  return PropFormula(std::make_shared<const Node>(Node{Kind::conjunction, {}, {std::move(l), std::move(r)}}));
}

int PropFormula::depth() const {
  switch (kind()) {
    case Kind::letter: return 1;
    case Kind::negation: return 1 + left().depth();
    case Kind::conjunction: return 1 + std::max(left().depth(), right().depth());
  }
  return 0;
}

std::vector<std::string> PropFormula::letters() const {
  std::set<std::string> out;
  auto rec = [&](auto& self, const PropFormula& f) -> void {
    if (f.kind() == Kind::letter) out.insert(f.name());
    for (const auto& k : f.node_->kids) self(self, k);
  };
  rec(rec, *this);
  return {out.begin(), out.end()};
}

bool PropFormula::eval(const std::map<std::string, bool>& v) const {
  switch (kind()) {
    case Kind::letter: return v.at(name());
    case Kind::negation: return !left().eval(v);
    case Kind::conjunction: return left().eval(v) && right().eval(v);
  }
  return false;
}

bool PropFormula::tautology() const {
  const auto ls = letters();
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << ls.size()); ++bits) {
    std::map<std::string, bool> v;
    for (std::size_t k = 0; k < ls.size(); ++k) v[ls[k]] = (bits >> k) & 1;
    if (!eval(v)) return false;
  }
  return true;
}

std::string PropFormula::to_string() const {
  switch (kind()) {
    case Kind::letter: return name();
    case Kind::negation: return "~" + left().to_string();
    case Kind::conjunction: return "(" + left().to_string() + " & " + right().to_string() + ")";
  }
  return "";
}

PropFormula parse_prop(std::string_view text) {
  std::size_t pos = 0;
  auto skip = [&] {
    while (pos < text.size() && std::isspace(static_cast<unsigned char>(text[pos]))) ++pos;
  };
  auto fail = [&](const std::string& msg) -> PropFormula { throw ParseError(msg, pos); };
  auto rec = [&](auto& self) -> PropFormula {
    skip();
    if (pos >= text.size()) return fail("unexpected end of formula");
    const char c = text[pos];
    if (c == '~') {
      ++pos;
      return PropFormula::negation(self(self));
    }
    if (c == '(') {
      ++pos;
      PropFormula l = self(self);
      skip();
      if (pos >= text.size() || text[pos] != '&') return fail("expected '&'");
      ++pos;
      PropFormula r = self(self);
      skip();
      if (pos >= text.size() || text[pos] != ')') return fail("expected ')'");
      ++pos;
      return PropFormula::conjunction(std::move(l), std::move(r));
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      const std::size_t start = pos;
      while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_')) ++pos;
      std::string id(text.substr(start, pos - start));
      if (is_keyword(id)) {
        pos = start;
        return fail("reserved word '" + id + "' cannot be a letter");
      }
      return PropFormula::letter(std::move(id));
    }
    return fail(std::string("unexpected '") + c + "'");
  };
  PropFormula f = rec(rec);
  skip();
  if (pos != text.size()) throw ParseError("trailing input", pos);
  return f;
}

std::vector<PropFormula> all_formulas(const std::vector<std::string>& letters, int max_depth) {
  std::vector<PropFormula> out;
  if (max_depth < 1) return out;
  for (const auto& l : letters) out.push_back(PropFormula::letter(l));
  for (int d = 2; d <= max_depth; ++d) {
    const std::vector<PropFormula> prev = out;
    for (const auto& f : prev) out.push_back(PropFormula::negation(f));
    for (const auto& f : prev)
      for (const auto& g : prev) out.push_back(PropFormula::conjunction(f, g));
  }
  return out;
}

Signature reduction_signature(int n, bool use_meet) {
  return use_meet ? Signature(n, {OpFamily::comp, OpFamily::adom, OpFamily::meet})
                  : Signature(n, {OpFamily::comp, OpFamily::adom});
}

Equation reduce_tautology(const PropFormula& phi, int i, int n, bool use_meet) {
  if (i < 1 || i > n) throw std::invalid_argument("index " + std::to_string(i) + " outside 1.." + std::to_string(n));
  auto rec = [&](auto& self, const PropFormula& f) -> Term {
    switch (f.kind()) {
      case PropFormula::Kind::letter: return Term::dom(i, Term::var(f.name()));
      case PropFormula::Kind::negation: return Term::adom(i, self(self, f.left()));
      case PropFormula::Kind::conjunction: {
        Term u = self(self, f.left());
        Term v = self(self, f.right());
        if (use_meet) return Term::meet(std::move(u), std::move(v));
        return dom_tuple_comp(u, v, n);
      }
    }
    throw std::logic_error("unknown formula kind");
  };
  return Equation{rec(rec, phi), Term::proj(i)};
}

// ---------------------------------------------------------------------------
// Files

namespace {

std::string value_text(int v) { return v < 0 ? "undef" : std::to_string(v); }

}  // namespace

void write_counter_model(std::ostream& out, const CounterModel& cm) {
  PfunFile file{cm.base, cm.n, {}};
  for (const auto& [name, f] : cm.assign) file.funs.emplace_back(name, f);
  write_pfun(out, file);
  out << "at " << format_tuple(cm.point) << "\n";
  out << "lhs " << value_text(cm.lhs_value) << "\n";
  out << "rhs " << value_text(cm.rhs_value) << "\n";
}

CounterModel read_counter_model(std::istream& in) {
  std::optional<Tuple> point;
  std::optional<int> lhs, rhs;
  auto number = [](const std::string& s, int line) {
    if (s.empty() || s.size() > 9 || !std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); }))
      throw FormatError("expected a point, got '" + s + "'", line);
    return std::stoi(s);
  };
  auto extra = [&](const std::vector<std::string>& tok, int line) {
    if (tok[0] == "at") {
      if (point) throw FormatError("duplicate 'at' line", line);
      std::string body;
      for (std::size_t k = 1; k < tok.size(); ++k) body += tok[k];
      if (body.size() < 2 || body.front() != '(' || body.back() != ')') throw FormatError("expected 'at (x1,...,xn)'", line);
      Tuple x;
      std::string cur;
      for (char c : body.substr(1, body.size() - 2) + ",") {
        if (c == ',') {
          x.push_back(number(cur, line));
          cur.clear();
        } else {
          cur += c;
        }
      }
      point = std::move(x);
    } else if (tok[0] == "lhs" || tok[0] == "rhs") {
      auto& slot = tok[0] == "lhs" ? lhs : rhs;
      if (slot || tok.size() != 2) throw FormatError("bad '" + tok[0] + "' line", line);
      slot = tok[1] == "undef" ? -1 : number(tok[1], line);
    } else {
      return false;
    }
    return true;
  };
  PfunFile file = read_pfun(in, extra);
  if (!point || !lhs || !rhs) throw FormatError("counter-model needs 'at', 'lhs' and 'rhs' lines", 0);
  if (static_cast<int>(point->size()) != file.n) throw FormatError("point has the wrong arity", 0);
  for (int p : *point)
    if (p >= file.base->size) throw FormatError("point outside the base", 0);
  CounterModel cm;
  cm.base = file.base;
  cm.n = file.n;
  for (auto& [name, f] : file.funs)
    if (!cm.assign.emplace(name, f).second) throw FormatError("function '" + name + "' defined twice", 0);
  cm.point = *point;
  cm.lhs_value = *lhs;
  cm.rhs_value = *rhs;
  return cm;
}

}  // namespace mpf
