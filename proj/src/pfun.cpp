#include "mpf/pfun.hpp"

#include <algorithm>
#include <map>
#include <sstream>
#include <unordered_map>

namespace mpf {

namespace {

PartialFunction::Code checked_power(int size, int n) {
  PartialFunction::Code p = 1;
  for (int k = 0; k < n; ++k) {
    if (size != 0 && p > (UINT64_MAX / 4) / static_cast<PartialFunction::Code>(size))
      throw std::length_error("tuple space too large");
    p *= static_cast<PartialFunction::Code>(size);
  }
  return p;
}

void require_same(const PartialFunction& f, const PartialFunction& g) {
  if (f.arity() != g.arity()) throw BaseMismatch("arity mismatch");
  if (f.base_ptr() != g.base_ptr() && !(f.base() == g.base()))
    throw BaseMismatch("functions live on different bases");
}

void require_index(int i, int n) {
  if (i < 1 || i > n) throw std::out_of_range("index " + std::to_string(i) + " out of range");
}

// Digit of coordinate i (1-based) in a big-endian code.
int coordinate(PartialFunction::Code code, int i, int n, int size) {
  for (int k = n; k > i; --k) code /= static_cast<PartialFunction::Code>(size);
  return static_cast<int>(code % static_cast<PartialFunction::Code>(size));
}

}  // namespace

Base Base::square(int size) {
  if (size < 0) throw std::invalid_argument("negative base size");
  return Base{size, std::vector<int>(static_cast<std::size_t>(size), 0)};
}

Base Base::with_classes(std::vector<int> eclass) {
  const int size = static_cast<int>(eclass.size());
  return Base{size, std::move(eclass)};
}

bool Base::is_square() const {
  return std::all_of(eclass.begin(), eclass.end(), [&](int c) { return c == eclass.front(); });
}

std::vector<std::vector<int>> Base::classes() const {
  std::vector<std::vector<int>> out;
  std::map<int, std::size_t> slot;
  for (int x = 0; x < size; ++x) {
    auto [it, fresh] = slot.emplace(eclass[x], out.size());
    if (fresh) out.emplace_back();
    out[it->second].push_back(x);
  }
  return out;
}

// ---------------------------------------------------------------------------

PartialFunction::PartialFunction(BasePtr base, int n) : base_(std::move(base)), n_(n) {
  if (!base_) throw std::invalid_argument("null base");
  if (n < 1) throw std::invalid_argument("arity must be at least 1");
  checked_power(base_->size, n);
}

PartialFunction PartialFunction::from_pairs(BasePtr base, int n,
                                            const std::vector<std::pair<Tuple, int>>& pairs) {
  PartialFunction f(std::move(base), n);
  const Base& b = *f.base_;
  for (const auto& [x, y] : pairs) {
    if (static_cast<int>(x.size()) != n) throw std::invalid_argument("tuple of wrong arity");
    if (y < 0 || y >= b.size) throw std::invalid_argument("value outside the base");
    for (int p : x) {
      if (p < 0 || p >= b.size) throw std::invalid_argument("point outside the base");
      if (!b.equivalent(p, y))
        throw std::invalid_argument("tuple " + format_tuple(x) + "->" + std::to_string(y) +
                                    " is not E-uniform");
    }
    f.graph_.push_back({f.encode(x), y});
  }
  std::sort(f.graph_.begin(), f.graph_.end(),
            [](const Entry& a, const Entry& c) { return a.code < c.code; });
  for (std::size_t k = 1; k < f.graph_.size(); ++k) {
    if (f.graph_[k].code == f.graph_[k - 1].code) {
      if (f.graph_[k].value != f.graph_[k - 1].value)
        throw std::invalid_argument("two values at " + format_tuple(f.decode(f.graph_[k].code)));
    }
  }
  f.graph_.erase(std::unique(f.graph_.begin(), f.graph_.end()), f.graph_.end());
  return f;
}

PartialFunction PartialFunction::from_sorted(BasePtr base, int n, std::vector<Entry> graph) {
  PartialFunction f(std::move(base), n);
  f.graph_ = std::move(graph);
  return f;
}

int PartialFunction::value_at(Code code) const {
  auto it = std::lower_bound(graph_.begin(), graph_.end(), code,
                             [](const Entry& e, Code c) { return e.code < c; });
  return it != graph_.end() && it->code == code ? it->value : -1;
}

std::optional<int> PartialFunction::at(const Tuple& x) const {
  int v = value_at(encode(x));
  if (v < 0) return std::nullopt;
  return v;
}

PartialFunction::Code PartialFunction::encode(const Tuple& x) const {
  Code c = 0;
  for (int p : x) c = c * static_cast<Code>(base_->size) + static_cast<Code>(p);
  return c;
}

Tuple PartialFunction::decode(Code code) const {
  Tuple x(static_cast<std::size_t>(n_));
  for (int k = n_ - 1; k >= 0; --k) {
    x[k] = static_cast<int>(code % static_cast<Code>(base_->size));
    code /= static_cast<Code>(base_->size);
  }
  return x;
}

PartialFunction PartialFunction::restrict_to(const std::vector<bool>& keep) const {
  PartialFunction out(base_, n_);
  for (const Entry& e : graph_) {
    if (!keep[e.value]) continue;
    Tuple x = decode(e.code);
    if (std::all_of(x.begin(), x.end(), [&](int p) { return keep[p]; })) out.graph_.push_back(e);
  }
  return out;
}

std::string PartialFunction::to_string() const {
  std::string out = "{";
  for (std::size_t k = 0; k < graph_.size(); ++k) {
    if (k) out += ", ";
    out += format_tuple(decode(graph_[k].code)) + "->" + std::to_string(graph_[k].value);
  }
  return out + "}";
}

bool operator==(const PartialFunction& f, const PartialFunction& g) {
  require_same(f, g);
  return f.graph_ == g.graph_;
}

bool operator<(const PartialFunction& f, const PartialFunction& g) {
  return std::lexicographical_compare(
      f.graph_.begin(), f.graph_.end(), g.graph_.begin(), g.graph_.end(),
      [](const PartialFunction::Entry& a, const PartialFunction::Entry& b) {
        return a.code != b.code ? a.code < b.code : a.value < b.value;
      });
}

std::size_t PartialFunctionHash::operator()(const PartialFunction& f) const {
  std::size_t h = 0x9e3779b97f4a7c15ull ^ f.size();
  for (const auto& e : f.graph()) {
    h ^= std::hash<std::uint64_t>()(e.code * 1000003u + static_cast<std::uint64_t>(e.value)) +
         0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  }
  return h;
}

std::vector<PartialFunction::Code> uniform_codes(const Base& base, int n) {
  using Code = PartialFunction::Code;
  checked_power(base.size, n);
  std::vector<Code> out;
  for (const auto& cls : base.classes()) {
    std::vector<std::size_t> digit(static_cast<std::size_t>(n), 0);
    while (true) {
      Code c = 0;
      for (int k = 0; k < n; ++k) c = c * static_cast<Code>(base.size) + static_cast<Code>(cls[digit[k]]);
      out.push_back(c);
      int k = n - 1;
      while (k >= 0 && ++digit[k] == cls.size()) digit[k--] = 0;
      if (k < 0) break;
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Operations

PartialFunction compose(std::span<const PartialFunction> fs, const PartialFunction& g) {
  const int n = g.arity();
  if (static_cast<int>(fs.size()) != n) throw std::invalid_argument("compose needs n functions");
  for (const auto& f : fs) require_same(f, g);
  const auto size = static_cast<PartialFunction::Code>(g.base().size);
  std::vector<PartialFunction::Entry> out;
  for (const auto& e : fs[0].graph()) {
    PartialFunction::Code y = static_cast<PartialFunction::Code>(e.value);
    bool defined = true;
    for (int k = 1; k < n && defined; ++k) {
      int v = fs[k].value_at(e.code);
      if (v < 0) defined = false;
      y = y * size + static_cast<PartialFunction::Code>(v);
    }
    if (!defined) continue;
    int z = g.value_at(y);
    if (z >= 0) out.push_back({e.code, z});
  }
  return PartialFunction::from_sorted(g.base_ptr(), n, std::move(out));
}

PartialFunction meet(const PartialFunction& f, const PartialFunction& g) {
  require_same(f, g);
  std::vector<PartialFunction::Entry> out;
  std::set_intersection(f.graph().begin(), f.graph().end(), g.graph().begin(), g.graph().end(),
                        std::back_inserter(out),
                        [](const PartialFunction::Entry& a, const PartialFunction::Entry& b) {
                          return a.code != b.code ? a.code < b.code : a.value < b.value;
                        });
  return PartialFunction::from_sorted(f.base_ptr(), f.arity(), std::move(out));
}

PartialFunction zero(const BasePtr& base, int n) { return PartialFunction(base, n); }

PartialFunction proj(int i, const BasePtr& base, int n) {
  require_index(i, n);
  std::vector<PartialFunction::Entry> out;
  for (auto c : uniform_codes(*base, n)) out.push_back({c, coordinate(c, i, n, base->size)});
  return PartialFunction::from_sorted(base, n, std::move(out));
}

PartialFunction dom(int i, const PartialFunction& f) {
  const int n = f.arity();
  require_index(i, n);
  std::vector<PartialFunction::Entry> out;
  for (const auto& e : f.graph()) out.push_back({e.code, coordinate(e.code, i, n, f.base().size)});
  return PartialFunction::from_sorted(f.base_ptr(), n, std::move(out));
}

PartialFunction adom(int i, const PartialFunction& f) {
  const int n = f.arity();
  require_index(i, n);
  std::vector<PartialFunction::Entry> out;
  auto it = f.graph().begin();
  for (auto c : uniform_codes(f.base(), n)) {
    while (it != f.graph().end() && it->code < c) ++it;
    if (it != f.graph().end() && it->code == c) continue;
    out.push_back({c, coordinate(c, i, n, f.base().size)});
  }
  return PartialFunction::from_sorted(f.base_ptr(), n, std::move(out));
}

PartialFunction fixset(int i, const PartialFunction& f) {
  const int n = f.arity();
  require_index(i, n);
  std::vector<PartialFunction::Entry> out;
  for (const auto& e : f.graph())
    if (coordinate(e.code, i, n, f.base().size) == e.value) out.push_back(e);
  return PartialFunction::from_sorted(f.base_ptr(), n, std::move(out));
}

PartialFunction tie(int i, const PartialFunction& f, const PartialFunction& g) {
  require_same(f, g);
  const int n = f.arity();
  require_index(i, n);
  std::vector<PartialFunction::Entry> out;
  for (auto c : uniform_codes(f.base(), n)) {
    const int u = f.value_at(c);
    const int v = g.value_at(c);
    if (u == v) out.push_back({c, coordinate(c, i, n, f.base().size)});
  }
  return PartialFunction::from_sorted(f.base_ptr(), n, std::move(out));
}

PartialFunction pref(const PartialFunction& f, const PartialFunction& g) {
  require_same(f, g);
  std::vector<PartialFunction::Entry> out;
  auto a = f.graph().begin();
  auto b = g.graph().begin();
  while (a != f.graph().end() || b != g.graph().end()) {
    if (b == g.graph().end() || (a != f.graph().end() && a->code <= b->code)) {
      if (b != g.graph().end() && b->code == a->code) ++b;
      out.push_back(*a++);
    } else {
      out.push_back(*b++);
    }
  }
  return PartialFunction::from_sorted(f.base_ptr(), f.arity(), std::move(out));
}

bool is_injective_fn(const PartialFunction& f) {
  std::vector<int> values;
  for (const auto& e : f.graph()) values.push_back(e.value);
  std::sort(values.begin(), values.end());
  return std::adjacent_find(values.begin(), values.end()) == values.end();
}

PartialFunction eval_concrete(const Term& t, const Assignment& assign, const BasePtr& base, int n) {
  auto rec = [&](const Term& s) { return eval_concrete(s, assign, base, n); };
  switch (t.kind()) {
    case TermKind::var: {
      auto it = assign.find(t.name());
      if (it == assign.end()) throw std::invalid_argument("unbound variable '" + t.name() + "'");
      return it->second;
    }
    case TermKind::zero: return zero(base, n);
    case TermKind::proj: return proj(t.index(), base, n);
    case TermKind::comp: {
      std::vector<PartialFunction> fs;
      for (const Term& a : t.comp_args()) fs.push_back(rec(a));
      return compose(fs, rec(t.comp_tail()));
    }
    case TermKind::meet: return meet(rec(t.lhs()), rec(t.rhs()));
    case TermKind::dom: return dom(t.index(), rec(t.operand()));
    case TermKind::adom: return adom(t.index(), rec(t.operand()));
    case TermKind::fix: return fixset(t.index(), rec(t.operand()));
    case TermKind::tie: return tie(t.index(), rec(t.lhs()), rec(t.rhs()));
    case TermKind::pref: return pref(rec(t.lhs()), rec(t.rhs()));
  }
  throw std::logic_error("unknown term kind");
}

// ---------------------------------------------------------------------------
// Subalgebras

int ConcreteAlgebra::index_of(const PartialFunction& f) const {
  for (std::size_t k = 0; k < elements.size(); ++k)
    if (elements[k] == f) return static_cast<int>(k);
  return -1;
}

namespace {

// Calls fn for every arity-tuple of indices below `total` with at least one
// index at or above `old`.
template <class Fn>
void for_each_new_combo(int arity, std::size_t old, std::size_t total, Fn&& fn) {
  std::vector<std::size_t> idx(static_cast<std::size_t>(arity));
  for (int k = 0; k < arity; ++k) {
    std::vector<std::size_t> lo(arity), hi(arity);
    for (int p = 0; p < arity; ++p) {
      if (p < k) lo[p] = 0, hi[p] = old;
      else if (p == k) lo[p] = old, hi[p] = total;
      else lo[p] = 0, hi[p] = total;
    }
    bool empty = false;
    for (int p = 0; p < arity; ++p) empty = empty || lo[p] >= hi[p];
    if (empty) continue;
    for (int p = 0; p < arity; ++p) idx[p] = lo[p];
    while (true) {
      fn(std::span<const std::size_t>(idx));
      int p = arity - 1;
      while (p >= 0 && ++idx[p] == hi[p]) idx[p] = lo[p], --p;
      if (p < 0) break;
    }
  }
}

}  // namespace

ConcreteAlgebra generate_subalgebra(const std::vector<PartialFunction>& gens, const Signature& sig,
                                    std::size_t budget) {
  if (gens.empty()) throw std::invalid_argument("at least one generator required");
  const BasePtr base = gens.front().base_ptr();
  const int n = gens.front().arity();
  if (sig.arity() != n) throw std::invalid_argument("signature arity differs from the generators");

  ConcreteAlgebra alg{base, n, sig, {}};
  std::unordered_map<PartialFunction, std::size_t, PartialFunctionHash> seen;
  auto add = [&](PartialFunction f) {
    if (seen.count(f)) return;
    if (alg.elements.size() >= budget)
      throw ClosureOverflow("closure exceeds " + std::to_string(budget) + " elements");
    seen.emplace(f, alg.elements.size());
    alg.elements.push_back(std::move(f));
  };
  for (const auto& g : gens) {
    require_same(g, gens.front());
    add(g);
  }
  if (sig.has(OpFamily::zero)) add(zero(base, n));
  if (sig.has(OpFamily::proj))
    for (int i = 1; i <= n; ++i) add(proj(i, base, n));

  std::size_t old = 0;
  while (old < alg.elements.size()) {
    const std::size_t total = alg.elements.size();
    auto el = [&](std::size_t k) -> const PartialFunction& { return alg.elements[k]; };
    for (std::size_t k = old; k < total; ++k) {
      for (int i = 1; i <= n; ++i) {
        if (sig.has(OpFamily::adom)) add(adom(i, el(k)));
        if (sig.has(OpFamily::dom)) add(dom(i, el(k)));
        if (sig.has(OpFamily::fix)) add(fixset(i, el(k)));
      }
    }
    if (sig.has(OpFamily::meet) || sig.has(OpFamily::pref) || sig.has(OpFamily::tie)) {
      for_each_new_combo(2, old, total, [&](std::span<const std::size_t> ix) {
        const PartialFunction f = el(ix[0]);
        const PartialFunction g = el(ix[1]);
        if (sig.has(OpFamily::meet)) add(meet(f, g));
        if (sig.has(OpFamily::pref)) add(pref(f, g));
        if (sig.has(OpFamily::tie))
          for (int i = 1; i <= n; ++i) add(tie(i, f, g));
      });
    }
    if (sig.has(OpFamily::comp)) {
      std::vector<PartialFunction> fs;
      for_each_new_combo(n + 1, old, total, [&](std::span<const std::size_t> ix) {
        fs.clear();
        for (int p = 0; p < n; ++p) fs.push_back(el(ix[p]));
        add(compose(fs, el(ix[n])));
      });
    }
    old = total;
  }
  return alg;
}

// ---------------------------------------------------------------------------
// Disjoint unions

DisjointUnion disjoint_union(std::span<const Base> parts) {
  if (parts.empty()) throw std::invalid_argument("disjoint union of no parts");
  DisjointUnion u;
  std::vector<int> eclass;
  int next_class = 0;
  for (const Base& b : parts) {
    u.offsets.push_back(static_cast<int>(eclass.size()));
    std::map<int, int> renamed;
    for (int x = 0; x < b.size; ++x) {
      auto [it, fresh] = renamed.emplace(b.eclass[x], next_class);
      if (fresh) ++next_class;
      eclass.push_back(it->second);
    }
  }
  u.base = std::make_shared<const Base>(Base::with_classes(std::move(eclass)));
  return u;
}

PartialFunction DisjointUnion::combine(std::span<const PartialFunction> parts) const {
  if (parts.size() != offsets.size()) throw std::invalid_argument("wrong number of parts");
  const int n = parts.front().arity();
  PartialFunction probe(base, n);
  std::vector<PartialFunction::Entry> out;
  for (std::size_t k = 0; k < parts.size(); ++k) {
    if (parts[k].arity() != n) throw BaseMismatch("arity mismatch in disjoint union");
    for (const auto& e : parts[k].graph()) {
      Tuple x = parts[k].decode(e.code);
      for (int& p : x) p += offsets[k];
      out.push_back({probe.encode(x), e.value + offsets[k]});
    }
  }
  std::sort(out.begin(), out.end(),
            [](const PartialFunction::Entry& a, const PartialFunction::Entry& b) {
              return a.code < b.code;
            });
  return PartialFunction::from_sorted(base, n, std::move(out));
}

std::vector<PartialFunction> disjoint_union(const std::vector<std::vector<PartialFunction>>& images) {
  if (images.empty()) throw std::invalid_argument("disjoint union of no parts");
  std::vector<Base> bases;
  for (const auto& part : images) {
    if (part.size() != images.front().size())
      throw std::invalid_argument("parts disagree on the number of elements");
    if (part.empty()) throw std::invalid_argument("empty part");
    bases.push_back(part.front().base());
  }
  DisjointUnion u = disjoint_union(bases);
  std::vector<PartialFunction> out;
  for (std::size_t e = 0; e < images.front().size(); ++e) {
    std::vector<PartialFunction> column;
    for (const auto& part : images) column.push_back(part[e]);
    out.push_back(u.combine(column));
  }
  return out;
}

std::vector<PartialFunction> restrict_points(const std::vector<PartialFunction>& fs, const std::vector<bool>& keep) {
  if (fs.empty()) return {};
  const Base& old = fs.front().base();
  if (static_cast<int>(keep.size()) != old.size) throw std::invalid_argument("keep mask has the wrong size");
  std::vector<int> renum(keep.size(), -1);
  std::vector<int> eclass;
  std::map<int, int> cls;
  for (int p = 0; p < old.size; ++p)
    if (keep[p]) {
      renum[p] = static_cast<int>(eclass.size());
      eclass.push_back(cls.emplace(old.eclass[p], static_cast<int>(cls.size())).first->second);
    }
  auto base = std::make_shared<const Base>(Base::with_classes(eclass));
  std::vector<PartialFunction> out;
  for (const PartialFunction& f : fs) {
    require_same(f, fs.front());
    std::vector<std::pair<Tuple, int>> pairs;
    for (const auto& e : f.graph()) {
      if (!keep[e.value]) continue;
      Tuple x = f.decode(e.code);
      if (!std::all_of(x.begin(), x.end(), [&](int p) { return keep[p]; })) continue;
      for (int& p : x) p = renum[p];
      pairs.emplace_back(std::move(x), renum[e.value]);
    }
    out.push_back(PartialFunction::from_pairs(base, f.arity(), pairs));
  }
  return out;
}

}  // namespace mpf
