#include <algorithm>
#include <numeric>
#include <unordered_map>

#include "mpf/finalg.hpp"

namespace mpf {

namespace {

bool unary_family(OpFamily f) { return f == OpFamily::adom || f == OpFamily::dom || f == OpFamily::fix; }

// Index range of a table family: binary meet/pref use 0 only.
std::pair<int, int> indices(OpFamily f, int n) {
  if (f == OpFamily::meet || f == OpFamily::pref) return {0, 0};
  return {1, n};
}

std::size_t power(std::size_t s, int k) {
  std::size_t out = 1;
  for (int j = 0; j < k; ++j) out *= s;
  return out;
}

// Rebuilds every primitive operation of `sig` on `size` elements; `op` maps a
// family, index and argument list to the result.
template <class Op>
void fill_tables(FiniteAlgebra& out, const Signature& sig, int size, Op op) {
  const int n = sig.arity();
  const std::size_t s = static_cast<std::size_t>(size);
  for (OpFamily f : sig.families()) {
    if (f == OpFamily::comp) {
      std::vector<int> t(power(s, n + 1));
      std::vector<int> args(static_cast<std::size_t>(n) + 1);
      for (std::size_t idx = 0; idx < t.size(); ++idx) {
        std::size_t rest = idx;
        for (int k = n; k >= 0; --k) {
          args[k] = static_cast<int>(rest % s);
          rest /= s;
        }
        t[idx] = op(f, 0, args);
      }
      out.set_comp(std::move(t));
    } else if (f == OpFamily::zero) {
      out.set_constant(f, 0, op(f, 0, std::vector<int>{}));
    } else if (f == OpFamily::proj) {
      for (int i = 1; i <= n; ++i) out.set_constant(f, i, op(f, i, std::vector<int>{}));
    } else {
      auto [lo, hi] = indices(f, n);
      for (int i = lo; i <= hi; ++i) {
        std::vector<int> t;
        if (unary_family(f)) {
          for (int a = 0; a < size; ++a) t.push_back(op(f, i, std::vector<int>{a}));
        } else {
          for (int a = 0; a < size; ++a)
            for (int b = 0; b < size; ++b) t.push_back(op(f, i, std::vector<int>{a, b}));
        }
        out.set_table(f, i, std::move(t));
      }
    }
  }
  out.finalize();
}

int apply(const FiniteAlgebra& alg, OpFamily f, int i, const std::vector<int>& args) {
  switch (f) {
    case OpFamily::comp:
      return alg.comp(std::span<const int>(args.data(), args.size() - 1), args.back());
    case OpFamily::zero: return alg.zero();
    case OpFamily::proj: return alg.proj(i);
    default:
      return unary_family(f) ? alg.unary(f, i, args[0]) : alg.binary(f, i, args[0], args[1]);
  }
}

}  // namespace

FiniteAlgebra quotient(const FiniteAlgebra& alg, const std::vector<int>& partition) {
  const int s = alg.size();
  if (static_cast<int>(partition.size()) != s) throw AlgebraError("partition has the wrong length");
  // renumber classes by least member
  std::map<int, int> renumber;
  std::vector<int> cls(static_cast<std::size_t>(s));
  std::vector<int> rep;
  std::vector<std::string> names;
  for (int e = 0; e < s; ++e) {
    auto [it, fresh] = renumber.emplace(partition[e], static_cast<int>(rep.size()));
    if (fresh) {
      rep.push_back(e);
      names.push_back(alg.element_name(e));
    }
    cls[e] = it->second;
  }
  FiniteAlgebra out(alg.name() + "/~", alg.sig(), names);
  fill_tables(out, alg.sig(), static_cast<int>(rep.size()), [&](OpFamily f, int i, const std::vector<int>& args) {
    std::vector<int> lifted;
    for (int a : args) lifted.push_back(rep[a]);
    return cls[apply(alg, f, i, lifted)];
  });

  // Every table entry of the original must land in the class computed from representatives.
  for (OpFamily f : alg.sig().families()) {
    if (f == OpFamily::zero || f == OpFamily::proj) continue;
    const int arity = f == OpFamily::comp ? alg.arity() + 1 : unary_family(f) ? 1 : 2;
    auto [lo, hi] = f == OpFamily::comp ? std::pair{0, 0} : indices(f, alg.arity());
    const std::size_t total = power(static_cast<std::size_t>(s), arity);
    std::vector<int> args(static_cast<std::size_t>(arity));
    std::vector<int> classes(static_cast<std::size_t>(arity));
    for (int i = lo; i <= hi; ++i)
      for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        for (int k = arity - 1; k >= 0; --k) {
          args[k] = static_cast<int>(rest % static_cast<std::size_t>(s));
          classes[k] = cls[args[k]];
          rest /= static_cast<std::size_t>(s);
        }
        if (cls[apply(alg, f, i, args)] != apply(out, f, i, classes)) {
          std::string where;
          for (int a : args) where += (where.empty() ? "" : ",") + alg.element_name(a);
          throw AlgebraError("partition is not a congruence: " + std::string(family_name(f)) +
                             (i ? std::to_string(i) : "") + " at (" + where + ")");
        }
      }
  }
  return out;
}

FiniteAlgebra product(const std::vector<FiniteAlgebra>& algs) {
  if (algs.empty()) throw AlgebraError("product of no algebras");
  const Signature sig = algs[0].sig();
  for (const auto& a : algs)
    if (a.sig() != sig) throw AlgebraError("product factors must share a signature");
  std::vector<int> sizes;
  for (const auto& a : algs) sizes.push_back(a.size());
  int total = 1;
  for (int s : sizes) total *= s;

  auto split = [&](int e) {
    std::vector<int> parts(algs.size());
    for (std::size_t k = algs.size(); k-- > 0;) {
      parts[k] = e % sizes[k];
      e /= sizes[k];
    }
    return parts;
  };
  std::vector<std::string> names;
  std::string label;
  for (int e = 0; e < total; ++e) {
    auto parts = split(e);
    std::string name;
    for (std::size_t k = 0; k < algs.size(); ++k) name += (k ? "_" : "") + algs[k].element_name(parts[k]);
    names.push_back(name);
  }
  for (std::size_t k = 0; k < algs.size(); ++k) label += (k ? "x" : "") + algs[k].name();

  FiniteAlgebra out(label, sig, names);
  fill_tables(out, sig, total, [&](OpFamily f, int i, const std::vector<int>& args) {
    std::vector<std::vector<int>> split_args;
    for (int a : args) split_args.push_back(split(a));
    int code = 0;
    for (std::size_t k = 0; k < algs.size(); ++k) {
      std::vector<int> local;
      for (const auto& p : split_args) local.push_back(p[k]);
      code = code * sizes[k] + apply(algs[k], f, i, local);
    }
    return code;
  });
  return out;
}

FiniteAlgebra to_finite_algebra(const ConcreteAlgebra& alg, std::string name, std::vector<std::string> names) {
  const int s = static_cast<int>(alg.elements.size());
  if (names.empty())
    for (int e = 0; e < s; ++e) names.push_back("e" + std::to_string(e));
  if (static_cast<int>(names.size()) != s) throw AlgebraError("one name per element required");
  std::unordered_map<PartialFunction, int, PartialFunctionHash> index;
  for (int e = 0; e < s; ++e) index.emplace(alg.elements[e], e);
  auto find = [&](const PartialFunction& f) {
    auto it = index.find(f);
    if (it == index.end()) throw AlgebraError("concrete algebra is not closed");
    return it->second;
  };
  FiniteAlgebra out(std::move(name), alg.sig, std::move(names));
  const auto& E = alg.elements;
  fill_tables(out, alg.sig, s, [&](OpFamily f, int i, const std::vector<int>& args) {
    switch (f) {
      case OpFamily::comp: {
        std::vector<PartialFunction> fs;
        for (std::size_t k = 0; k + 1 < args.size(); ++k) fs.push_back(E[args[k]]);
        return find(compose(fs, E[args.back()]));
      }
      case OpFamily::zero: return find(zero(alg.base, alg.n));
      case OpFamily::proj: return find(proj(i, alg.base, alg.n));
      case OpFamily::adom: return find(adom(i, E[args[0]]));
      case OpFamily::dom: return find(dom(i, E[args[0]]));
      case OpFamily::fix: return find(fixset(i, E[args[0]]));
      case OpFamily::meet: return find(meet(E[args[0]], E[args[1]]));
      case OpFamily::pref: return find(pref(E[args[0]], E[args[1]]));
      case OpFamily::tie: return find(tie(i, E[args[0]], E[args[1]]));
    }
    throw AlgebraError("unknown operation");
  });
  return out;
}

NamedConcreteAlgebra build_quotient_example(int n) {
  if (n < 1) throw std::invalid_argument("arity must be at least 1");
  auto base = std::make_shared<const Base>(Base::with_classes({0, 1, 1}));
  const Tuple ones(static_cast<std::size_t>(n), 0);

  // functions on {1,2}^n (the two-point class) and their extensions at (0..0)
  std::vector<std::pair<std::string, std::vector<std::pair<Tuple, int>>>> lower;
  lower.push_back({"z", {}});
  std::vector<Tuple> cube;
  for (int code = 0; code < (1 << n); ++code) {
    Tuple x;
    for (int k = n - 1; k >= 0; --k) x.push_back(1 + ((code >> k) & 1));
    cube.push_back(x);
  }
  for (int i = 1; i <= n; ++i) {
    std::vector<std::pair<Tuple, int>> pairs;
    for (const Tuple& x : cube) pairs.emplace_back(x, x[i - 1]);
    lower.push_back({"p" + std::to_string(i), pairs});
  }
  for (int c : {1, 2}) {
    std::vector<std::pair<Tuple, int>> pairs;
    for (const Tuple& x : cube) pairs.emplace_back(x, c);
    lower.push_back({"c" + std::to_string(c + 1), pairs});
  }

  NamedConcreteAlgebra out;
  std::vector<PartialFunction> elements;
  for (bool with_point : {false, true})
    for (auto [name, pairs] : lower) {
      if (with_point) pairs.emplace_back(ones, 0);
      elements.push_back(PartialFunction::from_pairs(base, n, pairs));
      out.names.push_back(with_point ? name + "u" : name);
    }
  const Signature sig(n, {OpFamily::comp, OpFamily::adom});
  ConcreteAlgebra closed = generate_subalgebra(elements, sig);
  if (closed.elements.size() != elements.size())
    throw std::logic_error("example algebra is not closed under comp and adom");
  out.alg = std::move(closed);
  return out;
}

std::vector<int> quotient_example_partition(int n) {
  // z | p1..pn c2 c3 | zu | p1u | ... | c3u
  std::vector<int> out;
  out.push_back(0);
  for (int k = 0; k < n + 2; ++k) out.push_back(1);
  for (int k = 0; k < n + 3; ++k) out.push_back(2 + k);
  return out;
}

OnePointExample build_one_point_example(int n) {
  auto one = std::make_shared<const Base>(Base::square(1));
  const Signature sig(n, {OpFamily::comp, OpFamily::adom});
  NamedConcreteAlgebra A{generate_subalgebra({zero(one, n)}, sig), {"z", "t"}};
  if (A.alg.elements.size() != 2) throw std::logic_error("one-point algebra should have two elements");
  FiniteAlgebra tables = to_finite_algebra(A.alg, "A", A.names);
  OnePointExample out{std::move(A), product({tables, tables})};
  return out;
}

}  // namespace mpf
