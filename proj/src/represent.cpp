#include "mpf/represent.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <unordered_set>

namespace mpf {

namespace {

std::size_t power(std::size_t s, int k) {
  std::size_t out = 1;
  for (int j = 0; j < k; ++j) out *= s;
  return out;
}

// Decodes idx into `digits` base s, most significant first.
void digits_of(std::size_t idx, std::size_t s, std::vector<int>& digits) {
  for (std::size_t k = digits.size(); k-- > 0;) {
    digits[k] = static_cast<int>(idx % s);
    idx /= s;
  }
}

std::string call(const FiniteAlgebra& alg, const std::string& op, const std::vector<int>& args, int tail = -1) {
  std::string out = op + "(";
  for (std::size_t k = 0; k < args.size(); ++k) out += (k ? "," : "") + alg.element_name(args[k]);
  if (tail >= 0) out += ";" + alg.element_name(tail);
  return out + ")";
}

// Checks one operation family of `alg` against the concrete operation on
// `images`. Elements whose image is not yet known (nullptr) are skipped.
template <class ImageOf>
std::optional<std::string> check_family(const FiniteAlgebra& alg, OpFamily f, const BasePtr& base, int n,
                                        ImageOf image) {
  const std::size_t s = static_cast<std::size_t>(alg.size());
  auto mismatch = [&](int expected, const PartialFunction& got) {
    const PartialFunction* want = image(expected);
    return want && !(*want == got);
  };
  switch (f) {
    case OpFamily::comp: {
      std::vector<int> digits(static_cast<std::size_t>(n) + 1);
      std::vector<PartialFunction> fs;
      for (std::size_t idx = 0; idx < power(s, n + 1); ++idx) {
        digits_of(idx, s, digits);
        fs.clear();
        bool known = true;
        for (int k = 0; k <= n && known; ++k) {
          const PartialFunction* p = image(digits[k]);
          if (!p) known = false;
          else if (k < n) fs.push_back(*p);
        }
        if (!known) continue;
        std::vector<int> args(digits.begin(), digits.end() - 1);
        if (mismatch(alg.comp(args, digits[n]), compose(fs, *image(digits[n]))))
          return call(alg, "comp", args, digits[n]);
      }
      return std::nullopt;
    }
    case OpFamily::zero:
      if (const PartialFunction* z = image(alg.zero()); z && !z->empty()) return std::string("zero");
      return std::nullopt;
    case OpFamily::proj:
      for (int i = 1; i <= n; ++i)
        if (mismatch(alg.proj(i), proj(i, base, n))) return "pi" + std::to_string(i);
      return std::nullopt;
    case OpFamily::adom:
    case OpFamily::dom:
    case OpFamily::fix:
      for (int i = 1; i <= n; ++i)
        for (int a = 0; a < alg.size(); ++a) {
          const PartialFunction* p = image(a);
          if (!p) continue;
          PartialFunction r = f == OpFamily::adom ? adom(i, *p) : f == OpFamily::dom ? dom(i, *p) : fixset(i, *p);
          if (mismatch(alg.unary(f, i, a), r)) return call(alg, std::string(family_name(f)) + std::to_string(i), {a});
        }
      return std::nullopt;
    case OpFamily::meet:
    case OpFamily::pref:
    case OpFamily::tie: {
      const int lo = f == OpFamily::tie ? 1 : 0;
      const int hi = f == OpFamily::tie ? n : 0;
      for (int i = lo; i <= hi; ++i)
        for (int a = 0; a < alg.size(); ++a)
          for (int b = 0; b < alg.size(); ++b) {
            const PartialFunction* p = image(a);
            const PartialFunction* q = image(b);
            if (!p || !q) continue;
            PartialFunction r = f == OpFamily::meet ? meet(*p, *q) : f == OpFamily::pref ? pref(*p, *q) : tie(i, *p, *q);
            if (mismatch(alg.binary(f, i, a, b), r))
              return call(alg, std::string(family_name(f)) + (i ? std::to_string(i) : ""), {a, b});
          }
      return std::nullopt;
    }
  }
  return std::nullopt;
}

const OpFamily kFamilies[] = {OpFamily::comp, OpFamily::zero, OpFamily::proj, OpFamily::adom, OpFamily::dom,
                              OpFamily::fix,  OpFamily::meet, OpFamily::tie,  OpFamily::pref};

// First operation (over everything `alg` provides) that the images violate.
std::optional<std::string> check_homomorphism(const FiniteAlgebra& alg, const std::vector<PartialFunction>& images,
                                              const BasePtr& base, int n) {
  auto image = [&](int e) { return &images[e]; };
  for (OpFamily f : kFamilies)
    if (alg.provides(f))
      if (auto bad = check_family(alg, f, base, n, image)) return bad;
  return std::nullopt;
}

std::vector<int> key_of(const AElementLattice& lat, int atom) {
  const FiniteAlgebra& h = lat.host();
  const std::vector<int> e = lat.bold(atom);
  std::vector<int> key(static_cast<std::size_t>(h.size()));
  for (int a = 0; a < h.size(); ++a) key[a] = h.comp(e, a);
  return key;
}

}  // namespace

Congruence congruence_of(const AElementLattice& lat, const Ultrafilter& U) {
  const FiniteAlgebra& h = lat.host();
  const int s = h.size();
  const int n = h.arity();
  Congruence c;
  c.atom = U.atom;
  const std::vector<int> key = key_of(lat, U.atom);
  std::map<int, int> by_key;
  c.cls.resize(static_cast<std::size_t>(s));
  for (int a = 0; a < s; ++a) {
    auto [it, fresh] = by_key.emplace(key[a], static_cast<int>(c.reps.size()));
    if (fresh) c.reps.push_back(a);
    c.cls[a] = it->second;
  }
  c.zero_class = c.cls[h.zero()];

  // right-congruence law, one coordinate at a time along each class
  std::vector<int> next(static_cast<std::size_t>(s), -1);
  std::vector<int> last(c.reps.size(), -1);
  for (int a = 0; a < s; ++a) {
    if (last[c.cls[a]] >= 0) next[last[c.cls[a]]] = a;
    last[c.cls[a]] = a;
  }
  std::vector<int> rest(static_cast<std::size_t>(n));
  std::vector<int> args(static_cast<std::size_t>(n));
  const std::size_t total = power(static_cast<std::size_t>(s), n);
  for (int x = 0; x < s; ++x) {
    const int y = next[x];
    if (y < 0) continue;
    for (int i = 0; i < n; ++i)
      for (std::size_t idx = 0; idx < total; ++idx) {
        digits_of(idx, static_cast<std::size_t>(s), rest);  // rest[0..n-2] other args, rest[n-1] tail
        int k = 0;
        for (int j = 0; j < n; ++j) args[j] = j == i ? x : rest[k++];
        const int tail = rest[n - 1];
        const int left = h.comp(args, tail);
        args[i] = y;
        const int right = h.comp(args, tail);
        if (c.cls[left] != c.cls[right])
          throw RepresentationError("not a right congruence at " + call(h, "comp", args, tail));
      }
  }
  return c;
}

UltrafilterImage theta_U(const AElementLattice& lat, const Ultrafilter& U) {
  const FiniteAlgebra& h = lat.host();
  const int n = h.arity();
  UltrafilterImage out;
  out.cong = congruence_of(lat, U);
  std::vector<int> point_of(out.cong.reps.size(), -1);
  for (int k = 0; k < static_cast<int>(out.cong.reps.size()); ++k)
    if (k != out.cong.zero_class) {
      point_of[k] = static_cast<int>(out.point_class.size());
      out.point_class.push_back(k);
    }
  const int m = static_cast<int>(out.point_class.size());
  out.base = std::make_shared<const Base>(Base::square(m));
  const std::size_t tuples = power(static_cast<std::size_t>(m), n);
  std::vector<int> pts(static_cast<std::size_t>(n));
  std::vector<int> args(static_cast<std::size_t>(n));
  for (int b = 0; b < h.size(); ++b) {
    std::vector<PartialFunction::Entry> graph;
    for (std::size_t code = 0; code < tuples; ++code) {
      digits_of(code, static_cast<std::size_t>(m), pts);
      for (int j = 0; j < n; ++j) args[j] = out.cong.reps[out.point_class[pts[j]]];
      const int v = out.cong.cls[h.comp(args, b)];
      if (v != out.cong.zero_class) graph.push_back({code, point_of[v]});
    }
    out.images.push_back(PartialFunction::from_sorted(out.base, n, std::move(graph)));
  }
  if (auto bad = check_homomorphism(h, out.images, out.base, n))
    throw RepresentationError("theta_U is not a homomorphism at " + *bad);
  for (int a = 0; a < h.size(); ++a) {
    if (out.cong.cls[a] == out.cong.zero_class) continue;
    for (int b = 0; b < h.size(); ++b)
      if (out.cong.cls[a] != out.cong.cls[b] && out.images[a] == out.images[b])
        throw RepresentationError("theta_U does not separate " + h.element_name(a) + " and " + h.element_name(b));
  }
  return out;
}

Ultrafilter separating_ultrafilter(const AElementLattice& lat, int a, int b) {
  const FiniteAlgebra& h = lat.host();
  if (leq(h, a, b))
    throw std::invalid_argument(h.element_name(a) + " <= " + h.element_name(b) + ": nothing to separate");
  std::vector<int> gens;
  for (int alpha : lat.carrier()) {
    const std::vector<int> bold = lat.bold(alpha);
    const int on_a = h.comp(bold, a);
    if (on_a == a) gens.push_back(alpha);
    if (on_a == h.comp(bold, b)) gens.push_back(lat.complement(alpha));
  }
  auto f = lat.filter_generated(gens);
  if (!f)
    throw RepresentationError("generators for " + h.element_name(a) + " and " + h.element_name(b) +
                              " meet in the bottom");
  Ultrafilter u = lat.extend(*f);
  const std::vector<int> key = key_of(lat, u.atom);
  if (key[a] == key[h.zero()] || key[a] == key[b])
    throw RepresentationError("ultrafilter fails to separate " + h.element_name(a) + " and " + h.element_name(b));
  return u;
}

RepresentOutcome represent(const FiniteAlgebra& alg, const Signature& sig, bool injective, const HoldsOptions& opts) {
  RepresentOutcome out{check_axioms(alg, sig, injective, opts), std::nullopt};
  if (!out.report.all_pass()) return out;

  const FiniteAlgebra host = alg.reduct(out.report.suite.sig);
  const int n = host.arity();
  const int s = host.size();
  std::optional<AElementLattice> lat;
  try {
    lat.emplace(AElementLattice::build(host));
  } catch (const LatticeError& e) {
    throw RepresentationError(e.what());
  }

  Representation rep;
  rep.host_name = alg.name();
  rep.sig = out.report.suite.sig;
  rep.injective = injective;
  rep.n = n;
  std::vector<std::vector<PartialFunction>> parts;
  for (int a = 0; a < s; ++a)
    for (int b = 0; b < s; ++b) {
      if (leq(host, a, b)) continue;
      const Ultrafilter u = separating_ultrafilter(*lat, a, b);
      rep.provenance.push_back({a, b, u.atom});
      if (std::find(rep.atoms.begin(), rep.atoms.end(), u.atom) != rep.atoms.end()) continue;
      rep.atoms.push_back(u.atom);
      parts.push_back(theta_U(*lat, u).images);
    }
  if (parts.empty()) {
    // only the one-element algebra has no separated pair
    rep.base = std::make_shared<const Base>(Base::square(0));
    rep.images.assign(static_cast<std::size_t>(s), PartialFunction(rep.base, n));
  } else {
    rep.images = disjoint_union(parts);
    rep.base = rep.images.front().base_ptr();
  }

  // drop points no graph mentions, keeping the result only if it still verifies
  std::vector<bool> used(static_cast<std::size_t>(rep.base->size), false);
  for (const auto& f : rep.images)
    for (const auto& e : f.graph()) {
      used[e.value] = true;
      for (int p : f.decode(e.code)) used[p] = true;
    }
  if (std::find(used.begin(), used.end(), false) != used.end()) {
    Representation pruned = rep;
    pruned.images = restrict_points(rep.images, used);
    pruned.base = pruned.images.front().base_ptr();
    if (verify_representation(host, pruned).all_pass()) rep = std::move(pruned);
  }

  RepresentationCheck check = verify_representation(host, rep);
  if (!check.all_pass()) throw RepresentationError("assembled representation fails verification:\n" + check.format());
  out.rep = std::move(rep);
  return out;
}

std::string CheckLine::format() const {
  std::string out = name + (pass ? " PASS" : " FAIL");
  if (!detail.empty()) out += " " + detail;
  return out;
}

bool RepresentationCheck::all_pass() const {
  return std::all_of(lines.begin(), lines.end(), [](const CheckLine& l) { return l.pass; });
}

std::string RepresentationCheck::format() const {
  std::string out;
  for (const CheckLine& l : lines) out += l.format() + "\n";
  out += std::string("square ") + (square ? "yes" : "no") + "\n";
  return out;
}

RepresentationCheck verify_representation(const FiniteAlgebra& alg, const Representation& rep) {
  RepresentationCheck check;
  const int s = alg.size();
  check.square = rep.base->is_square();
  auto line = [&](std::string name, bool pass, std::string detail = {}) {
    check.lines.push_back({std::move(name), pass, std::move(detail)});
    return pass;
  };
  bool shaped = static_cast<int>(rep.images.size()) == s;
  std::string why = shaped ? "" : std::to_string(rep.images.size()) + " images for " + std::to_string(s) + " elements";
  for (std::size_t e = 0; shaped && e < rep.images.size(); ++e)
    if (rep.images[e].arity() != rep.n || !(rep.images[e].base() == *rep.base)) {
      shaped = false;
      why = "image of " + alg.element_name(static_cast<int>(e)) + " has the wrong base or arity";
    }
  if (!line("images", shaped, why)) return check;

  std::unordered_map<PartialFunction, int, PartialFunctionHash> seen;
  std::string clash;
  for (int e = 0; e < s && clash.empty(); ++e) {
    auto [it, fresh] = seen.emplace(rep.images[e], e);
    if (!fresh) clash = alg.element_name(it->second) + " and " + alg.element_name(e) + " share an image";
  }
  line("bijective", clash.empty(), clash);

  if (!alg.sig().contains(rep.sig)) {
    line("signature", false, "algebra lacks " + rep.sig.to_string());
    return check;
  }
  const FiniteAlgebra host = alg.reduct(rep.sig);
  auto image = [&](int e) { return &rep.images[e]; };
  for (OpFamily f : kFamilies) {
    if (!host.provides(f)) continue;
    auto bad = check_family(host, f, rep.base, rep.n, image);
    line("homomorphism " + std::string(family_name(f)), !bad, bad ? "at " + *bad : "");
  }
  const std::uint64_t cube = static_cast<std::uint64_t>(s) * s * s;
  line("cube bound", static_cast<std::uint64_t>(rep.base->size) <= cube,
       std::to_string(rep.base->size) + " <= " + std::to_string(cube));
  if (rep.injective) {
    std::string bad;
    for (int e = 0; e < s && bad.empty(); ++e)
      if (!is_injective_fn(rep.images[e])) bad = alg.element_name(e);
    line("injective images", bad.empty(), bad.empty() ? "" : "image of " + bad + " is not injective");
  }
  return check;
}

std::vector<int> injective_elements(const FiniteAlgebra& alg, const HoldsOptions& opts) {
  const auto sentences = injectivity_sentences(alg.arity());
  std::vector<int> out;
  for (int e = 0; e < alg.size(); ++e) {
    HoldsOptions o = opts;
    o.fixed["a"] = e;
    bool ok = true;
    for (const auto& q : sentences)
      if (ok && !holds(alg, q, o).holds) ok = false;
    if (ok) out.push_back(e);
  }
  return out;
}

std::vector<int> tie_injective_elements(const FiniteAlgebra& alg, const HoldsOptions& opts) {
  if (!alg.provides(OpFamily::meet) || !alg.provides(OpFamily::tie))
    throw AlgebraError("tie-injectivity needs meet");
  const auto sentences = tie_injectivity_sentences(alg.arity());
  std::vector<int> out;
  for (int e = 0; e < alg.size(); ++e) {
    HoldsOptions o = opts;
    o.fixed["a"] = e;
    bool ok = true;
    for (const auto& q : sentences)
      if (ok && !holds(alg, q, o).holds) ok = false;
    if (ok) out.push_back(e);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Square search

namespace {

class SquareSearch {
 public:
  SquareSearch(const FiniteAlgebra& alg, BasePtr base, int n, std::uint64_t budget)
      : alg_(alg), base_(std::move(base)), n_(n), budget_(budget) {
    codes_ = uniform_codes(*base_, n_);
  }

  std::optional<std::vector<PartialFunction>> run() {
    std::vector<std::optional<PartialFunction>> img(static_cast<std::size_t>(alg_.size()));
    if (alg_.provides(OpFamily::zero)) img[alg_.zero()] = PartialFunction(base_, n_);
    if (alg_.provides(OpFamily::proj))
      for (int i = 1; i <= n_; ++i)
        if (!assign(img, alg_.proj(i), proj(i, base_, n_))) return std::nullopt;
    return search(std::move(img));
  }

 private:
  bool assign(std::vector<std::optional<PartialFunction>>& img, int e, const PartialFunction& f) {
    if (img[e]) return *img[e] == f;
    for (const auto& g : img)
      if (g && *g == f) return false;  // images must be distinct
    img[e] = f;
    return true;
  }

  // Forces every result whose arguments have images; false on a contradiction.
  bool propagate(std::vector<std::optional<PartialFunction>>& img) {
    bool changed = true;
    while (changed) {
      changed = false;
      for (OpFamily f : kFamilies) {
        if (!alg_.provides(f) || f == OpFamily::zero || f == OpFamily::proj) continue;
        bool ok = true;
        auto image = [&](int e) -> const PartialFunction* { return img[e] ? &*img[e] : nullptr; };
        // Re-run the family check, assigning unknown results as we go.
        const std::size_t s = static_cast<std::size_t>(alg_.size());
        auto force = [&](int target, const PartialFunction& r) {
          if (!img[target]) {
            if (!assign(img, target, r)) ok = false;
            else changed = true;
          } else if (!(*img[target] == r)) {
            ok = false;
          }
        };
        if (f == OpFamily::comp) {
          std::vector<int> digits(static_cast<std::size_t>(n_) + 1);
          std::vector<PartialFunction> fs;
          for (std::size_t idx = 0; ok && idx < power(s, n_ + 1); ++idx) {
            digits_of(idx, s, digits);
            fs.clear();
            bool known = true;
            for (int k = 0; k < n_ && known; ++k) {
              if (!image(digits[k])) known = false;
              else fs.push_back(*image(digits[k]));
            }
            if (!known || !image(digits[n_])) continue;
            std::vector<int> args(digits.begin(), digits.end() - 1);
            force(alg_.comp(args, digits[n_]), compose(fs, *image(digits[n_])));
          }
        } else if (f == OpFamily::adom || f == OpFamily::dom || f == OpFamily::fix) {
          for (int i = 1; i <= n_ && ok; ++i)
            for (int a = 0; a < alg_.size() && ok; ++a) {
              const PartialFunction* p = image(a);
              if (!p) continue;
              force(alg_.unary(f, i, a), f == OpFamily::adom ? adom(i, *p) : f == OpFamily::dom ? dom(i, *p) : fixset(i, *p));
            }
        } else {
          const int lo = f == OpFamily::tie ? 1 : 0;
          const int hi = f == OpFamily::tie ? n_ : 0;
          for (int i = lo; i <= hi && ok; ++i)
            for (int a = 0; a < alg_.size() && ok; ++a)
              for (int b = 0; b < alg_.size() && ok; ++b) {
                const PartialFunction* p = image(a);
                const PartialFunction* q = image(b);
                if (!p || !q) continue;
                force(alg_.binary(f, i, a, b),
                      f == OpFamily::meet ? meet(*p, *q) : f == OpFamily::pref ? pref(*p, *q) : tie(i, *p, *q));
              }
        }
        if (!ok) return false;
      }
    }
    return true;
  }

  std::optional<std::vector<PartialFunction>> search(std::vector<std::optional<PartialFunction>> img) {
    if (!propagate(img)) return std::nullopt;
    auto hole = std::find_if(img.begin(), img.end(), [](const auto& g) { return !g.has_value(); });
    if (hole == img.end()) {
      std::vector<PartialFunction> out;
      for (auto& g : img) out.push_back(std::move(*g));
      return out;
    }
    const int e = static_cast<int>(hole - img.begin());
    const std::size_t m = codes_.size();
    const int k = base_->size;
    std::vector<int> choice(m, 0);  // 0 = undefined, v+1 = value v
    while (true) {
      if (++tried_ > budget_) throw BudgetExceeded("square representation search exceeded its budget");
      std::vector<PartialFunction::Entry> graph;
      for (std::size_t t = 0; t < m; ++t)
        if (choice[t]) graph.push_back({codes_[t], choice[t] - 1});
      PartialFunction f = PartialFunction::from_sorted(base_, n_, std::move(graph));
      auto next = img;
      if (assign(next, e, f))
        if (auto found = search(std::move(next))) return found;
      std::size_t t = m;
      while (t > 0 && ++choice[t - 1] == k + 1) choice[--t] = 0;
      if (t == 0) return std::nullopt;
    }
  }

  const FiniteAlgebra& alg_;
  BasePtr base_;
  int n_;
  std::uint64_t budget_;
  std::uint64_t tried_ = 0;
  std::vector<PartialFunction::Code> codes_;
};

}  // namespace

std::optional<Representation> find_square_representation(const FiniteAlgebra& alg, const Signature& sig,
                                                         int max_base, std::uint64_t budget) {
  const FiniteAlgebra host = alg.reduct(sig);
  for (int k = 1; k <= max_base; ++k) {
    auto base = std::make_shared<const Base>(Base::square(k));
    SquareSearch search(host, base, host.arity(), budget);
    if (auto images = search.run()) {
      Representation rep;
      rep.host_name = alg.name();
      rep.sig = sig;
      rep.base = base;
      rep.n = host.arity();
      rep.images = std::move(*images);
      return rep;
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Files

Representation read_representation(std::istream& in, const FiniteAlgebra& alg) {
  std::string host;
  std::optional<bool> injective;
  std::optional<Signature> sig;
  std::map<std::string, std::string> mapping;
  std::optional<int> n_seen;
  auto extra = [&](const std::vector<std::string>& tok, int line) {
    if (tok[0] == "represents") {
      if (tok.size() != 2 || !host.empty()) throw FormatError("bad 'represents' line", line);
      host = tok[1];
    } else if (tok[0] == "mode") {
      if (tok.size() != 2 || injective || (tok[1] != "plain" && tok[1] != "injective"))
        throw FormatError("expected 'mode plain' or 'mode injective'", line);
      injective = tok[1] == "injective";
    } else if (tok[0] == "signature") {
      if (tok.size() < 2 || sig) throw FormatError("bad 'signature' line", line);
      std::string list;
      for (std::size_t k = 1; k < tok.size(); ++k) list += (k > 1 ? "," : "") + tok[k];
      try {
        sig = Signature::parse(list, alg.arity());
      } catch (const std::exception& e) {
        throw FormatError(e.what(), line);
      }
    } else if (tok[0] == "map") {
      if (tok.size() != 4 || tok[2] != "->") throw FormatError("expected 'map <element> -> <function>'", line);
      if (alg.element_index(tok[1]) < 0) throw FormatError("unknown element '" + tok[1] + "'", line);
      if (!mapping.emplace(tok[1], tok[3]).second) throw FormatError("element '" + tok[1] + "' mapped twice", line);
    } else {
      return false;
    }
    return true;
  };
  PfunFile file = read_pfun(in, extra);
  if (host.empty()) throw FormatError("missing 'represents'", 0);
  if (host != alg.name())
    throw FormatError("file represents '" + host + "', not '" + alg.name() + "'", 0);
  if (file.n != alg.arity()) throw FormatError("arity differs from the algebra", 0);
  Representation rep;
  rep.host_name = host;
  rep.sig = sig ? *sig : alg.sig();
  rep.injective = injective.value_or(false);
  rep.base = file.base;
  rep.n = file.n;
  for (int e = 0; e < alg.size(); ++e) {
    auto it = mapping.find(alg.element_name(e));
    if (it == mapping.end()) throw FormatError("no map line for '" + alg.element_name(e) + "'", 0);
    const PartialFunction* f = file.find(it->second);
    if (!f) throw FormatError("unknown function '" + it->second + "'", 0);
    rep.images.push_back(*f);
  }
  return rep;
}

void write_representation(std::ostream& out, const FiniteAlgebra& alg, const Representation& rep) {
  out << "represents " << alg.name() << "\n";
  out << "mode " << (rep.injective ? "injective" : "plain") << "\n";
  out << "signature";
  for (OpFamily f : rep.sig.families()) out << ' ' << (f == OpFamily::proj ? "pi" : family_name(f));
  out << "\n";
  PfunFile file{rep.base, rep.n, {}};
  for (int e = 0; e < alg.size(); ++e) file.funs.emplace_back(alg.element_name(e), rep.images[e]);
  write_pfun(out, file);
  for (int e = 0; e < alg.size(); ++e) out << "map " << alg.element_name(e) << " -> " << alg.element_name(e) << "\n";
}

}  // namespace mpf
