#include "doctest.h"

#include <random>
#include <sstream>

#include "mpf/pfun.hpp"
#include "support/oracle.hpp"
#include "support/random_algebras.hpp"

using namespace mpf;

namespace {

BasePtr square(int size) { return std::make_shared<const Base>(Base::square(size)); }

PartialFunction fn(const BasePtr& b, int n, std::vector<std::pair<Tuple, int>> pairs) {
  return PartialFunction::from_pairs(b, n, pairs);
}

// Every entry is E-uniform, values in range, codes strictly increasing.
bool well_formed(const PartialFunction& f) {
  const Base& b = f.base();
  for (std::size_t k = 0; k < f.graph().size(); ++k) {
    const auto& e = f.graph()[k];
    if (k && f.graph()[k - 1].code >= e.code) return false;
    if (e.value < 0 || e.value >= b.size) return false;
    for (int p : f.decode(e.code))
      if (!b.equivalent(p, e.value)) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("composition examples") {
  auto b = square(2);
  auto f = fn(b, 2, {{{0, 0}, 1}});
  std::vector<PartialFunction> ps = {proj(1, b, 2), proj(2, b, 2)};
  CHECK(compose(ps, f) == f);
  std::vector<PartialFunction> ff = {f, f};
  CHECK(compose(ff, proj(1, b, 2)) == fn(b, 2, {{{0, 0}, 1}}));
  CHECK(compose(ff, zero(b, 2)).empty());
}

TEST_CASE("projection on a non-square base covers only E-uniform tuples") {
  auto b = std::make_shared<const Base>(Base::with_classes({0, 1, 1}));
  CHECK(proj(1, b, 2) ==
        fn(b, 2, {{{0, 0}, 0}, {{1, 1}, 1}, {{1, 2}, 1}, {{2, 1}, 2}, {{2, 2}, 2}}));
  CHECK_FALSE(b->is_square());
}

TEST_CASE("domain, antidomain, fixset, tie and preferential union examples") {
  auto b = square(2);
  auto f = fn(b, 2, {{{0, 0}, 1}});
  CHECK(adom(1, f) == fn(b, 2, {{{0, 1}, 0}, {{1, 0}, 1}, {{1, 1}, 1}}));
  CHECK(dom(1, f) == fn(b, 2, {{{0, 0}, 0}}));
  CHECK(adom(2, zero(b, 2)) == proj(2, b, 2));
  CHECK(meet(f, f) == f);
  CHECK(meet(f, zero(b, 2)).empty());

  auto g = fn(b, 2, {{{0, 1}, 0}});
  CHECK(fixset(1, g) == g);
  CHECK(fixset(2, g).empty());
  CHECK(tie(1, f, zero(b, 2)) == adom(1, f));

  auto h = fn(b, 2, {{{0, 0}, 0}, {{1, 1}, 0}});
  CHECK(pref(f, h) == fn(b, 2, {{{0, 0}, 1}, {{1, 1}, 0}}));
}

TEST_CASE("graphs reject non-uniform pairs and conflicting values") {
  auto b = std::make_shared<const Base>(Base::with_classes({0, 1, 1}));
  CHECK_THROWS(fn(b, 1, {{{0}, 1}}));
  CHECK_THROWS(fn(b, 1, {{{1}, 1}, {{1}, 2}}));
  CHECK_THROWS_AS((void)(zero(b, 1) == zero(square(3), 1)), BaseMismatch);
}

TEST_CASE("evaluation of terms") {
  auto b = square(2);
  Signature sig = Signature::parse("comp,adom,meet", 2);
  auto f = fn(b, 2, {{{0, 0}, 1}});
  Assignment as{{"a", f}, {"b", f}};
  CHECK(eval_concrete(parse_term("comp(pi1,pi2;b)", sig), as, b, 2) == f);
  CHECK(eval_concrete(parse_term("adom1(adom1(a))", sig), as, b, 2) == dom(1, f));
  CHECK(eval_concrete(parse_term("meet(a,adom1(a))", sig), as, b, 2).empty());
  CHECK_THROWS(eval_concrete(parse_term("c", sig), as, b, 2));
}

TEST_CASE("operations agree with the comprehension oracle") {
  std::mt19937 rng(11);
  for (int round = 0; round < 400; ++round) {
    const int n = 1 + round % 3;
    auto b = testgen::random_base(rng, n == 3 ? 3 : 4);
    std::vector<PartialFunction> fs;
    for (int k = 0; k < n; ++k) fs.push_back(testgen::random_function(rng, b, n, 0.6));
    auto g = testgen::random_function(rng, b, n, 0.6);
    std::vector<oracle::Dense> dfs;
    for (const auto& f : fs) dfs.push_back(oracle::dense(f));
    auto dg = oracle::dense(g);

    auto c = compose(fs, g);
    CHECK(well_formed(c));
    CHECK(oracle::dense(c) == oracle::compose(*b, n, dfs, dg));
    CHECK(oracle::dense(meet(fs[0], g)) == oracle::meet(dfs[0], dg));
    CHECK(oracle::dense(pref(fs[0], g)) == oracle::pref(dfs[0], dg));
    for (int i = 1; i <= n; ++i) {
      for (auto r : {adom(i, g), dom(i, g), fixset(i, g), tie(i, fs[0], g), proj(i, b, n)})
        CHECK(well_formed(r));
      CHECK(oracle::dense(adom(i, g)) == oracle::adom(*b, n, i, dg));
      CHECK(oracle::dense(dom(i, g)) == oracle::dom(*b, n, i, dg));
      CHECK(oracle::dense(fixset(i, g)) == oracle::fix(i, dg));
      CHECK(oracle::dense(tie(i, fs[0], g)) == oracle::tie(*b, n, i, dfs[0], dg));
      CHECK(oracle::dense(proj(i, b, n)) == oracle::proj(*b, n, i));
    }
  }
}

TEST_CASE("definitional expansion preserves values") {
  std::mt19937 rng(5);
  for (int round = 0; round < 200; ++round) {
    const int n = 1 + round % 3;
    Signature sig = Signature::parse("comp,adom,meet", n);
    auto b = testgen::random_base(rng, n == 3 ? 3 : 4);
    Assignment as{{"a", testgen::random_function(rng, b, n)},
                  {"b", testgen::random_function(rng, b, n)},
                  {"x0", testgen::random_function(rng, b, n)}};
    ExpandOptions opts;
    opts.tie = opts.fix = true;
    opts.witness = "x0";
    std::string args = "a";
    for (int k = 1; k < n; ++k) args += ",b";
    const std::string last = std::to_string(n);
    for (const std::string& text : std::vector<std::string>
         {std::string("tie1(a,b)"), "fix1(comp(" + args + ";a))", "dom" + last + "(zero)", "pi1",
          "tie" + last + "(meet(a,b),dom1(b))"}) {
      Term t = parse_term(text, sig);
      CHECK(eval_concrete(t, as, b, n) == eval_concrete(expand_derived(t, sig, opts), as, b, n));
    }
  }
}

TEST_CASE("subalgebra generation") {
  auto one = square(1);
  Signature ca2 = Signature::parse("comp,adom", 2);
  auto A = generate_subalgebra({zero(one, 2)}, ca2);
  CHECK(A.elements.size() == 2);
  CHECK(A.index_of(proj(1, one, 2)) == 1);

  auto b = square(2);
  auto P = generate_subalgebra({proj(1, b, 2)}, Signature::parse("comp", 2));
  CHECK(P.elements.size() == 1);

  CHECK_THROWS_WITH(generate_subalgebra({}, ca2), "at least one generator required");

  std::mt19937 rng(3);
  auto big = testgen::random_function(rng, square(3), 2, 0.5);
  CHECK_THROWS_AS(generate_subalgebra({big}, ca2, 3), ClosureOverflow);
}

TEST_CASE("generated algebras are closed under every operation") {
  std::mt19937 rng(17);
  Signature sig = Signature::parse("comp,adom,meet,pref,fix", 2);
  for (int round = 0; round < 20; ++round) {
    auto alg = testgen::random_algebra(rng, sig, 3, 40);
    for (const auto& f : alg.elements) {
      CHECK(well_formed(f));
      for (int i = 1; i <= 2; ++i) {
        CHECK(alg.index_of(adom(i, f)) >= 0);
        CHECK(alg.index_of(fixset(i, f)) >= 0);
      }
      for (const auto& g : alg.elements) {
        CHECK(alg.index_of(meet(f, g)) >= 0);
        CHECK(alg.index_of(pref(f, g)) >= 0);
        std::vector<PartialFunction> fs = {f, g};
        CHECK(alg.index_of(compose(fs, f)) >= 0);
      }
    }
  }
}

TEST_CASE("injectivity and squareness") {
  auto b = square(2);
  CHECK(is_injective_fn(fn(b, 2, {{{0, 0}, 1}, {{1, 1}, 0}})));
  auto nb = std::make_shared<const Base>(Base::with_classes({0, 1, 1}));
  CHECK_FALSE(is_injective_fn(fn(nb, 2, {{{1, 1}, 1}, {{1, 2}, 1}, {{2, 1}, 1}, {{2, 2}, 1}})));
  CHECK_FALSE(is_square(*nb));
  CHECK(is_square(*b));
}

TEST_CASE("disjoint unions") {
  auto one = square(1);
  std::vector<PartialFunction> A = {zero(one, 2), proj(1, one, 2)};
  auto single = disjoint_union({A});
  CHECK(single[1].base().size == 1);
  CHECK(single[1].size() == 1);

  // A x A: element (s,t) is the union of s on the first copy and t on the second.
  std::vector<PartialFunction> first = {A[0], A[0], A[1], A[1]};
  std::vector<PartialFunction> second = {A[0], A[1], A[0], A[1]};
  auto prod = disjoint_union({first, second});
  CHECK(prod[0].base().size == 2);
  CHECK_FALSE(prod[0].base().is_square());
  CHECK(prod[0].empty());
  CHECK(prod[3] == proj(1, prod[3].base_ptr(), 2));
  CHECK(prod[1].size() == 1);
  CHECK(prod[1].at({1, 1}) == 1);
  // injective on elements since the parts separate them
  for (int x = 0; x < 4; ++x)
    for (int y = x + 1; y < 4; ++y) CHECK_FALSE(prod[x] == prod[y]);
}

TEST_CASE("text format round trip") {
  auto b = std::make_shared<const Base>(Base::with_classes({0, 1, 1}));
  PfunFile file{b, 2, {{"e", zero(b, 2)}, {"p1", proj(1, b, 2)}}};
  std::ostringstream out;
  write_pfun(out, file);
  CHECK(out.str() ==
        "base 3\neclass 0 1 1\nn 2\nfun e :\nfun p1 : (0,0)->0 (1,1)->1 (1,2)->1 (2,1)->2 (2,2)->2\n");
  std::istringstream in("# comment\n" + out.str());
  PfunFile back = read_pfun(in);
  REQUIRE(back.funs.size() == 2);
  CHECK(*back.base == *b);
  CHECK(back.funs[1].second.graph() == file.funs[1].second.graph());

  std::istringstream bad("base 2\neclass 0 1\nn 1\nfun f : (0)->1\n");
  CHECK_THROWS_AS(read_pfun(bad), FormatError);
  std::istringstream arity("base 2\nn 2\nfun f : (0)->1\n");
  CHECK_THROWS_AS(read_pfun(arity), FormatError);
}
