#pragma once

// Random bases, partial functions and generated algebras for property tests.

#include <random>

#include "mpf/pfun.hpp"

namespace testgen {

/// Random E-partition in restricted-growth form.
inline mpf::BasePtr random_base(std::mt19937& rng, int max_size) {
  int size = std::uniform_int_distribution<int>(1, max_size)(rng);
  std::vector<int> eclass;
  int classes = 0;
  for (int x = 0; x < size; ++x) {
    int c = std::uniform_int_distribution<int>(0, classes)(rng);
    if (c == classes) ++classes;
    eclass.push_back(c);
  }
  return std::make_shared<const mpf::Base>(mpf::Base::with_classes(eclass));
}

inline mpf::PartialFunction random_function(std::mt19937& rng, const mpf::BasePtr& base, int n,
                                            double density = 0.5) {
  std::bernoulli_distribution defined(density);
  std::vector<mpf::PartialFunction::Entry> graph;
  mpf::PartialFunction probe(base, n);
  for (auto code : mpf::uniform_codes(*base, n)) {
    if (!defined(rng)) continue;
    int cls = base->eclass[probe.decode(code)[0]];
    std::vector<int> pts;
    for (int p = 0; p < base->size; ++p)
      if (base->eclass[p] == cls) pts.push_back(p);
    graph.push_back({code, pts[rng() % pts.size()]});
  }
  return mpf::PartialFunction::from_sorted(base, n, std::move(graph));
}

/// Element cap that keeps brute-force checking of the 3- to 4-variable
/// sentences fast at each arity.
inline std::size_t element_cap(int n) { return n == 1 ? 24 : n == 2 ? 14 : 8; }

/// Subalgebra generated by one or two random functions; retried until the
/// closure has between `min_size` and `cap` elements.
inline mpf::ConcreteAlgebra random_algebra(std::mt19937& rng, const mpf::Signature& sig,
                                           int max_base, std::size_t cap, std::size_t min_size = 1) {
  const int n = sig.arity();
  while (true) {
    auto base = random_base(rng, max_base);
    std::vector<mpf::PartialFunction> gens;
    int count = std::uniform_int_distribution<int>(1, 2)(rng);
    double density = std::uniform_real_distribution<double>(0.1, 0.9)(rng);
    for (int k = 0; k < count; ++k) gens.push_back(random_function(rng, base, n, density));
    try {
      auto alg = mpf::generate_subalgebra(gens, sig, cap);
      if (alg.elements.size() >= min_size) return alg;
    } catch (const mpf::ClosureOverflow&) {
    }
  }
}

}  // namespace testgen
