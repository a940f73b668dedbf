#pragma once

// Random terms over every operation family.

#include <random>

#include "mpf/terms.hpp"

namespace testgen {

inline mpf::Term random_term(std::mt19937& rng, int n, int depth) {
  using mpf::Term;
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 9);
  std::uniform_int_distribution<int> idx(1, n);
  const char* names[] = {"a", "b", "c2", "x_1"};
  switch (pick(rng)) {
    case 0: return Term::var(names[rng() % 4]);
    case 1: return Term::zero();
    case 2: return Term::proj(idx(rng));
    case 3: {
      std::vector<Term> args;
      for (int i = 0; i < n; ++i) args.push_back(random_term(rng, n, depth - 1));
      return Term::comp(std::move(args), random_term(rng, n, depth - 1));
    }
    case 4: return Term::meet(random_term(rng, n, depth - 1), random_term(rng, n, depth - 1));
    case 5: return Term::dom(idx(rng), random_term(rng, n, depth - 1));
    case 6: return Term::adom(idx(rng), random_term(rng, n, depth - 1));
    case 7: return Term::fix(idx(rng), random_term(rng, n, depth - 1));
    case 8:
      return Term::tie(idx(rng), random_term(rng, n, depth - 1), random_term(rng, n, depth - 1));
    default: return Term::pref(random_term(rng, n, depth - 1), random_term(rng, n, depth - 1));
  }
}

}  // namespace testgen
