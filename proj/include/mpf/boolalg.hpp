#pragma once

// The Boolean algebra of A-elements of a finite algebra: products, sums,
// complements, the maps between the A_i-element algebras, atoms and filters.

#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mpf/finalg.hpp"

namespace mpf {

/// A law that failed on the carrier, with the offending elements by name.
struct LatticeFailure {
  std::string law;
  std::vector<std::pair<std::string, std::string>> witness;

  std::string format() const;
};

class LatticeError : public std::runtime_error {
 public:
  explicit LatticeError(LatticeFailure f)
      : std::runtime_error("Boolean algebra of A-elements: " + f.format()), failure_(std::move(f)) {}
  const LatticeFailure& failure() const { return failure_; }

 private:
  LatticeFailure failure_;
};

/// Sorted element indices of the carrier that lie in the filter.
struct Filter {
  std::vector<int> members;
  bool contains(int x) const;
};

struct Ultrafilter {
  int atom = -1;
  std::vector<int> members;  ///< every carrier element above the atom
  bool contains(int x) const;
};

/// Carrier {A_1 a}. The algebra must provide comp and adom.
class AElementLattice {
 public:
  /// Builds and verifies; throws LatticeError on the first law that fails.
  static AElementLattice build(const FiniteAlgebra& host);
  /// Builds without verifying.
  static AElementLattice unchecked(const FiniteAlgebra& host);

  const FiniteAlgebra& host() const { return host_; }
  const std::vector<int>& carrier() const { return carrier_; }
  bool contains(int x) const { return in_carrier_.at(x); }
  /// True when x = A_i y for some y.
  bool is_a_element(int i, int x) const;

  int top() const { return host_.proj(1); }
  int bottom() const { return host_.zero(); }
  int complement(int alpha) const;
  int bullet(int alpha, int beta) const;
  int plus(int alpha, int beta) const;
  /// alpha * beta = alpha.
  bool below(int alpha, int beta) const { return bullet(alpha, beta) == alpha; }

  /// A_i y -> A_j y for x an A_i-element.
  int theta(int j, int i, int x) const;
  /// <theta_11 alpha .. theta_n1 alpha>
  std::vector<int> bold(int alpha) const;

  /// Minimal nonzero carrier elements, ascending.
  std::vector<int> atoms() const;
  /// Principal filters of the atoms, in atom order.
  std::vector<Ultrafilter> ultrafilters() const;
  /// Upward closure of the meet of `gens` (top when empty); nullopt when that
  /// meet is the bottom.
  std::optional<Filter> filter_generated(const std::vector<int>& gens) const;
  /// Least element of a filter.
  int minimum(const Filter& f) const;
  /// The ultrafilter of the least atom below the filter's minimum.
  Ultrafilter extend(const Filter& f) const;
  Ultrafilter principal(int atom) const;

  /// First failing Boolean law or property of the theta maps, if any.
  std::optional<LatticeFailure> verify() const;

  /// `atoms: ...` and `ultrafilter k: ...` lines.
  void dump(std::ostream& out) const;

 private:
  explicit AElementLattice(const FiniteAlgebra& host);
  void require(int alpha) const;

  FiniteAlgebra host_;
  std::vector<int> carrier_;
  std::vector<bool> in_carrier_;
  std::vector<int> preimage_;          ///< least y with A_1 y = alpha, per carrier element
  std::vector<std::vector<int>> ai_;   ///< ai_[i-1][x] = least y with A_i y = x, or -1
};

}  // namespace mpf
