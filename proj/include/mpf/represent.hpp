#pragma once

// Representations of finite algebras as algebras of n-ary partial functions,
// built from the ultrafilters of A-elements, and their verification.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mpf/boolalg.hpp"
#include "mpf/finalg.hpp"
#include "mpf/pfun.hpp"

namespace mpf {

/// A construction step whose checked property failed; the host violates some
/// axiom or the construction is wrong.
class RepresentationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// a ~ b iff <e_1..e_n> o a = <e_1..e_n> o b for the atom e generating U.
struct Congruence {
  int atom = -1;
  std::vector<int> cls;   ///< class id per element, classes ordered by least member
  std::vector<int> reps;  ///< least member per class
  int zero_class = 0;
};

/// Computes the classes and verifies the right-congruence law.
Congruence congruence_of(const AElementLattice& lat, const Ultrafilter& U);

/// theta_U: elements to partial functions on the non-zero classes.
struct UltrafilterImage {
  Congruence cong;
  BasePtr base;                        ///< square, one point per non-zero class
  std::vector<int> point_class;        ///< class id of each point
  std::vector<PartialFunction> images; ///< per element
};

/// Builds theta_U and verifies it is a homomorphism for every operation the
/// host provides.
UltrafilterImage theta_U(const AElementLattice& lat, const Ultrafilter& U);

/// Ultrafilter with a !~ 0 and a !~ b, from the filter generated by
/// {alpha : alpha o a = a} and {A(beta) : beta o a = beta o b}. Requires a not <= b.
Ultrafilter separating_ultrafilter(const AElementLattice& lat, int a, int b);

struct Provenance {
  int a = -1, b = -1;  ///< the pair a not <= b
  int atom = -1;       ///< atom of the ultrafilter used
};

struct Representation {
  std::string host_name;
  Signature sig;
  bool injective = false;
  BasePtr base;
  int n = 1;
  std::vector<PartialFunction> images;  ///< by element index
  std::vector<Provenance> provenance;   ///< one per separated pair, in pair order
  std::vector<int> atoms;               ///< distinct ultrafilters used, in first-use order

  bool square() const { return base->is_square(); }
};

struct RepresentOutcome {
  Report report;                       ///< the suite check that gates construction
  std::optional<Representation> rep;   ///< present iff every sentence passed
};

/// Checks the suite for `sig` (and the injective one when `injective`), then
/// assembles the disjoint union of theta_U over the distinct separating
/// ultrafilters and verifies the result. Throws RepresentationError when a
/// verified step fails on an algebra that passed its suite.
RepresentOutcome represent(const FiniteAlgebra& alg, const Signature& sig, bool injective,
                           const HoldsOptions& opts = {});

struct CheckLine {
  std::string name;
  bool pass = true;
  std::string detail;

  std::string format() const;
};

struct RepresentationCheck {
  std::vector<CheckLine> lines;
  bool square = false;

  bool all_pass() const;
  std::string format() const;
};

/// Bijectivity onto the images, homomorphism for every operation of rep.sig
/// and its definable constants, the cube bound, and injective images in
/// injective mode.
RepresentationCheck verify_representation(const FiniteAlgebra& alg, const Representation& rep);

/// Elements satisfying every instance of (28).
std::vector<int> injective_elements(const FiniteAlgebra& alg, const HoldsOptions& opts = {});
/// Elements satisfying every instance of the tie-injective equations; needs meet.
std::vector<int> tie_injective_elements(const FiniteAlgebra& alg, const HoldsOptions& opts = {});

/// Exhaustive search for an isomorphism onto an algebra of partial functions
/// on a square base of at most `max_base` points. Throws BudgetExceeded after
/// `budget` candidate graphs.
std::optional<Representation> find_square_representation(const FiniteAlgebra& alg, const Signature& sig,
                                                         int max_base, std::uint64_t budget = 50000000);

// pfun format preceded by `represents <name>`, `mode plain|injective`, then one
// `map <element> -> <function>` line per element.
Representation read_representation(std::istream& in, const FiniteAlgebra& alg);
void write_representation(std::ostream& out, const FiniteAlgebra& alg, const Representation& rep);

}  // namespace mpf
