#include "mpf/boolalg.hpp"

#include <algorithm>
#include <ostream>

namespace mpf {

std::string LatticeFailure::format() const {
  std::string out = law + " fails";
  for (const auto& [var, elem] : witness) out += " " + var + "=" + elem;
  return out;
}

bool Filter::contains(int x) const { return std::binary_search(members.begin(), members.end(), x); }
bool Ultrafilter::contains(int x) const { return std::binary_search(members.begin(), members.end(), x); }

AElementLattice::AElementLattice(const FiniteAlgebra& host) : host_(host) {
  if (!host_.provides(OpFamily::comp) || !host_.provides(OpFamily::adom))
    throw AlgebraError("A-elements need comp and adom");
  const int s = host_.size();
  const int n = host_.arity();
  in_carrier_.assign(static_cast<std::size_t>(s), false);
  preimage_.assign(static_cast<std::size_t>(s), -1);
  ai_.assign(static_cast<std::size_t>(n), std::vector<int>(static_cast<std::size_t>(s), -1));
  for (int y = 0; y < s; ++y)
    for (int i = 1; i <= n; ++i) {
      const int x = host_.adom(i, y);
      if (ai_[i - 1][x] < 0) ai_[i - 1][x] = y;
    }
  for (int x = 0; x < s; ++x)
    if (ai_[0][x] >= 0) {
      in_carrier_[x] = true;
      preimage_[x] = ai_[0][x];
      carrier_.push_back(x);
    }
}

AElementLattice AElementLattice::unchecked(const FiniteAlgebra& host) { return AElementLattice(host); }

AElementLattice AElementLattice::build(const FiniteAlgebra& host) {
  AElementLattice lat(host);
  if (auto failure = lat.verify()) throw LatticeError(*failure);
  return lat;
}

void AElementLattice::require(int alpha) const {
  if (alpha < 0 || alpha >= host_.size() || !in_carrier_[alpha])
    throw std::invalid_argument("element is not an A-element");
}

bool AElementLattice::is_a_element(int i, int x) const { return ai_.at(i - 1).at(x) >= 0; }

int AElementLattice::complement(int alpha) const {
  require(alpha);
  return host_.adom(1, alpha);
}

std::vector<int> AElementLattice::bold(int alpha) const {
  require(alpha);
  std::vector<int> out;
  for (int i = 1; i <= host_.arity(); ++i) out.push_back(host_.adom(i, preimage_[alpha]));
  return out;
}

int AElementLattice::bullet(int alpha, int beta) const {
  require(beta);
  return host_.comp(bold(alpha), beta);
}

int AElementLattice::plus(int alpha, int beta) const {
  // A_1(<A_1 alpha..A_n alpha> o A_1 beta)
  require(alpha);
  require(beta);
  std::vector<int> args;
  for (int i = 1; i <= host_.arity(); ++i) args.push_back(host_.adom(i, alpha));
  return host_.adom(1, host_.comp(args, host_.adom(1, beta)));
}

int AElementLattice::theta(int j, int i, int x) const {
  const int n = host_.arity();
  if (i < 1 || i > n || j < 1 || j > n) throw std::invalid_argument("index out of range");
  const int y = ai_[i - 1].at(x);
  if (y < 0) throw std::invalid_argument("element is not an A_" + std::to_string(i) + "-element");
  return host_.adom(j, y);
}

std::vector<int> AElementLattice::atoms() const {
  std::vector<int> out;
  for (int a : carrier_) {
    if (a == bottom()) continue;
    bool minimal = true;
    for (int b : carrier_)
      if (b != bottom() && b != a && below(b, a)) minimal = false;
    if (minimal) out.push_back(a);
  }
  return out;
}

Ultrafilter AElementLattice::principal(int atom) const {
  require(atom);
  Ultrafilter u;
  u.atom = atom;
  for (int b : carrier_)
    if (below(atom, b)) u.members.push_back(b);
  return u;
}

std::vector<Ultrafilter> AElementLattice::ultrafilters() const {
  std::vector<Ultrafilter> out;
  for (int a : atoms()) out.push_back(principal(a));
  return out;
}

std::optional<Filter> AElementLattice::filter_generated(const std::vector<int>& gens) const {
  int m = top();
  for (int g : gens) m = bullet(m, g);
  if (m == bottom()) return std::nullopt;
  Filter f;
  for (int b : carrier_)
    if (below(m, b)) f.members.push_back(b);
  return f;
}

int AElementLattice::minimum(const Filter& f) const {
  if (f.members.empty()) throw std::invalid_argument("empty filter");
  int m = top();
  for (int b : f.members) m = bullet(m, b);
  return m;
}

Ultrafilter AElementLattice::extend(const Filter& f) const {
  const int m = minimum(f);
  for (int a : atoms())
    if (below(a, m)) return principal(a);
  throw std::invalid_argument("improper filter cannot be extended");
}

std::optional<LatticeFailure> AElementLattice::verify() const {
  const FiniteAlgebra& h = host_;
  auto fail = [&](std::string law, std::vector<std::pair<std::string, int>> w) {
    LatticeFailure f{std::move(law), {}};
    for (auto& [var, e] : w) f.witness.emplace_back(var, h.element_name(e));
    return std::optional<LatticeFailure>(std::move(f));
  };
  const int n = h.arity();
  if (!contains(top())) return fail("top is an A-element", {{"top", top()}});
  if (!contains(bottom())) return fail("bottom is an A-element", {{"bottom", bottom()}});
  if (complement(top()) != bottom()) return fail("complement of top is bottom", {});
  for (int a : carrier_) {
    if (!contains(complement(a))) return fail("closure under complement", {{"a", a}});
    for (int b : carrier_)
      if (!contains(bullet(a, b))) return fail("closure under product", {{"a", a}, {"b", b}});
  }
  for (int a : carrier_) {
    if (complement(complement(a)) != a) return fail("double complement", {{"a", a}});
    if (bullet(a, a) != a) return fail("idempotence", {{"a", a}});
    if (bullet(a, top()) != a) return fail("top is the unit", {{"a", a}});
    if (bullet(a, bottom()) != bottom()) return fail("bottom annihilates", {{"a", a}});
    if (bullet(a, complement(a)) != bottom()) return fail("complement law", {{"a", a}});
    if (plus(a, complement(a)) != top()) return fail("excluded middle", {{"a", a}});
    for (int b : carrier_) {
      const int ab = bullet(a, b);
      if (ab != bullet(b, a)) return fail("commutativity", {{"a", a}, {"b", b}});
      if (plus(a, b) != complement(bullet(complement(a), complement(b))))
        return fail("de Morgan", {{"a", a}, {"b", b}});
      if (bullet(a, plus(a, b)) != a) return fail("absorption", {{"a", a}, {"b", b}});
      if (below(a, b) != leq(h, a, b)) return fail("order agrees with leq", {{"a", a}, {"b", b}});
      for (int c : carrier_) {
        if (bullet(ab, c) != bullet(a, bullet(b, c)))
          return fail("associativity", {{"a", a}, {"b", b}, {"c", c}});
        if (bullet(a, plus(b, c)) != plus(ab, bullet(a, c)))
          return fail("distributivity", {{"a", a}, {"b", b}, {"c", c}});
      }
    }
  }
  // theta maps: well defined, bijective onto the A_i-elements, preserving the operations
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      for (int y = 0; y < h.size(); ++y)
        if (h.adom(j, y) != theta(j, i, h.adom(i, y)))
          return fail("theta_" + std::to_string(j) + std::to_string(i) + " well defined", {{"a", y}});
  for (int i = 1; i <= n; ++i) {
    std::vector<bool> hit(static_cast<std::size_t>(h.size()), false);
    for (int a : carrier_) {
      const int x = theta(i, 1, a);
      if (hit[x]) return fail("theta_" + std::to_string(i) + "1 injective", {{"a", a}});
      hit[x] = true;
      if (theta(1, i, x) != a) return fail("theta_1" + std::to_string(i) + " inverts theta_" + std::to_string(i) + "1", {{"a", a}});
      if (theta(i, 1, complement(a)) != h.adom(i, x))
        return fail("theta_" + std::to_string(i) + "1 preserves complement", {{"a", a}});
      for (int b : carrier_) {
        // alpha *_i beta := <A a> o A_i b with alpha = A_i a, beta = A_i b
        std::vector<int> args;
        for (int k = 1; k <= n; ++k) args.push_back(h.adom(k, ai_[i - 1][x]));
        if (theta(i, 1, bullet(a, b)) != h.comp(args, theta(i, 1, b)))
          return fail("theta_" + std::to_string(i) + "1 preserves product", {{"a", a}, {"b", b}});
      }
    }
    for (int x = 0; x < h.size(); ++x)
      if (is_a_element(i, x) && !hit[x])
        return fail("theta_" + std::to_string(i) + "1 surjective", {{"x", x}});
  }
  for (int i = 1; i <= n; ++i)
    for (int j = 1; j <= n; ++j)
      for (int k = 1; k <= n; ++k)
        for (int y = 0; y < h.size(); ++y) {
          const int x = h.adom(i, y);
          if (theta(k, j, theta(j, i, x)) != theta(k, i, x))
            return fail("theta maps compose", {{"a", y}});
        }
  return std::nullopt;
}

void AElementLattice::dump(std::ostream& out) const {
  out << "atoms:";
  for (int a : atoms()) out << ' ' << host_.element_name(a);
  out << "\n";
  int k = 0;
  for (const Ultrafilter& u : ultrafilters()) {
    out << "ultrafilter " << k++ << ":";
    for (int b : u.members) out << ' ' << host_.element_name(b);
    out << "\n";
  }
}

}  // namespace mpf
