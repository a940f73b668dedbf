#include <istream>
#include <ostream>
#include <set>

#include "mpf/finalg.hpp"

namespace mpf {

namespace {

struct TableSpec {
  OpFamily family;
  int index;
  int arity;  // number of arguments
};

// "comp", "adom2", "meet", "tie1", "zero", "pi1"/"proj1"
std::optional<TableSpec> table_spec(const std::string& name, int n) {
  std::size_t digits = name.size();
  while (digits > 0 && std::isdigit(static_cast<unsigned char>(name[digits - 1]))) --digits;
  const std::string head = name.substr(0, digits);
  const std::string tail = name.substr(digits);
  int index = 0;
  if (!tail.empty()) {
    if (tail.size() > 3) return std::nullopt;
    index = std::stoi(tail);
  }
  auto indexed = [&](OpFamily f, int arity) -> std::optional<TableSpec> {
    if (index < 1 || index > n) return std::nullopt;
    return TableSpec{f, index, arity};
  };
  auto plain = [&](OpFamily f, int arity) -> std::optional<TableSpec> {
    if (!tail.empty()) return std::nullopt;
    return TableSpec{f, 0, arity};
  };
  if (head == "comp") return plain(OpFamily::comp, n + 1);
  if (head == "meet") return plain(OpFamily::meet, 2);
  if (head == "pref") return plain(OpFamily::pref, 2);
  if (head == "zero") return plain(OpFamily::zero, 0);
  if (head == "adom") return indexed(OpFamily::adom, 1);
  if (head == "dom") return indexed(OpFamily::dom, 1);
  if (head == "fix") return indexed(OpFamily::fix, 1);
  if (head == "tie") return indexed(OpFamily::tie, 2);
  if (head == "pi" || head == "proj") return indexed(OpFamily::proj, 0);
  return std::nullopt;
}

std::string spec_name(OpFamily f, int i) {
  std::string s = f == OpFamily::proj ? "pi" : std::string(family_name(f));
  return i ? s + std::to_string(i) : s;
}

std::size_t power(std::size_t s, int k) {
  std::size_t out = 1;
  for (int j = 0; j < k; ++j) out *= s;
  return out;
}

}  // namespace

FiniteAlgebra read_algebra(std::istream& in) {
  std::string name;
  int n = 0;
  std::optional<Signature> sig;
  std::vector<std::string> elements;
  std::map<std::string, int> element_ids;
  // (family, index) -> table with -1 for missing entries
  std::map<std::pair<OpFamily, int>, std::vector<int>> tables;
  std::map<std::pair<OpFamily, int>, int> first_line;
  bool ended = false;
  int lineno = 0;

  auto element = [&](const std::string& tok, int line) {
    auto it = element_ids.find(tok);
    if (it == element_ids.end()) throw FormatError("unknown element '" + tok + "'", line);
    return it->second;
  };

  for (std::string line; std::getline(in, line);) {
    ++lineno;
    auto tok = tokenize_line(line);
    if (tok.empty()) continue;
    if (ended) throw FormatError("content after 'end'", lineno);
    const std::string& head = tok[0];
    if (head == "algebra") {
      if (!name.empty() || tok.size() != 2) throw FormatError("bad 'algebra' line", lineno);
      name = tok[1];
    } else if (head == "n") {
      if (name.empty()) throw FormatError("'algebra' must come first", lineno);
      if (n || tok.size() != 2) throw FormatError("bad 'n' line", lineno);
      try {
        n = std::stoi(tok[1]);
      } catch (const std::exception&) {
        n = 0;
      }
      if (n < 1 || n > 16) throw FormatError("arity must be between 1 and 16", lineno);
    } else if (head == "signature") {
      if (!n) throw FormatError("'n' must precede 'signature'", lineno);
      if (sig || tok.size() < 2) throw FormatError("bad 'signature' line", lineno);
      std::string list;
      for (std::size_t k = 1; k < tok.size(); ++k) list += (k > 1 ? "," : "") + tok[k];
      try {
        sig = Signature::parse(list, n);
      } catch (const std::exception& e) {
        throw FormatError(e.what(), lineno);
      }
    } else if (head == "elements") {
      if (!sig) throw FormatError("'signature' must precede 'elements'", lineno);
      if (!elements.empty() || tok.size() < 2) throw FormatError("bad 'elements' line", lineno);
      for (std::size_t k = 1; k < tok.size(); ++k) {
        if (!element_ids.emplace(tok[k], static_cast<int>(elements.size())).second)
          throw FormatError("duplicate element '" + tok[k] + "'", lineno);
        elements.push_back(tok[k]);
      }
    } else if (head == "table") {
      if (elements.empty()) throw FormatError("'elements' must precede tables", lineno);
      if (tok.size() < 2) throw FormatError("bad 'table' line", lineno);
      auto spec = table_spec(tok[1], n);
      if (!spec) throw FormatError("unknown table '" + tok[1] + "'", lineno);
      if (!sig->has(spec->family))
        throw FormatError("table '" + tok[1] + "' is not in the signature", lineno);
      // expected: args [; for comp] -> value
      std::vector<std::string> body(tok.begin() + 2, tok.end());
      std::size_t expected = static_cast<std::size_t>(spec->arity) + 2;
      if (spec->family == OpFamily::comp) ++expected;
      if (body.size() != expected || body[body.size() - 2] != "->")
        throw FormatError("malformed '" + tok[1] + "' entry", lineno);
      if (spec->family == OpFamily::comp && body[static_cast<std::size_t>(n)] != ";")
        throw FormatError("comp entries need ';' after " + std::to_string(n) + " arguments", lineno);
      std::vector<int> args;
      for (std::size_t k = 0; k + 2 < body.size(); ++k)
        if (body[k] != ";") args.push_back(element(body[k], lineno));
      const int value = element(body.back(), lineno);
      const std::size_t s = elements.size();
      auto key = std::make_pair(spec->family, spec->index);
      auto& t = tables[key];
      if (t.empty()) {
        t.assign(power(s, spec->arity), -1);
        first_line[key] = lineno;
      }
      std::size_t idx = 0;
      for (int a : args) idx = idx * s + static_cast<std::size_t>(a);
      if (t[idx] >= 0) throw FormatError("duplicate entry in table '" + tok[1] + "'", lineno);
      t[idx] = value;
    } else if (head == "end") {
      if (tok.size() != 1) throw FormatError("bad 'end' line", lineno);
      ended = true;
    } else {
      throw FormatError("unexpected '" + head + "'", lineno);
    }
  }
  if (name.empty()) throw FormatError("missing 'algebra'", lineno);
  if (!sig) throw FormatError("missing 'signature'", lineno);
  if (elements.empty()) throw FormatError("missing 'elements'", lineno);
  if (!ended) throw FormatError("missing 'end'", lineno);

  FiniteAlgebra alg(name, *sig, elements);
  for (auto& [key, t] : tables) {
    if (std::find(t.begin(), t.end(), -1) != t.end())
      throw FormatError("table '" + spec_name(key.first, key.second) + "' is incomplete", first_line[key]);
    if (key.first == OpFamily::comp) {
      alg.set_comp(std::move(t));
    } else if (key.first == OpFamily::zero || key.first == OpFamily::proj) {
      alg.set_constant(key.first, key.second, t[0]);
    } else {
      alg.set_table(key.first, key.second, std::move(t));
    }
  }
  try {
    alg.finalize();
  } catch (const AlgebraError& e) {
    throw FormatError(e.what(), lineno);
  }
  return alg;
}

void write_algebra(std::ostream& out, const FiniteAlgebra& alg) {
  const int n = alg.arity();
  const std::size_t s = static_cast<std::size_t>(alg.size());
  const auto& names = alg.element_names();
  out << "algebra " << alg.name() << "\n";
  out << "n " << n << "\n";
  out << "signature";
  for (OpFamily f : alg.sig().families()) out << ' ' << (f == OpFamily::proj ? "pi" : family_name(f));
  out << "\nelements";
  for (const auto& e : names) out << ' ' << e;
  out << "\n";
  for (OpFamily f : alg.sig().families()) {
    if (f == OpFamily::comp) {
      const int* t = alg.comp_table();
      const std::size_t total = power(s, n + 1);
      std::vector<int> args(static_cast<std::size_t>(n) + 1);
      for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rest = idx;
        for (int k = n; k >= 0; --k) {
          args[k] = static_cast<int>(rest % s);
          rest /= s;
        }
        out << "table comp";
        for (int k = 0; k < n; ++k) out << ' ' << names[args[k]];
        out << " ; " << names[args[n]] << " -> " << names[t[idx]] << "\n";
      }
    } else if (f == OpFamily::zero) {
      out << "table zero -> " << names[alg.zero()] << "\n";
    } else if (f == OpFamily::proj) {
      for (int i = 1; i <= n; ++i) out << "table pi" << i << " -> " << names[alg.proj(i)] << "\n";
    } else {
      const bool binary = f == OpFamily::meet || f == OpFamily::pref || f == OpFamily::tie;
      const int lo = (f == OpFamily::meet || f == OpFamily::pref) ? 0 : 1;
      const int hi = lo ? n : 0;
      for (int i = lo; i <= hi; ++i) {
        const std::string label = spec_name(f, i);
        for (std::size_t a = 0; a < s; ++a) {
          if (!binary) {
            out << "table " << label << ' ' << names[a] << " -> "
                << names[alg.unary(f, i, static_cast<int>(a))] << "\n";
            continue;
          }
          for (std::size_t b = 0; b < s; ++b)
            out << "table " << label << ' ' << names[a] << ' ' << names[b] << " -> "
                << names[alg.binary(f, i, static_cast<int>(a), static_cast<int>(b))] << "\n";
        }
      }
    }
  }
  out << "end\n";
}

}  // namespace mpf
