#include <istream>
#include <ostream>
#include <sstream>

#include "mpf/pfun.hpp"

namespace mpf {

std::vector<std::string> tokenize_line(const std::string& line) {
  std::string body = line.substr(0, line.find('#'));
  std::istringstream in(body);
  std::vector<std::string> out;
  for (std::string tok; in >> tok;) out.push_back(tok);
  return out;
}

std::string format_tuple(const Tuple& x) {
  std::string out = "(";
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (k) out += ',';
    out += std::to_string(x[k]);
  }
  return out + ")";
}

namespace {

int parse_int(const std::string& s, int line) {
  if (s.empty() || s.size() > 9 ||
      !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
    throw FormatError("expected a non-negative integer, got '" + s + "'", line);
  return std::stoi(s);
}

}  // namespace

Tuple parse_tuple(const std::string& text, int n, int line) {
  if (text.size() < 2 || text.front() != '(' || text.back() != ')')
    throw FormatError("malformed tuple '" + text + "'", line);
  Tuple x;
  std::string inner = text.substr(1, text.size() - 2);
  std::size_t start = 0;
  while (true) {
    std::size_t comma = inner.find(',', start);
    x.push_back(parse_int(inner.substr(start, comma - start), line));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  if (static_cast<int>(x.size()) != n)
    throw FormatError("tuple '" + text + "' has arity " + std::to_string(x.size()) +
                          ", expected " + std::to_string(n),
                      line);
  return x;
}

const PartialFunction* PfunFile::find(const std::string& name) const {
  for (const auto& [k, f] : funs)
    if (k == name) return &f;
  return nullptr;
}

PfunFile read_pfun(std::istream& in,
                   const std::function<bool(const std::vector<std::string>&, int)>& extra) {
  PfunFile file;
  int size = -1;
  std::vector<int> eclass;
  bool have_n = false;
  int lineno = 0;
  auto ensure_base = [&](int line) {
    if (file.base) return;
    if (size < 0) throw FormatError("'base' must come first", line);
    if (eclass.empty()) eclass.assign(static_cast<std::size_t>(size), 0);
    file.base = std::make_shared<const Base>(Base::with_classes(eclass));
  };
  for (std::string line; std::getline(in, line);) {
    ++lineno;
    auto tok = tokenize_line(line);
    if (tok.empty()) continue;
    const std::string& head = tok[0];
    if (head == "base") {
      if (size >= 0 || tok.size() != 2) throw FormatError("bad 'base' line", lineno);
      size = parse_int(tok[1], lineno);
    } else if (head == "eclass") {
      if (size < 0 || file.base) throw FormatError("'eclass' must follow 'base'", lineno);
      if (static_cast<int>(tok.size()) != size + 1)
        throw FormatError("'eclass' needs one class id per point", lineno);
      for (std::size_t k = 1; k < tok.size(); ++k) eclass.push_back(parse_int(tok[k], lineno));
    } else if (head == "n") {
      if (have_n || tok.size() != 2) throw FormatError("bad 'n' line", lineno);
      file.n = parse_int(tok[1], lineno);
      if (file.n < 1) throw FormatError("arity must be at least 1", lineno);
      have_n = true;
    } else if (head == "fun") {
      ensure_base(lineno);
      if (!have_n) throw FormatError("'n' must precede functions", lineno);
      if (tok.size() < 3 || tok[2] != ":") throw FormatError("expected 'fun <name> :'", lineno);
      if (file.find(tok[1])) throw FormatError("duplicate function '" + tok[1] + "'", lineno);
      std::vector<std::pair<Tuple, int>> pairs;
      for (std::size_t k = 3; k < tok.size(); ++k) {
        auto arrow = tok[k].find("->");
        if (arrow == std::string::npos) throw FormatError("expected '(..)->y'", lineno);
        pairs.emplace_back(parse_tuple(tok[k].substr(0, arrow), file.n, lineno),
                           parse_int(tok[k].substr(arrow + 2), lineno));
      }
      try {
        file.funs.emplace_back(tok[1], PartialFunction::from_pairs(file.base, file.n, pairs));
      } catch (const std::invalid_argument& e) {
        throw FormatError(e.what(), lineno);
      }
    } else {
      if (size >= 0 && have_n) ensure_base(lineno);
      if (!extra || !extra(tok, lineno)) throw FormatError("unexpected '" + head + "'", lineno);
    }
  }
  if (size < 0) throw FormatError("missing 'base'", lineno);
  if (!have_n) throw FormatError("missing 'n'", lineno);
  ensure_base(lineno);
  return file;
}

void write_pfun(std::ostream& out, const PfunFile& file) {
  out << "base " << file.base->size << "\n";
  out << "eclass";
  for (int c : file.base->eclass) out << ' ' << c;
  out << "\nn " << file.n << "\n";
  for (const auto& [name, f] : file.funs) {
    out << "fun " << name << " :";
    for (const auto& e : f.graph()) out << ' ' << format_tuple(f.decode(e.code)) << "->" << e.value;
    out << "\n";
  }
}

}  // namespace mpf
