#include "pml/model.hpp"

#include <random>
#include <sstream>

namespace pml {

const TupleSet& KripkeModel::relation(const std::string& name) const {
  for (size_t i = 0; i < vocab.symbols().size(); ++i)
    if (vocab.symbols()[i].name == name) return relations[i];
  fail(ErrorKind::Vocab, "relation " + name + " not in model");
}

TupleSet& KripkeModel::relation(const std::string& name) {
  for (size_t i = 0; i < vocab.symbols().size(); ++i)
    if (vocab.symbols()[i].name == name) return relations[i];
  fail(ErrorKind::Vocab, "relation " + name + " not in model");
}

WorldSet KripkeModel::prop_set(const std::string& name) const {
  auto it = valuation.find(name);
  if (it == valuation.end()) return ws_empty(worlds);
  return it->second;
}

void KripkeModel::set_relation(const std::string& name, TupleSet tuples) {
  ts_normalize(tuples);
  relation(name) = std::move(tuples);
}

void KripkeModel::validate() const {
  if (worlds < 1) fail(ErrorKind::Format, "model needs at least one world");
  if (relations.size() != vocab.symbols().size())
    fail(ErrorKind::Internal, "relation table out of sync with vocabulary");
  for (size_t i = 0; i < relations.size(); ++i) {
    const auto& sym = vocab.symbols()[i];
    for (const auto& t : relations[i]) {
      if (static_cast<int>(t.size()) != sym.arity)
        fail(ErrorKind::Format, "tuple arity mismatch for " + sym.name);
      for (int w : t)
        if (w < 0 || w >= worlds)
          fail(ErrorKind::Format,
               "world index " + std::to_string(w) + " out of range in " +
                   sym.name);
    }
  }
  for (const auto& [p, ws] : valuation)
    if (static_cast<int>(ws.size()) != worlds)
      fail(ErrorKind::Internal, "valuation size mismatch for " + p);
}

bool KripkeModel::operator==(const KripkeModel& o) const {
  return worlds == o.worlds && vocab == o.vocab && relations == o.relations &&
         valuation == o.valuation;
}

// --- text format ------------------------------------------------------------

namespace {

void skip_ws(const std::string& s, size_t& i) {
  while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
}

[[noreturn]] void bad(int lineno, const std::string& msg) {
  fail(ErrorKind::Format,
       "model line " + std::to_string(lineno) + ": " + msg);
}

int parse_int(const std::string& s, size_t& i, int lineno) {
  skip_ws(s, i);
  size_t start = i;
  while (i < s.size() && isdigit(static_cast<unsigned char>(s[i]))) ++i;
  if (i == start) bad(lineno, "expected a number");
  return std::stoi(s.substr(start, i - start));
}

std::string parse_name(const std::string& s, size_t& i, int lineno) {
  skip_ws(s, i);
  size_t start = i;
  while (i < s.size() &&
         (isalnum(static_cast<unsigned char>(s[i])) || s[i] == '_'))
    ++i;
  if (i == start) bad(lineno, "expected a name");
  return s.substr(start, i - start);
}

void expect(const std::string& s, size_t& i, char c, int lineno) {
  skip_ws(s, i);
  if (i >= s.size() || s[i] != c)
    bad(lineno, std::string("expected '") + c + "'");
  ++i;
}

}  // namespace

KripkeModel parse_model(const std::string& text) {
  KripkeModel m;
  bool sawWorlds = false;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    size_t i = 0;
    skip_ws(line, i);
    if (i >= line.size() || line[i] == '#') continue;
    std::string kw = parse_name(line, i, lineno);
    if (kw == "worlds") {
      if (sawWorlds) bad(lineno, "duplicate worlds line");
      m.worlds = parse_int(line, i, lineno);
      if (m.worlds < 1) bad(lineno, "worlds must be >= 1");
      sawWorlds = true;
    } else if (kw == "rel") {
      if (!sawWorlds) bad(lineno, "worlds must be declared first");
      std::string name = parse_name(line, i, lineno);
      expect(line, i, '/', lineno);
      int arity = parse_int(line, i, lineno);
      if (arity < 2) bad(lineno, "relation arity must be >= 2");
      if (m.vocab.contains(name)) bad(lineno, "duplicate relation " + name);
      m.add_symbol({name, arity});
      expect(line, i, ':', lineno);
      TupleSet ts;
      while (true) {
        skip_ws(line, i);
        if (i >= line.size()) break;
        expect(line, i, '(', lineno);
        Tuple t;
        for (int j = 0; j < arity; ++j) {
          if (j) expect(line, i, ',', lineno);
          int w = parse_int(line, i, lineno);
          if (w >= m.worlds)
            bad(lineno, "world index " + std::to_string(w) + " out of range");
          t.push_back(w);
        }
        expect(line, i, ')', lineno);
        ts.push_back(std::move(t));
      }
      ts_normalize(ts);
      m.relations.back() = std::move(ts);
    } else if (kw == "prop") {
      if (!sawWorlds) bad(lineno, "worlds must be declared first");
      std::string name = parse_name(line, i, lineno);
      if (m.valuation.count(name)) bad(lineno, "duplicate prop " + name);
      expect(line, i, ':', lineno);
      WorldSet ws = ws_empty(m.worlds);
      while (true) {
        skip_ws(line, i);
        if (i >= line.size()) break;
        int w = parse_int(line, i, lineno);
        if (w >= m.worlds)
          bad(lineno, "world index " + std::to_string(w) + " out of range");
        ws[w] = true;
      }
      m.valuation[name] = std::move(ws);
    } else {
      bad(lineno, "unknown directive '" + kw + "'");
    }
  }
  if (!sawWorlds) fail(ErrorKind::Format, "model has no worlds line");
  m.validate();
  return m;
}

std::string render_model(const KripkeModel& m) {
  std::ostringstream os;
  os << "worlds " << m.worlds << "\n";
  for (size_t i = 0; i < m.vocab.symbols().size(); ++i) {
    const auto& sym = m.vocab.symbols()[i];
    os << "rel " << sym.name << "/" << sym.arity << " :";
    for (const auto& t : m.relations[i]) {
      os << " (";
      for (size_t j = 0; j < t.size(); ++j) {
        if (j) os << ",";
        os << t[j];
      }
      os << ")";
    }
    os << "\n";
  }
  for (const auto& [p, ws] : m.valuation) {
    os << "prop " << p << " :";
    for (int w : ws_indices(ws)) os << " " << w;
    os << "\n";
  }
  return os.str();
}

// --- list encoding ----------------------------------------------------------

int encoding_width(int worlds) {
  int w = 0;
  while ((1 << w) < worlds) ++w;
  return std::max(1, w);
}

EncodedModel encode_list(const KripkeModel& m) {
  EncodedModel out;
  int width = encoding_width(m.worlds);
  out.bytes.assign(static_cast<size_t>(m.worlds), '1');
  out.size = m.worlds;
  for (size_t i = 0; i < m.vocab.symbols().size(); ++i) {
    const auto& sym = m.vocab.symbols()[i];
    out.bytes.push_back('>');
    bool first = true;
    for (const auto& t : m.relations[i]) {
      if (!first) out.bytes.push_back('#');
      first = false;
      for (int w : t)
        for (int b = width - 1; b >= 0; --b)
          out.bytes.push_back((w >> b) & 1 ? '1' : '0');
    }
    out.size += static_cast<long long>(m.relations[i].size()) * sym.arity *
                width;
  }
  return out;
}

// --- random models ----------------------------------------------------------

KripkeModel random_model(uint64_t seed, int worlds, const Vocabulary& vocab,
                         double density, int props) {
  if (worlds < 1) fail(ErrorKind::Format, "worlds must be >= 1");
  if (density < 0.0 || density > 1.0)
    fail(ErrorKind::Format, "density must be within [0,1]");
  std::mt19937_64 rng(seed);
  KripkeModel m;
  m.worlds = worlds;
  // Threshold comparison on raw 53-bit draws keeps results identical across
  // standard library implementations.
  auto coin = [&rng](double prob) {
    const uint64_t span = 1ull << 53;
    uint64_t draw = rng() >> 11;
    auto limit = static_cast<uint64_t>(prob * static_cast<double>(span));
    return draw < limit;
  };
  for (const auto& sym : vocab.symbols()) {
    m.add_symbol(sym);
    TupleSet ts;
    for (const auto& t : all_tuples(worlds, sym.arity))
      if (coin(density)) ts.push_back(t);
    m.relations.back() = std::move(ts);
  }
  for (int p = 0; p < props; ++p) {
    WorldSet ws = ws_empty(worlds);
    for (int w = 0; w < worlds; ++w) ws[w] = coin(0.5);
    m.valuation["q" + std::to_string(p)] = std::move(ws);
  }
  return m;
}

}  // namespace pml
