#include "pml/base.hpp"

#include <map>
#include <sstream>

namespace pml {

const char* Error::kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::Parse: return "parse";
    case ErrorKind::Vocab: return "vocab";
    case ErrorKind::Wellformed: return "wellformed";
    case ErrorKind::Shape: return "shape";
    case ErrorKind::Fragment: return "fragment";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::Internal: return "internal";
    case ErrorKind::Truncation: return "truncation";
    case ErrorKind::Budget: return "budget";
    case ErrorKind::Format: return "format";
  }
  return "unknown";
}

TupleSet ts_union(const TupleSet& a, const TupleSet& b) {
  TupleSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(),
                 std::back_inserter(out));
  return out;
}

TupleSet ts_inter(const TupleSet& a, const TupleSet& b) {
  TupleSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                        std::back_inserter(out));
  return out;
}

TupleSet ts_diff(const TupleSet& a, const TupleSet& b) {
  TupleSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(),
                      std::back_inserter(out));
  return out;
}

bool ts_member(const TupleSet& s, const Tuple& t) {
  return std::binary_search(s.begin(), s.end(), t);
}

void ts_normalize(TupleSet& s) {
  std::sort(s.begin(), s.end());
  s.erase(std::unique(s.begin(), s.end()), s.end());
}

TupleSet all_tuples(int worlds, int arity) {
  TupleSet out;
  Tuple t(arity, 0);
  while (true) {
    out.push_back(t);
    int i = arity - 1;
    while (i >= 0 && t[i] == worlds - 1) t[i--] = 0;
    if (i < 0) break;
    ++t[i];
  }
  return out;  // generated in lexicographic order
}

TupleSet ts_complement(const TupleSet& s, int worlds, int arity) {
  return ts_diff(all_tuples(worlds, arity), s);
}

WorldSet ws_empty(int n) { return WorldSet(n, false); }
WorldSet ws_full(int n) { return WorldSet(n, true); }

WorldSet ws_and(const WorldSet& a, const WorldSet& b) {
  WorldSet out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] && b[i];
  return out;
}

WorldSet ws_or(const WorldSet& a, const WorldSet& b) {
  WorldSet out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = a[i] || b[i];
  return out;
}

WorldSet ws_not(const WorldSet& a) {
  WorldSet out(a.size());
  for (size_t i = 0; i < a.size(); ++i) out[i] = !a[i];
  return out;
}

bool ws_any(const WorldSet& a) {
  return std::find(a.begin(), a.end(), true) != a.end();
}

std::vector<int> ws_indices(const WorldSet& a) {
  std::vector<int> out;
  for (size_t i = 0; i < a.size(); ++i)
    if (a[i]) out.push_back(static_cast<int>(i));
  return out;
}

std::string ws_to_string(const WorldSet& a) {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (int w : ws_indices(a)) {
    if (!first) os << ", ";
    os << w;
    first = false;
  }
  os << '}';
  return os.str();
}

Perm Perm::inverse() const {
  Perm out;
  out.map.resize(map.size());
  for (int i = 0; i < k(); ++i) out.map[map[i]] = i;
  return out;
}

Tuple Perm::apply(const Tuple& t) const {
  Tuple out(t.size());
  for (size_t i = 0; i < t.size(); ++i) out[map[i]] = t[i];
  return out;
}

std::string Perm::one_line() const {
  std::string s;
  for (int v : map) {
    if (v < 10) {
      s.push_back(static_cast<char>('0' + v));
    } else {
      s.push_back('(');
      s += std::to_string(v);
      s.push_back(')');
    }
  }
  return s;
}

Perm Perm::identity(int k) {
  Perm p;
  p.map.resize(k);
  for (int i = 0; i < k; ++i) p.map[i] = i;
  return p;
}

Perm Perm::cyclic(int k) {
  Perm p;
  p.map.resize(k);
  for (int i = 0; i < k; ++i) p.map[i] = (i + 1) % k;
  return p;
}

Perm Perm::swap_last(int k) {
  Perm p = identity(k);
  std::swap(p.map[k - 2], p.map[k - 1]);
  return p;
}

bool Perm::is_identity() const {
  for (int i = 0; i < k(); ++i)
    if (map[i] != i) return false;
  return true;
}

Perm compose(const Perm& a, const Perm& b) {
  Perm out;
  out.map.resize(a.map.size());
  for (int i = 0; i < a.k(); ++i) out.map[i] = a.map[b.map[i]];
  return out;
}

const std::vector<Perm>& all_perms(int k) {
  static std::map<int, std::vector<Perm>> cache;
  auto it = cache.find(k);
  if (it != cache.end()) return it->second;
  std::vector<Perm> out;
  Perm p = Perm::identity(k);
  do {
    out.push_back(p);
  } while (std::next_permutation(p.map.begin(), p.map.end()));
  return cache.emplace(k, std::move(out)).first->second;
}

namespace {

// BFS over the Cayley graph of S_k with generators p < s.  Words are grown by
// appending a generator on the right, which keeps the queue in (length, lex)
// order, so the first word reaching a permutation is the canonical one.
const std::map<std::vector<int>, std::string>& word_table(int k) {
  static std::map<int, std::map<std::vector<int>, std::string>> cache;
  auto it = cache.find(k);
  if (it != cache.end()) return it->second;
  std::map<std::vector<int>, std::string> words;
  std::vector<std::pair<Perm, std::string>> queue;
  queue.emplace_back(Perm::identity(k), "");
  words[queue[0].first.map] = "";
  const Perm gens[2] = {Perm::cyclic(k), Perm::swap_last(k)};
  const char names[2] = {'p', 's'};
  for (size_t head = 0; head < queue.size(); ++head) {
    auto [perm, word] = queue[head];
    for (int g = 0; g < 2; ++g) {
      Perm next = compose(perm, gens[g]);
      if (words.count(next.map)) continue;
      words[next.map] = word + names[g];
      queue.emplace_back(next, word + names[g]);
    }
  }
  return cache.emplace(k, std::move(words)).first->second;
}

}  // namespace

std::string generator_word(const Perm& perm) {
  if (perm.k() < 2) fail(ErrorKind::Wellformed, "permutation arity must be >= 2");
  return word_table(perm.k()).at(perm.map);
}

Perm word_to_perm(const std::string& word, int k) {
  Perm acc = Perm::identity(k);
  for (char c : word) {
    if (c == 'p') {
      acc = compose(acc, Perm::cyclic(k));
    } else if (c == 's') {
      acc = compose(acc, Perm::swap_last(k));
    } else {
      fail(ErrorKind::Parse, std::string("bad generator letter '") + c + "'");
    }
  }
  return acc;
}

Vocabulary::Vocabulary(std::vector<RelationSymbol> symbols) {
  for (const auto& s : symbols) add(s);
}

void Vocabulary::add(const RelationSymbol& sym) {
  if (sym.arity < 2)
    fail(ErrorKind::Wellformed,
         "relation symbol " + sym.name + " must have arity >= 2");
  if (sym.name == "E" || sym.name == "A")
    fail(ErrorKind::Vocab, "symbol name '" + sym.name + "' is reserved");
  for (const auto& s : symbols_)
    if (s.name == sym.name)
      fail(ErrorKind::Vocab, "duplicate relation symbol " + sym.name);
  symbols_.push_back(sym);
}

bool Vocabulary::contains(const std::string& name) const {
  return find(name) != nullptr;
}

const RelationSymbol* Vocabulary::find(const std::string& name) const {
  for (const auto& s : symbols_)
    if (s.name == name) return &s;
  return nullptr;
}

std::vector<RelationSymbol> Vocabulary::of_arity(int k) const {
  std::vector<RelationSymbol> out;
  for (const auto& s : symbols_)
    if (s.arity == k) out.push_back(s);
  return out;
}

std::vector<int> Vocabulary::realized_arities() const {
  std::vector<int> out;
  for (const auto& s : symbols_) out.push_back(s.arity);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

int Vocabulary::max_arity() const {
  int m = 0;
  for (const auto& s : symbols_) m = std::max(m, s.arity);
  return m;
}

}  // namespace pml
