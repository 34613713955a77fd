#include "pml/table.hpp"

#include <sstream>

#include "pml/model.hpp"

namespace pml {

namespace {

std::string word_for_display(const Perm& p) {
  if (p == Perm::swap_last(p.k())) return "s";
  return generator_word(p);
}

std::vector<std::pair<RelationSymbol, Perm>> canonical_pairs(
    const Vocabulary& vocab, int k) {
  std::vector<std::pair<RelationSymbol, Perm>> pairs;
  auto syms = vocab.of_arity(k);
  std::sort(syms.begin(), syms.end());
  for (const auto& s : syms)
    for (const auto& p : all_perms(k)) pairs.emplace_back(s, p);
  // all_perms is already in one-line lexicographic order; symbols dominate.
  return pairs;
}

}  // namespace

TermPtr Literal::as_term() const {
  TermPtr t = t_apply_word(perm, t_sym(symbol));
  return positive ? t : t_neg(t);
}

std::string Literal::display() const {
  return (positive ? "" : "!") + word_for_display(perm) + symbol.name;
}

bool Table::sign_of(const RelationSymbol& sym, const Perm& perm) const {
  for (size_t i = 0; i < pairs.size(); ++i)
    if (pairs[i].first == sym && pairs[i].second == perm)
      return signs[i];
  fail(ErrorKind::Vocab,
       "literal " + word_for_display(perm) + sym.name + " not in table");
}

std::vector<Literal> Table::literals() const {
  std::vector<Literal> out;
  out.reserve(pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i)
    out.push_back({static_cast<bool>(signs[i]), pairs[i].second, pairs[i].first});
  return out;
}

TermPtr Table::as_term() const {
  if (pairs.empty())
    fail(ErrorKind::Shape, "the empty table has no term form");
  TermPtr acc;
  for (const auto& lit : literals()) {
    TermPtr t = lit.as_term();
    acc = acc ? t_inter(acc, t) : t;
  }
  return acc;
}

std::string Table::display() const {
  std::ostringstream os;
  os << '{';
  bool first = true;
  for (const auto& lit : literals()) {
    if (!first) os << ", ";
    os << lit.display();
    first = false;
  }
  os << '}';
  return os.str();
}

std::vector<Table> enumerate_tables(const Vocabulary& vocab, int k) {
  if (k < 2) fail(ErrorKind::Wellformed, "tables need arity >= 2");
  auto pairs = canonical_pairs(vocab, k);
  size_t n = pairs.size();
  if (n > 24)
    fail(ErrorKind::Budget,
         "too many literal pairs (" + std::to_string(n) + ") to enumerate");
  std::vector<Table> out;
  out.reserve(1ull << n);
  for (uint64_t bits = 0; bits < (1ull << n); ++bits) {
    Table t;
    t.arity = k;
    t.pairs = pairs;
    t.signs.resize(n);
    for (size_t j = 0; j < n; ++j)
      t.signs[j] = ((bits >> (n - 1 - j)) & 1) == 0;
    t.index1 = static_cast<int>(bits) + 1;
    out.push_back(std::move(t));
  }
  return out;
}

Table table_action(const Perm& sigma, const Table& rho) {
  if (sigma.k() != rho.arity)
    fail(ErrorKind::Wellformed, "permutation arity does not match table");
  Table out = rho;
  Perm sigmaInv = sigma.inverse();
  for (size_t i = 0; i < out.pairs.size(); ++i)
    out.signs[i] =
        rho.sign_of(out.pairs[i].first, compose(sigmaInv, out.pairs[i].second));
  // Recompute the enumeration index from the sign vector.
  uint64_t bits = 0;
  for (size_t j = 0; j < out.signs.size(); ++j)
    if (!out.signs[j]) bits |= 1ull << (out.signs.size() - 1 - j);
  out.index1 = static_cast<int>(bits) + 1;
  return out;
}

Table table_of_tuple(const Tuple& tuple, const KripkeModel& model) {
  return table_of_tuple(tuple, model, model.vocab);
}

Table table_of_tuple(const Tuple& tuple, const KripkeModel& model,
                     const Vocabulary& vocab) {
  int k = static_cast<int>(tuple.size());
  if (k < 2) fail(ErrorKind::Wellformed, "tuples must have length >= 2");
  Table t;
  t.arity = k;
  t.pairs = canonical_pairs(vocab, k);
  t.signs.resize(t.pairs.size());
  uint64_t bits = 0;
  for (size_t i = 0; i < t.pairs.size(); ++i) {
    const auto& [sym, f] = t.pairs[i];
    // tuple lies in [[fR]] iff f^-1(tuple) lies in R.
    bool pos = ts_member(model.relation(sym.name), f.inverse().apply(tuple));
    t.signs[i] = pos;
    if (!pos) bits |= 1ull << (t.pairs.size() - 1 - i);
  }
  t.index1 = static_cast<int>(bits) + 1;
  return t;
}

namespace {

bool entails_rec(const Table& rho, const TermPtr& term) {
  switch (term->kind) {
    case TermKind::Symbol:
      return rho.sign_of(term->symbol, Perm::identity(term->arity));
    case TermKind::Cyc:
    case TermKind::Swap: {
      std::string word;
      const Term* cur = term.get();
      while (cur->kind == TermKind::Cyc || cur->kind == TermKind::Swap) {
        word.push_back(cur->kind == TermKind::Cyc ? 'p' : 's');
        cur = cur->a.get();
      }
      if (cur->kind != TermKind::Symbol)
        fail(ErrorKind::Shape,
             "permutation above a compound term; normalize first");
      return rho.sign_of(cur->symbol, word_to_perm(word, term->arity));
    }
    case TermKind::Neg: return !entails_rec(rho, term->a);
    case TermKind::Inter:
      return entails_rec(rho, term->a) && entails_rec(rho, term->b);
    case TermKind::Diff:
      return entails_rec(rho, term->a) && !entails_rec(rho, term->b);
    case TermKind::Union:
      return entails_rec(rho, term->a) || entails_rec(rho, term->b);
  }
  fail(ErrorKind::Internal, "unreachable term kind");
}

}  // namespace

bool table_entails(const Table& rho, const TermPtr& term) {
  if (term->arity != rho.arity)
    fail(ErrorKind::Wellformed, "term arity does not match table arity");
  return entails_rec(rho, term);
}

std::optional<Table> table_from_term(const TermPtr& term,
                                     const Vocabulary& vocab) {
  if (!is_literal_combination(term)) return std::nullopt;
  // Collect literal conjuncts of a left-leaning intersection.
  std::vector<const Term*> stack{term.get()};
  std::vector<std::tuple<RelationSymbol, Perm, bool>> lits;
  while (!stack.empty()) {
    const Term* cur = stack.back();
    stack.pop_back();
    if (cur->kind == TermKind::Inter) {
      stack.push_back(cur->a.get());
      stack.push_back(cur->b.get());
      continue;
    }
    bool positive = true;
    if (cur->kind == TermKind::Neg) {
      positive = false;
      cur = cur->a.get();
    }
    std::string word;
    while (cur->kind == TermKind::Cyc || cur->kind == TermKind::Swap) {
      word.push_back(cur->kind == TermKind::Cyc ? 'p' : 's');
      cur = cur->a.get();
    }
    if (cur->kind != TermKind::Symbol) return std::nullopt;
    lits.emplace_back(cur->symbol, word_to_perm(word, term->arity), positive);
  }
  Table t;
  t.arity = term->arity;
  t.pairs = canonical_pairs(vocab, term->arity);
  if (t.pairs.empty()) return std::nullopt;
  std::vector<int> seen(t.pairs.size(), 0);
  t.signs.resize(t.pairs.size());
  for (const auto& [sym, perm, positive] : lits) {
    bool found = false;
    for (size_t i = 0; i < t.pairs.size(); ++i) {
      if (t.pairs[i].first == sym && t.pairs[i].second == perm) {
        if (seen[i] && t.signs[i] != positive) return std::nullopt;
        seen[i] = 1;
        t.signs[i] = positive;
        found = true;
        break;
      }
    }
    if (!found) return std::nullopt;  // symbol outside the vocabulary
  }
  for (int s : seen)
    if (!s) return std::nullopt;  // not maximal
  uint64_t bits = 0;
  for (size_t j = 0; j < t.signs.size(); ++j)
    if (!t.signs[j]) bits |= 1ull << (t.signs.size() - 1 - j);
  t.index1 = static_cast<int>(bits) + 1;
  return t;
}

}  // namespace pml
