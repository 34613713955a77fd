#include "pml/term.hpp"

#include <sstream>

#include "pml/model.hpp"

namespace pml {

namespace {

TermPtr make(TermKind kind, RelationSymbol sym, TermPtr a, TermPtr b,
             int arity) {
  auto t = std::make_shared<Term>();
  t->kind = kind;
  t->symbol = std::move(sym);
  t->a = std::move(a);
  t->b = std::move(b);
  t->arity = arity;
  uint64_t h = hash_mix(0xfeed, static_cast<uint64_t>(kind));
  if (kind == TermKind::Symbol) {
    for (char c : t->symbol.name) h = hash_mix(h, static_cast<uint64_t>(c));
    h = hash_mix(h, static_cast<uint64_t>(t->symbol.arity));
  }
  if (t->a) {
    h = hash_mix(h, t->a->hash);
    t->tsize += t->a->tsize;
  }
  if (t->b) {
    h = hash_mix(h, t->b->hash);
    t->tsize += t->b->tsize;
  }
  t->hash = h;
  return t;
}

TermPtr unary(TermKind kind, TermPtr t) {
  int ar = t->arity;
  return make(kind, {}, std::move(t), nullptr, ar);
}

TermPtr binary(TermKind kind, TermPtr a, TermPtr b) {
  if (a->arity != b->arity)
    fail(ErrorKind::Wellformed,
         "arity mismatch in term: " + std::to_string(a->arity) + " vs " +
             std::to_string(b->arity));
  int ar = a->arity;
  return make(kind, {}, std::move(a), std::move(b), ar);
}

}  // namespace

TermPtr t_sym(const RelationSymbol& sym) {
  if (sym.arity < 2)
    fail(ErrorKind::Wellformed, "symbol " + sym.name + " has arity < 2");
  return make(TermKind::Symbol, sym, nullptr, nullptr, sym.arity);
}

TermPtr t_cyc(TermPtr t) { return unary(TermKind::Cyc, std::move(t)); }
TermPtr t_swap(TermPtr t) { return unary(TermKind::Swap, std::move(t)); }
TermPtr t_neg(TermPtr t) { return unary(TermKind::Neg, std::move(t)); }
TermPtr t_inter(TermPtr a, TermPtr b) {
  return binary(TermKind::Inter, std::move(a), std::move(b));
}
TermPtr t_diff(TermPtr a, TermPtr b) {
  return binary(TermKind::Diff, std::move(a), std::move(b));
}
TermPtr t_union(TermPtr a, TermPtr b) {
  return binary(TermKind::Union, std::move(a), std::move(b));
}

TermPtr t_apply_word(const Perm& perm, TermPtr base) {
  // Display nicety: render the swap of the last two positions as 's' even
  // where a 'p' word would be as short (they coincide at arity 2).
  std::string word = perm == Perm::swap_last(perm.k()) ? "s"
                                                       : generator_word(perm);
  TermPtr t = std::move(base);
  for (auto it = word.rbegin(); it != word.rend(); ++it)
    t = (*it == 'p') ? t_cyc(t) : t_swap(t);
  return t;
}

bool term_eq(const TermPtr& x, const TermPtr& y) {
  if (x.get() == y.get()) return true;
  if (!x || !y) return false;
  if (x->hash != y->hash || x->kind != y->kind || x->arity != y->arity)
    return false;
  if (x->kind == TermKind::Symbol) return x->symbol == y->symbol;
  return term_eq(x->a, y->a) && term_eq(x->b, y->b);
}

std::string render_term(const TermPtr& t) {
  std::ostringstream os;
  struct R {
    std::ostringstream& os;
    void go(const TermPtr& t) {
      switch (t->kind) {
        case TermKind::Symbol: os << t->symbol.name; return;
        case TermKind::Cyc: os << "rot("; go(t->a); os << ")"; return;
        case TermKind::Swap: os << "swp("; go(t->a); os << ")"; return;
        case TermKind::Neg: os << "!"; go(t->a); return;
        case TermKind::Inter: os << "("; go(t->a); os << " & "; go(t->b); os << ")"; return;
        case TermKind::Diff: os << "("; go(t->a); os << " \\ "; go(t->b); os << ")"; return;
        case TermKind::Union: os << "("; go(t->a); os << " | "; go(t->b); os << ")"; return;
      }
    }
  } r{os};
  r.go(t);
  return os.str();
}

void collect_symbols(const TermPtr& t, std::vector<RelationSymbol>& out) {
  if (t->kind == TermKind::Symbol) {
    for (const auto& s : out)
      if (s.name == t->symbol.name) {
        if (s.arity != t->symbol.arity)
          fail(ErrorKind::Vocab, "symbol " + s.name + " used at two arities");
        return;
      }
    out.push_back(t->symbol);
    return;
  }
  if (t->a) collect_symbols(t->a, out);
  if (t->b) collect_symbols(t->b, out);
}

TupleSet eval_term(const TermPtr& term, const KripkeModel& model) {
  switch (term->kind) {
    case TermKind::Symbol: {
      const RelationSymbol* s = model.vocab.find(term->symbol.name);
      if (!s)
        fail(ErrorKind::Vocab,
             "symbol " + term->symbol.name + " not interpreted in model");
      if (s->arity != term->symbol.arity)
        fail(ErrorKind::Wellformed,
             "symbol " + term->symbol.name + " arity mismatch");
      return model.relation(term->symbol.name);
    }
    case TermKind::Cyc:
    case TermKind::Swap: {
      Perm g = term->kind == TermKind::Cyc ? Perm::cyclic(term->arity)
                                           : Perm::swap_last(term->arity);
      TupleSet in = eval_term(term->a, model);
      TupleSet out;
      out.reserve(in.size());
      for (const auto& t : in) out.push_back(g.apply(t));
      ts_normalize(out);
      return out;
    }
    case TermKind::Neg:
      return ts_complement(eval_term(term->a, model), model.worlds,
                           term->arity);
    case TermKind::Inter:
      return ts_inter(eval_term(term->a, model), eval_term(term->b, model));
    case TermKind::Diff:
      return ts_diff(eval_term(term->a, model), eval_term(term->b, model));
    case TermKind::Union:
      return ts_union(eval_term(term->a, model), eval_term(term->b, model));
  }
  fail(ErrorKind::Internal, "unreachable term kind");
}

// --- normalization ---------------------------------------------------------

namespace {

// Intermediate shape: negation-free, permutations live only on literals.
struct NTerm {
  enum Kind { Lit, Inter, Diff, Union } kind;
  Perm perm;           // Lit
  RelationSymbol sym;  // Lit
  std::shared_ptr<NTerm> a, b;
};
using NPtr = std::shared_ptr<NTerm>;

NPtr n_lit(Perm p, RelationSymbol s) {
  auto n = std::make_shared<NTerm>();
  n->kind = NTerm::Lit;
  n->perm = std::move(p);
  n->sym = std::move(s);
  return n;
}

NPtr n_bin(NTerm::Kind k, NPtr a, NPtr b) {
  auto n = std::make_shared<NTerm>();
  n->kind = k;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

NPtr distribute(const Perm& g, const NPtr& n) {
  if (n->kind == NTerm::Lit) return n_lit(compose(g, n->perm), n->sym);
  return n_bin(n->kind, distribute(g, n->a), distribute(g, n->b));
}

// (core, negated) with all six elementary identities applied bottom-up.
std::pair<NPtr, bool> norm(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Symbol:
      return {n_lit(Perm::identity(t->arity), t->symbol), false};
    case TermKind::Cyc:
    case TermKind::Swap: {
      auto [n, neg] = norm(t->a);
      Perm g = t->kind == TermKind::Cyc ? Perm::cyclic(t->arity)
                                        : Perm::swap_last(t->arity);
      return {distribute(g, n), neg};
    }
    case TermKind::Neg: {
      auto [n, neg] = norm(t->a);
      return {n, !neg};
    }
    case TermKind::Inter:
    case TermKind::Diff:
    case TermKind::Union: {
      auto [na, ga] = norm(t->a);
      auto [nb, gb] = norm(t->b);
      bool isUnion = t->kind == TermKind::Union;
      if (t->kind == TermKind::Diff) gb = !gb;  // a \ b == a & !b
      if (!isUnion) {
        if (!ga && !gb) return {n_bin(NTerm::Inter, na, nb), false};
        if (!ga && gb) return {n_bin(NTerm::Diff, na, nb), false};
        if (ga && !gb) return {n_bin(NTerm::Diff, nb, na), false};
        return {n_bin(NTerm::Union, na, nb), true};
      }
      if (!ga && !gb) return {n_bin(NTerm::Union, na, nb), false};
      if (!ga && gb) return {n_bin(NTerm::Diff, nb, na), true};
      if (ga && !gb) return {n_bin(NTerm::Diff, na, nb), true};
      return {n_bin(NTerm::Inter, na, nb), true};
    }
  }
  fail(ErrorKind::Internal, "unreachable term kind");
}

TermPtr to_term(const NPtr& n) {
  switch (n->kind) {
    case NTerm::Lit: return t_apply_word(n->perm, t_sym(n->sym));
    case NTerm::Inter: return t_inter(to_term(n->a), to_term(n->b));
    case NTerm::Diff: return t_diff(to_term(n->a), to_term(n->b));
    case NTerm::Union: return t_union(to_term(n->a), to_term(n->b));
  }
  fail(ErrorKind::Internal, "unreachable nterm kind");
}

}  // namespace

NormalizedTerm normalize_term(const TermPtr& term) {
  auto [n, neg] = norm(term);
  return {to_term(n), neg};
}

bool is_literal_combination(const TermPtr& t) {
  switch (t->kind) {
    case TermKind::Symbol: return true;
    case TermKind::Cyc:
    case TermKind::Swap: {
      const Term* cur = t.get();
      while (cur->kind == TermKind::Cyc || cur->kind == TermKind::Swap)
        cur = cur->a.get();
      return cur->kind == TermKind::Symbol;
    }
    case TermKind::Neg: return is_literal_combination(t->a);
    case TermKind::Inter:
    case TermKind::Diff:
    case TermKind::Union:
      return is_literal_combination(t->a) && is_literal_combination(t->b);
  }
  return false;
}

}  // namespace pml
