#pragma once

#include <memory>

#include "pml/base.hpp"

namespace pml {

struct KripkeModel;

// ---------------------------------------------------------------------------
// Relation-valued terms: GRA(p,s,!,&,\,|) over a vocabulary.  Immutable and
// shared; every node carries its arity, a structural hash and its tree size.
// ---------------------------------------------------------------------------

enum class TermKind { Symbol, Cyc, Swap, Neg, Inter, Diff, Union };

struct Term;
using TermPtr = std::shared_ptr<const Term>;

struct Term {
  TermKind kind;
  RelationSymbol symbol;  // Symbol only
  TermPtr a, b;           // unary: a; binary: a, b
  int arity = 0;
  uint64_t hash = 0;
  long long tsize = 1;  // node count
};

TermPtr t_sym(const RelationSymbol& sym);
TermPtr t_cyc(TermPtr t);
TermPtr t_swap(TermPtr t);
TermPtr t_neg(TermPtr t);
TermPtr t_inter(TermPtr a, TermPtr b);
TermPtr t_diff(TermPtr a, TermPtr b);
TermPtr t_union(TermPtr a, TermPtr b);

// Wraps `base` in the generator word realizing `perm` (identity -> no wrap).
TermPtr t_apply_word(const Perm& perm, TermPtr base);

bool term_eq(const TermPtr& x, const TermPtr& y);
std::string render_term(const TermPtr& t);

// Vocabulary of the symbols occurring in a term, merged into `out`.
void collect_symbols(const TermPtr& t, std::vector<RelationSymbol>& out);

// Interpretation of a term over a model; complements are materialized
// against W^k.  Throws Vocab if a symbol is not interpreted.
TupleSet eval_term(const TermPtr& term, const KripkeModel& model);

// ---------------------------------------------------------------------------
// Negation normal form for terms: the result is `core` or !`core` where
// `core` contains no negation and applies permutations only directly to
// relation symbols (as shortest generator words).  The rewrites are the
// elementary identities (double negation, permutation/negation exchange, the
// De Morgan pair, the two difference identities) plus distribution of
// permutations over the binary operators.
// ---------------------------------------------------------------------------

struct NormalizedTerm {
  TermPtr core;
  bool negated = false;
  TermPtr as_term() const { return negated ? t_neg(core) : core; }
};

NormalizedTerm normalize_term(const TermPtr& term);

// True when every permutation in `t` sits directly above a symbol (with
// negation allowed anywhere): the shape table_entails accepts.
bool is_literal_combination(const TermPtr& t);

}  // namespace pml
