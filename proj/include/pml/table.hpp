#pragma once

#include <optional>

#include "pml/term.hpp"

namespace pml {

struct KripkeModel;

// ---------------------------------------------------------------------------
// k-literals and k-tables.  A table fixes one sign for every pair of a
// permutation function and a k-ary symbol; distinct generator words denoting
// the same function share one entry.  Pairs are ordered by (symbol name,
// one-line notation) and tables by their sign vectors, all-positive first;
// the 1-based position in that order is the table's index.
// ---------------------------------------------------------------------------

struct Literal {
  bool positive = true;
  Perm perm;
  RelationSymbol symbol;

  TermPtr as_term() const;
  std::string display() const;  // compact, e.g. "!sR"
};

struct Table {
  int arity = 0;
  std::vector<std::pair<RelationSymbol, Perm>> pairs;  // canonical order
  std::vector<bool> signs;                             // parallel to pairs
  int index1 = 0;  // 1-based enumeration index

  bool sign_of(const RelationSymbol& sym, const Perm& perm) const;
  std::vector<Literal> literals() const;
  TermPtr as_term() const;    // intersection of all literals, pair order
  std::string display() const;  // "{R, !sR}"

  bool operator==(const Table& o) const {
    return arity == o.arity && pairs == o.pairs && signs == o.signs;
  }
};

// All k-tables over the k-ary symbols of `vocab` in canonical order; the
// count is 2^(k! * #symbols).  An empty vocabulary at arity k yields the
// single empty table.
std::vector<Table> enumerate_tables(const Vocabulary& vocab, int k);

// sigma[rho]: every literal's permutation f replaced so that the sign at f
// comes from rho's sign at sigma^-1 * f.  A left group action.
Table table_action(const Perm& sigma, const Table& rho);

// The unique k-table realized by `tuple` in `model` (k = tuple length).
// The second form fixes the vocabulary the table ranges over.
Table table_of_tuple(const Tuple& tuple, const KripkeModel& model);
Table table_of_tuple(const Tuple& tuple, const KripkeModel& model,
                     const Vocabulary& vocab);

// Boolean evaluation of a literal-combination term under rho's signs: true
// iff every tuple realizing rho lies in the term's interpretation.
bool table_entails(const Table& rho, const TermPtr& term);

// Recognizes a term that is exactly a table over `vocab` (an intersection of
// literals covering every pair once, consistently).
std::optional<Table> table_from_term(const TermPtr& term,
                                     const Vocabulary& vocab);

}  // namespace pml
