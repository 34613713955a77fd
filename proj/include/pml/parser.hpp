#pragma once

#include "pml/formula.hpp"

namespace pml {

// Text syntax (whitespace insignificant):
//   terms:     R | rot(T) | swp(T) | !T | (T & T) | (T | T) | (T \ T)
//   formulas:  prop | true | false | ~f | (f & f) | (f | f)
//              | <T>(f,...,f) | [T](f,...,f) | <E> f | [A] f | win_R(f,...,f)
// Relation symbols start with an uppercase letter ('E' and 'A' are reserved),
// propositions with a lowercase letter or '_'.  Plain parentheses may also be
// used for grouping.

FormulaPtr parse_formula(const std::string& text, const Vocabulary& vocab);

// Parses while inferring each symbol's arity from how it is used (a diamond
// with k arguments forces arity k+1 on the leaves of its term).  Symbols whose
// arity is not forced default to binary.
struct ParsedFormula {
  FormulaPtr formula;
  Vocabulary vocab;
};
ParsedFormula parse_formula_infer(const std::string& text);

// Term-only parsing; leaf arities come from `vocab`, or default to
// `defaultArity` for symbols it does not declare (0 = reject unknowns).
TermPtr parse_term(const std::string& text, const Vocabulary& vocab,
                   int defaultArity = 0);

}  // namespace pml
