#pragma once

#include <functional>
#include <unordered_map>
#include <unordered_set>

#include "pml/term.hpp"

namespace pml {

// ---------------------------------------------------------------------------
// Modal formulas.  Or, Box, BoxA and Window are first-class nodes so the
// reductions can emit readable output; checking desugars them first.
// ---------------------------------------------------------------------------

enum class FKind {
  Prop, Top, Bottom, Not, And, Or,
  Diamond,   // <T>(f,...,f); term arity = args + 1
  Box,       // [T](f,...,f)
  DiamondE,  // <E> f
  BoxA,      // [A] f
  Window,    // win_R(f,...,f); symbol arity = args + 1
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
  FKind kind;
  std::string prop;       // Prop
  TermPtr term;           // Diamond/Box
  RelationSymbol wsym;    // Window
  std::vector<FormulaPtr> args;
  uint64_t hash = 0;
  long long tsize = 1;    // unfolded node count (terms included)
  int mdepth = 0;         // modal depth
};

FormulaPtr f_prop(const std::string& name);
FormulaPtr f_top();
FormulaPtr f_bottom();
FormulaPtr f_not(FormulaPtr a);
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_diamond(TermPtr term, std::vector<FormulaPtr> args);
FormulaPtr f_box(TermPtr term, std::vector<FormulaPtr> args);
FormulaPtr f_diamond_e(FormulaPtr a);
FormulaPtr f_box_a(FormulaPtr a);
FormulaPtr f_window(const RelationSymbol& sym, std::vector<FormulaPtr> args);

FormulaPtr f_implies(FormulaPtr a, FormulaPtr b);  // (~a | b)
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b);

// Balanced conjunction/disjunction; empty list gives true/false.
FormulaPtr f_and_list(std::vector<FormulaPtr> fs);
FormulaPtr f_or_list(std::vector<FormulaPtr> fs);

bool formula_eq(const FormulaPtr& x, const FormulaPtr& y);

struct FormulaHash {
  size_t operator()(const FormulaPtr& f) const {
    return static_cast<size_t>(f->hash);
  }
};
struct FormulaEq {
  bool operator()(const FormulaPtr& x, const FormulaPtr& y) const {
    return formula_eq(x, y);
  }
};
template <typename V>
using FormulaMap = std::unordered_map<FormulaPtr, V, FormulaHash, FormulaEq>;
using FormulaSet = std::unordered_set<FormulaPtr, FormulaHash, FormulaEq>;

std::string render_formula(const FormulaPtr& f);

// Rewrites Or, Box, BoxA (and nothing else) into the Prop/Top/Bottom/Not/
// And/Diamond/DiamondE core; shares results across identical subtrees.
// Window nodes are rejected: eliminate them first.
FormulaPtr desugar(const FormulaPtr& f);

// Replaces every win_R(f1,...,fk) with [!R](~f1,...,~fk).
FormulaPtr eliminate_window(const FormulaPtr& f);

// All distinct subformulas in dependency order: a proper subformula always
// precedes the formulas containing it.
std::vector<FormulaPtr> subformula_order(const FormulaPtr& f);

Vocabulary symbols_of(const FormulaPtr& f);
std::vector<std::string> props_of(const FormulaPtr& f);

}  // namespace pml
