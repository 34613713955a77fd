#pragma once

#include "pml/checker.hpp"

namespace pml {

// ---------------------------------------------------------------------------
// Satisfiability-preserving reduction from PML(!) (every diamond term is R or
// !R) to PML + <E>.  Each symbol R splits into R_1 (positive use) and R_2
// (complemented use); theta = t(phi) & eta where eta lets any model be
// completed so that R_1 and R_2 together cover all tuples.
// ---------------------------------------------------------------------------

struct NegReduction {
  FormulaPtr source;          // input formula (window-free)
  FormulaPtr sourceCore;      // desugared input
  Vocabulary tau;             // symbols of the input
  // tau order; first = positive replacement, second = complement replacement
  std::vector<std::pair<RelationSymbol, RelationSymbol>> symbolMap;
  FormulaPtr translated;      // t(phi), connective sugar preserved
  FormulaPtr translatedCore;  // desugared t(phi)
  FormulaPtr eta;
  FormulaPtr theta;           // t(phi) & eta
  long long etaConjuncts = 0;

  static NegReduction build(const FormulaPtr& phi);

  Vocabulary theta_vocab() const;
  const std::pair<RelationSymbol, RelationSymbol>& split_of(
      const std::string& base) const;

  // Same worlds; R_1 := R, R_2 := complement of R.  Requires phi at w
  // (check_naive); asserts theta at w on the result.
  KripkeModel forward_model(const KripkeModel& model, int w) const;

  // Stage 1: for every tuple outside R_1 | R_2 pick i per the covering
  // property (i = 1 preferred) and add it to R_i.  Subformula truth values
  // are asserted unchanged.
  KripkeModel complete_model(const KripkeModel& thetaModel) const;

  struct Backward {
    KripkeModel completed;  // theta model after completion
    KripkeModel doubled;    // model of the source formula
    int designated;         // index of (w, 0)
    int baseWorlds;
    int world_index(int v, int copy) const { return v + copy * baseWorlds; }
  };

  // Requires theta at w; completion then the two-copy construction.  Asserts
  // phi at (w, 0) on the result.
  Backward backward_model(const KripkeModel& thetaModel, int w) const;

  // Extensional transfer check: for every subformula psi of the source and
  // every doubled world (v,i), doubled |= psi at (v,i) iff completed |= t(psi)
  // at v.  Throws Internal on any mismatch.
  void check_transfer(const Backward& b) const;
};

}  // namespace pml
