#pragma once

#include "pml/formula.hpp"
#include "pml/model.hpp"

namespace pml {

// ---------------------------------------------------------------------------
// Two engines compute truth sets over a model:
//
//   check_naive    — direct recursion on the semantics, diamonds evaluated by
//                    materializing the full term interpretation (complements
//                    included).  Ground truth at desk scale.
//   check_labeling — bottom-up labeling over the subformula order.  Diamond
//                    terms are normalized first; a positive core is
//                    materialized (it stays polynomial in the encoding size),
//                    a negated core is handled by walking the product of the
//                    argument labelings with position cursors and stopping at
//                    the first tuple outside the core.
//
// Both accept <E>/[A]; window operators must be eliminated beforehand.
// ---------------------------------------------------------------------------

struct CheckStats {
  long long negatedDiamonds = 0;
  long long totalProbes = 0;
  // max over (negated diamond, world) of probes - |core interpretation|;
  // the labeling loop guarantees this never exceeds 1.
  long long maxProbeExcess = 0;
};

struct Labeling {
  std::vector<FormulaPtr> order;  // subformula order of the desugared root
  std::vector<WorldSet> sets;     // parallel to order
  FormulaMap<int> position;

  const WorldSet& at(const FormulaPtr& f) const;
  bool holds(const FormulaPtr& f, int world) const { return at(f)[world]; }
};

Labeling label_all(const KripkeModel& model, const FormulaPtr& phi,
                   CheckStats* stats = nullptr);

WorldSet check_labeling(const KripkeModel& model, const FormulaPtr& phi,
                        CheckStats* stats = nullptr);
WorldSet check_naive(const KripkeModel& model, const FormulaPtr& phi);

int modal_depth(const FormulaPtr& f);

}  // namespace pml
