#pragma once

#include "pml/checker.hpp"
#include "pml/table.hpp"

namespace pml {

// ---------------------------------------------------------------------------
// Reduction from PML_c(p,s,!,&) over a bounded vocabulary to PML + <E> over
// the table vocabulary.  Three stages:
//
//   table_normal_form  — phi* where every diamond term is a single table;
//                        arguments are replaced by fresh propositions guarded
//                        globally by [rho](p_psi <-> psi) over all 2-tables.
//   build_theta        — Theta = t(phi*) & xi1 & xi2 & xi3, where t maps each
//                        table term to its own relation symbol and the xi
//                        axioms let any model of Theta be extended so that the
//                        table relations cover all tuples and are closed under
//                        the permutation action.
//   model constructions — forward (interpret each table symbol by its
//                        realization set) and backward (extensions, then a
//                        depth-truncated layered model).
//
// The xi axioms quantify their psi vectors over the diamond-argument
// subformulas of t(phi*): exactly the instances the correctness induction
// consumes, which keeps xi1 within its intended budget.
// ---------------------------------------------------------------------------

struct TableReduction {
  FormulaPtr source;
  Vocabulary tau;
  int vocabCap = 2;
  int maxArity = 2;  // m

  FormulaPtr starForm;  // phi* over tau
  std::vector<std::pair<FormulaPtr, std::string>> freshProps;  // (psi, p_psi)

  std::vector<int> arities;                            // realized, ascending
  std::vector<std::vector<Table>> tablesByArity;       // parallel to arities
  std::vector<std::vector<RelationSymbol>> tableSyms;  // parallel

  FormulaPtr translated;      // t(phi*) over the table vocabulary
  FormulaPtr translatedCore;  // desugared
  std::vector<FormulaPtr> psiRange;  // diamond-argument subformulas, in order
  FormulaPtr xi1, xi2, xi3;
  FormulaPtr theta;
  long long xi1Conjuncts = 0, xi2Conjuncts = 0, xi3Conjuncts = 0;

  static TableReduction build(const FormulaPtr& phi, int vocabCap = 2);

  Vocabulary theta_vocab() const;
  int arity_slot(int arity) const;  // index into arities
  int max_table_index() const;
  int default_depth_bound() const;  // modal_depth(phi*) * max_table_index

  // Translation of a phi*-shaped formula to the table vocabulary.
  FormulaPtr translate(const FormulaPtr& f) const;

  // Same worlds; every table symbol is interpreted by the set of tuples
  // realizing it.  Requires phi* at w; asserts each Theta conjunct.
  KripkeModel forward_model(const KripkeModel& starModel, int w) const;

  struct Extended {
    KripkeModel model;
    int supplementalCovers = 0;  // extra covers for stabilized base tuples
  };

  // Extension 1 (permutation closure), Extension 2 (cover every tuple with
  // the least working table), and a covering pass for base tuples with
  // repeated components.  Asserts closure, coverage and that no subformula
  // truth value moved.
  Extended extend_model(const KripkeModel& thetaModel) const;

  struct Layered {
    KripkeModel model;  // over tau
    int designated;     // index of (w, 2, 0)
    int baseWorlds = 0, maxLayer = 2, depthBound = 0;
    long long assignedTuples = 0;
    long long primaryOrbits = 0;
    int fallbackDeviations = 0;
    int supplementalCovers = 0;

    int world_index(int v, int ell, int r) const {
      return (v * (maxLayer - 1) + (ell - 2)) * (depthBound + 1) + r;
    }
    int world_count() const {
      return baseWorlds * (maxLayer - 1) * (depthBound + 1);
    }
  };

  // Requires Theta at w and depthBound >= default_depth_bound() (pass -1 for
  // the default).  Asserts the assignment claim (no tuple is assigned twice),
  // realization of every assigned table, and phi* at the designated world.
  Layered backward_model(const KripkeModel& thetaModel, int w,
                         int depthBound = -1) const;
};

// phi* plus the fresh-proposition map, as a standalone step.
std::pair<FormulaPtr, std::vector<std::pair<FormulaPtr, std::string>>>
table_normal_form(const FormulaPtr& phi, const Vocabulary& vocab,
                  int vocabCap = 2);

}  // namespace pml
