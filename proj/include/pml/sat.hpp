#pragma once

#include <functional>
#include <optional>

#include "pml/checker.hpp"

namespace pml {

// ---------------------------------------------------------------------------
// Bounded brute-force satisfiability.  Models over the formula's vocabulary
// are enumerated for |W| = 1..maxWorlds, sparsest first, with isomorphic
// duplicates pruned by a lexicographic canonicity check under world renaming.
// The oracle reports "exhausted", never "unsatisfiable": bounded search is
// one-sided evidence.
// ---------------------------------------------------------------------------

struct SatOptions {
  std::optional<Vocabulary> vocab;                 // default: symbols_of(phi)
  std::optional<std::vector<std::string>> props;   // default: props_of(phi)
  long long budgetMs = 0;                          // 0 = no budget
};

struct SatVerdict {
  bool satisfiable = false;
  KripkeModel model;  // witness when satisfiable
  int world = -1;     // least witness world
  int bound = 0;      // searched bound
};

SatVerdict sat_bounded(const FormulaPtr& phi, int maxWorlds,
                       const SatOptions& opts = {});

// Calls fn for every canonical model with exactly `worlds` worlds over the
// given vocabulary and propositions; stops early when fn returns false.
void enumerate_models(const Vocabulary& vocab,
                      const std::vector<std::string>& props, int worlds,
                      const std::function<bool(const KripkeModel&)>& fn,
                      const SatOptions& opts = {});

enum class EquisatOutcome { BothSat, BothExhausted, OnlyFirst, OnlySecond };

struct EquisatReport {
  SatVerdict first, second;
  EquisatOutcome outcome;
};

EquisatReport equisat_check(const FormulaPtr& phi, const FormulaPtr& psi,
                            int boundPhi, int boundPsi,
                            const SatOptions& opts = {});

}  // namespace pml
