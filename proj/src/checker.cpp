#include "pml/checker.hpp"

namespace pml {

const WorldSet& Labeling::at(const FormulaPtr& f) const {
  auto it = position.find(f);
  if (it == position.end())
    fail(ErrorKind::Internal, "formula not in labeling: " + render_formula(f));
  return sets[it->second];
}

namespace {

void ensure_no_neg(const TermPtr& t) {
  if (t->kind == TermKind::Neg)
    fail(ErrorKind::Internal, "negation survived term normalization");
  if (t->a) ensure_no_neg(t->a);
  if (t->b) ensure_no_neg(t->b);
}

// Truth set of a diamond whose term interpretation has been materialized.
WorldSet diamond_from_tuples(const TupleSet& tuples,
                             const std::vector<const WorldSet*>& argSets,
                             int worlds) {
  WorldSet out = ws_empty(worlds);
  for (const auto& t : tuples) {
    if (out[t[0]]) continue;
    bool ok = true;
    for (size_t i = 1; i < t.size(); ++i)
      if (!(*argSets[i - 1])[t[i]]) {
        ok = false;
        break;
      }
    if (ok) out[t[0]] = true;
  }
  return out;
}

// The early-break loop for <!core>(...): for each world, walk the product of
// the argument sets with one cursor per position; the first probed tuple
// outside the core admits the world.  Probes per world stay <= |core| + 1
// because every probe before the break hits a distinct core tuple.
WorldSet diamond_negated(const TupleSet& core,
                         const std::vector<const WorldSet*>& argSets,
                         int worlds, CheckStats* stats) {
  int k = static_cast<int>(argSets.size());
  std::vector<std::vector<int>> argIdx(k);
  bool emptyArg = false;
  for (int i = 0; i < k; ++i) {
    argIdx[i] = ws_indices(*argSets[i]);
    if (argIdx[i].empty()) emptyArg = true;
  }
  WorldSet out = ws_empty(worlds);
  if (stats) stats->negatedDiamonds += 1;
  if (emptyArg) return out;  // no witness tuple at all
  Tuple probe(k + 1);
  for (int w = 0; w < worlds; ++w) {
    probe[0] = w;
    std::vector<int> cursor(k, 0);
    long long probes = 0;
    while (true) {
      for (int i = 0; i < k; ++i) probe[i + 1] = argIdx[i][cursor[i]];
      ++probes;
      if (!ts_member(core, probe)) {
        out[w] = true;
        break;
      }
      int i = k - 1;
      while (i >= 0 &&
             cursor[i] + 1 == static_cast<int>(argIdx[i].size()))
        cursor[i--] = 0;
      if (i < 0) break;
      ++cursor[i];
    }
    if (stats) {
      stats->totalProbes += probes;
      stats->maxProbeExcess = std::max(
          stats->maxProbeExcess, probes - static_cast<long long>(core.size()));
    }
  }
  return out;
}

}  // namespace

Labeling label_all(const KripkeModel& model, const FormulaPtr& phi,
                   CheckStats* stats) {
  Labeling lab;
  FormulaPtr root = desugar(phi);
  lab.order = subformula_order(root);
  lab.sets.reserve(lab.order.size());
  for (size_t i = 0; i < lab.order.size(); ++i)
    lab.position.emplace(lab.order[i], static_cast<int>(i));
  int n = model.worlds;
  for (const auto& f : lab.order) {
    WorldSet set;
    switch (f->kind) {
      case FKind::Prop: set = model.prop_set(f->prop); break;
      case FKind::Top: set = ws_full(n); break;
      case FKind::Bottom: set = ws_empty(n); break;
      case FKind::Not: set = ws_not(lab.at(f->args[0])); break;
      case FKind::And:
        set = ws_and(lab.at(f->args[0]), lab.at(f->args[1]));
        break;
      case FKind::DiamondE:
        set = ws_any(lab.at(f->args[0])) ? ws_full(n) : ws_empty(n);
        break;
      case FKind::Diamond: {
        std::vector<const WorldSet*> argSets;
        for (const auto& a : f->args) argSets.push_back(&lab.at(a));
        NormalizedTerm nt = normalize_term(f->term);
        ensure_no_neg(nt.core);
        TupleSet core = eval_term(nt.core, model);
        set = nt.negated ? diamond_negated(core, argSets, n, stats)
                         : diamond_from_tuples(core, argSets, n);
        break;
      }
      default:
        fail(ErrorKind::Internal, "labeling hit a non-core node");
    }
    lab.sets.push_back(std::move(set));
  }
  return lab;
}

WorldSet check_labeling(const KripkeModel& model, const FormulaPtr& phi,
                        CheckStats* stats) {
  Labeling lab = label_all(model, phi, stats);
  return lab.sets.back();
}

namespace {

WorldSet naive_rec(const KripkeModel& m, const FormulaPtr& f) {
  int n = m.worlds;
  switch (f->kind) {
    case FKind::Prop: return m.prop_set(f->prop);
    case FKind::Top: return ws_full(n);
    case FKind::Bottom: return ws_empty(n);
    case FKind::Not: return ws_not(naive_rec(m, f->args[0]));
    case FKind::And:
      return ws_and(naive_rec(m, f->args[0]), naive_rec(m, f->args[1]));
    case FKind::DiamondE:
      return ws_any(naive_rec(m, f->args[0])) ? ws_full(n) : ws_empty(n);
    case FKind::Diamond: {
      std::vector<WorldSet> sets;
      std::vector<const WorldSet*> argSets;
      sets.reserve(f->args.size());
      for (const auto& a : f->args) sets.push_back(naive_rec(m, a));
      for (const auto& s : sets) argSets.push_back(&s);
      return diamond_from_tuples(eval_term(f->term, m), argSets, n);
    }
    default:
      fail(ErrorKind::Internal, "naive checker hit a non-core node");
  }
}

}  // namespace

WorldSet check_naive(const KripkeModel& model, const FormulaPtr& phi) {
  return naive_rec(model, desugar(phi));
}

int modal_depth(const FormulaPtr& f) { return f->mdepth; }

}  // namespace pml
