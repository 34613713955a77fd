#include "pml/reduce_neg.hpp"

namespace pml {

namespace {

// R or !R for a symbol of tau; anything else is outside PML(!).
enum class DiamondShape { Positive, Negated };

DiamondShape classify_term(const TermPtr& t) {
  if (t->kind == TermKind::Symbol) return DiamondShape::Positive;
  if (t->kind == TermKind::Neg && t->a->kind == TermKind::Symbol)
    return DiamondShape::Negated;
  fail(ErrorKind::Fragment,
       "term '" + render_term(t) + "' is outside PML(!): only R or !R allowed");
}

const RelationSymbol& base_symbol(const TermPtr& t) {
  return t->kind == TermKind::Symbol ? t->symbol : t->a->symbol;
}

void check_fragment(const FormulaPtr& f) {
  switch (f->kind) {
    case FKind::Window:
      fail(ErrorKind::Fragment, "window operator is outside PML(!)");
    case FKind::DiamondE:
    case FKind::BoxA:
      fail(ErrorKind::Fragment, "global modality is outside PML(!)");
    case FKind::Diamond:
    case FKind::Box:
      classify_term(f->term);
      break;
    default:
      break;
  }
  for (const auto& a : f->args) check_fragment(a);
}

std::string fresh_name(const Vocabulary& tau, const std::string& base,
                       const char* suffix) {
  std::string name = base + suffix;
  while (tau.contains(name)) name += "_";
  return name;
}

}  // namespace

const std::pair<RelationSymbol, RelationSymbol>& NegReduction::split_of(
    const std::string& base) const {
  for (size_t i = 0; i < tau.symbols().size(); ++i)
    if (tau.symbols()[i].name == base) return symbolMap[i];
  fail(ErrorKind::Vocab, "symbol " + base + " not in the reduction vocabulary");
}

Vocabulary NegReduction::theta_vocab() const {
  Vocabulary v;
  for (const auto& [r1, r2] : symbolMap) {
    v.add(r1);
    v.add(r2);
  }
  return v;
}

NegReduction NegReduction::build(const FormulaPtr& phi) {
  NegReduction red;
  red.source = phi;
  check_fragment(phi);
  red.sourceCore = desugar(phi);
  red.tau = symbols_of(phi);
  for (const auto& sym : red.tau.symbols())
    red.symbolMap.push_back({{fresh_name(red.tau, sym.name, "_1"), sym.arity},
                             {fresh_name(red.tau, sym.name, "_2"), sym.arity}});

  // t(psi): <R> becomes <R_1>, <!R> becomes <R_2>, in diamonds and boxes.
  std::unordered_map<const Formula*, FormulaPtr> memo;
  std::function<FormulaPtr(const FormulaPtr&)> tsubst =
      [&](const FormulaPtr& f) -> FormulaPtr {
    auto it = memo.find(f.get());
    if (it != memo.end()) return it->second;
    FormulaPtr out;
    if (f->kind == FKind::Diamond || f->kind == FKind::Box) {
      const auto& split = red.split_of(base_symbol(f->term).name);
      TermPtr nt = classify_term(f->term) == DiamondShape::Positive
                       ? t_sym(split.first)
                       : t_sym(split.second);
      std::vector<FormulaPtr> args;
      for (const auto& a : f->args) args.push_back(tsubst(a));
      out = f->kind == FKind::Diamond ? f_diamond(nt, std::move(args))
                                      : f_box(nt, std::move(args));
    } else if (f->args.empty()) {
      out = f;
    } else {
      std::vector<FormulaPtr> args;
      for (const auto& a : f->args) args.push_back(tsubst(a));
      switch (f->kind) {
        case FKind::Not: out = f_not(args[0]); break;
        case FKind::And: out = f_and(args[0], args[1]); break;
        case FKind::Or: out = f_or(args[0], args[1]); break;
        default: fail(ErrorKind::Internal, "unexpected node in t()");
      }
    }
    memo[f.get()] = out;
    return out;
  };
  red.translated = tsubst(phi);
  red.translatedCore = desugar(red.translated);

  // eta: one conjunct per pair of an <R_1> and an <R_2> subformula over the
  // same base symbol (arities agree automatically).
  auto subf = subformula_order(red.translatedCore);
  std::vector<FormulaPtr> conjuncts;
  for (const auto& a : subf) {
    if (a->kind != FKind::Diamond) continue;
    for (const auto& b : subf) {
      if (b->kind != FKind::Diamond) continue;
      bool paired = false;
      for (const auto& [r1, r2] : red.symbolMap)
        if (a->term->symbol == r1 && b->term->symbol == r2) paired = true;
      if (!paired) continue;
      std::vector<FormulaPtr> disj;
      for (size_t l = 0; l < a->args.size(); ++l)
        disj.push_back(f_box_a(f_or(f_not(a->args[l]), f_not(b->args[l]))));
      conjuncts.push_back(
          f_implies(f_diamond_e(f_and(f_not(a), f_not(b))), f_or_list(disj)));
    }
  }
  red.etaConjuncts = static_cast<long long>(conjuncts.size());
  red.eta = f_and_list(std::move(conjuncts));
  red.theta = f_and(red.translated, red.eta);
  return red;
}

KripkeModel NegReduction::forward_model(const KripkeModel& model,
                                        int w) const {
  if (w < 0 || w >= model.worlds)
    fail(ErrorKind::Precondition, "world out of range");
  if (!check_naive(model, source)[w])
    fail(ErrorKind::Precondition,
         "input model does not satisfy the formula at world " +
             std::to_string(w));
  KripkeModel out;
  out.worlds = model.worlds;
  out.valuation = model.valuation;
  for (size_t i = 0; i < tau.symbols().size(); ++i) {
    const auto& sym = tau.symbols()[i];
    const TupleSet& pos = model.relation(sym.name);
    out.add_symbol(symbolMap[i].first);
    out.relations.back() = pos;
    out.add_symbol(symbolMap[i].second);
    out.relations.back() = ts_complement(pos, model.worlds, sym.arity);
  }
  if (!check_labeling(out, theta)[w])
    fail(ErrorKind::Internal, "forward model fails theta at the root world");
  return out;
}

namespace {

struct DiamondGroup {
  std::vector<FormulaPtr> diamonds;  // all <R_i>(...) subformulas
};

}  // namespace

KripkeModel NegReduction::complete_model(const KripkeModel& thetaModel) const {
  Labeling lab = label_all(thetaModel, translatedCore);
  const auto& subf = lab.order;

  KripkeModel out = thetaModel;
  for (size_t i = 0; i < tau.symbols().size(); ++i) {
    const auto& sym = tau.symbols()[i];
    const auto& [r1, r2] = symbolMap[i];
    DiamondGroup g1, g2;
    for (const auto& f : subf) {
      if (f->kind != FKind::Diamond) continue;
      if (f->term->symbol == r1) g1.diamonds.push_back(f);
      if (f->term->symbol == r2) g2.diamonds.push_back(f);
    }
    // A tuple may join R_i when no <R_i> subformula is falsified by it: if
    // the argument labelings hold at positions 1..k-1, the diamond must
    // already hold at position 0.
    auto admits = [&](const DiamondGroup& g, const Tuple& t) {
      for (const auto& d : g.diamonds) {
        bool argsHold = true;
        for (size_t l = 0; l < d->args.size(); ++l)
          if (!lab.at(d->args[l])[t[l + 1]]) {
            argsHold = false;
            break;
          }
        if (argsHold && !lab.at(d)[t[0]]) return false;
      }
      return true;
    };
    const TupleSet& s1 = thetaModel.relation(r1.name);
    const TupleSet& s2 = thetaModel.relation(r2.name);
    TupleSet add1, add2;
    for (const auto& t : all_tuples(thetaModel.worlds, sym.arity)) {
      if (ts_member(s1, t) || ts_member(s2, t)) continue;
      if (admits(g1, t)) {
        add1.push_back(t);
      } else if (admits(g2, t)) {
        add2.push_back(t);
      } else {
        fail(ErrorKind::Internal,
             "covering failed for " + sym.name +
                 ": neither side admits a tuple (eta violated?)");
      }
    }
    out.relation(r1.name) = ts_union(s1, add1);
    out.relation(r2.name) = ts_union(s2, add2);
  }

  // Completion must not move any subformula truth value.
  Labeling after = label_all(out, translatedCore);
  for (const auto& f : lab.order)
    if (lab.at(f) != after.at(f))
      fail(ErrorKind::Internal,
           "completion changed the truth set of " + render_formula(f));
  return out;
}

NegReduction::Backward NegReduction::backward_model(
    const KripkeModel& thetaModel, int w) const {
  if (w < 0 || w >= thetaModel.worlds)
    fail(ErrorKind::Precondition, "world out of range");
  if (!check_labeling(thetaModel, theta)[w])
    fail(ErrorKind::Precondition,
         "input model does not satisfy theta at world " + std::to_string(w));

  Backward b;
  b.baseWorlds = thetaModel.worlds;
  b.completed = complete_model(thetaModel);
  int n = thetaModel.worlds;

  KripkeModel& d = b.doubled;
  d.worlds = 2 * n;
  for (const auto& [p, ws] : thetaModel.valuation) {
    WorldSet lifted = ws_empty(2 * n);
    for (int v = 0; v < n; ++v)
      if (ws[v]) lifted[v] = lifted[v + n] = true;
    d.valuation[p] = std::move(lifted);
  }
  for (size_t i = 0; i < tau.symbols().size(); ++i) {
    const auto& sym = tau.symbols()[i];
    const TupleSet& s1 = b.completed.relation(symbolMap[i].first.name);
    const TupleSet& s2 = b.completed.relation(symbolMap[i].second.name);
    d.add_symbol(sym);
    TupleSet ts;
    Tuple base(sym.arity);
    for (const auto& u : all_tuples(2 * n, sym.arity)) {
      bool mixed = true, uniform = true;
      int i0 = u[0] / n;
      for (size_t j = 0; j < u.size(); ++j) {
        base[j] = u[j] % n;
        int ij = u[j] / n;
        if (j > 0) {
          mixed = mixed && ij == 1 - i0;
          uniform = uniform && ij == i0;
        }
      }
      if (mixed && uniform)
        fail(ErrorKind::Internal, "doubling rules overlap");
      if (mixed && ts_member(s1, base)) {
        ts.push_back(u);  // rule 1
      } else if (uniform && ts_member(s2, base)) {
        // rule 2: excluded
      } else if (!ts_member(s2, base)) {
        ts.push_back(u);  // rule 3
      }
    }
    d.relations.back() = std::move(ts);
  }
  b.designated = b.world_index(w, 0);
  if (!check_labeling(d, source)[b.designated])
    fail(ErrorKind::Internal,
         "doubled model fails the source formula at (w, 0)");
  return b;
}

void NegReduction::check_transfer(const Backward& b) const {
  Labeling onCompleted = label_all(b.completed, translatedCore);
  Labeling onDoubled = label_all(b.doubled, sourceCore);

  // psi and t(psi) walk in lockstep: t is structural.
  std::unordered_map<const Formula*, FormulaPtr> memo;
  std::function<FormulaPtr(const FormulaPtr&)> tcore =
      [&](const FormulaPtr& f) -> FormulaPtr {
    auto it = memo.find(f.get());
    if (it != memo.end()) return it->second;
    FormulaPtr out;
    if (f->kind == FKind::Diamond) {
      const auto& split = split_of(base_symbol(f->term).name);
      TermPtr nt = classify_term(f->term) == DiamondShape::Positive
                       ? t_sym(split.first)
                       : t_sym(split.second);
      std::vector<FormulaPtr> args;
      for (const auto& a : f->args) args.push_back(tcore(a));
      out = f_diamond(nt, std::move(args));
    } else if (f->args.empty()) {
      out = f;
    } else {
      std::vector<FormulaPtr> args;
      for (const auto& a : f->args) args.push_back(tcore(a));
      out = f->kind == FKind::Not ? f_not(args[0]) : f_and(args[0], args[1]);
    }
    memo[f.get()] = out;
    return out;
  };

  for (const auto& psi : subformula_order(sourceCore)) {
    const WorldSet& nSet = onDoubled.at(psi);
    const WorldSet& mSet = onCompleted.at(tcore(psi));
    for (int v = 0; v < b.baseWorlds; ++v)
      for (int copy = 0; copy < 2; ++copy)
        if (nSet[b.world_index(v, copy)] != mSet[v])
          fail(ErrorKind::Internal,
               "transfer mismatch for " + render_formula(psi) + " at (" +
                   std::to_string(v) + "," + std::to_string(copy) + ")");
  }
}

}  // namespace pml
