#pragma once

// Shared helpers for the test suites: seeded random generators for terms,
// formulas and models, a raw (unpruned) model enumerator, and the direct
// window-operator evaluator used as an independent oracle.

#include <random>

#include "pml/checker.hpp"
#include "pml/model.hpp"
#include "pml/parser.hpp"
#include "pml/table.hpp"

namespace pmltest {

using namespace pml;

using Rng = std::mt19937_64;

inline int pick(Rng& rng, int n) { return static_cast<int>(rng() % n); }

struct GenOpts {
  Vocabulary vocab;
  std::vector<std::string> props = {"p", "q"};
  int maxFormulaNodes = 12;
  int maxTermNodes = 5;
  bool negOnlyTerms = false;   // PML(!): diamond terms are R or !R
  bool allowUnionDiff = true;  // | and \ inside terms
  bool allowE = false;
  bool allowWindow = false;
  bool allowConstants = true;
};

inline TermPtr random_term(Rng& rng, const GenOpts& o, int arity, int budget) {
  auto syms = o.vocab.of_arity(arity);
  if (syms.empty()) fail(ErrorKind::Internal, "no symbol at requested arity");
  if (o.negOnlyTerms) {
    TermPtr t = t_sym(syms[pick(rng, static_cast<int>(syms.size()))]);
    return rng() % 2 ? t : t_neg(t);
  }
  if (budget <= 1) return t_sym(syms[pick(rng, static_cast<int>(syms.size()))]);
  switch (pick(rng, o.allowUnionDiff ? 7 : 5)) {
    case 0: return t_sym(syms[pick(rng, static_cast<int>(syms.size()))]);
    case 1: return t_cyc(random_term(rng, o, arity, budget - 1));
    case 2: return t_swap(random_term(rng, o, arity, budget - 1));
    case 3: return t_neg(random_term(rng, o, arity, budget - 1));
    case 4:
      return t_inter(random_term(rng, o, arity, budget / 2),
                     random_term(rng, o, arity, budget / 2));
    case 5:
      return t_union(random_term(rng, o, arity, budget / 2),
                     random_term(rng, o, arity, budget / 2));
    default:
      return t_diff(random_term(rng, o, arity, budget / 2),
                    random_term(rng, o, arity, budget / 2));
  }
}

inline FormulaPtr random_formula(Rng& rng, const GenOpts& o, int budget) {
  auto leaf = [&]() -> FormulaPtr {
    int n = static_cast<int>(o.props.size()) + (o.allowConstants ? 2 : 0);
    int c = pick(rng, n);
    if (c < static_cast<int>(o.props.size())) return f_prop(o.props[c]);
    return c == static_cast<int>(o.props.size()) ? f_top() : f_bottom();
  };
  if (budget <= 1) return leaf();
  int cases = 5 + (o.allowE ? 2 : 0) + (o.allowWindow ? 1 : 0);
  int c = pick(rng, cases);
  switch (c) {
    case 0: return leaf();
    case 1: return f_not(random_formula(rng, o, budget - 1));
    case 2:
      return f_and(random_formula(rng, o, budget / 2),
                   random_formula(rng, o, budget / 2));
    case 3:
      return f_or(random_formula(rng, o, budget / 2),
                  random_formula(rng, o, budget / 2));
    case 4:
    default: {
      const auto& syms = o.vocab.symbols();
      const RelationSymbol& sym = syms[pick(rng, static_cast<int>(syms.size()))];
      int k = sym.arity - 1;
      TermPtr term = random_term(rng, o, sym.arity, o.maxTermNodes);
      std::vector<FormulaPtr> args;
      for (int i = 0; i < k; ++i)
        args.push_back(random_formula(rng, o, std::max(1, (budget - 2) / k)));
      if (c == 4) {
        return rng() % 2 ? f_diamond(term, std::move(args))
                         : f_box(term, std::move(args));
      }
      if (o.allowE && (c == 5 || c == 6)) {
        auto body = random_formula(rng, o, budget - 1);
        return c == 5 ? f_diamond_e(body) : f_box_a(body);
      }
      return f_window(sym, std::move(args));
    }
  }
}

// Every model over (vocab, props) with exactly `worlds` worlds, no symmetry
// pruning: raw relation/valuation configurations in lexicographic order.
inline void for_all_models(const Vocabulary& vocab,
                           const std::vector<std::string>& props, int worlds,
                           const std::function<bool(const KripkeModel&)>& fn) {
  std::vector<TupleSet> spaces;
  for (const auto& sym : vocab.symbols())
    spaces.push_back(all_tuples(worlds, sym.arity));
  size_t bits = 0;
  for (const auto& s : spaces) bits += s.size();
  size_t propBits = props.size() * static_cast<size_t>(worlds);
  std::vector<char> sel(bits + propBits, 0);
  while (true) {
    KripkeModel m;
    m.worlds = worlds;
    size_t off = 0;
    for (size_t i = 0; i < spaces.size(); ++i) {
      m.add_symbol(vocab.symbols()[i]);
      TupleSet ts;
      for (size_t j = 0; j < spaces[i].size(); ++j)
        if (sel[off + j]) ts.push_back(spaces[i][j]);
      m.relations.back() = std::move(ts);
      off += spaces[i].size();
    }
    for (size_t p = 0; p < props.size(); ++p) {
      WorldSet ws = ws_empty(worlds);
      for (int w = 0; w < worlds; ++w)
        ws[w] = sel[off + p * worlds + w] != 0;
      m.valuation[props[p]] = std::move(ws);
    }
    if (!fn(m)) return;
    size_t i = 0;
    while (i < sel.size() && sel[i]) sel[i++] = 0;
    if (i == sel.size()) break;
    sel[i] = 1;
  }
}

// Direct evaluation of win_R(args): w satisfies it iff every tuple whose
// components satisfy the arguments is R-related to w.
inline WorldSet window_truth(const KripkeModel& m, const RelationSymbol& sym,
                             const std::vector<FormulaPtr>& args) {
  int k = static_cast<int>(args.size());
  std::vector<WorldSet> argSets;
  for (const auto& a : args) argSets.push_back(check_naive(m, a));
  const TupleSet& rel = m.relation(sym.name);
  WorldSet out = ws_full(m.worlds);
  for (int w = 0; w < m.worlds; ++w) {
    for (const auto& t : all_tuples(m.worlds, k)) {
      bool allHold = true;
      for (int i = 0; i < k && allHold; ++i) allHold = argSets[i][t[i]];
      if (!allHold) continue;
      Tuple full(k + 1);
      full[0] = w;
      for (int i = 0; i < k; ++i) full[i + 1] = t[i];
      if (!ts_member(rel, full)) {
        out[w] = false;
        break;
      }
    }
  }
  return out;
}

inline Vocabulary binary_R() {
  Vocabulary v;
  v.add({"R", 2});
  return v;
}

inline Vocabulary binary_RS() {
  Vocabulary v;
  v.add({"R", 2});
  v.add({"S", 2});
  return v;
}

inline Vocabulary ternary_T() {
  Vocabulary v;
  v.add({"T", 3});
  return v;
}

}  // namespace pmltest
