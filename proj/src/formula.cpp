#include "pml/formula.hpp"

#include <set>
#include <sstream>

namespace pml {

namespace {

FormulaPtr make(FKind kind, std::string prop, TermPtr term, RelationSymbol wsym,
                std::vector<FormulaPtr> args) {
  auto f = std::make_shared<Formula>();
  f->kind = kind;
  f->prop = std::move(prop);
  f->term = std::move(term);
  f->wsym = std::move(wsym);
  f->args = std::move(args);
  uint64_t h = hash_mix(0xf0, static_cast<uint64_t>(kind));
  for (char c : f->prop) h = hash_mix(h, static_cast<uint64_t>(c));
  if (f->term) {
    h = hash_mix(h, f->term->hash);
    f->tsize += f->term->tsize;
  }
  if (f->kind == FKind::Window) {
    for (char c : f->wsym.name) h = hash_mix(h, static_cast<uint64_t>(c));
    f->tsize += 1;
  }
  bool modal = kind == FKind::Diamond || kind == FKind::Box ||
               kind == FKind::DiamondE || kind == FKind::BoxA ||
               kind == FKind::Window;
  for (const auto& a : f->args) {
    h = hash_mix(h, a->hash);
    f->tsize += a->tsize;
    f->mdepth = std::max(f->mdepth, a->mdepth);
  }
  if (modal) f->mdepth += 1;
  f->hash = h;
  return f;
}

}  // namespace

FormulaPtr f_prop(const std::string& name) {
  if (name.empty()) fail(ErrorKind::Wellformed, "empty proposition name");
  return make(FKind::Prop, name, nullptr, {}, {});
}
FormulaPtr f_top() { return make(FKind::Top, "", nullptr, {}, {}); }
FormulaPtr f_bottom() { return make(FKind::Bottom, "", nullptr, {}, {}); }
FormulaPtr f_not(FormulaPtr a) {
  return make(FKind::Not, "", nullptr, {}, {std::move(a)});
}
FormulaPtr f_and(FormulaPtr a, FormulaPtr b) {
  return make(FKind::And, "", nullptr, {}, {std::move(a), std::move(b)});
}
FormulaPtr f_or(FormulaPtr a, FormulaPtr b) {
  return make(FKind::Or, "", nullptr, {}, {std::move(a), std::move(b)});
}

FormulaPtr f_diamond(TermPtr term, std::vector<FormulaPtr> args) {
  if (term->arity != static_cast<int>(args.size()) + 1)
    fail(ErrorKind::Wellformed,
         "diamond term arity " + std::to_string(term->arity) + " needs " +
             std::to_string(term->arity - 1) + " arguments, got " +
             std::to_string(args.size()));
  return make(FKind::Diamond, "", std::move(term), {}, std::move(args));
}

FormulaPtr f_box(TermPtr term, std::vector<FormulaPtr> args) {
  if (term->arity != static_cast<int>(args.size()) + 1)
    fail(ErrorKind::Wellformed, "box term arity does not match its arguments");
  return make(FKind::Box, "", std::move(term), {}, std::move(args));
}

FormulaPtr f_diamond_e(FormulaPtr a) {
  return make(FKind::DiamondE, "", nullptr, {}, {std::move(a)});
}
FormulaPtr f_box_a(FormulaPtr a) {
  return make(FKind::BoxA, "", nullptr, {}, {std::move(a)});
}

FormulaPtr f_window(const RelationSymbol& sym, std::vector<FormulaPtr> args) {
  if (sym.arity != static_cast<int>(args.size()) + 1)
    fail(ErrorKind::Wellformed,
         "window symbol arity does not match its arguments");
  return make(FKind::Window, "", nullptr, sym, std::move(args));
}

FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) {
  return f_or(f_not(std::move(a)), std::move(b));
}

FormulaPtr f_iff(FormulaPtr a, FormulaPtr b) {
  return f_and(f_implies(a, b), f_implies(b, a));
}

namespace {

FormulaPtr balanced(std::vector<FormulaPtr>& fs, size_t lo, size_t hi,
                    bool conj) {
  if (hi - lo == 1) return fs[lo];
  size_t mid = lo + (hi - lo) / 2;
  auto l = balanced(fs, lo, mid, conj);
  auto r = balanced(fs, mid, hi, conj);
  return conj ? f_and(std::move(l), std::move(r))
              : f_or(std::move(l), std::move(r));
}

}  // namespace

FormulaPtr f_and_list(std::vector<FormulaPtr> fs) {
  if (fs.empty()) return f_top();
  return balanced(fs, 0, fs.size(), true);
}

FormulaPtr f_or_list(std::vector<FormulaPtr> fs) {
  if (fs.empty()) return f_bottom();
  return balanced(fs, 0, fs.size(), false);
}

bool formula_eq(const FormulaPtr& x, const FormulaPtr& y) {
  if (x.get() == y.get()) return true;
  if (!x || !y) return false;
  if (x->hash != y->hash || x->kind != y->kind || x->prop != y->prop ||
      x->args.size() != y->args.size())
    return false;
  if (x->kind == FKind::Window && !(x->wsym == y->wsym)) return false;
  if ((x->term == nullptr) != (y->term == nullptr)) return false;
  if (x->term && !term_eq(x->term, y->term)) return false;
  for (size_t i = 0; i < x->args.size(); ++i)
    if (!formula_eq(x->args[i], y->args[i])) return false;
  return true;
}

std::string render_formula(const FormulaPtr& f) {
  std::ostringstream os;
  struct R {
    std::ostringstream& os;
    void args(const std::vector<FormulaPtr>& as) {
      os << "(";
      for (size_t i = 0; i < as.size(); ++i) {
        if (i) os << ", ";
        go(as[i]);
      }
      os << ")";
    }
    void go(const FormulaPtr& f) {
      switch (f->kind) {
        case FKind::Prop: os << f->prop; return;
        case FKind::Top: os << "true"; return;
        case FKind::Bottom: os << "false"; return;
        case FKind::Not: os << "~"; go(f->args[0]); return;
        case FKind::And:
          os << "("; go(f->args[0]); os << " & "; go(f->args[1]); os << ")";
          return;
        case FKind::Or:
          os << "("; go(f->args[0]); os << " | "; go(f->args[1]); os << ")";
          return;
        case FKind::Diamond:
          os << "<" << render_term(f->term) << ">"; args(f->args); return;
        case FKind::Box:
          os << "[" << render_term(f->term) << "]"; args(f->args); return;
        case FKind::DiamondE: os << "<E> "; go(f->args[0]); return;
        case FKind::BoxA: os << "[A] "; go(f->args[0]); return;
        case FKind::Window: os << "win_" << f->wsym.name; args(f->args); return;
      }
    }
  } r{os};
  r.go(f);
  return os.str();
}

namespace {

// Pointer-keyed memo: shared subtrees are rewritten once, which keeps the
// desugared form a DAG of the same magnitude as the input.
using PtrMemo = std::unordered_map<const Formula*, FormulaPtr>;

FormulaPtr desugar_rec(const FormulaPtr& f, PtrMemo& memo) {
  auto it = memo.find(f.get());
  if (it != memo.end()) return it->second;
  FormulaPtr out;
  switch (f->kind) {
    case FKind::Prop:
    case FKind::Top:
    case FKind::Bottom:
      out = f;
      break;
    case FKind::Not:
      out = f_not(desugar_rec(f->args[0], memo));
      break;
    case FKind::And:
      out = f_and(desugar_rec(f->args[0], memo), desugar_rec(f->args[1], memo));
      break;
    case FKind::Or:
      out = f_not(f_and(f_not(desugar_rec(f->args[0], memo)),
                        f_not(desugar_rec(f->args[1], memo))));
      break;
    case FKind::Diamond: {
      std::vector<FormulaPtr> as;
      for (const auto& a : f->args) as.push_back(desugar_rec(a, memo));
      out = f_diamond(f->term, std::move(as));
      break;
    }
    case FKind::Box: {
      std::vector<FormulaPtr> as;
      for (const auto& a : f->args)
        as.push_back(f_not(desugar_rec(a, memo)));
      out = f_not(f_diamond(f->term, std::move(as)));
      break;
    }
    case FKind::DiamondE:
      out = f_diamond_e(desugar_rec(f->args[0], memo));
      break;
    case FKind::BoxA:
      out = f_not(f_diamond_e(f_not(desugar_rec(f->args[0], memo))));
      break;
    case FKind::Window:
      fail(ErrorKind::Shape, "window operator present; eliminate it first");
  }
  memo[f.get()] = out;
  return out;
}

}  // namespace

FormulaPtr desugar(const FormulaPtr& f) {
  PtrMemo memo;
  return desugar_rec(f, memo);
}

namespace {

FormulaPtr elim_window_rec(const FormulaPtr& f, PtrMemo& memo) {
  auto it = memo.find(f.get());
  if (it != memo.end()) return it->second;
  FormulaPtr out;
  if (f->kind == FKind::Window) {
    std::vector<FormulaPtr> as;
    for (const auto& a : f->args)
      as.push_back(f_not(elim_window_rec(a, memo)));
    out = f_box(t_neg(t_sym(f->wsym)), std::move(as));
  } else if (f->args.empty()) {
    out = f;
  } else {
    std::vector<FormulaPtr> as;
    bool changed = false;
    for (const auto& a : f->args) {
      as.push_back(elim_window_rec(a, memo));
      changed |= as.back().get() != a.get();
    }
    if (!changed) {
      out = f;
    } else {
      switch (f->kind) {
        case FKind::Not: out = f_not(as[0]); break;
        case FKind::And: out = f_and(as[0], as[1]); break;
        case FKind::Or: out = f_or(as[0], as[1]); break;
        case FKind::Diamond: out = f_diamond(f->term, std::move(as)); break;
        case FKind::Box: out = f_box(f->term, std::move(as)); break;
        case FKind::DiamondE: out = f_diamond_e(as[0]); break;
        case FKind::BoxA: out = f_box_a(as[0]); break;
        default: fail(ErrorKind::Internal, "unexpected node in window pass");
      }
    }
  }
  memo[f.get()] = out;
  return out;
}

}  // namespace

FormulaPtr eliminate_window(const FormulaPtr& f) {
  PtrMemo memo;
  return elim_window_rec(f, memo);
}

std::vector<FormulaPtr> subformula_order(const FormulaPtr& f) {
  std::vector<FormulaPtr> order;
  FormulaSet seen;                          // structural, emitted formulas
  std::unordered_set<const Formula*> done;  // pointers fully processed
  // Iterative post-order; the second visit emits the node.
  std::vector<std::pair<FormulaPtr, bool>> stack{{f, false}};
  while (!stack.empty()) {
    auto [cur, expanded] = stack.back();
    stack.pop_back();
    if (expanded) {
      if (!seen.count(cur)) {
        seen.insert(cur);
        order.push_back(cur);
      }
      done.insert(cur.get());
      continue;
    }
    if (done.count(cur.get())) continue;
    if (seen.count(cur)) {
      // A structurally equal formula was emitted, so every subformula of cur
      // is already in the order.
      done.insert(cur.get());
      continue;
    }
    stack.emplace_back(cur, true);
    for (auto it = cur->args.rbegin(); it != cur->args.rend(); ++it)
      stack.emplace_back(*it, false);
  }
  return order;
}

Vocabulary symbols_of(const FormulaPtr& f) {
  std::vector<RelationSymbol> syms;
  std::function<void(const FormulaPtr&)> go = [&](const FormulaPtr& g) {
    if (g->term) collect_symbols(g->term, syms);
    if (g->kind == FKind::Window) {
      bool found = false;
      for (const auto& s : syms)
        if (s.name == g->wsym.name) found = true;
      if (!found) syms.push_back(g->wsym);
    }
    for (const auto& a : g->args) go(a);
  };
  go(f);
  std::sort(syms.begin(), syms.end());
  return Vocabulary(syms);
}

std::vector<std::string> props_of(const FormulaPtr& f) {
  std::set<std::string> props;
  std::function<void(const FormulaPtr&)> go = [&](const FormulaPtr& g) {
    if (g->kind == FKind::Prop) props.insert(g->prop);
    for (const auto& a : g->args) go(a);
  };
  go(f);
  return {props.begin(), props.end()};
}

}  // namespace pml
