#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "support.hpp"

using namespace pmltest;

namespace {

Vocabulary rs3() {
  Vocabulary v = binary_RS();
  v.add({"T", 3});
  return v;
}

}  // namespace

TEST_CASE("parse: worked examples") {
  Vocabulary v = rs3();
  auto f1 = parse_formula("<R>(q)", v);
  CHECK(f1->kind == FKind::Diamond);
  CHECK(f1->term->kind == TermKind::Symbol);
  auto f2 = parse_formula("<!R>(q)", v);
  CHECK(f2->term->kind == TermKind::Neg);
  auto f3 = parse_formula("<(T & swp(T))>(q, r)", v);
  CHECK(f3->args.size() == 2);
  CHECK(f3->term->kind == TermKind::Inter);
  CHECK(render_formula(f3) == "<(T & swp(T))>(q, r)");
}

TEST_CASE("parse: errors name a position or the offending symbol") {
  Vocabulary v = binary_R();
  CHECK_THROWS_WITH_AS(parse_formula("<R>(p", v), doctest::Contains("offset"),
                       Error);
  CHECK_THROWS_WITH_AS(parse_formula("<Q>(p)", v),
                       doctest::Contains("undeclared"), Error);
  CHECK_THROWS_WITH_AS(parse_formula("<R>(p, q)", v),
                       doctest::Contains("arity"), Error);
  CHECK_THROWS_AS(parse_formula("p & q", v), Error);  // missing parens
}

TEST_CASE("parse: vocabulary inference from usage") {
  auto parsed = parse_formula_infer("(<R>(p) & <T>(p, q))");
  CHECK(parsed.vocab.find("R")->arity == 2);
  CHECK(parsed.vocab.find("T")->arity == 3);
  CHECK_THROWS_WITH_AS(parse_formula_infer("(<R>(p) & <R>(p, q))"),
                       doctest::Contains("arities"), Error);
}

TEST_CASE("render/parse round trips on random formulas") {
  Rng rng(23);
  GenOpts o;
  o.vocab = rs3();
  o.allowE = true;
  o.allowWindow = true;
  for (int trial = 0; trial < 300; ++trial) {
    FormulaPtr f = random_formula(rng, o, 2 + trial % 12);
    std::string text = render_formula(f);
    FormulaPtr g = parse_formula(text, o.vocab);
    CHECK(formula_eq(f, g));
    CHECK(render_formula(g) == text);
  }
}

TEST_CASE("subformula order: examples and the dependency property") {
  Vocabulary v = binary_R();
  auto just_p = subformula_order(parse_formula("p", v));
  CHECK(just_p.size() == 1);

  auto order = subformula_order(parse_formula("(~p & q)", v));
  CHECK(order.size() == 4);

  auto dedup = subformula_order(parse_formula("<R>(p)", v));
  CHECK(dedup.size() == 2);  // p and the diamond

  // duplicates collapse: <R>(p, p) has subformulas {p, <R>(p,p)} with R/3
  Vocabulary v3;
  v3.add({"R", 3});
  auto dd = subformula_order(parse_formula("<R>(p, p)", v3));
  CHECK(dd.size() == 2);

  Rng rng(31);
  GenOpts o;
  o.vocab = rs3();
  o.allowE = true;
  for (int trial = 0; trial < 100; ++trial) {
    FormulaPtr f = random_formula(rng, o, 12);
    auto ord = subformula_order(f);
    CHECK(formula_eq(ord.back(), f));
    FormulaSet seen;
    for (const auto& g : ord) {
      for (const auto& a : g->args) CHECK(seen.count(a));
      CHECK(!seen.count(g));  // distinct
      seen.insert(g);
    }
  }
}

TEST_CASE("window elimination: shape") {
  Vocabulary v = binary_R();
  auto w = parse_formula("win_R(p)", v);
  auto e = eliminate_window(w);
  CHECK(render_formula(e) == "[!R](~p)");
  auto plain = parse_formula("(<R>(p) | ~q)", v);
  CHECK(eliminate_window(plain).get() == plain.get());
}

TEST_CASE("window elimination: truth sets agree with direct semantics") {
  Rng rng(37);
  GenOpts o;
  o.vocab = rs3();
  for (int trial = 0; trial < 60; ++trial) {
    const RelationSymbol& sym =
        o.vocab.symbols()[pick(rng, static_cast<int>(o.vocab.size()))];
    std::vector<FormulaPtr> args;
    for (int i = 0; i < sym.arity - 1; ++i)
      args.push_back(random_formula(rng, o, 4));
    FormulaPtr win = f_window(sym, args);
    KripkeModel m = random_model(trial, 1 + trial % 4, o.vocab, 0.4, 2);
    CHECK(check_naive(m, eliminate_window(win)) ==
          window_truth(m, sym, args));
  }
}

TEST_CASE("desugar: boxes, [A], and or") {
  Vocabulary v = binary_R();
  auto f = desugar(parse_formula("[A] (p | [R](q))", v));
  // no Or/Box/BoxA nodes remain
  std::function<void(const FormulaPtr&)> scan = [&](const FormulaPtr& g) {
    CHECK(g->kind != FKind::Or);
    CHECK(g->kind != FKind::Box);
    CHECK(g->kind != FKind::BoxA);
    for (const auto& a : g->args) scan(a);
  };
  scan(f);
  CHECK_THROWS_AS(desugar(parse_formula("win_R(p)", v)), Error);
}

TEST_CASE("symbols_of and props_of") {
  auto parsed = parse_formula_infer("(<R>(p) & win_T(q, r))");
  Vocabulary v = symbols_of(parsed.formula);
  CHECK(v.find("R")->arity == 2);
  CHECK(v.find("T")->arity == 3);
  auto props = props_of(parsed.formula);
  CHECK(props == std::vector<std::string>{"p", "q", "r"});
}
