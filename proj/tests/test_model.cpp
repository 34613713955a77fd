#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "support.hpp"

using namespace pmltest;

TEST_CASE("parse_model: worked examples") {
  KripkeModel m = parse_model("worlds 2\nrel R/2 : (0,1)\nprop q : 1\n");
  CHECK(m.worlds == 2);
  CHECK(m.relation("R") == TupleSet{{0, 1}});
  CHECK(m.prop_set("q") == WorldSet{false, true});

  KripkeModel one = parse_model("worlds 1\n");
  CHECK(one.worlds == 1);
  CHECK(one.vocab.size() == 0);
}

TEST_CASE("parse_model: comments and spacing") {
  KripkeModel m = parse_model(
      "# a comment\nworlds 3\n\nrel R/2 :   (2,0)  (0,1)\nprop a :\n");
  CHECK(m.relation("R") == TupleSet{{0, 1}, {2, 0}});
  CHECK(m.prop_set("a") == ws_empty(3));
}

TEST_CASE("parse_model: errors carry the offending line") {
  CHECK_THROWS_WITH_AS(parse_model("worlds 2\nrel R/2 : (0,2)\n"),
                       doctest::Contains("out of range"), Error);
  CHECK_THROWS_WITH_AS(
      parse_model("worlds 2\nrel R/2 : (0,1)\nrel R/2 : (1,1)\n"),
      doctest::Contains("duplicate relation"), Error);
  CHECK_THROWS_WITH_AS(parse_model("worlds 2\nrel R/2 : (0,1,1)\n"),
                       doctest::Contains("expected"), Error);
  CHECK_THROWS_AS(parse_model("rel R/2 : (0,1)\n"), Error);
  CHECK_THROWS_AS(parse_model("worlds 2\nrel R/1 : (0)\n"), Error);
}

TEST_CASE("model round trip through the text format") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    KripkeModel m = random_model(seed, 1 + seed % 5, binary_RS(), 0.4, 2);
    CHECK(parse_model(render_model(m)) == m);
  }
}

TEST_CASE("encode_list: the three golden byte strings") {
  {
    KripkeModel m;
    m.worlds = 2;
    m.add_symbol({"R", 2});
    m.relations.back() = {{0, 1}};
    EncodedModel e = encode_list(m);
    CHECK(e.bytes == "11>01");
    CHECK(e.size == 4);
  }
  {
    KripkeModel m;
    m.worlds = 1;
    m.add_symbol({"R", 2});
    EncodedModel e = encode_list(m);
    CHECK(e.bytes == "1>");
    CHECK(e.size == 1);
  }
  {
    KripkeModel m;
    m.worlds = 4;
    m.add_symbol({"R", 2});
    m.relations.back() = {{0, 1}, {2, 3}};
    EncodedModel e = encode_list(m);
    CHECK(e.bytes == "1111>0001#1011");
    CHECK(e.size == 12);
  }
}

TEST_CASE("encode_list: width handles non-powers of two") {
  CHECK(encoding_width(1) == 1);
  CHECK(encoding_width(2) == 1);
  CHECK(encoding_width(3) == 2);
  CHECK(encoding_width(4) == 2);
  CHECK(encoding_width(5) == 3);
}

TEST_CASE("encode_list: size matches the formula on random models") {
  for (uint64_t seed = 0; seed < 30; ++seed) {
    Vocabulary v = seed % 2 ? binary_RS() : ternary_T();
    int worlds = 1 + static_cast<int>(seed % 6);
    KripkeModel m = random_model(seed, worlds, v, 0.35, 1);
    EncodedModel e = encode_list(m);
    long long expect = m.worlds;
    for (size_t i = 0; i < m.vocab.symbols().size(); ++i)
      expect += static_cast<long long>(m.relations[i].size()) *
                m.vocab.symbols()[i].arity * encoding_width(m.worlds);
    CHECK(e.size == expect);
    // payload bytes = size + one '>' per relation + '#' between tuples
    long long separators = static_cast<long long>(m.vocab.size());
    for (const auto& ts : m.relations)
      separators += std::max<long long>(0, static_cast<long long>(ts.size()) - 1);
    CHECK(static_cast<long long>(e.bytes.size()) == e.size + separators);
  }
}

TEST_CASE("random_model: determinism and density extremes") {
  KripkeModel a = random_model(42, 4, binary_RS(), 0.5, 2);
  KripkeModel b = random_model(42, 4, binary_RS(), 0.5, 2);
  CHECK(a == b);
  KripkeModel empty = random_model(1, 3, binary_RS(), 0.0, 0);
  CHECK(empty.relation("R").empty());
  CHECK(empty.relation("S").empty());
  KripkeModel full = random_model(1, 2, binary_R(), 1.0, 0);
  CHECK(full.relation("R").size() == 4);
}
