#pragma once

#include <map>
#include <string>
#include <vector>

#include "pml/base.hpp"

namespace pml {

// ---------------------------------------------------------------------------
// Kripke models over a polyadic vocabulary.  Worlds are 0..worlds-1 in a
// fixed linear order; relations keep vocabulary declaration order (the list
// encoding is sensitive to it) and their tuple sets stay sorted.
// ---------------------------------------------------------------------------

struct KripkeModel {
  int worlds = 1;
  Vocabulary vocab;
  std::vector<TupleSet> relations;  // parallel to vocab.symbols()
  std::map<std::string, WorldSet> valuation;

  const TupleSet& relation(const std::string& name) const;
  TupleSet& relation(const std::string& name);
  WorldSet prop_set(const std::string& name) const;  // empty set if absent
  void set_relation(const std::string& name, TupleSet tuples);
  void add_symbol(const RelationSymbol& sym) {
    vocab.add(sym);
    relations.emplace_back();
  }
  void validate() const;  // tuple ranges and arities

  bool operator==(const KripkeModel& o) const;
};

// Model file format (UTF-8, line oriented, '#' starts a comment line):
//   worlds N
//   rel NAME/ARITY : (i,...,i) (i,...,i) ...
//   prop name : i i ...
KripkeModel parse_model(const std::string& text);
std::string render_model(const KripkeModel& m);

// ---------------------------------------------------------------------------
// List encoding: '1' x |W|, then per relation (declaration order) a '>'
// separator followed by its tuples joined with '#'; each tuple is the
// concatenation of fixed-width big-endian binary strings of width
// max(1, ceil(log2 |W|)).  The size field counts only domain marks and tuple
// payload: |W| + sum |R| * ar(R) * width.
// ---------------------------------------------------------------------------

struct EncodedModel {
  std::string bytes;
  long long size = 0;
};

EncodedModel encode_list(const KripkeModel& m);
int encoding_width(int worlds);  // max(1, ceil(log2 worlds))

// Reproducible random model: every candidate tuple is included independently
// with probability `density`; every proposition holds at every world with
// probability 1/2.  Bit draws come straight from a seeded mt19937_64 so the
// result is platform independent.
KripkeModel random_model(uint64_t seed, int worlds, const Vocabulary& vocab,
                         double density, int props);

}  // namespace pml
