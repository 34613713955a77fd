#pragma once

#include <algorithm>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pml {

// ---------------------------------------------------------------------------
// Errors. Every failure mode surfaces as one of these; the CLI maps kinds to
// exit codes and prints a single machine-parsable reason line.
// ---------------------------------------------------------------------------

enum class ErrorKind {
  Parse,       // bad syntax in a formula/term/model text
  Vocab,       // unknown or conflicting relation symbol
  Wellformed,  // arity mismatch inside a term or formula
  Shape,       // term not in the shape an operation requires
  Fragment,    // formula outside the fragment a reduction accepts
  Precondition,
  Internal,    // consistency assertion failed (indicates a bug)
  Truncation,  // depth bound too small for a layered construction
  Budget,      // resource cap exceeded; never a wrong verdict
  Format,      // bad model file or CLI usage
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

  static const char* kind_name(ErrorKind k);

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind k, const std::string& msg) {
  throw Error(k, msg);
}

// ---------------------------------------------------------------------------
// Worlds and tuples. Worlds are 0-based indices into a model's domain.
// A TupleSet is kept sorted and duplicate-free so that set algebra is a merge.
// ---------------------------------------------------------------------------

using World = int;
using Tuple = std::vector<World>;
using TupleSet = std::vector<Tuple>;
using WorldSet = std::vector<bool>;

TupleSet ts_union(const TupleSet& a, const TupleSet& b);
TupleSet ts_inter(const TupleSet& a, const TupleSet& b);
TupleSet ts_diff(const TupleSet& a, const TupleSet& b);
bool ts_member(const TupleSet& s, const Tuple& t);
void ts_normalize(TupleSet& s);  // sort + unique
TupleSet all_tuples(int worlds, int arity);
TupleSet ts_complement(const TupleSet& s, int worlds, int arity);

WorldSet ws_empty(int n);
WorldSet ws_full(int n);
WorldSet ws_and(const WorldSet& a, const WorldSet& b);
WorldSet ws_or(const WorldSet& a, const WorldSet& b);
WorldSet ws_not(const WorldSet& a);
bool ws_any(const WorldSet& a);
std::vector<int> ws_indices(const WorldSet& a);
std::string ws_to_string(const WorldSet& a);  // "{0, 2}"

// ---------------------------------------------------------------------------
// Permutations of tuple positions {0,...,k-1}.
//
// map[i] = j means the value at position i moves to position j, so the action
// on tuples is apply(t)[map[i]] = t[i].  Composition is function composition:
// (a * b)(i) = a(b(i)), and apply(a * b, t) = apply(a, apply(b, t)).
// Under this convention the generator words of terms compose left to right:
// the term p(s(R)) denotes the permutation cyclic*swap.
// ---------------------------------------------------------------------------

struct Perm {
  std::vector<int> map;

  int k() const { return static_cast<int>(map.size()); }
  bool operator==(const Perm& o) const { return map == o.map; }
  bool operator!=(const Perm& o) const { return map != o.map; }
  bool operator<(const Perm& o) const { return map < o.map; }

  int operator()(int i) const { return map[i]; }

  Perm inverse() const;
  Tuple apply(const Tuple& t) const;
  std::string one_line() const;  // "102" for map {1,0,2}

  static Perm identity(int k);
  static Perm cyclic(int k);     // value at i moves to (i+1) mod k
  static Perm swap_last(int k);  // exchanges the last two positions
  bool is_identity() const;
};

Perm compose(const Perm& a, const Perm& b);  // a after b

// All k! permutations in lexicographic one-line order (cached).
const std::vector<Perm>& all_perms(int k);

// Shortest word over generators {p = cyclic, s = swap_last} composing (left to
// right) to `perm`; ties broken lexicographically with 'p' < 's'.  Empty word
// for the identity.  Requires k >= 2.
std::string generator_word(const Perm& perm);

// Composition of a generator word, e.g. "ps" -> cyclic*swap at arity k.
Perm word_to_perm(const std::string& word, int k);

// ---------------------------------------------------------------------------
// Relation symbols and vocabularies.
// ---------------------------------------------------------------------------

struct RelationSymbol {
  std::string name;
  int arity = 0;  // always >= 2

  bool operator==(const RelationSymbol& o) const {
    return name == o.name && arity == o.arity;
  }
  bool operator<(const RelationSymbol& o) const {
    return name < o.name || (name == o.name && arity < o.arity);
  }
};

// A vocabulary keeps declaration order (the list encoding and model files
// depend on it) and enforces unique names and arities >= 2.
class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<RelationSymbol> symbols);

  void add(const RelationSymbol& sym);
  bool contains(const std::string& name) const;
  const RelationSymbol* find(const std::string& name) const;
  const std::vector<RelationSymbol>& symbols() const { return symbols_; }
  std::vector<RelationSymbol> of_arity(int k) const;
  std::vector<int> realized_arities() const;  // ascending, unique
  int max_arity() const;
  size_t size() const { return symbols_.size(); }
  bool operator==(const Vocabulary& o) const { return symbols_ == o.symbols_; }

 private:
  std::vector<RelationSymbol> symbols_;
};

inline uint64_t hash_mix(uint64_t h, uint64_t v) {
  h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
  return h;
}

}  // namespace pml
