#include "pml/sat.hpp"

#include <chrono>

namespace pml {

namespace {

using Clock = std::chrono::steady_clock;

struct Layout {
  struct Rel {
    RelationSymbol sym;
    TupleSet tuples;  // all tuples at this arity, lex order
    size_t offset;
  };
  std::vector<Rel> rels;
  std::vector<std::string> props;
  size_t propOffset = 0;
  size_t bits = 0;
  int worlds = 0;

  size_t tuple_rank(const Tuple& t) const {
    size_t rank = 0;
    for (int v : t) rank = rank * worlds + static_cast<size_t>(v);
    return rank;
  }
};

Layout make_layout(const Vocabulary& vocab,
                   const std::vector<std::string>& props, int worlds) {
  Layout lay;
  lay.worlds = worlds;
  size_t off = 0;
  for (const auto& sym : vocab.symbols()) {
    Layout::Rel r{sym, all_tuples(worlds, sym.arity), off};
    off += r.tuples.size();
    lay.rels.push_back(std::move(r));
  }
  lay.propOffset = off;
  lay.props = props;
  off += props.size() * static_cast<size_t>(worlds);
  lay.bits = off;
  return lay;
}

// bits of the model renamed by pi (world w becomes pi[w]).
std::vector<char> renamed(const Layout& lay, const std::vector<char>& bits,
                          const std::vector<int>& pi) {
  std::vector<char> out(bits.size(), 0);
  for (const auto& r : lay.rels) {
    Tuple mapped;
    for (size_t i = 0; i < r.tuples.size(); ++i) {
      if (!bits[r.offset + i]) continue;
      mapped = r.tuples[i];
      for (auto& v : mapped) v = pi[v];
      out[r.offset + lay.tuple_rank(mapped)] = 1;
    }
  }
  for (size_t p = 0; p < lay.props.size(); ++p)
    for (int w = 0; w < lay.worlds; ++w)
      if (bits[lay.propOffset + p * lay.worlds + w])
        out[lay.propOffset + p * lay.worlds + pi[w]] = 1;
  return out;
}

bool is_canonical(const Layout& lay, const std::vector<char>& bits,
                  const std::vector<std::vector<int>>& perms) {
  for (const auto& pi : perms) {
    if (renamed(lay, bits, pi) < bits) return false;
  }
  return true;
}

KripkeModel to_model(const Layout& lay, const std::vector<char>& bits) {
  KripkeModel m;
  m.worlds = lay.worlds;
  for (const auto& r : lay.rels) {
    m.add_symbol(r.sym);
    TupleSet ts;
    for (size_t i = 0; i < r.tuples.size(); ++i)
      if (bits[r.offset + i]) ts.push_back(r.tuples[i]);
    m.relations.back() = std::move(ts);
  }
  for (size_t p = 0; p < lay.props.size(); ++p) {
    WorldSet ws = ws_empty(lay.worlds);
    for (int w = 0; w < lay.worlds; ++w)
      ws[w] = bits[lay.propOffset + p * lay.worlds + w] != 0;
    m.valuation[lay.props[p]] = std::move(ws);
  }
  return m;
}

std::vector<std::vector<int>> world_perms(int n) {
  std::vector<std::vector<int>> out;
  std::vector<int> pi(n);
  for (int i = 0; i < n; ++i) pi[i] = i;
  while (std::next_permutation(pi.begin(), pi.end())) out.push_back(pi);
  return out;  // identity excluded; it never refutes canonicity
}

}  // namespace

void enumerate_models(const Vocabulary& vocab,
                      const std::vector<std::string>& props, int worlds,
                      const std::function<bool(const KripkeModel&)>& fn,
                      const SatOptions& opts) {
  Layout lay = make_layout(vocab, props, worlds);
  auto perms = world_perms(worlds);
  std::vector<char> bits(lay.bits, 0);
  auto start = Clock::now();
  long long candidates = 0;
  // Odometer over the bit vector; all-zero (the empty model) comes first and
  // lower-rank bits flip fastest, so sparse models are visited early.
  while (true) {
    if (opts.budgetMs > 0 && (++candidates & 0xfff) == 0) {
      auto ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                    Clock::now() - start)
                    .count();
      if (ms > opts.budgetMs)
        fail(ErrorKind::Budget,
             "model enumeration exceeded " + std::to_string(opts.budgetMs) +
                 " ms at " + std::to_string(worlds) + " worlds");
    }
    if (is_canonical(lay, bits, perms)) {
      if (!fn(to_model(lay, bits))) return;
    }
    size_t i = 0;
    while (i < lay.bits && bits[i]) bits[i++] = 0;
    if (i == lay.bits) break;
    bits[i] = 1;
  }
}

SatVerdict sat_bounded(const FormulaPtr& phi, int maxWorlds,
                       const SatOptions& opts) {
  if (maxWorlds < 1)
    fail(ErrorKind::Format, "maxWorlds must be at least 1");
  Vocabulary vocab = opts.vocab ? *opts.vocab : symbols_of(phi);
  std::vector<std::string> props = opts.props ? *opts.props : props_of(phi);
  FormulaPtr core = desugar(phi);
  SatVerdict verdict;
  verdict.bound = maxWorlds;
  for (int n = 1; n <= maxWorlds && !verdict.satisfiable; ++n) {
    enumerate_models(vocab, props, n, [&](const KripkeModel& m) {
      WorldSet truth = check_naive(m, core);
      if (ws_any(truth)) {
        verdict.satisfiable = true;
        verdict.model = m;
        verdict.world = ws_indices(truth)[0];
        return false;
      }
      return true;
    }, opts);
  }
  return verdict;
}

EquisatReport equisat_check(const FormulaPtr& phi, const FormulaPtr& psi,
                            int boundPhi, int boundPsi,
                            const SatOptions& opts) {
  EquisatReport rep{sat_bounded(phi, boundPhi, opts),
                    sat_bounded(psi, boundPsi, opts),
                    EquisatOutcome::BothExhausted};
  if (rep.first.satisfiable && rep.second.satisfiable)
    rep.outcome = EquisatOutcome::BothSat;
  else if (rep.first.satisfiable)
    rep.outcome = EquisatOutcome::OnlyFirst;
  else if (rep.second.satisfiable)
    rep.outcome = EquisatOutcome::OnlySecond;
  return rep;
}

}  // namespace pml
