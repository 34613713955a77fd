#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "pml/parser.hpp"
#include "pml/reduce_neg.hpp"
#include "pml/reduce_tables.hpp"
#include "pml/sat.hpp"

using namespace pml;

namespace {

// Exit codes: 0 success, 1 logical negative, 2 usage/format error, 3 budget.
constexpr int kExitNegative = 1;
constexpr int kExitError = 2;
constexpr int kExitBudget = 3;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Format, "cannot read file " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Format, "cannot write file " + path);
  out << content;
}

// Formulas come inline or from @file; models only from files.
std::string formula_text(const std::string& arg) {
  if (!arg.empty() && arg[0] == '@') return read_file(arg.substr(1));
  return arg;
}

long long env_budget_ms() {
  const char* v = std::getenv("PML_BUDGET_MS");
  if (!v || !*v) return 0;
  return std::atoll(v);
}

Vocabulary parse_vocab_spec(const std::string& spec) {
  // "R/2,S/3"
  Vocabulary v;
  std::istringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto slash = item.find('/');
    if (slash == std::string::npos)
      fail(ErrorKind::Format, "bad vocab item '" + item + "', want NAME/ARITY");
    v.add({item.substr(0, slash), std::atoi(item.c_str() + slash + 1)});
  }
  return v;
}

struct Output {
  bool machine = false;
  void kv(const std::string& key, const std::string& value) {
    std::cout << key << " " << value << "\n";
  }
  void text(const std::string& line) {
    if (!machine) std::cout << line << "\n";
  }
};

int cmd_check(const std::string& modelPath, const std::string& formulaArg,
              bool naive, std::vector<int> expect, bool machine) {
  KripkeModel model = parse_model(read_file(modelPath));
  FormulaPtr phi = parse_formula(formula_text(formulaArg), model.vocab);
  WorldSet truth =
      naive ? check_naive(model, phi) : check_labeling(model, phi);
  Output out{machine};
  if (machine) {
    out.kv("engine", naive ? "naive" : "labeling");
    std::ostringstream os;
    for (int w : ws_indices(truth)) os << w << " ";
    std::string s = os.str();
    if (!s.empty()) s.pop_back();
    out.kv("truthset", s);
    out.kv("count", std::to_string(ws_indices(truth).size()));
  } else {
    out.text(ws_to_string(truth));
  }
  for (int w : expect)
    if (w < 0 || w >= model.worlds || !truth[w]) return kExitNegative;
  return 0;
}

int cmd_reduce_neg(const std::string& formulaArg, const std::string& outPath,
                   bool machine) {
  auto parsed = parse_formula_infer(formula_text(formulaArg));
  NegReduction red = NegReduction::build(parsed.formula);
  Output out{machine};
  std::string rendered = render_formula(red.theta);
  if (machine) {
    out.kv("source-size", std::to_string(red.source->tsize));
    out.kv("translated-size", std::to_string(red.translated->tsize));
    out.kv("eta-size", std::to_string(red.eta->tsize));
    out.kv("eta-conjuncts", std::to_string(red.etaConjuncts));
    out.kv("theta-size", std::to_string(red.theta->tsize));
    if (outPath.empty()) out.kv("theta", rendered);
  } else {
    out.text("theta: " + rendered);
    out.text("size(phi) = " + std::to_string(red.source->tsize) +
             ", size(eta) = " + std::to_string(red.eta->tsize) +
             ", conjuncts(eta) = " + std::to_string(red.etaConjuncts));
  }
  if (!outPath.empty()) write_file(outPath, rendered + "\n");
  return 0;
}

int cmd_reduce_tables(const std::string& formulaArg, int vocabCap,
                      const std::string& outPath, bool machine) {
  auto parsed = parse_formula_infer(formula_text(formulaArg));
  TableReduction red = TableReduction::build(parsed.formula, vocabCap);
  Output out{machine};
  if (machine) {
    out.kv("source-size", std::to_string(red.source->tsize));
    out.kv("star-size", std::to_string(red.starForm->tsize));
    out.kv("fresh-props", std::to_string(red.freshProps.size()));
    out.kv("psi-range", std::to_string(red.psiRange.size()));
    out.kv("xi1-conjuncts", std::to_string(red.xi1Conjuncts));
    out.kv("xi2-conjuncts", std::to_string(red.xi2Conjuncts));
    out.kv("xi3-conjuncts", std::to_string(red.xi3Conjuncts));
    out.kv("theta-size", std::to_string(red.theta->tsize));
  } else {
    out.text("phi* : " + render_formula(red.starForm));
    for (size_t slot = 0; slot < red.arities.size(); ++slot)
      for (size_t i = 0; i < red.tablesByArity[slot].size(); ++i)
        out.text("table " + red.tableSyms[slot][i].name + " = " +
                 red.tablesByArity[slot][i].display());
    out.text("sizes: phi=" + std::to_string(red.source->tsize) +
             " phi*=" + std::to_string(red.starForm->tsize) +
             " theta=" + std::to_string(red.theta->tsize));
    out.text("conjuncts: xi1=" + std::to_string(red.xi1Conjuncts) +
             " xi2=" + std::to_string(red.xi2Conjuncts) +
             " xi3=" + std::to_string(red.xi3Conjuncts));
  }
  if (!outPath.empty()) write_file(outPath, render_formula(red.theta) + "\n");
  return 0;
}

int cmd_normalize_term(const std::string& termArg, const std::string& vocabSpec,
                       bool machine) {
  Vocabulary vocab =
      vocabSpec.empty() ? Vocabulary{} : parse_vocab_spec(vocabSpec);
  TermPtr term = parse_term(termArg, vocab, /*defaultArity=*/2);
  NormalizedTerm nt = normalize_term(term);
  Output out{machine};
  if (machine) {
    out.kv("normalized", render_term(nt.as_term()));
    out.kv("negated", nt.negated ? "yes" : "no");
    out.kv("input-nodes", std::to_string(term->tsize));
    out.kv("output-nodes", std::to_string(nt.as_term()->tsize));
  } else {
    out.text(render_term(nt.as_term()));
  }
  return 0;
}

int cmd_tables(const std::string& vocabSpec, int arity, bool machine) {
  Vocabulary vocab = parse_vocab_spec(vocabSpec);
  auto tables = enumerate_tables(vocab, arity);
  Output out{machine};
  for (const auto& t : tables) {
    if (machine) {
      std::ostringstream os;
      for (const auto& lit : t.literals())
        os << (lit.positive ? "+" : "-") << lit.perm.one_line()
           << lit.symbol.name << " ";
      std::string s = os.str();
      if (!s.empty()) s.pop_back();
      out.kv("table " + std::to_string(t.index1), s);
    } else {
      out.text(std::to_string(t.index1) + ": " + t.display());
    }
  }
  if (machine) out.kv("count", std::to_string(tables.size()));
  return 0;
}

int cmd_sat(const std::string& formulaArg, int maxWorlds,
            const std::string& witnessPath, bool machine) {
  auto parsed = parse_formula_infer(formula_text(formulaArg));
  SatOptions opts;
  opts.budgetMs = env_budget_ms();
  SatVerdict v = sat_bounded(parsed.formula, maxWorlds, opts);
  Output out{machine};
  if (v.satisfiable) {
    if (machine) {
      out.kv("verdict", "satisfiable");
      out.kv("worlds", std::to_string(v.model.worlds));
      out.kv("world", std::to_string(v.world));
    } else {
      out.text("satisfiable with " + std::to_string(v.model.worlds) +
               " worlds at world " + std::to_string(v.world));
    }
    if (!witnessPath.empty()) write_file(witnessPath, render_model(v.model));
    return 0;
  }
  if (machine) {
    out.kv("verdict", "exhausted");
    out.kv("bound", std::to_string(v.bound));
  } else {
    out.text("exhausted " + std::to_string(v.bound));
  }
  return kExitNegative;
}

int cmd_encode(const std::string& modelPath, bool machine) {
  KripkeModel model = parse_model(read_file(modelPath));
  EncodedModel enc = encode_list(model);
  Output out{machine};
  if (machine) {
    out.kv("bytes", enc.bytes);
    out.kv("size", std::to_string(enc.size));
  } else {
    out.text(enc.bytes);
    out.text("size " + std::to_string(enc.size));
  }
  return 0;
}

int cmd_verify(const std::string& formulaArg, const std::string& kind,
               int maxWorlds, int depthBound, int vocabCap, bool machine) {
  auto parsed = parse_formula_infer(formula_text(formulaArg));
  Output out{machine};
  SatOptions opts;
  opts.budgetMs = env_budget_ms();
  auto report = [&](const std::string& step, bool ok) {
    out.kv(step, ok ? "PASS" : "FAIL");
    if (!ok) fail(ErrorKind::Internal, step + " failed");
  };
  if (kind == "neg") {
    NegReduction red = NegReduction::build(parsed.formula);
    SatVerdict v = sat_bounded(red.source, maxWorlds, opts);
    if (!v.satisfiable) {
      out.kv("verdict", "exhausted");
      return kExitNegative;
    }
    KripkeModel fwd = red.forward_model(v.model, v.world);
    report("forward-theta", check_labeling(fwd, red.theta)[v.world]);
    SatOptions topts = opts;
    topts.vocab = red.theta_vocab();
    topts.props = props_of(desugar(red.theta));
    SatVerdict tv = sat_bounded(red.theta, maxWorlds, topts);
    report("theta-sat", tv.satisfiable);
    auto back = red.backward_model(tv.model, tv.world);
    report("backward-phi",
           check_labeling(back.doubled, red.source)[back.designated]);
    red.check_transfer(back);
    report("transfer", true);
    return 0;
  }
  if (kind == "tables") {
    TableReduction red = TableReduction::build(parsed.formula, vocabCap);
    SatVerdict v = sat_bounded(red.starForm, maxWorlds, opts);
    if (!v.satisfiable) {
      out.kv("verdict", "exhausted");
      return kExitNegative;
    }
    KripkeModel fwd = red.forward_model(v.model, v.world);
    report("forward-theta", check_labeling(fwd, red.theta)[v.world]);
    auto lay = red.backward_model(fwd, v.world, depthBound);
    report("backward-phi-star",
           check_labeling(lay.model, red.starForm)[lay.designated]);
    out.kv("assigned-tuples", std::to_string(lay.assignedTuples));
    out.kv("fallback-deviations", std::to_string(lay.fallbackDeviations));
    return 0;
  }
  fail(ErrorKind::Format, "verify-reduction kind must be neg or tables");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"polyadic Boolean modal logic toolkit"};
  app.require_subcommand(1);

  std::string modelPath, formulaArg, outPath, vocabSpec, kind, witnessPath;
  bool naive = false, machine = false;
  std::vector<int> expect;
  int maxWorlds = 3, arity = 2, vocabCap = 2, depthBound = -1;

  auto* check = app.add_subcommand("check", "truth set of a formula in a model");
  check->add_option("model", modelPath)->required();
  check->add_option("formula", formulaArg)->required();
  check->add_flag("--naive", naive, "use the naive oracle engine");
  check->add_option("--expect", expect, "exit 1 unless these worlds satisfy");
  check->add_flag("--machine", machine);

  auto* rneg = app.add_subcommand("reduce-neg", "PML(!) to PML+<E>");
  rneg->add_option("formula", formulaArg)->required();
  rneg->add_option("--out", outPath, "write theta to a file");
  rneg->add_flag("--machine", machine);

  auto* rtab = app.add_subcommand("reduce-tables", "PML_c(p,s,!,&) to PML+<E>");
  rtab->add_option("formula", formulaArg)->required();
  rtab->add_option("--vocab-cap", vocabCap);
  rtab->add_option("--out", outPath, "write Theta to a file");
  rtab->add_flag("--machine", machine);

  auto* nt = app.add_subcommand("normalize-term", "negation normal form");
  nt->add_option("term", formulaArg)->required();
  nt->add_option("--vocab", vocabSpec, "e.g. R/2,S/3 (default arity 2)");
  nt->add_flag("--machine", machine);

  auto* tb = app.add_subcommand("tables", "enumerate k-tables with indices");
  tb->add_option("--vocab", vocabSpec)->required();
  tb->add_option("--arity", arity)->required();
  tb->add_flag("--machine", machine);

  auto* sat = app.add_subcommand("sat", "bounded satisfiability search");
  sat->add_option("formula", formulaArg)->required();
  sat->add_option("--max-worlds", maxWorlds);
  sat->add_option("--witness", witnessPath, "write a witness model file");
  sat->add_flag("--machine", machine);

  auto* vr = app.add_subcommand("verify-reduction",
                                "forward/backward constructions + checks");
  vr->add_option("formula", formulaArg)->required();
  vr->add_option("--kind", kind)->required()->check(CLI::IsMember({"neg", "tables"}));
  vr->add_option("--max-worlds", maxWorlds);
  vr->add_option("--depth-bound", depthBound);
  vr->add_option("--vocab-cap", vocabCap);
  vr->add_flag("--machine", machine);

  auto* enc = app.add_subcommand("encode", "list encoding of a model");
  enc->add_option("model", modelPath)->required();
  enc->add_flag("--machine", machine);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitError;
  }

  try {
    if (check->parsed())
      return cmd_check(modelPath, formulaArg, naive, expect, machine);
    if (rneg->parsed()) return cmd_reduce_neg(formulaArg, outPath, machine);
    if (rtab->parsed())
      return cmd_reduce_tables(formulaArg, vocabCap, outPath, machine);
    if (nt->parsed()) return cmd_normalize_term(formulaArg, vocabSpec, machine);
    if (tb->parsed()) return cmd_tables(vocabSpec, arity, machine);
    if (sat->parsed())
      return cmd_sat(formulaArg, maxWorlds, witnessPath, machine);
    if (vr->parsed())
      return cmd_verify(formulaArg, kind, maxWorlds, depthBound, vocabCap,
                        machine);
    if (enc->parsed()) return cmd_encode(modelPath, machine);
  } catch (const Error& e) {
    std::cerr << "error kind=" << Error::kind_name(e.kind())
              << " msg=\"" << e.what() << "\"\n";
    return e.kind() == ErrorKind::Budget ? kExitBudget : kExitError;
  } catch (const std::exception& e) {
    std::cerr << "error kind=unexpected msg=\"" << e.what() << "\"\n";
    return kExitError;
  }
  return kExitError;
}
