#include "pml/parser.hpp"

#include <cctype>

namespace pml {

namespace {

enum class Tok {
  End, LParen, RParen, Comma, Amp, Pipe, Backslash, Bang, Tilde,
  Lt, Gt, LBrack, RBrack,
  Prop, Rel, Win, True, False,
};

struct Lexer {
  const std::string& text;
  size_t pos = 0;
  Tok tok = Tok::End;
  std::string ident;   // Prop/Rel/Win payload
  size_t tokPos = 0;

  explicit Lexer(const std::string& t) : text(t) { next(); }

  [[noreturn]] void err(const std::string& msg) const {
    fail(ErrorKind::Parse,
         "syntax error at offset " + std::to_string(tokPos) + ": " + msg);
  }

  void next() {
    while (pos < text.size() &&
           isspace(static_cast<unsigned char>(text[pos])))
      ++pos;
    tokPos = pos;
    if (pos >= text.size()) {
      tok = Tok::End;
      return;
    }
    char c = text[pos];
    auto one = [&](Tok t) { tok = t; ++pos; };
    switch (c) {
      case '(': one(Tok::LParen); return;
      case ')': one(Tok::RParen); return;
      case ',': one(Tok::Comma); return;
      case '&': one(Tok::Amp); return;
      case '|': one(Tok::Pipe); return;
      case '\\': one(Tok::Backslash); return;
      case '!': one(Tok::Bang); return;
      case '~': one(Tok::Tilde); return;
      case '<': one(Tok::Lt); return;
      case '>': one(Tok::Gt); return;
      case '[': one(Tok::LBrack); return;
      case ']': one(Tok::RBrack); return;
      default: break;
    }
    if (isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = pos;
      while (pos < text.size() &&
             (isalnum(static_cast<unsigned char>(text[pos])) ||
              text[pos] == '_'))
        ++pos;
      ident = text.substr(start, pos - start);
      if (ident == "true") {
        tok = Tok::True;
      } else if (ident == "false") {
        tok = Tok::False;
      } else if (ident.size() > 4 && ident.rfind("win_", 0) == 0 &&
                 isupper(static_cast<unsigned char>(ident[4]))) {
        ident = ident.substr(4);
        tok = Tok::Win;
      } else if (isupper(static_cast<unsigned char>(ident[0]))) {
        tok = Tok::Rel;
      } else {
        tok = Tok::Prop;
      }
      return;
    }
    fail(ErrorKind::Parse, "syntax error at offset " + std::to_string(pos) +
                               ": unexpected character '" + c + "'");
  }

  void expect(Tok t, const char* what) {
    if (tok != t) err(std::string("expected ") + what);
    next();
  }
};

// Structure-only term; arities are bound afterwards.
struct RawTerm {
  TermKind kind;
  std::string name;  // Symbol
  std::shared_ptr<RawTerm> a, b;
  size_t pos = 0;
};
using RawPtr = std::shared_ptr<RawTerm>;

struct Parser {
  Lexer lex;
  const Vocabulary* declared;  // null => infer
  Vocabulary inferred;
  int depth = 0;

  Parser(const std::string& text, const Vocabulary* vocab)
      : lex(text), declared(vocab) {}

  struct DepthGuard {
    Parser& p;
    explicit DepthGuard(Parser& p) : p(p) {
      if (++p.depth > 20000) p.lex.err("nesting too deep");
    }
    ~DepthGuard() { --p.depth; }
  };

  RawPtr raw_term() {
    DepthGuard g(*this);
    auto node = std::make_shared<RawTerm>();
    node->pos = lex.tokPos;
    switch (lex.tok) {
      case Tok::Rel: {
        node->kind = TermKind::Symbol;
        node->name = lex.ident;
        lex.next();
        return node;
      }
      case Tok::Prop: {
        if (lex.ident == "rot" || lex.ident == "swp") {
          node->kind = lex.ident == "rot" ? TermKind::Cyc : TermKind::Swap;
          lex.next();
          lex.expect(Tok::LParen, "'('");
          node->a = raw_term();
          lex.expect(Tok::RParen, "')'");
          return node;
        }
        lex.err("expected a term, found '" + lex.ident + "'");
      }
      case Tok::Bang: {
        node->kind = TermKind::Neg;
        lex.next();
        node->a = raw_term();
        return node;
      }
      case Tok::LParen: {
        lex.next();
        RawPtr left = raw_term();
        if (lex.tok == Tok::RParen) {  // grouping
          lex.next();
          return left;
        }
        switch (lex.tok) {
          case Tok::Amp: node->kind = TermKind::Inter; break;
          case Tok::Pipe: node->kind = TermKind::Union; break;
          case Tok::Backslash: node->kind = TermKind::Diff; break;
          default: lex.err("expected '&', '|' or '\\' inside a term");
        }
        lex.next();
        node->a = std::move(left);
        node->b = raw_term();
        lex.expect(Tok::RParen, "')'");
        return node;
      }
      default:
        lex.err("expected a term");
    }
  }

  // Binds a raw term at the given arity, checking or inferring leaf symbols.
  TermPtr bind(const RawPtr& raw, int arity) {
    switch (raw->kind) {
      case TermKind::Symbol: {
        const RelationSymbol* s =
            declared ? declared->find(raw->name) : inferred.find(raw->name);
        if (declared) {
          if (!s)
            fail(ErrorKind::Vocab, "undeclared relation symbol " + raw->name +
                                       " (offset " + std::to_string(raw->pos) +
                                       ")");
          if (s->arity != arity)
            fail(ErrorKind::Wellformed,
                 "symbol " + raw->name + " has arity " +
                     std::to_string(s->arity) + " but is used at arity " +
                     std::to_string(arity));
        } else if (s) {
          if (s->arity != arity)
            fail(ErrorKind::Wellformed,
                 "symbol " + raw->name + " used at arities " +
                     std::to_string(s->arity) + " and " +
                     std::to_string(arity));
        } else {
          inferred.add({raw->name, arity});
        }
        return t_sym({raw->name, arity});
      }
      case TermKind::Cyc: return t_cyc(bind(raw->a, arity));
      case TermKind::Swap: return t_swap(bind(raw->a, arity));
      case TermKind::Neg: return t_neg(bind(raw->a, arity));
      case TermKind::Inter: return t_inter(bind(raw->a, arity), bind(raw->b, arity));
      case TermKind::Diff: return t_diff(bind(raw->a, arity), bind(raw->b, arity));
      case TermKind::Union: return t_union(bind(raw->a, arity), bind(raw->b, arity));
    }
    fail(ErrorKind::Internal, "unreachable raw term kind");
  }

  std::vector<FormulaPtr> arg_list() {
    lex.expect(Tok::LParen, "'('");
    std::vector<FormulaPtr> args;
    args.push_back(formula());
    while (lex.tok == Tok::Comma) {
      lex.next();
      args.push_back(formula());
    }
    lex.expect(Tok::RParen, "')'");
    return args;
  }

  FormulaPtr formula() {
    DepthGuard g(*this);
    switch (lex.tok) {
      case Tok::Prop: {
        auto f = f_prop(lex.ident);
        lex.next();
        return f;
      }
      case Tok::True: lex.next(); return f_top();
      case Tok::False: lex.next(); return f_bottom();
      case Tok::Tilde: lex.next(); return f_not(formula());
      case Tok::LParen: {
        lex.next();
        FormulaPtr left = formula();
        if (lex.tok == Tok::RParen) {  // grouping
          lex.next();
          return left;
        }
        bool isAnd = lex.tok == Tok::Amp;
        if (!isAnd && lex.tok != Tok::Pipe)
          lex.err("expected '&' or '|' inside a formula");
        lex.next();
        FormulaPtr right = formula();
        lex.expect(Tok::RParen, "')'");
        return isAnd ? f_and(left, right) : f_or(left, right);
      }
      case Tok::Lt: {
        lex.next();
        if (lex.tok == Tok::Rel && lex.ident == "E") {
          lex.next();
          lex.expect(Tok::Gt, "'>'");
          return f_diamond_e(formula());
        }
        RawPtr raw = raw_term();
        lex.expect(Tok::Gt, "'>'");
        auto args = arg_list();
        int arity = static_cast<int>(args.size()) + 1;
        return f_diamond(bind(raw, arity), std::move(args));
      }
      case Tok::LBrack: {
        lex.next();
        if (lex.tok == Tok::Rel && lex.ident == "A") {
          lex.next();
          lex.expect(Tok::RBrack, "']'");
          return f_box_a(formula());
        }
        RawPtr raw = raw_term();
        lex.expect(Tok::RBrack, "']'");
        auto args = arg_list();
        int arity = static_cast<int>(args.size()) + 1;
        return f_box(bind(raw, arity), std::move(args));
      }
      case Tok::Win: {
        std::string sym = lex.ident;
        size_t at = lex.tokPos;
        lex.next();
        auto args = arg_list();
        int arity = static_cast<int>(args.size()) + 1;
        if (declared) {
          const RelationSymbol* s = declared->find(sym);
          if (!s)
            fail(ErrorKind::Vocab, "undeclared relation symbol " + sym +
                                       " (offset " + std::to_string(at) + ")");
          if (s->arity != arity)
            fail(ErrorKind::Wellformed,
                 "window symbol " + sym + " arity mismatch");
        } else {
          const RelationSymbol* s = inferred.find(sym);
          if (s && s->arity != arity)
            fail(ErrorKind::Wellformed,
                 "symbol " + sym + " used at two arities");
          if (!s) inferred.add({sym, arity});
        }
        return f_window({sym, arity}, std::move(args));
      }
      default:
        lex.err("expected a formula");
    }
  }
};

// Leaf-driven arity resolution for bare terms: symbols take their declared
// arity (or the default), and the common arity is checked for consistency.
int resolve_arity(const RawPtr& raw, const Vocabulary& vocab,
                  int defaultArity) {
  switch (raw->kind) {
    case TermKind::Symbol: {
      const RelationSymbol* s = vocab.find(raw->name);
      if (s) return s->arity;
      if (defaultArity >= 2) return defaultArity;
      fail(ErrorKind::Vocab, "undeclared relation symbol " + raw->name);
    }
    case TermKind::Cyc:
    case TermKind::Swap:
    case TermKind::Neg:
      return resolve_arity(raw->a, vocab, defaultArity);
    default: {
      int a = resolve_arity(raw->a, vocab, defaultArity);
      int b = resolve_arity(raw->b, vocab, defaultArity);
      if (a != b)
        fail(ErrorKind::Wellformed, "term mixes arities " + std::to_string(a) +
                                        " and " + std::to_string(b));
      return a;
    }
  }
}

}  // namespace

FormulaPtr parse_formula(const std::string& text, const Vocabulary& vocab) {
  Parser p(text, &vocab);
  FormulaPtr f = p.formula();
  if (p.lex.tok != Tok::End) p.lex.err("trailing input");
  return f;
}

ParsedFormula parse_formula_infer(const std::string& text) {
  Parser p(text, nullptr);
  FormulaPtr f = p.formula();
  if (p.lex.tok != Tok::End) p.lex.err("trailing input");
  return {f, p.inferred};
}

TermPtr parse_term(const std::string& text, const Vocabulary& vocab,
                   int defaultArity) {
  Parser p(text, &vocab);
  RawPtr raw = p.raw_term();
  if (p.lex.tok != Tok::End) p.lex.err("trailing input");
  int arity = resolve_arity(raw, vocab, defaultArity);
  Vocabulary extended = vocab;
  std::function<void(const RawPtr&)> declare = [&](const RawPtr& r) {
    if (r->kind == TermKind::Symbol) {
      if (!extended.contains(r->name)) extended.add({r->name, arity});
      return;
    }
    if (r->a) declare(r->a);
    if (r->b) declare(r->b);
  };
  declare(raw);
  Parser bound(text, &extended);
  RawPtr raw2 = bound.raw_term();
  return bound.bind(raw2, arity);
}

}  // namespace pml
