// Reader for model expansion problems.
//
// problem   := "vocabulary" "{" decl* "}" "structure" "{" interp* "}"
//              "theory" "{" item* "}"
// decl      := "type" NAME
//            | NAME ["(" [NAME ("," NAME)*] ")"] [":" NAME]   (":" makes it a function)
// interp    := NAME "=" ("{" entries "}" | "true" | "false")
// item      := formula "." | "define" "{" (head "<-" formula ".")* "}"
// formula   := connectives ~ & | => <=> over atoms, comparisons, quantifiers
//              "!" / "?" vdecls ":" formula (scope extends maximally right),
//              "true", "false", "(" formula ")"
// term      := NAME | INT | NAME "(" terms ")" | "#" "{" vdecls ":" formula "}"
// cmp       := "=" | "~=" | "=<" | ">=" | "<" | ">"
// vdecl     := NAME ["[" NAME "]"]
// "//" starts a comment; an optional minus sign plus digits is an integer.
// SPDX-License-Identifier: MIT
#ifndef FOLASP_PARSE_HPP
#define FOLASP_PARSE_HPP

#include <string>
#include <vector>

#include "folasp/ast.hpp"

namespace folasp {
namespace detail {

enum class Tok {
  Ident, Int,
  LBrace, RBrace, LParen, RParen, LBracket, RBracket,
  Comma, Semi, Colon, Dot, Hash,
  Bang, Question, Tilde, Amp, Pipe, ImpliesTok, IffTok, LArrow, RArrow,
  Eq, Neq, Leq, Geq, Lt, Gt,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  long long value = 0;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip_ws();
      int line = line_, col = col_;
      if (pos_ >= src_.size()) {
        out.push_back({Tok::End, "", 0, line, col});
        return out;
      }
      char c = src_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c))) {
        std::string id;
        while (pos_ < src_.size() &&
               (std::isalnum(static_cast<unsigned char>(src_[pos_])) || src_[pos_] == '_'))
          id += take();
        out.push_back({Tok::Ident, id, 0, line, col});
        continue;
      }
      if (std::isdigit(static_cast<unsigned char>(c)) ||
          (c == '-' && pos_ + 1 < src_.size() &&
           std::isdigit(static_cast<unsigned char>(src_[pos_ + 1])))) {
        std::string num;
        if (c == '-') num += take();
        while (pos_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[pos_])))
          num += take();
        out.push_back({Tok::Int, num, std::stoll(num), line, col});
        continue;
      }
      switch (c) {
        case '{': take(); out.push_back({Tok::LBrace, "{", 0, line, col}); continue;
        case '}': take(); out.push_back({Tok::RBrace, "}", 0, line, col}); continue;
        case '(': take(); out.push_back({Tok::LParen, "(", 0, line, col}); continue;
        case ')': take(); out.push_back({Tok::RParen, ")", 0, line, col}); continue;
        case '[': take(); out.push_back({Tok::LBracket, "[", 0, line, col}); continue;
        case ']': take(); out.push_back({Tok::RBracket, "]", 0, line, col}); continue;
        case ',': take(); out.push_back({Tok::Comma, ",", 0, line, col}); continue;
        case ';': take(); out.push_back({Tok::Semi, ";", 0, line, col}); continue;
        case ':': take(); out.push_back({Tok::Colon, ":", 0, line, col}); continue;
        case '.': take(); out.push_back({Tok::Dot, ".", 0, line, col}); continue;
        case '#': take(); out.push_back({Tok::Hash, "#", 0, line, col}); continue;
        case '!': take(); out.push_back({Tok::Bang, "!", 0, line, col}); continue;
        case '?': take(); out.push_back({Tok::Question, "?", 0, line, col}); continue;
        case '&': take(); out.push_back({Tok::Amp, "&", 0, line, col}); continue;
        case '|': take(); out.push_back({Tok::Pipe, "|", 0, line, col}); continue;
        case '~':
          take();
          if (peek() == '=') { take(); out.push_back({Tok::Neq, "~=", 0, line, col}); }
          else out.push_back({Tok::Tilde, "~", 0, line, col});
          continue;
        case '=':
          take();
          if (peek() == '>') { take(); out.push_back({Tok::ImpliesTok, "=>", 0, line, col}); }
          else if (peek() == '<') { take(); out.push_back({Tok::Leq, "=<", 0, line, col}); }
          else out.push_back({Tok::Eq, "=", 0, line, col});
          continue;
        case '>':
          take();
          if (peek() == '=') { take(); out.push_back({Tok::Geq, ">=", 0, line, col}); }
          else out.push_back({Tok::Gt, ">", 0, line, col});
          continue;
        case '<':
          take();
          if (peek() == '=' && pos_ + 1 < src_.size() && src_[pos_ + 1] == '>') {
            take(); take();
            out.push_back({Tok::IffTok, "<=>", 0, line, col});
          } else if (peek() == '-') {
            take();
            out.push_back({Tok::LArrow, "<-", 0, line, col});
          } else {
            out.push_back({Tok::Lt, "<", 0, line, col});
          }
          continue;
        case '-':
          take();
          if (peek() == '>') { take(); out.push_back({Tok::RArrow, "->", 0, line, col}); continue; }
          throw ParseError("stray '-'", line, col);
        default:
          throw ParseError(std::string("unexpected character '") + c + "'", line, col);
      }
    }
  }

 private:
  char peek() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }
  char take() {
    char c = src_[pos_++];
    if (c == '\n') { ++line_; col_ = 1; } else { ++col_; }
    return c;
  }
  void skip_ws() {
    for (;;) {
      while (pos_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[pos_]))) take();
      if (pos_ + 1 < src_.size() && src_[pos_] == '/' && src_[pos_ + 1] == '/') {
        while (pos_ < src_.size() && src_[pos_] != '\n') take();
        continue;
      }
      return;
    }
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

inline bool is_keyword(const std::string& s) {
  return s == "vocabulary" || s == "structure" || s == "theory" || s == "define" ||
         s == "type" || s == "true" || s == "false";
}

class Parser {
 public:
  explicit Parser(const std::string& src) {
    Lexer lex(src);
    toks_ = lex.run();
  }

  ModelExpansionProblem parse_problem() {
    ModelExpansionProblem m;
    expect_keyword("vocabulary");
    expect(Tok::LBrace);
    while (!at(Tok::RBrace)) parse_decl(m.vocabulary);
    expect(Tok::RBrace);
    voc_ = &m.vocabulary;
    expect_keyword("structure");
    m.structure = parse_structure_body();
    expect_keyword("theory");
    expect(Tok::LBrace);
    while (!at(Tok::RBrace)) parse_theory_item(m.theory);
    expect(Tok::RBrace);
    expect(Tok::End);
    return m;
  }

  // A bare structure block against a known vocabulary (model files).
  Structure parse_structure_only(const Vocabulary& voc) {
    voc_ = &voc;
    expect_keyword("structure");
    Structure s = parse_structure_body();
    expect(Tok::End);
    return s;
  }

 private:
  const Token& cur() const { return toks_[i_]; }
  bool at(Tok k) const { return cur().kind == k; }
  bool at_keyword(const std::string& kw) const {
    return cur().kind == Tok::Ident && cur().text == kw;
  }
  Token advance() { return toks_[i_++]; }
  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, cur().line, cur().col);
  }
  Token expect(Tok k, const char* what = nullptr) {
    if (!at(k)) fail(std::string("expected ") + (what ? what : token_name(k)));
    return advance();
  }
  void expect_keyword(const std::string& kw) {
    if (!at_keyword(kw)) fail("expected '" + kw + "'");
    advance();
  }
  std::string expect_name(const char* what) {
    if (!at(Tok::Ident)) fail(std::string("expected ") + what);
    if (is_keyword(cur().text)) fail("'" + cur().text + "' is a reserved word");
    return advance().text;
  }
  static const char* token_name(Tok k) {
    switch (k) {
      case Tok::LBrace: return "'{'";
      case Tok::RBrace: return "'}'";
      case Tok::LParen: return "'('";
      case Tok::RParen: return "')'";
      case Tok::LBracket: return "'['";
      case Tok::RBracket: return "']'";
      case Tok::Comma: return "','";
      case Tok::Colon: return "':'";
      case Tok::Dot: return "'.'";
      case Tok::End: return "end of input";
      default: return "token";
    }
  }

  // ---- vocabulary

  void check_fresh(const Vocabulary& v, const std::string& n) {
    if (v.declared(n)) fail("duplicate declaration of '" + n + "'");
  }

  void parse_decl(Vocabulary& v) {
    if (at_keyword("type")) {
      advance();
      std::string n = expect_name("type name");
      check_fresh(v, n);
      v.types.push_back(n);
      return;
    }
    std::string n = expect_name("declaration");
    check_fresh(v, n);
    std::vector<std::string> args;
    if (at(Tok::LParen)) {
      advance();
      while (!at(Tok::RParen)) {
        if (!args.empty()) expect(Tok::Comma);
        args.push_back(expect_name("type name"));
      }
      expect(Tok::RParen);
    }
    if (at(Tok::Colon)) {
      advance();
      std::string res = expect_name("result type");
      v.functions.push_back(n);
      v.function_arg_types[n] = std::move(args);
      v.function_result_type[n] = res;
    } else {
      v.predicates.push_back(n);
      v.predicate_types[n] = std::move(args);
    }
  }

  // ---- structure

  Value parse_value() {
    if (at(Tok::Int)) return Value{advance().value};
    return Value{expect_name("element")};
  }

  Structure parse_structure_body() {
    Structure s;
    expect(Tok::LBrace);
    while (!at(Tok::RBrace)) {
      if (!at(Tok::Ident)) fail("expected interpretation");
      Token name_tok = cur();
      std::string n = expect_name("symbol name");
      if (!voc_->declared(n))
        throw ParseError("interpretation of undeclared symbol '" + n + "'", name_tok.line,
                         name_tok.col);
      if (s.interprets(n))
        throw ParseError("duplicate interpretation of '" + n + "'", name_tok.line, name_tok.col);
      expect(Tok::Eq, "'='");
      if (voc_->is_predicate(n) && (at_keyword("true") || at_keyword("false"))) {
        if (!voc_->predicate_types.at(n).empty()) fail("'" + n + "' is not a 0-ary predicate");
        bool val = at_keyword("true");
        advance();
        s.pred_interp[n] = val ? std::vector<Tuple>{Tuple{}} : std::vector<Tuple>{};
        continue;
      }
      expect(Tok::LBrace);
      if (voc_->is_type(n)) {
        std::vector<Value> vals;
        while (!at(Tok::RBrace)) {
          if (!vals.empty()) {
            if (at(Tok::Comma) || at(Tok::Semi)) advance();
            else fail("expected ',' or '}'");
          }
          vals.push_back(parse_value());
        }
        s.type_interp[n] = std::move(vals);
      } else if (voc_->is_predicate(n)) {
        std::vector<Tuple> tuples;
        size_t arity = voc_->predicate_types.at(n).size();
        if (arity == 0 && !at(Tok::RBrace))
          fail("0-ary predicate interpretation must be 'true', 'false', or '{}'");
        while (!at(Tok::RBrace)) {
          if (!tuples.empty()) expect(Tok::Semi, "';'");
          Tuple t;
          t.push_back(parse_value());
          while (at(Tok::Comma)) {
            advance();
            t.push_back(parse_value());
          }
          tuples.push_back(std::move(t));
        }
        s.pred_interp[n] = std::move(tuples);
      } else {
        std::vector<std::pair<Tuple, Value>> entries;
        while (!at(Tok::RBrace)) {
          if (!entries.empty()) expect(Tok::Semi, "';'");
          Tuple t;
          while (!at(Tok::RArrow)) {
            if (!t.empty()) expect(Tok::Comma);
            t.push_back(parse_value());
          }
          expect(Tok::RArrow);
          entries.emplace_back(std::move(t), parse_value());
        }
        s.func_interp[n] = std::move(entries);
      }
      expect(Tok::RBrace);
    }
    expect(Tok::RBrace);
    return s;
  }

  // ---- theory

  void parse_theory_item(Theory& th) {
    if (at_keyword("define")) {
      advance();
      expect(Tok::LBrace);
      Definition d;
      while (!at(Tok::RBrace)) d.rules.push_back(parse_def_rule());
      expect(Tok::RBrace);
      th.definitions.push_back(std::move(d));
      return;
    }
    th.sentences.push_back(parse_formula());
    expect(Tok::Dot, "'.'");
  }

  DefRule parse_def_rule() {
    Token head_tok = cur();
    std::string head = expect_name("rule head");
    if (!voc_->is_predicate(head))
      throw ParseError("rule head '" + head + "' is not a declared predicate", head_tok.line,
                       head_tok.col);
    DefRule r;
    r.head = head;
    size_t scope_mark = binders_.size();
    if (at(Tok::LParen)) {
      advance();
      while (!at(Tok::RParen)) {
        if (!r.head_args.empty()) expect(Tok::Comma);
        if (at(Tok::Int)) {
          r.head_args.push_back(Term{IntConst{advance().value}});
        } else {
          std::string v = expect_name("head variable");
          r.head_args.push_back(Term{Variable{v, ""}});
          binders_.push_back(v);
        }
      }
      expect(Tok::RParen);
    }
    expect(Tok::LArrow, "'<-'");
    r.body = parse_formula();
    expect(Tok::Dot, "'.'");
    binders_.resize(scope_mark);
    return r;
  }

  // ---- formulas; precedence ~ > & > | > => > <=>, quantifiers maximal right.

  Formula parse_formula() { return parse_iff(); }

  Formula parse_iff() {
    Formula f = parse_implies();
    while (at(Tok::IffTok)) {
      advance();
      Formula rhs = parse_implies();
      f = Formula{Iff{Box<Formula>(std::move(f)), Box<Formula>(std::move(rhs))}};
    }
    return f;
  }

  Formula parse_implies() {
    Formula f = parse_or();
    if (at(Tok::ImpliesTok)) {
      advance();
      Formula rhs = parse_implies();  // right-associative
      f = Formula{Implies{Box<Formula>(std::move(f)), Box<Formula>(std::move(rhs))}};
    }
    return f;
  }

  Formula parse_or() {
    Formula f = parse_and();
    while (at(Tok::Pipe)) {
      advance();
      f = mk_or(std::move(f), parse_and());
    }
    return f;
  }

  Formula parse_and() {
    Formula f = parse_unary();
    while (at(Tok::Amp)) {
      advance();
      f = mk_and(std::move(f), parse_unary());
    }
    return f;
  }

  Formula parse_unary() {
    if (at(Tok::Tilde)) {
      advance();
      return mk_not(parse_unary());
    }
    if (at(Tok::Bang) || at(Tok::Question)) return parse_quant();
    return parse_primary();
  }

  Variable parse_var_decl() {
    Variable v;
    v.name = expect_name("variable");
    if (at(Tok::LBracket)) {
      advance();
      Token t = cur();
      v.type = expect_name("type name");
      if (!voc_->is_type(v.type))
        throw ParseError("undeclared type '" + v.type + "'", t.line, t.col);
      expect(Tok::RBracket);
    }
    return v;
  }

  Formula parse_quant() {
    QuantKind kind = at(Tok::Bang) ? QuantKind::Forall : QuantKind::Exists;
    advance();
    std::vector<Variable> decls;
    decls.push_back(parse_var_decl());
    while (at(Tok::Comma)) {
      advance();
      decls.push_back(parse_var_decl());
    }
    expect(Tok::Colon, "':'");
    size_t scope_mark = binders_.size();
    for (const auto& d : decls) binders_.push_back(d.name);
    Formula body = parse_formula();
    binders_.resize(scope_mark);
    for (auto it = decls.rbegin(); it != decls.rend(); ++it)
      body = mk_quant(kind, *it, std::move(body));
    return body;
  }

  bool at_cmp() const {
    switch (cur().kind) {
      case Tok::Eq: case Tok::Neq: case Tok::Leq: case Tok::Geq: case Tok::Lt: case Tok::Gt:
        return true;
      default:
        return false;
    }
  }

  CmpOp take_cmp() {
    Tok k = advance().kind;
    switch (k) {
      case Tok::Eq: return CmpOp::Eq;
      case Tok::Neq: return CmpOp::Neq;
      case Tok::Leq: return CmpOp::Leq;
      case Tok::Geq: return CmpOp::Geq;
      case Tok::Lt: return CmpOp::Lt;
      default: return CmpOp::Gt;
    }
  }

  Formula parse_primary() {
    if (at(Tok::LParen)) {
      advance();
      Formula f = parse_formula();
      expect(Tok::RParen);
      return f;
    }
    if (at_keyword("true")) { advance(); return Formula{BoolConst{true}}; }
    if (at_keyword("false")) { advance(); return Formula{BoolConst{false}}; }
    Token first = cur();
    Term t = parse_term();
    if (at_cmp()) {
      CmpOp op = take_cmp();
      Term rhs = parse_term();
      return Formula{Comparison{std::move(t), op, std::move(rhs)}};
    }
    // Not a comparison: the term must denote a predicate atom.
    if (const auto* app = std::get_if<FuncApp>(&t.node)) {
      if (voc_->is_predicate(app->function))
        return Formula{PredAtom{app->function, app->args}};
      throw ParseError("'" + app->function + "' is not a declared predicate", first.line,
                       first.col);
    }
    if (const auto* e = std::get_if<ElemConst>(&t.node)) {
      if (voc_->is_predicate(e->name)) {
        if (!voc_->predicate_types.at(e->name).empty())
          throw ParseError("predicate '" + e->name + "' used without arguments", first.line,
                           first.col);
        return Formula{PredAtom{e->name, {}}};
      }
      throw ParseError("'" + e->name + "' is not a declared predicate", first.line, first.col);
    }
    throw ParseError("expected formula", first.line, first.col);
  }

  bool bound(const std::string& n) const {
    for (auto it = binders_.rbegin(); it != binders_.rend(); ++it)
      if (*it == n) return true;
    return false;
  }

  Term parse_term() {
    if (at(Tok::Int)) return Term{IntConst{advance().value}};
    if (at(Tok::Hash)) {
      advance();
      expect(Tok::LBrace);
      Cardinality c{{}, Box<Formula>(Formula{BoolConst{true}})};
      c.bound.push_back(parse_var_decl());
      while (at(Tok::Comma)) {
        advance();
        c.bound.push_back(parse_var_decl());
      }
      expect(Tok::Colon, "':'");
      size_t scope_mark = binders_.size();
      for (const auto& d : c.bound) binders_.push_back(d.name);
      *c.body = parse_formula();
      binders_.resize(scope_mark);
      expect(Tok::RBrace);
      return Term{std::move(c)};
    }
    Token name_tok = cur();
    std::string n = expect_name("term");
    if (at(Tok::LParen)) {
      advance();
      FuncApp app{n, {}};
      while (!at(Tok::RParen)) {
        if (!app.args.empty()) expect(Tok::Comma);
        app.args.push_back(parse_term());
      }
      expect(Tok::RParen);
      if (!voc_->is_function(n) && !voc_->is_predicate(n))
        throw ParseError("application of undeclared symbol '" + n + "'", name_tok.line,
                         name_tok.col);
      return Term{std::move(app)};
    }
    if (bound(n)) return Term{Variable{n, ""}};
    if (voc_->is_function(n) && voc_->function_arg_types.at(n).empty())
      return Term{FuncApp{n, {}}};
    // Plain name: an element constant, or a 0-ary predicate resolved up a level.
    return Term{ElemConst{n, ""}};
  }

  std::vector<Token> toks_;
  size_t i_ = 0;
  const Vocabulary* voc_ = nullptr;
  std::vector<std::string> binders_;
};

}  // namespace detail

inline ModelExpansionProblem parse_problem(const std::string& source) {
  detail::Parser p(source);
  return p.parse_problem();
}

// Parses a bare `structure { ... }` block (the shape `solve` prints).
inline Structure parse_structure(const std::string& source, const Vocabulary& voc) {
  detail::Parser p(source);
  return p.parse_structure_only(voc);
}

}  // namespace folasp

#endif  // FOLASP_PARSE_HPP
