#include "setsynth/parser.hpp"

#include <cctype>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>

namespace setsynth {
namespace {

enum class Tok {
  End, Newline, LParen, RParen, LBracket, RBracket, Comma, Pipe,
  Equals, EqEq, Question, Colon, Plus, Underscore,
  Lower, Upper, Int,
  KwData, KwIf, KwThen, KwElse, KwFailed,
};

struct Token {
  Tok kind;
  SourcePos pos;
  std::string text;
  std::int64_t num = 0;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

 private:
  void advance() {
    skip_space_and_comments();
    tok_.pos = {line_, col_};
    if (i_ >= text_.size()) {
      tok_.kind = Tok::End;
      return;
    }
    char c = text_[i_];
    if (c == '\n') {
      // collapse runs of blank lines into one separator
      while (i_ < text_.size()) {
        skip_space_and_comments();
        if (i_ < text_.size() && text_[i_] == '\n') {
          bump();
        } else {
          break;
        }
      }
      tok_.kind = Tok::Newline;
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = i_;
      while (i_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[i_]))) bump();
      tok_.kind = Tok::Int;
      tok_.text = std::string(text_.substr(start, i_ - start));
      tok_.num = std::stoll(tok_.text);
      return;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t start = i_;
      while (i_ < text_.size()) {
        char d = text_[i_];
        if (std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '\'') {
          bump();
        } else {
          break;
        }
      }
      tok_.text = std::string(text_.substr(start, i_ - start));
      if (tok_.text == "_") {
        tok_.kind = Tok::Underscore;
      } else if (tok_.text == "data") {
        tok_.kind = Tok::KwData;
      } else if (tok_.text == "if") {
        tok_.kind = Tok::KwIf;
      } else if (tok_.text == "then") {
        tok_.kind = Tok::KwThen;
      } else if (tok_.text == "else") {
        tok_.kind = Tok::KwElse;
      } else if (tok_.text == "failed") {
        tok_.kind = Tok::KwFailed;
      } else if (std::isupper(static_cast<unsigned char>(tok_.text[0]))) {
        tok_.kind = Tok::Upper;
      } else {
        tok_.kind = Tok::Lower;
      }
      return;
    }
    switch (c) {
      case '(': bump(); tok_.kind = Tok::LParen; return;
      case ')': bump(); tok_.kind = Tok::RParen; return;
      case '[': bump(); tok_.kind = Tok::LBracket; return;
      case ']': bump(); tok_.kind = Tok::RBracket; return;
      case ',': bump(); tok_.kind = Tok::Comma; return;
      case '|': bump(); tok_.kind = Tok::Pipe; return;
      case '?': bump(); tok_.kind = Tok::Question; return;
      case ':': bump(); tok_.kind = Tok::Colon; return;
      case '+': bump(); tok_.kind = Tok::Plus; return;
      case '=':
        bump();
        if (i_ < text_.size() && text_[i_] == '=') {
          bump();
          tok_.kind = Tok::EqEq;
        } else {
          tok_.kind = Tok::Equals;
        }
        return;
      default:
        throw CompileError({line_, col_}, std::string("unexpected character '") + c + "'");
    }
  }

  void skip_space_and_comments() {
    while (i_ < text_.size()) {
      char c = text_[i_];
      if (c == ' ' || c == '\t' || c == '\r') {
        bump();
      } else if (c == '-' && i_ + 1 < text_.size() && text_[i_ + 1] == '-') {
        while (i_ < text_.size() && text_[i_] != '\n') bump();
      } else {
        break;
      }
    }
  }

  void bump() {
    if (text_[i_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++i_;
  }

  std::string_view text_;
  size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
  Token tok_;
};

class Parser {
 public:
  explicit Parser(std::string_view text) : lex_(text) {}

  Program parse_module() {
    Program p = program_with_prelude();
    skip_newlines();
    while (lex_.peek().kind != Tok::End) {
      if (lex_.peek().kind == Tok::KwData) {
        parse_data_decl(p);
      } else {
        parse_rule(p);
      }
      if (lex_.peek().kind == Tok::Newline) {
        lex_.take();
        skip_newlines();
      } else if (lex_.peek().kind != Tok::End) {
        fail(lex_.peek().pos, "expected end of line");
      }
    }
    check_module(p);
    return p;
  }

  ExprPtr parse_single_expr() {
    skip_newlines();
    ExprPtr e = parse_expr();
    skip_newlines();
    if (lex_.peek().kind != Tok::End) fail(lex_.peek().pos, "trailing input after expression");
    return e;
  }

 private:
  [[noreturn]] void fail(SourcePos pos, const std::string& msg) {
    throw CompileError(pos, msg);
  }

  void skip_newlines() {
    while (lex_.peek().kind == Tok::Newline) lex_.take();
  }

  Token expect(Tok kind, const std::string& what) {
    if (lex_.peek().kind != kind) fail(lex_.peek().pos, "expected " + what);
    return lex_.take();
  }

  // data T = C t1 ... | D ...
  void parse_data_decl(Program& p) {
    Token kw = lex_.take();
    Token name = expect(Tok::Upper, "type name");
    DataDecl d;
    d.pos = kw.pos;
    d.name = name.text;
    expect(Tok::Equals, "'='");
    while (true) {
      Token con = expect(Tok::Upper, "constructor name");
      ConDecl c;
      c.name = con.text;
      while (is_type_atom_start(lex_.peek().kind)) {
        c.arg_types.push_back(parse_type_atom());
      }
      d.constructors.push_back(std::move(c));
      if (lex_.peek().kind == Tok::Pipe) {
        lex_.take();
      } else {
        break;
      }
    }
    p.data_decls.push_back(std::move(d));
  }

  static bool is_type_atom_start(Tok k) {
    return k == Tok::Lower || k == Tok::Upper || k == Tok::Underscore ||
           k == Tok::LBracket || k == Tok::LParen;
  }

  std::string parse_type_atom() {
    Token t = lex_.take();
    switch (t.kind) {
      case Tok::Lower:
      case Tok::Upper:
        return t.text;
      case Tok::Underscore:
        return "_";
      case Tok::LBracket: {
        std::string inner = parse_type_seq();
        expect(Tok::RBracket, "']'");
        return "[" + inner + "]";
      }
      case Tok::LParen: {
        std::string inner = parse_type_seq();
        expect(Tok::RParen, "')'");
        return "(" + inner + ")";
      }
      default:
        fail(t.pos, "expected type");
    }
  }

  std::string parse_type_seq() {
    std::string out;
    while (is_type_atom_start(lex_.peek().kind)) {
      if (!out.empty()) out += ' ';
      out += parse_type_atom();
    }
    return out;
  }

  // f p1 ... pn = expr
  void parse_rule(Program& p) {
    Token name = expect(Tok::Lower, "function name");
    Rule r;
    r.pos = name.pos;
    while (lex_.peek().kind != Tok::Equals) {
      r.patterns.push_back(parse_pattern_atom());
    }
    expect(Tok::Equals, "'='");
    r.body = parse_expr();
    for (FuncDef& f : p.func_defs) {
      if (f.name == name.text) {
        if (f.arity != static_cast<int>(r.patterns.size())) {
          fail(name.pos, "rules for '" + name.text + "' differ in arity");
        }
        f.rules.push_back(std::move(r));
        return;
      }
    }
    FuncDef f;
    f.pos = name.pos;
    f.name = name.text;
    f.arity = static_cast<int>(r.patterns.size());
    f.rules.push_back(std::move(r));
    p.func_defs.push_back(std::move(f));
  }

  Pattern parse_pattern_atom() {
    Token t = lex_.peek();
    switch (t.kind) {
      case Tok::Lower:
        lex_.take();
        return Pattern::variable(t.text, t.pos);
      case Tok::Underscore:
        lex_.take();
        return Pattern::variable(fresh_wildcard(), t.pos);
      case Tok::Upper:
        lex_.take();
        return Pattern::construct(t.text, {}, t.pos);
      case Tok::LBracket: {
        lex_.take();
        if (lex_.peek().kind == Tok::RBracket) {
          lex_.take();
          return Pattern::construct("[]", {}, t.pos);
        }
        std::vector<Pattern> elems;
        elems.push_back(parse_pattern_inner());
        while (lex_.peek().kind == Tok::Comma) {
          lex_.take();
          elems.push_back(parse_pattern_inner());
        }
        expect(Tok::RBracket, "']'");
        Pattern spine = Pattern::construct("[]", {}, t.pos);
        for (auto it = elems.rbegin(); it != elems.rend(); ++it) {
          spine = Pattern::construct(":", {*it, spine}, t.pos);
        }
        return spine;
      }
      case Tok::LParen: {
        lex_.take();
        Pattern inner = parse_pattern_inner();
        expect(Tok::RParen, "')'");
        return inner;
      }
      default:
        fail(t.pos, "expected pattern");
    }
  }

  Pattern parse_pattern_inner() {
    Token t = lex_.peek();
    Pattern head;
    if (t.kind == Tok::Upper) {
      lex_.take();
      std::vector<Pattern> args;
      while (lex_.peek().kind == Tok::Lower || lex_.peek().kind == Tok::Upper ||
             lex_.peek().kind == Tok::Underscore || lex_.peek().kind == Tok::LParen ||
             lex_.peek().kind == Tok::LBracket) {
        args.push_back(parse_pattern_atom());
      }
      head = Pattern::construct(t.text, std::move(args), t.pos);
    } else {
      head = parse_pattern_atom();
    }
    if (lex_.peek().kind == Tok::Colon) {
      Token colon = lex_.take();
      Pattern tail = parse_pattern_inner();
      return Pattern::construct(":", {std::move(head), std::move(tail)}, colon.pos);
    }
    return head;
  }

  std::string fresh_wildcard() { return "_w" + std::to_string(++wildcards_); }

  // Precedence, loosest first: ? | == | : | + | application | atom.
  ExprPtr parse_expr() { return parse_choice(); }

  ExprPtr parse_choice() {
    ExprPtr l = parse_equality();
    if (lex_.peek().kind == Tok::Question) {
      Token q = lex_.take();
      ExprPtr r = parse_choice();
      return Expr::choice(std::move(l), std::move(r), q.pos);
    }
    return l;
  }

  ExprPtr parse_equality() {
    ExprPtr l = parse_cons();
    if (lex_.peek().kind == Tok::EqEq) {
      Token op = lex_.take();
      ExprPtr r = parse_cons();
      return Expr::app("==", {std::move(l), std::move(r)}, op.pos);
    }
    return l;
  }

  ExprPtr parse_cons() {
    ExprPtr l = parse_additive();
    if (lex_.peek().kind == Tok::Colon) {
      Token op = lex_.take();
      ExprPtr r = parse_cons();
      return Expr::con(":", {std::move(l), std::move(r)}, op.pos);
    }
    return l;
  }

  ExprPtr parse_additive() {
    ExprPtr l = parse_application();
    while (lex_.peek().kind == Tok::Plus) {
      Token op = lex_.take();
      ExprPtr r = parse_application();
      l = Expr::app("+", {std::move(l), std::move(r)}, op.pos);
    }
    return l;
  }

  static bool is_atom_start(Tok k) {
    return k == Tok::Lower || k == Tok::Upper || k == Tok::Int ||
           k == Tok::KwFailed || k == Tok::KwIf || k == Tok::LParen ||
           k == Tok::LBracket;
  }

  ExprPtr parse_application() {
    Token head = lex_.peek();
    ExprPtr h = parse_atom();
    std::vector<ExprPtr> args;
    while (is_atom_start(lex_.peek().kind)) {
      args.push_back(parse_atom());
    }
    if (args.empty()) return h;
    if (h->kind == ExprKind::Var) {
      return Expr::app(h->name, std::move(args), h->pos);
    }
    if (h->kind == ExprKind::ConApp && h->args.empty()) {
      return Expr::con(h->name, std::move(args), h->pos);
    }
    fail(head.pos, "head of an application must be a function or constructor name");
  }

  ExprPtr parse_atom() {
    Token t = lex_.peek();
    switch (t.kind) {
      case Tok::Int:
        lex_.take();
        return Expr::literal(t.num, t.pos);
      case Tok::Lower:
        lex_.take();
        return Expr::var(t.text, t.pos);
      case Tok::Upper:
        lex_.take();
        return Expr::con(t.text, {}, t.pos);
      case Tok::KwFailed:
        lex_.take();
        return Expr::failed(t.pos);
      case Tok::KwIf: {
        lex_.take();
        ExprPtr c = parse_expr();
        expect(Tok::KwThen, "'then'");
        ExprPtr th = parse_expr();
        expect(Tok::KwElse, "'else'");
        ExprPtr el = parse_expr();
        return Expr::if_then_else(std::move(c), std::move(th), std::move(el), t.pos);
      }
      case Tok::LParen: {
        lex_.take();
        ExprPtr e = parse_expr();
        expect(Tok::RParen, "')'");
        return e;
      }
      case Tok::LBracket: {
        lex_.take();
        std::vector<ExprPtr> elems;
        if (lex_.peek().kind != Tok::RBracket) {
          elems.push_back(parse_expr());
          while (lex_.peek().kind == Tok::Comma) {
            lex_.take();
            elems.push_back(parse_expr());
          }
        }
        expect(Tok::RBracket, "']'");
        ExprPtr spine = Expr::con("[]", {}, t.pos);
        for (auto it = elems.rbegin(); it != elems.rend(); ++it) {
          spine = Expr::con(":", {*it, spine}, t.pos);
        }
        return spine;
      }
      default:
        fail(t.pos, "expected expression");
    }
  }

  // Whole-module checks: unique names, arities, and name resolution.
  void check_module(Program& p) {
    std::unordered_set<std::string> type_names;
    std::unordered_set<std::string> con_names;
    for (const DataDecl& d : p.data_decls) {
      if (!type_names.insert(d.name).second) {
        fail(d.pos, "duplicate definition of type '" + d.name + "'");
      }
      if (d.constructors.empty()) {
        fail(d.pos, "type '" + d.name + "' needs at least one constructor");
      }
      for (const ConDecl& c : d.constructors) {
        if (!con_names.insert(c.name).second) {
          fail(d.pos, "duplicate definition of constructor '" + c.name + "'");
        }
      }
    }
    std::unordered_set<std::string> fun_names;
    for (const FuncDef& f : p.func_defs) {
      if (!fun_names.insert(f.name).second) {
        // rules of one function are grouped during parsing, so a second
        // FuncDef with the same name cannot happen; guard anyway
        fail(f.pos, "duplicate definition of function '" + f.name + "'");
      }
      if (con_names.count(f.name)) {
        fail(f.pos, "'" + f.name + "' is already a constructor");
      }
    }
    for (FuncDef& f : p.func_defs) {
      for (Rule& r : f.rules) {
        std::set<std::string> scope;
        for (const Pattern& pat : r.patterns) collect_pattern_vars(p, pat, scope);
        r.body = resolve_expr(p, r.body, scope, false);
      }
    }
  }

  void collect_pattern_vars(const Program& p, const Pattern& pat, std::set<std::string>& scope) {
    if (pat.is_var) {
      scope.insert(pat.name);  // duplicates diagnosed by the uniformizer
      return;
    }
    int arity = 0;
    if (!p.find_constructor(pat.name, &arity)) {
      fail(pat.pos, "unknown constructor '" + pat.name + "' in pattern");
    }
    if (arity != static_cast<int>(pat.args.size())) {
      fail(pat.pos, "constructor '" + pat.name + "' expects " + std::to_string(arity) +
                        " arguments in pattern");
    }
    for (const Pattern& a : pat.args) collect_pattern_vars(p, a, scope);
  }

 public:
  // Checks names/arities and rewrites references to zero-argument functions
  // from Var nodes into empty FunApp nodes.
  static ExprPtr resolve_expr(const Program& p, const ExprPtr& e,
                              const std::set<std::string>& scope, bool entry_scope) {
    switch (e->kind) {
      case ExprKind::Var: {
        if (scope.count(e->name)) return e;
        auto callee = resolve_callee(p, e->name, entry_scope);
        if (!callee) {
          throw CompileError(e->pos, "unknown identifier '" + e->name + "'");
        }
        if (callee->arity != 0) {
          throw CompileError(e->pos, "'" + e->name + "' expects " +
                                         std::to_string(callee->arity) +
                                         " arguments (partial application is not supported)");
        }
        return Expr::app(e->name, {}, e->pos);
      }
      case ExprKind::Lit:
      case ExprKind::Failed:
        return e;
      case ExprKind::ConApp: {
        int arity = 0;
        if (!p.find_constructor(e->name, &arity)) {
          throw CompileError(e->pos, "unknown constructor '" + e->name + "'");
        }
        if (arity != static_cast<int>(e->args.size())) {
          throw CompileError(e->pos, "constructor '" + e->name + "' expects " +
                                         std::to_string(arity) + " arguments");
        }
        break;
      }
      case ExprKind::FunApp: {
        if (scope.count(e->name)) {
          throw CompileError(e->pos, "variable '" + e->name +
                                         "' cannot be applied (higher-order application)");
        }
        auto callee = resolve_callee(p, e->name, entry_scope);
        if (!callee) {
          throw CompileError(e->pos, "unknown identifier '" + e->name + "'");
        }
        if (callee->arity != static_cast<int>(e->args.size())) {
          throw CompileError(e->pos, "'" + e->name + "' expects " +
                                         std::to_string(callee->arity) + " arguments");
        }
        break;
      }
      case ExprKind::Choice:
      case ExprKind::If:
        break;
    }
    std::vector<ExprPtr> as;
    as.reserve(e->args.size());
    bool changed = false;
    for (const ExprPtr& a : e->args) {
      ExprPtr a2 = resolve_expr(p, a, scope, entry_scope);
      changed |= (a2 != a);
      as.push_back(std::move(a2));
    }
    if (!changed) return e;
    auto e2 = std::make_shared<Expr>(*e);
    e2->args = std::move(as);
    return e2;
  }

 private:
  Lexer lex_;
  int wildcards_ = 0;
};

}  // namespace

Program parse_program(std::string_view text) {
  Parser parser(text);
  return parser.parse_module();
}

ExprPtr parse_entry_expr(std::string_view text, const Program& program) {
  Parser parser(text);
  ExprPtr e = parser.parse_single_expr();
  return Parser::resolve_expr(program, e, {}, /*entry_scope=*/true);
}

}  // namespace setsynth
