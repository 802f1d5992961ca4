#include "folio/parse.hpp"

#include <cctype>

namespace folio {

namespace {

enum class Tok {
  Ident,
  Int,
  LParen,
  RParen,
  LBracket,
  RBracket,
  Comma,
  Semi,
  Tilde,
  Arrow,
  IffOp,
  EqOp,
  End,
};

struct Token {
  Tok kind;
  std::string text;
  int line;
  int col;
};

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) { advance(); }

  const Token& peek() const { return tok_; }
  Token take() {
    Token t = tok_;
    advance();
    return t;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, tok_.line, tok_.col);
  }

  void expect(Tok k, const char* what) {
    if (tok_.kind != k) fail(std::string("expected ") + what);
    advance();
  }

 private:
  void advance() {
    while (pos_ < text_.size()) {
      char c = text_[pos_];
      if (c == '\n') {
        ++line_;
        col_ = 1;
        ++pos_;
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        ++col_;
        ++pos_;
      } else {
        break;
      }
    }
    tok_.line = line_;
    tok_.col = col_;
    if (pos_ >= text_.size()) {
      tok_ = {Tok::End, "", line_, col_};
      return;
    }
    char c = text_[pos_];
    if (ident_start(c)) {
      size_t start = pos_;
      while (pos_ < text_.size() && ident_char(text_[pos_])) take_char();
      tok_.kind = Tok::Ident;
      tok_.text = text_.substr(start, pos_ - start);
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t start = pos_;
      while (pos_ < text_.size() &&
             std::isdigit(static_cast<unsigned char>(text_[pos_])))
        take_char();
      tok_.kind = Tok::Int;
      tok_.text = text_.substr(start, pos_ - start);
      return;
    }
    if (text_.compare(pos_, 3, "<->") == 0) {
      tok_ = {Tok::IffOp, "<->", line_, col_};
      pos_ += 3;
      col_ += 3;
      return;
    }
    if (text_.compare(pos_, 2, "->") == 0) {
      tok_ = {Tok::Arrow, "->", line_, col_};
      pos_ += 2;
      col_ += 2;
      return;
    }
    Tok k;
    switch (c) {
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      case '[': k = Tok::LBracket; break;
      case ']': k = Tok::RBracket; break;
      case ',': k = Tok::Comma; break;
      case ';': k = Tok::Semi; break;
      case '~': k = Tok::Tilde; break;
      case '=': k = Tok::EqOp; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line_,
                         col_);
    }
    tok_ = {k, std::string(1, c), line_, col_};
    take_char();
  }

  void take_char() {
    ++pos_;
    ++col_;
  }

  const std::string& text_;
  Token tok_{};
  size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

bool is_reserved(const std::string& s) {
  return s == "all" || s == "ex" || s == "all2" || s == "ex2" ||
         s == "lambda" || s == "true" || s == "false";
}

class Parser {
 public:
  explicit Parser(const std::string& text) : lx_(text) {}

  Formula formula() {
    Formula f = parse(1100);
    if (lx_.peek().kind != Tok::End) lx_.fail("trailing input after formula");
    return f;
  }

  ParsedCall call() {
    if (lx_.peek().kind != Tok::Ident) lx_.fail("expected a name");
    Token name = lx_.take();
    std::vector<MacroArg> args;
    if (lx_.peek().kind == Tok::LParen) {
      lx_.take();
      args = arg_list();
      lx_.expect(Tok::RParen, "')'");
    }
    if (lx_.peek().kind != Tok::End) lx_.fail("trailing input after call");
    return ParsedCall{Symbol(name.text), std::move(args)};
  }

  std::vector<Symbol> symbol_list_only() {
    lx_.expect(Tok::LBracket, "'['");
    std::vector<Symbol> out = symbol_list();
    lx_.expect(Tok::RBracket, "']'");
    if (lx_.peek().kind != Tok::End) lx_.fail("trailing input after list");
    return out;
  }

 private:
  Formula parse(int maxprec) {
    Formula lhs;
    if (lx_.peek().kind == Tok::Tilde) {
      if (maxprec < 900) lx_.fail("negation not allowed here");
      lx_.take();
      lhs = Formula::neg(parse(900));
    } else {
      lhs = primary_with_eq();
    }
    for (;;) {
      Tok k = lx_.peek().kind;
      int p;
      if (k == Tok::Comma)
        p = 1000;
      else if (k == Tok::Arrow || k == Tok::IffOp)
        p = 1050;
      else if (k == Tok::Semi)
        p = 1100;
      else
        break;
      if (p > maxprec) break;
      Token op = lx_.take();
      Formula rhs = parse(p);
      switch (op.kind) {
        case Tok::Comma: lhs = Formula::conj({lhs, rhs}); break;
        case Tok::Semi: lhs = Formula::disj({lhs, rhs}); break;
        case Tok::Arrow: lhs = Formula::implies(lhs, rhs); break;
        default: lhs = Formula::iff(lhs, rhs); break;
      }
    }
    return lhs;
  }

  Formula primary_with_eq() {
    Formula f = primary();
    if (lx_.peek().kind == Tok::EqOp) {
      auto lhs = formula_to_term(f);
      if (!lhs) lx_.fail("left side of '=' is not a term");
      lx_.take();
      Term rhs = term();
      return Formula::eq(*lhs, rhs);
    }
    return f;
  }

  Formula primary() {
    const Token& t = lx_.peek();
    switch (t.kind) {
      case Tok::LParen: {
        lx_.take();
        Formula f = parse(1100);
        lx_.expect(Tok::RParen, "')'");
        return f;
      }
      case Tok::Int: {
        Token n = lx_.take();
        return Formula::atom(Symbol(n.text));
      }
      case Tok::Ident:
        break;
      default:
        lx_.fail("expected a formula");
    }
    Token name = lx_.take();
    if (name.text == "true") return Formula::truth(true);
    if (name.text == "false") return Formula::truth(false);
    if (name.text == "all" || name.text == "ex" || name.text == "all2" ||
        name.text == "ex2" || name.text == "lambda")
      return binder(name.text);
    if (lx_.peek().kind == Tok::LParen) {
      lx_.take();
      std::vector<MacroArg> args = arg_list();
      lx_.expect(Tok::RParen, "')'");
      return application(Symbol(name.text), std::move(args), name);
    }
    return Formula::atom(Symbol(name.text));
  }

  Formula binder(const std::string& which) {
    lx_.expect(Tok::LParen, "'(' after binder");
    std::vector<Symbol> vars;
    if (lx_.peek().kind == Tok::LBracket) {
      lx_.take();
      vars = symbol_list();
      lx_.expect(Tok::RBracket, "']'");
    } else if (lx_.peek().kind == Tok::Ident) {
      Token v = lx_.take();
      if (is_reserved(v.text)) lx_.fail("reserved word in binder position");
      vars.push_back(Symbol(v.text));
    } else {
      lx_.fail("expected a variable or variable list");
    }
    lx_.expect(Tok::Comma, "',' after binder variables");
    Formula body = parse(1100);
    lx_.expect(Tok::RParen, "')' closing binder");
    if (which == "all") return Formula::forall(vars, body);
    if (which == "ex") return Formula::exists(vars, body);
    if (which == "all2") return Formula::forall2(vars, body);
    if (which == "ex2") return Formula::exists2(vars, body);
    return Formula::lambda(vars, body);
  }

  // name(args...): a plain atom when every argument is term-shaped, a macro
  // call otherwise. The expander may still reinterpret an atom whose name is
  // a registered macro.
  Formula application(Symbol name, std::vector<MacroArg> args, const Token& at) {
    if (is_reserved(name.name()))
      throw ParseError("reserved word used as a symbol", at.line, at.col);
    bool all_terms = true;
    std::vector<Term> terms;
    for (const MacroArg& a : args) {
      if (!a.is_formula()) {
        all_terms = false;
        break;
      }
      auto t = formula_to_term(a.formula());
      if (!t) {
        all_terms = false;
        break;
      }
      terms.push_back(*t);
    }
    if (all_terms) return Formula::atom(std::move(name), std::move(terms));
    return Formula::call(std::move(name), std::move(args));
  }

  std::vector<MacroArg> arg_list() {
    std::vector<MacroArg> args;
    for (;;) {
      if (lx_.peek().kind == Tok::LBracket) {
        lx_.take();
        std::vector<Symbol> items = symbol_list();
        lx_.expect(Tok::RBracket, "']'");
        args.push_back(MacroArg{std::move(items)});
      } else {
        args.push_back(MacroArg{parse(999)});
      }
      if (lx_.peek().kind != Tok::Comma) break;
      lx_.take();
    }
    return args;
  }

  std::vector<Symbol> symbol_list() {
    std::vector<Symbol> out;
    if (lx_.peek().kind == Tok::RBracket) return out;  // []
    for (;;) {
      const Token& t = lx_.peek();
      if (t.kind != Tok::Ident && t.kind != Tok::Int)
        lx_.fail("expected a symbol in list");
      if (t.kind == Tok::Ident && is_reserved(t.text))
        lx_.fail("reserved word in symbol list");
      out.push_back(Symbol(lx_.take().text));
      if (lx_.peek().kind != Tok::Comma) break;
      lx_.take();
    }
    return out;
  }

  Term term() {
    const Token& t = lx_.peek();
    if (t.kind == Tok::Int) return Term::app(Symbol(lx_.take().text));
    if (t.kind != Tok::Ident) lx_.fail("expected a term");
    if (is_reserved(t.text)) lx_.fail("reserved word used as a term");
    Token name = lx_.take();
    if (lx_.peek().kind != Tok::LParen) return Term::app(Symbol(name.text));
    lx_.take();
    std::vector<Term> args;
    for (;;) {
      args.push_back(term());
      if (lx_.peek().kind != Tok::Comma) break;
      lx_.take();
    }
    lx_.expect(Tok::RParen, "')'");
    return Term::app(Symbol(name.text), std::move(args));
  }

  Lexer lx_;
};

}  // namespace

Formula parse_formula(const std::string& text) {
  return Parser(text).formula();
}

ParsedCall parse_call(const std::string& text) { return Parser(text).call(); }

std::vector<Symbol> parse_symbol_list(const std::string& text) {
  return Parser(text).symbol_list_only();
}

std::vector<std::string> split_top_level_commas(const std::string& text) {
  std::vector<std::string> parts;
  int depth = 0;
  size_t start = 0;
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (c == ',' && depth == 0) {
      parts.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  parts.push_back(text.substr(start));
  return parts;
}

std::optional<size_t> find_top_level_word(const std::string& text,
                                          const std::string& word) {
  int depth = 0;
  for (size_t i = 0; i < text.size(); ++i) {
    char c = text[i];
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (depth == 0 && ident_start(c) && (i == 0 || !ident_char(text[i - 1]))) {
      size_t j = i;
      while (j < text.size() && ident_char(text[j])) ++j;
      if (text.compare(i, j - i, word) == 0) return i;
      i = j - 1;
    }
  }
  return std::nullopt;
}

}  // namespace folio
