#include "folio/print.hpp"

#include <cctype>

namespace folio {

namespace {

using Kind = Formula::Kind;

int precedence(const Formula& f) {
  switch (f.kind()) {
    case Kind::Or: return 1100;
    case Kind::Implies:
    case Kind::Iff: return 1050;
    case Kind::And: return 1000;
    case Kind::Not: return 900;
    case Kind::Eq: return 700;
    default: return 0;
  }
}

struct Printer {
  PrintOptions opts;
  bool latex() const { return opts.mode == PrintOptions::Mode::Latex; }

  // Symbols bound by a second-order quantifier or lambda in scope; rendered
  // italic like individual variables.
  std::set<Symbol> bound;

  std::string sym_text(const Symbol& s, bool italic) {
    if (!latex()) return s.name();
    return latex_symbol(s, italic, opts);
  }

  bool italic_for(const Symbol& s) const {
    return s.is_parameter() || bound.count(s) > 0;
  }

  std::string term(const Term& t) {
    if (t.is_var()) return sym_text(t.head(), true);
    std::string head = sym_text(t.head(), italic_for(t.head()));
    if (t.args().empty()) return head;
    return head + term_args(t.args());
  }

  std::string term_args(const std::vector<Term>& args) {
    std::string out;
    if (latex() && opts.compact) {
      for (const Term& a : args) out += "\\," + term(a);
      return out;
    }
    out = "(";
    for (size_t i = 0; i < args.size(); ++i) {
      if (i) out += ",";
      out += term(args[i]);
    }
    out += ")";
    return out;
  }

  std::string op_text(Kind k) {
    switch (k) {
      case Kind::And: return latex() ? " \\land " : ", ";
      case Kind::Or: return latex() ? " \\lor " : " ; ";
      case Kind::Implies: return latex() ? " \\rightarrow " : " -> ";
      case Kind::Iff: return latex() ? " \\leftrightarrow " : " <-> ";
      default: throw Error("not a binary connective");
    }
  }

  // maxprec: highest operator priority printable here without parentheses.
  std::string go(const Formula& f, int maxprec) {
    std::string body = raw(f);
    if (precedence(f) > maxprec) return "(" + body + ")";
    return body;
  }

  std::string raw(const Formula& f) {
    switch (f.kind()) {
      case Kind::Atom: {
        std::string head = sym_text(f.head(), italic_for(f.head()));
        if (f.terms().empty()) return head;
        return head + term_args(f.terms());
      }
      case Kind::Eq:
        return term(f.terms()[0]) + " = " + term(f.terms()[1]);
      case Kind::True: return latex() ? "\\top" : "true";
      case Kind::False: return latex() ? "\\bot" : "false";
      case Kind::Not: {
        const Formula& kid = f.kid();
        if (latex() && kid.is(Kind::Eq))
          return term(kid.terms()[0]) + " \\neq " + term(kid.terms()[1]);
        std::string head = latex() ? "\\lnot " : "~";
        return head + go(kid, 900);
      }
      case Kind::And:
      case Kind::Or:
      case Kind::Implies:
      case Kind::Iff: {
        int p = precedence(f);
        std::string sep = op_text(f.kind());
        std::string out;
        const auto& kids = f.kids();
        for (size_t i = 0; i < kids.size(); ++i) {
          if (i) out += sep;
          // Right-associative: only the final operand may repeat the same
          // priority without parentheses.
          out += go(kids[i], i + 1 == kids.size() ? p : p - 1);
        }
        return out;
      }
      case Kind::ForAll:
      case Kind::Exists:
      case Kind::ForAll2:
      case Kind::Exists2:
        return quantifier(f);
      case Kind::Lambda: {
        if (!latex()) return call_like("lambda", f);
        std::string out = "\\lambda ";
        for (const Symbol& v : f.binders()) out += sym_text(v, true) + "\\,";
        auto saved = bound;
        for (const Symbol& v : f.binders()) bound.insert(v);
        out += ".\\, (" + go(f.kid(), 1100) + ")";
        bound = saved;
        return out;
      }
      case Kind::Call: {
        std::string out = sym_text(f.head(), false) + "(";
        const auto& args = f.call_args();
        for (size_t i = 0; i < args.size(); ++i) {
          if (i) out += ", ";
          out += macro_arg(args[i]);
        }
        return out + ")";
      }
    }
    throw Error("unhandled formula kind in printer");
  }

  std::string macro_arg(const MacroArg& a) {
    if (a.is_formula()) return go(a.formula(), 999);
    std::string out = "[";
    const auto& syms = a.symbols();
    for (size_t i = 0; i < syms.size(); ++i) {
      if (i) out += ",";
      out += sym_text(syms[i], syms[i].is_parameter());
    }
    return out + "]";
  }

  std::string quantifier(const Formula& f) {
    bool second = f.is(Kind::ForAll2) || f.is(Kind::Exists2);
    auto saved = bound;
    if (second)
      for (const Symbol& v : f.binders()) bound.insert(v);
    std::string out;
    if (latex()) {
      std::string q = (f.is(Kind::ForAll) || f.is(Kind::ForAll2)) ? "\\forall "
                                                                  : "\\exists ";
      for (const Symbol& v : f.binders()) out += q + sym_text(v, true) + "\\, ";
      out += "(" + go(f.kid(), 1100) + ")";
    } else {
      std::string q = f.is(Kind::ForAll) ? "all"
                      : f.is(Kind::Exists) ? "ex"
                      : f.is(Kind::ForAll2) ? "all2"
                                            : "ex2";
      out = q + "(";
      if (f.binders().size() == 1) {
        out += f.binders()[0].name();
      } else {
        out += "[";
        for (size_t i = 0; i < f.binders().size(); ++i) {
          if (i) out += ",";
          out += f.binders()[i].name();
        }
        out += "]";
      }
      out += ", " + go(f.kid(), 1100) + ")";
    }
    bound = saved;
    return out;
  }

  std::string call_like(const std::string& name, const Formula& f) {
    std::string out = name + "(";
    if (f.binders().size() == 1) {
      out += f.binders()[0].name();
    } else {
      out += "[";
      for (size_t i = 0; i < f.binders().size(); ++i) {
        if (i) out += ",";
        out += f.binders()[i].name();
      }
      out += "]";
    }
    return out + ", " + go(f.kid(), 1100) + ")";
  }
};

}  // namespace

int render_precedence(const Formula& f) { return precedence(f); }

std::string latex_symbol(const Symbol& s, bool italic, const PrintOptions& opts) {
  std::string name = s.name();
  int primes = 0;
  std::string digits;
  if (opts.subscript_digits) {
    size_t end = name.size();
    while (end > 0 && std::isdigit(static_cast<unsigned char>(name[end - 1])))
      --end;
    if (end > 0 && end < name.size()) {  // digit-only names keep their digits
      digits = name.substr(end);
      name = name.substr(0, end);
    }
  }
  if (opts.prime_rendering) {
    while (name.size() > 2 && name.compare(name.size() - 2, 2, "_p") == 0) {
      ++primes;
      name = name.substr(0, name.size() - 2);
    }
  }
  std::string escaped;
  for (char c : name) {
    if (c == '_') escaped += "\\_";
    else escaped += c;
  }
  std::string inner = escaped;
  if (primes > 0) {
    inner += "^{";
    for (int i = 0; i < primes; ++i) inner += "\\prime";
    inner += "}";
  }
  if (!digits.empty()) inner += "_{" + digits + "}";
  return (italic ? "\\mathit{" : "\\mathsf{") + inner + "}";
}

std::string print_formula(const Formula& f, const PrintOptions& opts) {
  if (f.empty()) throw Error("cannot print an empty formula handle");
  Printer p{opts, {}};
  return p.go(f, 1100);
}

std::string print_term(const Term& t, const PrintOptions& opts) {
  Printer p{opts, {}};
  return p.term(t);
}

std::string to_text(const Formula& f) { return print_formula(f, {}); }

std::string to_latex(const Formula& f, bool compact) {
  PrintOptions o;
  o.mode = PrintOptions::Mode::Latex;
  o.compact = compact;
  return print_formula(f, o);
}

}  // namespace folio
