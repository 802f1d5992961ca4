#include "folio/syntax.hpp"

#include <algorithm>
#include <functional>

namespace folio {

namespace {

std::shared_ptr<const Formula::Node> make_node(Formula::Node n) {
  return std::make_shared<const Formula::Node>(std::move(n));
}

// Binder bodies re-mark occurrences of the bound symbols as variables, so a
// formula built programmatically behaves like one produced by the parser.
Formula::Node binder_node(Formula::Kind k, std::vector<Symbol> vs, Formula body) {
  if (k == Formula::Kind::ForAll || k == Formula::Kind::Exists ||
      k == Formula::Kind::Lambda) {
    std::set<Symbol> bound(vs.begin(), vs.end());
    body = bind_vars(body, bound);
  }
  Formula::Node n;
  n.kind = k;
  n.binders = std::move(vs);
  n.kids = {std::move(body)};
  return n;
}

}  // namespace

Formula Formula::atom(Symbol p, std::vector<Term> args) {
  Node n;
  n.kind = Kind::Atom;
  n.sym = std::move(p);
  n.terms = std::move(args);
  return Formula(make_node(std::move(n)));
}

Formula Formula::eq(Term l, Term r) {
  Node n;
  n.kind = Kind::Eq;
  n.terms = {std::move(l), std::move(r)};
  return Formula(make_node(std::move(n)));
}

Formula Formula::truth(bool b) {
  Node n;
  n.kind = b ? Kind::True : Kind::False;
  return Formula(make_node(std::move(n)));
}

Formula Formula::neg(Formula f) {
  Node n;
  n.kind = Kind::Not;
  n.kids = {std::move(f)};
  return Formula(make_node(std::move(n)));
}

Formula Formula::conj(std::vector<Formula> fs) {
  if (fs.size() < 2) throw Error("conjunction needs at least two members");
  Node n;
  n.kind = Kind::And;
  n.kids = std::move(fs);
  return Formula(make_node(std::move(n)));
}

Formula Formula::disj(std::vector<Formula> fs) {
  if (fs.size() < 2) throw Error("disjunction needs at least two members");
  Node n;
  n.kind = Kind::Or;
  n.kids = std::move(fs);
  return Formula(make_node(std::move(n)));
}

Formula Formula::implies(Formula a, Formula b) {
  Node n;
  n.kind = Kind::Implies;
  n.kids = {std::move(a), std::move(b)};
  return Formula(make_node(std::move(n)));
}

Formula Formula::iff(Formula a, Formula b) {
  Node n;
  n.kind = Kind::Iff;
  n.kids = {std::move(a), std::move(b)};
  return Formula(make_node(std::move(n)));
}

Formula Formula::forall(std::vector<Symbol> vs, Formula body) {
  if (vs.empty()) return body;  // vacuous binder, e.g. a spliced-in empty list
  return Formula(make_node(binder_node(Kind::ForAll, std::move(vs), std::move(body))));
}
Formula Formula::exists(std::vector<Symbol> vs, Formula body) {
  if (vs.empty()) return body;
  return Formula(make_node(binder_node(Kind::Exists, std::move(vs), std::move(body))));
}
Formula Formula::forall2(std::vector<Symbol> ps, Formula body) {
  if (ps.empty()) return body;
  return Formula(make_node(binder_node(Kind::ForAll2, std::move(ps), std::move(body))));
}
Formula Formula::exists2(std::vector<Symbol> ps, Formula body) {
  if (ps.empty()) return body;
  return Formula(make_node(binder_node(Kind::Exists2, std::move(ps), std::move(body))));
}
Formula Formula::lambda(std::vector<Symbol> vs, Formula body) {
  if (vs.empty()) return body;
  return Formula(make_node(binder_node(Kind::Lambda, std::move(vs), std::move(body))));
}

Formula Formula::call(Symbol name, std::vector<MacroArg> args) {
  Node n;
  n.kind = Kind::Call;
  n.sym = std::move(name);
  n.margs = std::move(args);
  return Formula(make_node(std::move(n)));
}

Formula Formula::conj_of(std::vector<Formula> fs) {
  if (fs.empty()) return truth(true);
  if (fs.size() == 1) return fs[0];
  return conj(std::move(fs));
}

Formula Formula::disj_of(std::vector<Formula> fs) {
  if (fs.empty()) return truth(false);
  if (fs.size() == 1) return fs[0];
  return disj(std::move(fs));
}

bool MacroArg::operator==(const MacroArg& o) const {
  if (value.index() != o.value.index()) return false;
  if (is_formula()) return formula() == o.formula();
  return symbols() == o.symbols();
}

bool Formula::operator==(const Formula& o) const {
  if (node_ == o.node_) return true;
  if (!node_ || !o.node_) return false;
  const Node& a = *node_;
  const Node& b = *o.node_;
  if (a.kind != b.kind || a.sym != b.sym || a.binders != b.binders) return false;
  if (a.terms != b.terms) return false;
  if (a.kids.size() != b.kids.size() || a.margs.size() != b.margs.size())
    return false;
  for (size_t i = 0; i < a.kids.size(); ++i)
    if (!(a.kids[i] == b.kids[i])) return false;
  for (size_t i = 0; i < a.margs.size(); ++i)
    if (!(a.margs[i] == b.margs[i])) return false;
  return true;
}

std::vector<Formula> flatten(const Formula& f, Formula::Kind k) {
  std::vector<Formula> out;
  std::function<void(const Formula&)> go = [&](const Formula& g) {
    if (g.is(k)) {
      for (const Formula& kid : g.kids()) go(kid);
    } else {
      out.push_back(g);
    }
  };
  go(f);
  return out;
}

Formula chain(Formula::Kind k, std::vector<Formula> fs) {
  if (fs.empty()) return Formula::truth(k == Formula::Kind::And);
  Formula acc = fs.back();
  for (size_t i = fs.size() - 1; i-- > 0;) {
    switch (k) {
      case Formula::Kind::And:
        acc = Formula::conj({fs[i], acc});
        break;
      case Formula::Kind::Or:
        acc = Formula::disj({fs[i], acc});
        break;
      case Formula::Kind::Implies:
        acc = Formula::implies(fs[i], acc);
        break;
      case Formula::Kind::Iff:
        acc = Formula::iff(fs[i], acc);
        break;
      default:
        throw Error("chain expects a binary connective");
    }
  }
  return acc;
}

bool is_quantifier(Formula::Kind k) {
  using K = Formula::Kind;
  return k == K::ForAll || k == K::Exists || k == K::ForAll2 || k == K::Exists2;
}

bool is_second_order(const Formula& f) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::ForAll2:
    case K::Exists2:
    case K::Lambda:
    case K::Call:
      return true;
    default:
      for (const Formula& kid : f.kids())
        if (is_second_order(kid)) return true;
      return false;
  }
}

std::optional<Term> formula_to_term(const Formula& f) {
  if (!f.is(Formula::Kind::Atom)) return std::nullopt;
  return Term::app(f.head(), f.terms());
}

Formula term_to_formula(const Term& t) {
  return Formula::atom(t.head(), t.args());
}

void collect_symbols(const Term& t, std::set<Symbol>& out) {
  out.insert(t.head());
  for (const Term& a : t.args()) collect_symbols(a, out);
}

void collect_symbols(const Formula& f, std::set<Symbol>& out) {
  using K = Formula::Kind;
  if (f.kind() == K::Atom || f.kind() == K::Call) out.insert(f.head());
  for (const Term& t : f.terms()) collect_symbols(t, out);
  for (const Symbol& b : f.binders()) out.insert(b);
  for (const Formula& kid : f.kids()) collect_symbols(kid, out);
  if (f.kind() == K::Call) {
    for (const MacroArg& a : f.call_args()) {
      if (a.is_formula())
        collect_symbols(a.formula(), out);
      else
        for (const Symbol& s : a.symbols()) out.insert(s);
    }
  }
}

void reserve_symbols(const Formula& f, SymbolGen& gen) {
  std::set<Symbol> all;
  collect_symbols(f, all);
  for (const Symbol& s : all) gen.reserve(s);
}

Term bind_vars(const Term& t, const std::set<Symbol>& vars) {
  if (t.is_var()) return t;
  if (t.args().empty() && vars.count(t.head())) return Term::var(t.head());
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(bind_vars(a, vars));
  return Term::app(t.head(), std::move(args));
}

Formula bind_vars(const Formula& f, const std::set<Symbol>& vars) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom: {
      std::vector<Term> ts;
      ts.reserve(f.terms().size());
      for (const Term& t : f.terms()) ts.push_back(bind_vars(t, vars));
      return Formula::atom(f.head(), std::move(ts));
    }
    case K::Eq:
      return Formula::eq(bind_vars(f.terms()[0], vars),
                         bind_vars(f.terms()[1], vars));
    case K::True:
    case K::False:
      return f;
    case K::Not:
      return Formula::neg(bind_vars(f.kid(), vars));
    case K::And:
    case K::Or: {
      std::vector<Formula> ks;
      ks.reserve(f.kids().size());
      for (const Formula& kid : f.kids()) ks.push_back(bind_vars(kid, vars));
      return f.kind() == K::And ? Formula::conj(std::move(ks))
                                : Formula::disj(std::move(ks));
    }
    case K::Implies:
      return Formula::implies(bind_vars(f.kid(0), vars), bind_vars(f.kid(1), vars));
    case K::Iff:
      return Formula::iff(bind_vars(f.kid(0), vars), bind_vars(f.kid(1), vars));
    case K::ForAll:
    case K::Exists:
    case K::Lambda: {
      std::set<Symbol> inner = vars;
      for (const Symbol& b : f.binders()) inner.insert(b);
      Formula body = bind_vars(f.kid(), inner);
      if (f.kind() == K::ForAll) return Formula::forall(f.binders(), body);
      if (f.kind() == K::Exists) return Formula::exists(f.binders(), body);
      return Formula::lambda(f.binders(), body);
    }
    case K::ForAll2:
    case K::Exists2: {
      // Predicate binders do not shadow individual variables.
      Formula body = bind_vars(f.kid(), vars);
      return f.kind() == K::ForAll2 ? Formula::forall2(f.binders(), body)
                                    : Formula::exists2(f.binders(), body);
    }
    case K::Call: {
      std::vector<MacroArg> args;
      for (const MacroArg& a : f.call_args()) {
        if (a.is_formula())
          args.push_back(MacroArg{bind_vars(a.formula(), vars)});
        else
          args.push_back(a);
      }
      return Formula::call(f.head(), std::move(args));
    }
  }
  throw Error("unhandled formula kind");
}

}  // namespace folio
