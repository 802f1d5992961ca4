// Capture-avoiding substitution of terms for free individual variables.

#include "folio/syntax.hpp"

namespace folio {

namespace {

using Sub = std::vector<std::pair<Symbol, Term>>;

bool in_domain(const Sub& sub, const Symbol& s) {
  for (const auto& [k, v] : sub)
    if (k == s) return true;
  return false;
}

const Term* lookup(const Sub& sub, const Symbol& s) {
  for (const auto& [k, v] : sub)
    if (k == s) return &v;
  return nullptr;
}

void free_term_vars(const Term& t, std::set<Symbol>& out) {
  if (t.is_var()) {
    out.insert(t.head());
    return;
  }
  for (const Term& a : t.args()) free_term_vars(a, out);
}

Term sub_term(const Term& t, const Sub& sub) {
  if (t.is_var()) {
    if (const Term* r = lookup(sub, t.head())) return *r;
    return t;
  }
  if (t.args().empty()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(sub_term(a, sub));
  return Term::app(t.head(), std::move(args));
}

struct Substituter {
  std::set<Symbol> avoid;  // names unusable for renamed binders

  Formula go(const Formula& f, const Sub& sub) {
    using K = Formula::Kind;
    if (sub.empty()) return f;
    switch (f.kind()) {
      case K::Atom: {
        if (in_domain(sub, f.head()))
          throw Error("substitution target '" + f.head().name() +
                      "' occurs in predicate position");
        std::vector<Term> ts;
        ts.reserve(f.terms().size());
        for (const Term& t : f.terms()) ts.push_back(sub_term(t, sub));
        return Formula::atom(f.head(), std::move(ts));
      }
      case K::Eq:
        return Formula::eq(sub_term(f.terms()[0], sub),
                           sub_term(f.terms()[1], sub));
      case K::True:
      case K::False:
        return f;
      case K::Not:
        return Formula::neg(go(f.kid(), sub));
      case K::And:
      case K::Or: {
        std::vector<Formula> ks;
        ks.reserve(f.kids().size());
        for (const Formula& kid : f.kids()) ks.push_back(go(kid, sub));
        return f.kind() == K::And ? Formula::conj(std::move(ks))
                                  : Formula::disj(std::move(ks));
      }
      case K::Implies:
        return Formula::implies(go(f.kid(0), sub), go(f.kid(1), sub));
      case K::Iff:
        return Formula::iff(go(f.kid(0), sub), go(f.kid(1), sub));
      case K::ForAll:
      case K::Exists:
      case K::Lambda: {
        // Drop shadowed pairs; rename binders that would capture range vars.
        Sub inner;
        std::set<Symbol> range_vars;
        for (const auto& [k, v] : sub) {
          bool shadowed = false;
          for (const Symbol& b : f.binders())
            if (b == k) shadowed = true;
          if (!shadowed) {
            inner.push_back({k, v});
            free_term_vars(v, range_vars);
          }
        }
        std::vector<Symbol> binders = f.binders();
        Formula body = f.kid();
        Sub renames;
        for (Symbol& b : binders) {
          if (!range_vars.count(b)) continue;
          Symbol nb = rename(b);
          renames.push_back({b, Term::var(nb)});
          b = nb;
        }
        if (!renames.empty()) body = go(body, renames);
        if (!inner.empty()) body = go(body, inner);
        switch (f.kind()) {
          case K::ForAll: return Formula::forall(binders, body);
          case K::Exists: return Formula::exists(binders, body);
          default: return Formula::lambda(binders, body);
        }
      }
      case K::ForAll2:
      case K::Exists2: {
        Formula body = go(f.kid(), sub);
        return f.kind() == K::ForAll2 ? Formula::forall2(f.binders(), body)
                                      : Formula::exists2(f.binders(), body);
      }
      case K::Call:
        throw Error("substitution into an unexpanded macro call");
    }
    throw Error("unhandled formula kind");
  }

  Symbol rename(const Symbol& base) {
    for (int n = 1;; ++n) {
      Symbol cand(base.name() + std::to_string(n));
      if (avoid.insert(cand).second) return cand;
    }
  }
};

}  // namespace

Term substitute(const Term& t, const std::vector<std::pair<Symbol, Term>>& sub) {
  return sub_term(t, sub);
}

Formula substitute(const Formula& f,
                   const std::vector<std::pair<Symbol, Term>>& sub) {
  Substituter s;
  collect_symbols(f, s.avoid);
  for (const auto& [k, v] : sub) {
    s.avoid.insert(k);
    collect_symbols(v, s.avoid);
  }
  return s.go(f, sub);
}

}  // namespace folio
