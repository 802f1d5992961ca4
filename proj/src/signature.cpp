#include "folio/signature.hpp"

namespace folio {

namespace {

struct Walker {
  SignatureInfo out;
  std::map<Symbol, size_t> term_arity;  // functions and constants together

  void term(const Term& t, const std::set<Symbol>& bound) {
    if (t.is_var()) {
      if (!bound.count(t.head())) out.free_vars.insert(t.head());
      return;
    }
    auto [it, fresh] = term_arity.emplace(t.head(), t.args().size());
    if (!fresh && it->second != t.args().size())
      throw Error("symbol '" + t.head().name() + "' used with arities " +
                  std::to_string(it->second) + " and " +
                  std::to_string(t.args().size()));
    if (t.args().empty())
      out.constants.insert(t.head());
    else
      out.functions[t.head()] = t.args().size();
    for (const Term& a : t.args()) term(a, bound);
  }

  // sign: +1 positive context, -1 negative, 0 both (under a biconditional).
  void go(const Formula& f, int sign, std::set<Symbol>& bound) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::Atom: {
        auto [it, fresh] =
            out.predicates.emplace(f.head(), PredicateInfo{f.terms().size(), {}});
        if (!fresh && it->second.arity != f.terms().size())
          throw Error("predicate '" + f.head().name() + "' used with arities " +
                      std::to_string(it->second.arity) + " and " +
                      std::to_string(f.terms().size()));
        it->second.polarity.add(sign);
        for (const Term& t : f.terms()) term(t, bound);
        return;
      }
      case K::Eq:
        term(f.terms()[0], bound);
        term(f.terms()[1], bound);
        return;
      case K::True:
      case K::False:
        return;
      case K::Not:
        go(f.kid(), -sign, bound);
        return;
      case K::And:
      case K::Or:
        for (const Formula& kid : f.kids()) go(kid, sign, bound);
        return;
      case K::Implies:
        go(f.kid(0), -sign, bound);
        go(f.kid(1), sign, bound);
        return;
      case K::Iff:
        go(f.kid(0), 0, bound);
        go(f.kid(1), 0, bound);
        return;
      case K::ForAll:
      case K::Exists: {
        std::vector<Symbol> added;
        for (const Symbol& v : f.binders())
          if (bound.insert(v).second) added.push_back(v);
        go(f.kid(), sign, bound);
        for (const Symbol& v : added) bound.erase(v);
        return;
      }
      case K::ForAll2:
      case K::Exists2:
        // Quantified predicates still count as occurrences; callers that need
        // the free ones use pred_occurs_free.
        go(f.kid(), sign, bound);
        return;
      case K::Lambda:
      case K::Call:
        throw Error("signature requested for a formula with unexpanded macros");
    }
  }
};

}  // namespace

SignatureInfo signature_of(const Formula& f) {
  Walker w;
  std::set<Symbol> bound;
  w.go(f, +1, bound);
  return w.out;
}

bool pred_occurs_free(const Formula& f, const Symbol& p) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom:
      return f.head() == p;
    case K::ForAll2:
    case K::Exists2:
      for (const Symbol& b : f.binders())
        if (b == p) return false;
      return pred_occurs_free(f.kid(), p);
    default:
      for (const Formula& kid : f.kids())
        if (pred_occurs_free(kid, p)) return true;
      return false;
  }
}

std::optional<size_t> pred_arity_in(const Formula& f, const Symbol& p) {
  using K = Formula::Kind;
  if (f.kind() == K::Atom && f.head() == p) return f.terms().size();
  for (const Formula& kid : f.kids()) {
    auto r = pred_arity_in(kid, p);
    if (r) return r;
  }
  return std::nullopt;
}

}  // namespace folio
