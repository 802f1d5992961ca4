#include "folio/transform.hpp"

#include <algorithm>

#include "folio/signature.hpp"
#include "folio/unify.hpp"

namespace folio {

namespace {

// Free individual variables in first-occurrence order. Quantifier and lambda
// binders shadow; second-order binders do not bind individual variables.
void free_vars_term(const Term& t, const std::set<Symbol>& bound,
                    std::vector<Symbol>& out, std::set<Symbol>& seen) {
  if (t.is_var()) {
    if (!bound.count(t.head()) && seen.insert(t.head()).second)
      out.push_back(t.head());
    return;
  }
  for (const Term& a : t.args()) free_vars_term(a, bound, out, seen);
}

void free_vars_go(const Formula& f, std::set<Symbol> bound,
                  std::vector<Symbol>& out, std::set<Symbol>& seen) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
    case Formula::Kind::Eq:
      for (const Term& t : f.terms()) free_vars_term(t, bound, out, seen);
      return;
    case Formula::Kind::True:
    case Formula::Kind::False:
      return;
    case Formula::Kind::ForAll:
    case Formula::Kind::Exists:
    case Formula::Kind::Lambda:
      for (const Symbol& v : f.binders()) bound.insert(v);
      free_vars_go(f.kid(), std::move(bound), out, seen);
      return;
    default:
      for (const Formula& k : f.kids()) free_vars_go(k, bound, out, seen);
      return;
  }
}

std::vector<Symbol> free_vars(const Formula& f) {
  std::vector<Symbol> out;
  std::set<Symbol> seen;
  free_vars_go(f, {}, out, seen);
  return out;
}

bool occurs_var(const Formula& f, const Symbol& v) {
  for (const Symbol& u : free_vars(f))
    if (u == v) return true;
  return false;
}

}  // namespace

// --- literals and clauses ----------------------------------------------------

Formula literal_formula(const Literal& l) {
  Formula a = l.is_eq() ? Formula::eq(l.args[0], l.args[1])
                        : Formula::atom(l.pred, l.args);
  return l.pos ? a : Formula::neg(a);
}

Literal formula_literal(const Formula& f) {
  bool pos = true;
  const Formula* g = &f;
  if (f.is(Formula::Kind::Not)) {
    pos = false;
    g = &f.kid();
  }
  if (g->is(Formula::Kind::Atom)) return {pos, g->head(), g->terms()};
  if (g->is(Formula::Kind::Eq)) return {pos, eq_symbol(), g->terms()};
  throw Error("formula is not a literal");
}

std::vector<Symbol> clause_vars(const Clause& c) {
  std::vector<Symbol> out;
  std::set<Symbol> seen;
  std::set<Symbol> bound;
  for (const Literal& l : c.lits)
    for (const Term& t : l.args) free_vars_term(t, bound, out, seen);
  return out;
}

bool clause_is_ground(const Clause& c) { return clause_vars(c).empty(); }

Formula clause_formula(const Clause& c, ClauseStyle style) {
  if (c.empty()) return Formula::truth(false);
  if (style == ClauseStyle::Disjunctive) {
    std::vector<Formula> fs;
    for (const Literal& l : c.lits) fs.push_back(literal_formula(l));
    return Formula::disj_of(std::move(fs));
  }
  std::vector<Formula> ante, cons;
  for (const Literal& l : c.lits) {
    Literal bare = l;
    bare.pos = true;
    (l.pos ? cons : ante).push_back(literal_formula(bare));
  }
  if (ante.empty()) return Formula::disj_of(std::move(cons));
  if (cons.empty()) return Formula::neg(Formula::conj_of(std::move(ante)));
  return Formula::implies(Formula::conj_of(std::move(ante)),
                          Formula::disj_of(std::move(cons)));
}

Formula clauses_formula(const ClauseSet& cs, ClauseStyle style) {
  std::vector<Formula> fs;
  for (const Clause& c : cs.clauses) {
    Formula f = clause_formula(c, style);
    std::vector<Symbol> vs = clause_vars(c);
    fs.push_back(vs.empty() ? f : Formula::forall(std::move(vs), f));
  }
  return Formula::conj_of(std::move(fs));
}

// --- negation normal form ----------------------------------------------------

namespace {

Formula nnf_go(const Formula& f, bool pos) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
    case Formula::Kind::Eq:
      return pos ? f : Formula::neg(f);
    case Formula::Kind::True:
      return Formula::truth(pos);
    case Formula::Kind::False:
      return Formula::truth(!pos);
    case Formula::Kind::Not:
      return nnf_go(f.kid(), !pos);
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      bool conj = (f.kind() == Formula::Kind::And) == pos;
      std::vector<Formula> ks;
      for (const Formula& k : f.kids()) ks.push_back(nnf_go(k, pos));
      return conj ? Formula::conj_of(std::move(ks))
                  : Formula::disj_of(std::move(ks));
    }
    case Formula::Kind::Implies:
      if (pos)
        return Formula::disj_of({nnf_go(f.kid(0), false), nnf_go(f.kid(1), true)});
      return Formula::conj_of({nnf_go(f.kid(0), true), nnf_go(f.kid(1), false)});
    case Formula::Kind::Iff:
      if (pos)
        return Formula::conj_of(
            {Formula::disj_of({nnf_go(f.kid(0), false), nnf_go(f.kid(1), true)}),
             Formula::disj_of({nnf_go(f.kid(1), false), nnf_go(f.kid(0), true)})});
      return Formula::disj_of(
          {Formula::conj_of({nnf_go(f.kid(0), true), nnf_go(f.kid(1), false)}),
           Formula::conj_of({nnf_go(f.kid(1), true), nnf_go(f.kid(0), false)})});
    case Formula::Kind::ForAll:
      return pos ? Formula::forall(f.binders(), nnf_go(f.kid(), true))
                 : Formula::exists(f.binders(), nnf_go(f.kid(), false));
    case Formula::Kind::Exists:
      return pos ? Formula::exists(f.binders(), nnf_go(f.kid(), true))
                 : Formula::forall(f.binders(), nnf_go(f.kid(), false));
    case Formula::Kind::ForAll2:
      return pos ? Formula::forall2(f.binders(), nnf_go(f.kid(), true))
                 : Formula::exists2(f.binders(), nnf_go(f.kid(), false));
    case Formula::Kind::Exists2:
      return pos ? Formula::exists2(f.binders(), nnf_go(f.kid(), true))
                 : Formula::forall2(f.binders(), nnf_go(f.kid(), false));
    case Formula::Kind::Lambda:
    case Formula::Kind::Call:
      throw Error("macro content reached a normal-form transformation");
  }
  throw Error("unreachable formula kind");
}

}  // namespace

Formula nnf(const Formula& f) { return nnf_go(f, true); }

// --- Skolemization -----------------------------------------------------------

namespace {

struct Skolemizer {
  SymbolGen& gen;
  std::set<Symbol>* introduced;
  std::set<Symbol> seen_binders;

  Formula go(const Formula& f, const std::vector<Term>& uni) {
    switch (f.kind()) {
      case Formula::Kind::Atom:
      case Formula::Kind::Eq:
      case Formula::Kind::True:
      case Formula::Kind::False:
      case Formula::Kind::Not:
        return f;
      case Formula::Kind::And:
      case Formula::Kind::Or: {
        std::vector<Formula> ks;
        for (const Formula& k : f.kids()) ks.push_back(go(k, uni));
        return f.kind() == Formula::Kind::And ? Formula::conj_of(std::move(ks))
                                              : Formula::disj_of(std::move(ks));
      }
      case Formula::Kind::ForAll: {
        std::vector<Symbol> vs;
        std::vector<std::pair<Symbol, Term>> ren;
        for (const Symbol& v : f.binders()) {
          if (seen_binders.insert(v).second) {
            vs.push_back(v);
          } else {
            Symbol v2 = gen.fresh(v.name());
            seen_binders.insert(v2);
            ren.emplace_back(v, Term::var(v2));
            vs.push_back(v2);
          }
        }
        Formula body = ren.empty() ? f.kid() : substitute(f.kid(), ren);
        std::vector<Term> uni2 = uni;
        for (const Symbol& v : vs) uni2.push_back(Term::var(v));
        return Formula::forall(std::move(vs), go(body, uni2));
      }
      case Formula::Kind::Exists: {
        std::vector<std::pair<Symbol, Term>> sub;
        for (const Symbol& v : f.binders()) {
          Symbol sk = gen.fresh("sk");
          if (introduced) introduced->insert(sk);
          sub.emplace_back(v, Term::app(sk, uni));
        }
        return go(substitute(f.kid(), sub), uni);
      }
      case Formula::Kind::ForAll2:
      case Formula::Kind::Exists2:
        throw Error("second-order quantifier in Skolemization");
      default:
        throw Error("formula is not in negation normal form");
    }
  }
};

}  // namespace

Formula skolemize(const Formula& f, SymbolGen& gen,
                  std::set<Symbol>* introduced) {
  reserve_symbols(f, gen);
  Skolemizer sk{gen, introduced, {}};
  return sk.go(f, {});
}

// --- clausification ----------------------------------------------------------

namespace {

Formula strip_foralls(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::ForAll:
      return strip_foralls(f.kid());
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<Formula> ks;
      for (const Formula& k : f.kids()) ks.push_back(strip_foralls(k));
      return f.kind() == Formula::Kind::And ? Formula::conj_of(std::move(ks))
                                            : Formula::disj_of(std::move(ks));
    }
    default:
      return f;
  }
}

void add_literal(Clause& c, const Literal& l) {
  for (const Literal& m : c.lits)
    if (m == l) return;
  c.lits.push_back(l);
}

std::vector<Clause> distribute(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::True:
      return {};
    case Formula::Kind::False:
      return {Clause{}};
    case Formula::Kind::And: {
      std::vector<Clause> out;
      for (const Formula& k : f.kids()) {
        std::vector<Clause> part = distribute(k);
        out.insert(out.end(), part.begin(), part.end());
        if (out.size() > kCnfClauseGuard)
          throw ResourceLimit("clause limit exceeded during distribution");
      }
      return out;
    }
    case Formula::Kind::Or: {
      std::vector<Clause> acc = {Clause{}};
      for (const Formula& k : f.kids()) {
        std::vector<Clause> part = distribute(k);
        if (acc.size() * part.size() > kCnfClauseGuard)
          throw ResourceLimit("clause limit exceeded during distribution");
        std::vector<Clause> next;
        next.reserve(acc.size() * part.size());
        for (const Clause& a : acc)
          for (const Clause& b : part) {
            Clause m = a;
            for (const Literal& l : b.lits) add_literal(m, l);
            next.push_back(std::move(m));
          }
        acc = std::move(next);
      }
      return acc;
    }
    default:
      return {Clause{{formula_literal(f)}, {}}};
  }
}

}  // namespace

ClauseSet cnf(const Formula& f, SymbolGen& gen) {
  ClauseSet cs;
  Formula sk = skolemize(nnf(f), gen, &cs.skolems);
  std::vector<Clause> raw = distribute(strip_foralls(sk));
  for (Clause& c : raw) {
    bool dup = false;
    for (const Clause& d : cs.clauses)
      if (d.lits == c.lits) {
        dup = true;
        break;
      }
    if (!dup) cs.clauses.push_back(std::move(c));
  }
  return cs;
}

Formula dnf(const Formula& f, SymbolGen& gen) {
  ClauseSet cs = cnf(Formula::neg(f), gen);
  std::vector<Formula> parts;
  for (const Clause& c : cs.clauses) {
    std::vector<Formula> lits;
    for (const Literal& l : c.lits)
      lits.push_back(literal_formula(l.complement()));
    parts.push_back(Formula::conj_of(std::move(lits)));
  }
  return Formula::disj_of(std::move(parts));
}

// --- definitional CNF --------------------------------------------------------

namespace {

struct Definer {
  SymbolGen& gen;
  ClauseSet& out;
  std::vector<Symbol>* introduced;

  // Adds a clause built from literal-shaped formulas, pruning True/False.
  void emit(const std::vector<Formula>& lits) {
    Clause c;
    for (const Formula& l : lits) {
      if (l.is(Formula::Kind::True)) return;  // clause already satisfied
      if (l.is(Formula::Kind::False)) continue;
      if (l.is(Formula::Kind::Not) && l.kid().is(Formula::Kind::False)) return;
      if (l.is(Formula::Kind::Not) && l.kid().is(Formula::Kind::True)) continue;
      add_literal(c, formula_literal(l));
    }
    out.clauses.push_back(std::move(c));
  }

  static Formula negated(const Formula& l) {
    if (l.is(Formula::Kind::Not)) return l.kid();
    if (l.is(Formula::Kind::True)) return Formula::truth(false);
    if (l.is(Formula::Kind::False)) return Formula::truth(true);
    return Formula::neg(l);
  }

  Formula fresh_def(const Formula& f) {
    std::vector<Symbol> fv = free_vars(f);
    Symbol d = gen.fresh("def");
    if (introduced) introduced->push_back(d);
    std::vector<Term> args;
    for (const Symbol& v : fv) args.push_back(Term::var(v));
    return Formula::atom(d, std::move(args));
  }

  std::vector<Term> skolem_args(const Formula& f) {
    std::vector<Term> args;
    for (const Symbol& v : free_vars(f)) args.push_back(Term::var(v));
    return args;
  }

  // Returns a literal-shaped formula equivalent to f in the given polarity
  // context: +1 only the here-implies-subformula direction is constrained,
  // -1 only the converse, 0 both.
  Formula rec(const Formula& f, int pol) {
    switch (f.kind()) {
      case Formula::Kind::Atom:
      case Formula::Kind::Eq:
      case Formula::Kind::True:
      case Formula::Kind::False:
        return f;
      case Formula::Kind::Not:
        return negated(rec(f.kid(), -pol));
      case Formula::Kind::And:
      case Formula::Kind::Or: {
        bool conj = f.is(Formula::Kind::And);
        std::vector<Formula> ls;
        for (const Formula& k : f.kids()) ls.push_back(rec(k, pol));
        Formula d = fresh_def(f);
        if (pol >= 0) {
          if (conj) {
            for (const Formula& l : ls) emit({negated(d), l});
          } else {
            std::vector<Formula> c = {negated(d)};
            c.insert(c.end(), ls.begin(), ls.end());
            emit(c);
          }
        }
        if (pol <= 0) {
          if (conj) {
            std::vector<Formula> c;
            for (const Formula& l : ls) c.push_back(negated(l));
            c.push_back(d);
            emit(c);
          } else {
            for (const Formula& l : ls) emit({negated(l), d});
          }
        }
        return d;
      }
      case Formula::Kind::Implies: {
        Formula la = rec(f.kid(0), -pol);
        Formula lb = rec(f.kid(1), pol);
        Formula d = fresh_def(f);
        if (pol >= 0) emit({negated(d), negated(la), lb});
        if (pol <= 0) {
          emit({la, d});
          emit({negated(lb), d});
        }
        return d;
      }
      case Formula::Kind::Iff: {
        Formula la = rec(f.kid(0), 0);
        Formula lb = rec(f.kid(1), 0);
        Formula d = fresh_def(f);
        if (pol >= 0) {
          emit({negated(d), negated(la), lb});
          emit({negated(d), negated(lb), la});
        }
        if (pol <= 0) {
          emit({la, lb, d});
          emit({negated(la), negated(lb), d});
        }
        return d;
      }
      case Formula::Kind::ForAll:
      case Formula::Kind::Exists: {
        bool univ = f.is(Formula::Kind::ForAll);
        Formula d = fresh_def(f);
        Formula lb = rec(f.kid(), pol);
        // The direction that flips the quantifier existential gets Skolem
        // terms over the definition's arguments.
        std::vector<std::pair<Symbol, Term>> sub;
        for (const Symbol& v : f.binders()) {
          Symbol sk = gen.fresh("sk");
          out.skolems.insert(sk);
          sub.emplace_back(v, Term::app(sk, skolem_args(f)));
        }
        if (pol >= 0) {
          if (univ)
            emit({negated(d), lb});
          else
            emit({negated(d), substitute(lb, sub)});
        }
        if (pol <= 0) {
          if (univ)
            emit({negated(substitute(lb, sub)), d});
          else
            emit({negated(lb), d});
        }
        return d;
      }
      default:
        throw Error("second-order content in definitional clausification");
    }
  }
};

}  // namespace

ClauseSet definitional_cnf(const Formula& f, SymbolGen& gen,
                           std::vector<Symbol>* introduced) {
  reserve_symbols(f, gen);
  ClauseSet cs;
  Definer d{gen, cs, introduced};
  Formula top = d.rec(f, 1);
  if (top.is(Formula::Kind::False) ||
      (top.is(Formula::Kind::Not) && top.kid().is(Formula::Kind::True))) {
    cs.clauses.push_back(Clause{});
  } else if (!top.is(Formula::Kind::True)) {
    d.emit({top});
  }
  return cs;
}

// --- clause simplification ---------------------------------------------------

namespace {

Term prefix_vars(const Term& t) {
  if (t.is_var()) return Term::var(Symbol("~" + t.head().name()));
  if (t.args().empty()) return t;
  std::vector<Term> args;
  for (const Term& a : t.args()) args.push_back(prefix_vars(a));
  return Term::app(t.head(), std::move(args));
}

Literal prefix_vars(const Literal& l) {
  Literal out = l;
  for (Term& t : out.args) t = prefix_vars(t);
  return out;
}

// Theta-subsumption: some instance of c is a subset of d. c's variables are
// standardised apart from d's by prefixing, which no parsed name contains.
bool subsumes(const Clause& c, const Clause& d) {
  if (c.lits.size() > d.lits.size()) return false;
  std::vector<Literal> pat;
  pat.reserve(c.lits.size());
  for (const Literal& l : c.lits) pat.push_back(prefix_vars(l));
  Bindings b;
  std::function<bool(size_t)> step = [&](size_t i) {
    if (i == pat.size()) return true;
    for (const Literal& m : d.lits) {
      if (m.pos != pat[i].pos || m.pred != pat[i].pred ||
          m.args.size() != pat[i].args.size())
        continue;
      size_t mark = b.mark();
      if (match_all(pat[i].args, m.args, b) && step(i + 1)) return true;
      b.undo(mark);
    }
    return false;
  };
  return step(0);
}

bool normalize_clause(Clause& c) {
  bool changed = false;
  std::vector<Literal> kept;
  for (const Literal& l : c.lits) {
    if (!l.pos && l.is_eq() && l.args[0] == l.args[1]) {
      changed = true;  // ~(t = t) can never hold
      continue;
    }
    bool dup = false;
    for (const Literal& m : kept)
      if (m == l) {
        dup = true;
        break;
      }
    if (dup) {
      changed = true;
      continue;
    }
    kept.push_back(l);
  }
  c.lits = std::move(kept);
  return changed;
}

bool is_tautology(const Clause& c) {
  for (const Literal& l : c.lits) {
    if (l.pos && l.is_eq() && l.args[0] == l.args[1]) return true;
    for (const Literal& m : c.lits)
      if (m.pos != l.pos && m.pred == l.pred && m.args == l.args) return true;
  }
  return false;
}

}  // namespace

void simplify_clauses(ClauseSet& cs, const std::set<Symbol>& protect) {
  bool changed = true;
  while (changed) {
    changed = false;

    for (Clause& c : cs.clauses)
      if (normalize_clause(c)) changed = true;

    size_t before = cs.clauses.size();
    std::erase_if(cs.clauses, [](const Clause& c) { return is_tautology(c); });
    if (cs.clauses.size() != before) changed = true;

    // Unit subsumption resolution: a unit clause cancels matched complements
    // elsewhere; the shrunk clause subsumes the original.
    for (size_t u = 0; u < cs.clauses.size(); ++u) {
      if (cs.clauses[u].lits.size() != 1) continue;
      Literal unit = prefix_vars(cs.clauses[u].lits[0]);
      for (size_t j = 0; j < cs.clauses.size(); ++j) {
        if (j == u) continue;
        std::vector<Literal> kept;
        for (const Literal& m : cs.clauses[j].lits) {
          Bindings b;
          bool cancelled = m.pos != unit.pos && m.pred == unit.pred &&
                           match_all(unit.args, m.args, b);
          if (cancelled)
            changed = true;
          else
            kept.push_back(m);
        }
        cs.clauses[j].lits = std::move(kept);
      }
    }

    std::vector<bool> dead(cs.clauses.size(), false);
    for (size_t i = 0; i < cs.clauses.size(); ++i) {
      if (dead[i]) continue;
      for (size_t j = 0; j < cs.clauses.size(); ++j) {
        if (i == j || dead[j]) continue;
        if (subsumes(cs.clauses[i], cs.clauses[j])) {
          // Mutual subsumption keeps the earlier clause.
          if (subsumes(cs.clauses[j], cs.clauses[i]) && j < i) continue;
          dead[j] = true;
          changed = true;
        }
      }
    }
    if (std::find(dead.begin(), dead.end(), true) != dead.end()) {
      std::vector<Clause> kept;
      for (size_t i = 0; i < cs.clauses.size(); ++i)
        if (!dead[i]) kept.push_back(std::move(cs.clauses[i]));
      cs.clauses = std::move(kept);
    }

    // Purity: an unprotected predicate with a single polarity can be
    // satisfied outright, so its clauses go.
    std::map<Symbol, Polarity> pol;
    for (const Clause& c : cs.clauses)
      for (const Literal& l : c.lits)
        if (!l.is_eq()) pol[l.pred].add(l.pos ? 1 : -1);
    std::set<Symbol> pure;
    for (const auto& [p, q] : pol)
      if (!(q.pos && q.neg) && !protect.count(p)) pure.insert(p);
    if (!pure.empty()) {
      size_t n = cs.clauses.size();
      std::erase_if(cs.clauses, [&](const Clause& c) {
        for (const Literal& l : c.lits)
          if (pure.count(l.pred)) return true;
        return false;
      });
      if (cs.clauses.size() != n) changed = true;
    }
  }
}

// --- canonical order ---------------------------------------------------------

namespace {

bool term_less(const Term& a, const Term& b) {
  if (a.is_var() != b.is_var()) return !a.is_var();  // applications first
  if (a.head() != b.head()) return a.head() < b.head();
  if (a.args().size() != b.args().size())
    return a.args().size() < b.args().size();
  for (size_t i = 0; i < a.args().size(); ++i) {
    if (term_less(a.args()[i], b.args()[i])) return true;
    if (term_less(b.args()[i], a.args()[i])) return false;
  }
  return false;
}

bool clause_less(const Clause& a, const Clause& b) {
  bool ga = clause_is_ground(a), gb = clause_is_ground(b);
  if (ga != gb) return ga;
  if (a.lits.size() != b.lits.size()) return a.lits.size() < b.lits.size();
  return std::lexicographical_compare(a.lits.begin(), a.lits.end(),
                                      b.lits.begin(), b.lits.end(),
                                      literal_less);
}

}  // namespace

bool literal_less(const Literal& a, const Literal& b) {
  if (a.pos != b.pos) return !a.pos;  // negative literals first
  if (a.pred != b.pred) return a.pred < b.pred;
  if (a.args.size() != b.args.size()) return a.args.size() < b.args.size();
  for (size_t i = 0; i < a.args.size(); ++i) {
    if (term_less(a.args[i], b.args[i])) return true;
    if (term_less(b.args[i], a.args[i])) return false;
  }
  return false;
}

void sort_clauses(ClauseSet& cs) {
  for (Clause& c : cs.clauses)
    std::stable_sort(c.lits.begin(), c.lits.end(), literal_less);
  std::stable_sort(cs.clauses.begin(), cs.clauses.end(), clause_less);
}

// --- un-Skolemization --------------------------------------------------------

namespace {

void skolems_in_term(const Term& t, const std::set<Symbol>& sks,
                     std::set<Symbol>& out) {
  if (t.is_var()) return;
  if (sks.count(t.head())) out.insert(t.head());
  for (const Term& a : t.args()) skolems_in_term(a, sks, out);
}

std::set<Symbol> skolems_in_clause(const Clause& c,
                                   const std::set<Symbol>& sks) {
  std::set<Symbol> out;
  for (const Literal& l : c.lits)
    for (const Term& t : l.args) skolems_in_term(t, sks, out);
  return out;
}

struct ComponentLift {
  const std::set<Symbol>& skolems;
  // Canonical argument variables per Skolem symbol, fixed by first sight.
  std::map<Symbol, std::vector<Symbol>> canon;

  // Per-clause variable renaming onto canonical names; must stay injective,
  // or two clauses would force unrelated variables together.
  bool visit_term(const Term& t, std::map<Symbol, Symbol>& ren,
                  std::set<Symbol>& used) {
    if (t.is_var()) return true;
    if (skolems.count(t.head())) {
      std::vector<Symbol> args;
      std::set<Symbol> distinct;
      for (const Term& a : t.args()) {
        if (!a.is_var() || !distinct.insert(a.head()).second) return false;
        args.push_back(a.head());
      }
      auto it = canon.find(t.head());
      if (it == canon.end()) {
        std::vector<Symbol> c;
        for (const Symbol& a : args) {
          auto r = ren.find(a);
          Symbol target = r == ren.end() ? a : r->second;
          if (r == ren.end()) {
            if (!used.insert(target).second) return false;
            ren.emplace(a, target);
          }
          c.push_back(target);
        }
        canon.emplace(t.head(), std::move(c));
      } else {
        if (it->second.size() != args.size()) return false;
        for (size_t i = 0; i < args.size(); ++i) {
          auto r = ren.find(args[i]);
          if (r != ren.end()) {
            if (r->second != it->second[i]) return false;
          } else {
            if (!used.insert(it->second[i]).second) return false;
            ren.emplace(args[i], it->second[i]);
          }
        }
      }
    }
    for (const Term& a : t.args())
      if (!visit_term(a, ren, used)) return false;
    return true;
  }
};

}  // namespace

Unskolemized unskolemize(const ClauseSet& cs, ClauseStyle style) {
  // Group clauses into components connected by shared Skolem symbols.
  size_t n = cs.clauses.size();
  std::vector<size_t> parent(n);
  for (size_t i = 0; i < n; ++i) parent[i] = i;
  std::function<size_t(size_t)> find = [&](size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::map<Symbol, size_t> owner;
  std::vector<std::set<Symbol>> clause_sks(n);
  for (size_t i = 0; i < n; ++i) {
    clause_sks[i] = skolems_in_clause(cs.clauses[i], cs.skolems);
    for (const Symbol& s : clause_sks[i]) {
      auto [it, fresh] = owner.emplace(s, i);
      if (!fresh) parent[find(i)] = find(it->second);
    }
  }

  std::map<size_t, std::vector<size_t>> comps;  // root -> clause indices
  for (size_t i = 0; i < n; ++i) comps[find(i)].push_back(i);
  std::vector<std::vector<size_t>> ordered;
  for (size_t i = 0; i < n; ++i)
    if (find(i) == i) ordered.push_back(comps[i]);
  std::sort(ordered.begin(), ordered.end(),
            [](const auto& a, const auto& b) { return a.front() < b.front(); });

  Unskolemized result;
  std::vector<Formula> conjuncts;

  auto close_plain = [&](size_t idx) {
    const Clause& c = cs.clauses[idx];
    Formula f = clause_formula(c, style);
    std::vector<Symbol> vs = clause_vars(c);
    conjuncts.push_back(vs.empty() ? f : Formula::forall(std::move(vs), f));
  };

  for (const auto& comp : ordered) {
    std::set<Symbol> comp_sks;
    for (size_t idx : comp)
      comp_sks.insert(clause_sks[idx].begin(), clause_sks[idx].end());
    if (comp_sks.empty()) {
      close_plain(comp.front());
      continue;
    }

    ComponentLift lift{comp_sks, {}};
    std::vector<std::map<Symbol, Symbol>> renames(comp.size());
    bool ok = true;
    for (size_t k = 0; k < comp.size() && ok; ++k) {
      std::set<Symbol> used;
      for (const Literal& l : cs.clauses[comp[k]].lits)
        for (const Term& t : l.args)
          if (!lift.visit_term(t, renames[k], used)) {
            ok = false;
            break;
          }
      if (!ok) break;
      // The full map, identity included, must stay injective; otherwise the
      // shared prefix would force unrelated clause variables together.
      std::set<Symbol> targets;
      for (const Symbol& v : clause_vars(cs.clauses[comp[k]])) {
        auto r = renames[k].find(v);
        if (!targets.insert(r == renames[k].end() ? v : r->second).second) {
          ok = false;
          break;
        }
      }
    }

    // Argument sets must form a chain so the quantifier prefix can be linear.
    std::vector<std::pair<std::set<Symbol>, Symbol>> order;
    if (ok) {
      for (const auto& [sk, args] : lift.canon)
        order.emplace_back(std::set<Symbol>(args.begin(), args.end()), sk);
      std::sort(order.begin(), order.end(), [](const auto& a, const auto& b) {
        if (a.first.size() != b.first.size())
          return a.first.size() < b.first.size();
        return a.second < b.second;
      });
      for (size_t k = 0; ok && k + 1 < order.size(); ++k)
        ok = std::includes(order[k + 1].first.begin(), order[k + 1].first.end(),
                           order[k].first.begin(), order[k].first.end());
    }

    if (!ok) {
      result.complete = false;
      for (size_t idx : comp) close_plain(idx);
      continue;
    }

    // Fresh existential variable names, clear of everything in the component.
    std::set<Symbol> taken;
    for (size_t idx : comp)
      for (const Literal& l : cs.clauses[idx].lits)
        for (const Term& t : l.args) collect_symbols(t, taken);
    for (const auto& [sk, args] : lift.canon)
      for (const Symbol& a : args) taken.insert(a);
    std::map<Symbol, Symbol> zvar;
    size_t counter = 0;
    for (const auto& [aset, sk] : order) {
      for (;;) {
        std::string name = counter == 0 ? "z" : "z" + std::to_string(counter);
        ++counter;
        Symbol cand(name);
        if (taken.insert(cand).second) {
          zvar.emplace(sk, cand);
          break;
        }
      }
    }

    // Rewrite clauses: canonical renaming, then Skolem applications become
    // their existential variables.
    std::vector<Formula> matrix;
    std::set<Symbol> body_vars_seen;
    std::vector<Symbol> extra_vars;
    for (size_t k = 0; k < comp.size(); ++k) {
      Clause c = cs.clauses[comp[k]];
      std::function<Term(const Term&)> rw = [&](const Term& t) -> Term {
        if (t.is_var()) {
          auto it = renames[k].find(t.head());
          return it == renames[k].end() ? t : Term::var(it->second);
        }
        auto z = zvar.find(t.head());
        if (z != zvar.end()) return Term::var(z->second);
        std::vector<Term> args;
        for (const Term& a : t.args()) args.push_back(rw(a));
        return Term::app(t.head(), std::move(args));
      };
      for (Literal& l : c.lits)
        for (Term& t : l.args) t = rw(t);
      for (const Symbol& v : clause_vars(c))
        if (body_vars_seen.insert(v).second) extra_vars.push_back(v);
      matrix.push_back(clause_formula(c, style));
    }

    Formula body = Formula::conj_of(std::move(matrix));
    // Innermost first: variables beyond every Skolem's arguments, then the
    // prefix segments from the largest argument set down.
    std::set<Symbol> quantified;
    for (const auto& [aset, sk] : order)
      for (const Symbol& v : aset) quantified.insert(v);
    std::vector<Symbol> tail;
    for (const Symbol& v : extra_vars)
      if (!quantified.count(v) && zvar.find(v) == zvar.end() &&
          !std::any_of(zvar.begin(), zvar.end(),
                       [&](const auto& p) { return p.second == v; }))
        tail.push_back(v);
    if (!tail.empty()) body = Formula::forall(std::move(tail), body);

    std::set<Symbol> inner_done;
    for (size_t k = order.size(); k-- > 0;) {
      const auto& [aset, sk] = order[k];
      body = Formula::exists({zvar.at(sk)}, body);
      // Universals belonging to this segment: in this argument set but not in
      // the next smaller one.
      std::vector<Symbol> seg;
      const std::vector<Symbol>& cargs = lift.canon.at(sk);
      std::set<Symbol> smaller;
      if (k > 0) smaller = order[k - 1].first;
      for (const Symbol& v : cargs)
        if (!smaller.count(v) && inner_done.insert(v).second) seg.push_back(v);
      if (!seg.empty()) body = Formula::forall(std::move(seg), body);
    }
    conjuncts.push_back(body);
  }

  result.formula = Formula::conj_of(std::move(conjuncts));
  return result;
}

// --- presentation shaping ----------------------------------------------------

Formula shape_readable(const Formula& f, SymbolGen& gen) {
  SignatureInfo sig = signature_of(f);
  std::set<Symbol> protect;
  for (const auto& [p, info] : sig.predicates) protect.insert(p);
  ClauseSet cs = cnf(f, gen);
  simplify_clauses(cs, protect);
  sort_clauses(cs);
  return unskolemize(cs, ClauseStyle::Implicative).formula;
}

// --- boolean simplification --------------------------------------------------

namespace {

bool complementary(const Formula& a, const Formula& b) {
  if (a.is(Formula::Kind::Not) && a.kid() == b) return true;
  if (b.is(Formula::Kind::Not) && b.kid() == a) return true;
  return false;
}

bool term_mentions(const Term& t, const Symbol& v) {
  if (t.is_var()) return t.head() == v;
  for (const Term& a : t.args())
    if (term_mentions(a, v)) return true;
  return false;
}

// The term an equation pins binder v to, when it has one v-free side.
std::optional<Term> pins(const Formula& eq, const Symbol& v) {
  if (!eq.is(Formula::Kind::Eq)) return std::nullopt;
  for (int side : {0, 1}) {
    const Term& l = eq.terms()[side];
    const Term& r = eq.terms()[1 - side];
    if (l.is_var() && l.head() == v && !term_mentions(r, v)) return r;
  }
  return std::nullopt;
}

// One-point rule. An existential binder equated at the top conjunctive level
// of the body, or a universal one disequated at the top disjunctive level
// (possibly inside an implication's antecedent), is instantiated away.
std::optional<Formula> one_point(bool universal, const Symbol& v,
                                 const Formula& body) {
  std::vector<Formula> parts =
      flatten(body, universal ? Formula::Kind::Or : Formula::Kind::And);
  for (size_t i = 0; i < parts.size(); ++i) {
    std::optional<Term> t;
    std::optional<Formula> repl;
    if (!universal) {
      t = pins(parts[i], v);
    } else if (parts[i].is(Formula::Kind::Not)) {
      t = pins(parts[i].kid(), v);
    } else if (parts[i].is(Formula::Kind::Implies)) {
      std::vector<Formula> ante = flatten(parts[i].kid(0), Formula::Kind::And);
      for (size_t j = 0; j < ante.size() && !t; ++j) {
        t = pins(ante[j], v);
        if (t) {
          ante.erase(ante.begin() + j);
          repl = Formula::implies(Formula::conj_of(std::move(ante)),
                                  parts[i].kid(1));
        }
      }
    }
    if (!t) continue;
    std::vector<Formula> rest;
    for (size_t j = 0; j < parts.size(); ++j) {
      if (j == i) {
        if (repl) rest.push_back(*repl);
        continue;
      }
      rest.push_back(parts[j]);
    }
    Formula joined = universal ? Formula::disj_of(std::move(rest))
                               : Formula::conj_of(std::move(rest));
    return substitute(joined, {{v, *t}});
  }
  return std::nullopt;
}

}  // namespace

Formula simplify(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Call:
      return f;
    case Formula::Kind::Eq:
      return f.terms()[0] == f.terms()[1] ? Formula::truth(true) : f;
    case Formula::Kind::Not: {
      Formula k = simplify(f.kid());
      if (k.is(Formula::Kind::True)) return Formula::truth(false);
      if (k.is(Formula::Kind::False)) return Formula::truth(true);
      if (k.is(Formula::Kind::Not)) return k.kid();
      return Formula::neg(std::move(k));
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      bool conj = f.is(Formula::Kind::And);
      Formula::Kind unit = conj ? Formula::Kind::True : Formula::Kind::False;
      Formula::Kind zero = conj ? Formula::Kind::False : Formula::Kind::True;
      std::vector<Formula> ks;
      for (const Formula& raw : f.kids()) {
        Formula k = simplify(raw);
        if (k.is(zero)) return Formula::truth(!conj);
        if (k.is(unit)) continue;
        for (const Formula& nested : flatten(k, f.kind())) {
          bool dup = false;
          for (const Formula& seen : ks) {
            if (seen == nested) {
              dup = true;
              break;
            }
            if (complementary(seen, nested)) return Formula::truth(!conj);
          }
          if (!dup) ks.push_back(nested);
        }
      }
      return conj ? Formula::conj_of(std::move(ks))
                  : Formula::disj_of(std::move(ks));
    }
    case Formula::Kind::Implies: {
      Formula a = simplify(f.kid(0));
      Formula b = simplify(f.kid(1));
      if (a.is(Formula::Kind::True)) return b;
      if (a.is(Formula::Kind::False)) return Formula::truth(true);
      if (b.is(Formula::Kind::True)) return Formula::truth(true);
      if (a == b) return Formula::truth(true);
      if (b.is(Formula::Kind::False)) return simplify(Formula::neg(a));
      return Formula::implies(std::move(a), std::move(b));
    }
    case Formula::Kind::Iff: {
      Formula a = simplify(f.kid(0));
      Formula b = simplify(f.kid(1));
      if (a.is(Formula::Kind::True)) return b;
      if (b.is(Formula::Kind::True)) return a;
      if (a.is(Formula::Kind::False)) return simplify(Formula::neg(b));
      if (b.is(Formula::Kind::False)) return simplify(Formula::neg(a));
      if (a == b) return Formula::truth(true);
      if (complementary(a, b)) return Formula::truth(false);
      return Formula::iff(std::move(a), std::move(b));
    }
    case Formula::Kind::ForAll:
    case Formula::Kind::Exists: {
      bool universal = f.is(Formula::Kind::ForAll);
      Formula body = simplify(f.kid());
      if (body.is(Formula::Kind::True) || body.is(Formula::Kind::False))
        return body;
      std::vector<Symbol> vs;
      for (const Symbol& v : f.binders())
        if (occurs_var(body, v)) vs.push_back(v);
      if (vs.empty()) return body;
      for (size_t i = 0; i < vs.size(); ++i) {
        std::optional<Formula> inst = one_point(universal, vs[i], body);
        if (!inst) continue;
        vs.erase(vs.begin() + i);
        Formula inner =
            vs.empty() ? std::move(*inst)
                       : (universal ? Formula::forall(std::move(vs), *inst)
                                    : Formula::exists(std::move(vs), *inst));
        return simplify(inner);
      }
      return universal ? Formula::forall(std::move(vs), std::move(body))
                       : Formula::exists(std::move(vs), std::move(body));
    }
    case Formula::Kind::ForAll2:
    case Formula::Kind::Exists2: {
      Formula body = simplify(f.kid());
      if (body.is(Formula::Kind::True) || body.is(Formula::Kind::False))
        return body;
      std::vector<Symbol> ps;
      for (const Symbol& p : f.binders())
        if (pred_occurs_free(body, p)) ps.push_back(p);
      if (ps.empty()) return body;
      return f.is(Formula::Kind::ForAll2)
                 ? Formula::forall2(std::move(ps), std::move(body))
                 : Formula::exists2(std::move(ps), std::move(body));
    }
    case Formula::Kind::Lambda:
      return Formula::lambda(f.binders(), simplify(f.kid()));
  }
  throw Error("unreachable formula kind");
}

}  // namespace folio
