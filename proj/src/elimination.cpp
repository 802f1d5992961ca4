#include "folio/elimination.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "folio/signature.hpp"

namespace folio {

// --- Ackermann rewriting -------------------------------------------------------

namespace {

// Polarity of pred's occurrences in f: bit 1 positive, bit 2 negative.
int pred_polarities(const Formula& f, const Symbol& p, int sign = 1) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      if (f.head() == p) return sign > 0 ? 1 : 2;
      return 0;
    case Formula::Kind::Eq:
    case Formula::Kind::True:
    case Formula::Kind::False:
      return 0;
    case Formula::Kind::Not:
      return pred_polarities(f.kid(), p, -sign);
    case Formula::Kind::Implies:
      return pred_polarities(f.kid(0), p, -sign) |
             pred_polarities(f.kid(1), p, sign);
    case Formula::Kind::Iff:
      return (pred_polarities(f.kid(0), p, sign) |
              pred_polarities(f.kid(1), p, sign))
                 ? 3
                 : 0;
    case Formula::Kind::ForAll2:
    case Formula::Kind::Exists2:
      for (const Symbol& b : f.binders())
        if (b == p) return 0;
      [[fallthrough]];
    default: {
      int acc = 0;
      for (const Formula& k : f.kids()) acc |= pred_polarities(k, p, sign);
      return acc;
    }
  }
}

bool mentions_pred(const Formula& f, const Symbol& p) {
  return pred_polarities(f, p) != 0;
}

// Binder names that could capture a symbol of `avoid` once definitions are
// spliced in get renamed apart. Spliced formulas are rebuilt through the
// binder constructors, which re-mark matching names, hence the renaming.
Formula rename_binders_apart(const Formula& f, const std::set<Symbol>& avoid,
                             std::set<Symbol>& used) {
  switch (f.kind()) {
    case Formula::Kind::ForAll:
    case Formula::Kind::Exists:
    case Formula::Kind::Lambda: {
      std::vector<Symbol> vs;
      std::vector<std::pair<Symbol, Term>> ren;
      for (const Symbol& v : f.binders()) {
        if (!avoid.count(v)) {
          vs.push_back(v);
          continue;
        }
        Symbol v2 = v;
        for (size_t i = 1; avoid.count(v2) || used.count(v2); ++i)
          v2 = Symbol(v.name() + std::to_string(i));
        used.insert(v2);
        ren.emplace_back(v, Term::var(v2));
        vs.push_back(v2);
      }
      Formula body = ren.empty() ? f.kid() : substitute(f.kid(), ren);
      body = rename_binders_apart(body, avoid, used);
      switch (f.kind()) {
        case Formula::Kind::ForAll:
          return Formula::forall(std::move(vs), std::move(body));
        case Formula::Kind::Exists:
          return Formula::exists(std::move(vs), std::move(body));
        default:
          return Formula::lambda(std::move(vs), std::move(body));
      }
    }
    case Formula::Kind::Atom:
    case Formula::Kind::Eq:
    case Formula::Kind::True:
    case Formula::Kind::False:
      return f;
    case Formula::Kind::Not:
      return Formula::neg(rename_binders_apart(f.kid(), avoid, used));
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff: {
      std::vector<Formula> ks;
      ks.reserve(f.kids().size());
      for (const Formula& k : f.kids())
        ks.push_back(rename_binders_apart(k, avoid, used));
      return chain(f.kind(), std::move(ks));
    }
    case Formula::Kind::ForAll2:
      return Formula::forall2(f.binders(),
                              rename_binders_apart(f.kid(), avoid, used));
    case Formula::Kind::Exists2:
      return Formula::exists2(f.binders(),
                              rename_binders_apart(f.kid(), avoid, used));
    default:
      throw Error("macro call survived into elimination");
  }
}

Formula splice_definition(const Formula& f, const AckermannForm& af) {
  switch (f.kind()) {
    case Formula::Kind::Atom: {
      if (f.head() != af.pred) return f;
      if (f.terms().size() != af.params.size())
        throw Error("arity mismatch at an occurrence of " +
                    af.pred.name());
      std::vector<std::pair<Symbol, Term>> sub;
      for (size_t i = 0; i < af.params.size(); ++i)
        sub.emplace_back(af.params[i], f.terms()[i]);
      return substitute(af.definition, sub);
    }
    case Formula::Kind::Eq:
    case Formula::Kind::True:
    case Formula::Kind::False:
      return f;
    case Formula::Kind::Not:
      return Formula::neg(splice_definition(f.kid(), af));
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff: {
      std::vector<Formula> ks;
      ks.reserve(f.kids().size());
      for (const Formula& k : f.kids()) ks.push_back(splice_definition(k, af));
      return chain(f.kind(), std::move(ks));
    }
    case Formula::Kind::ForAll:
      return Formula::forall(f.binders(), splice_definition(f.kid(), af));
    case Formula::Kind::Exists:
      return Formula::exists(f.binders(), splice_definition(f.kid(), af));
    default:
      throw Error("second-order structure inside an Ackermann rest");
  }
}

}  // namespace

Formula ackermann_rewrite(const AckermannForm& af) {
  if (mentions_pred(af.definition, af.pred))
    throw Error("definition of " + af.pred.name() + " mentions itself");
  int pol = pred_polarities(af.rest, af.pred);
  int wrong = af.rest_positive ? 2 : 1;
  if (pol & wrong)
    throw Error(af.pred.name() +
                " occurs against the Ackermann orientation in the rest");

  std::set<Symbol> def_syms;
  collect_symbols(af.definition, def_syms);
  for (const Symbol& p : af.params) def_syms.erase(p);
  std::set<Symbol> used;
  collect_symbols(af.rest, used);
  Formula rest = rename_binders_apart(af.rest, def_syms, used);
  return splice_definition(rest, af);
}

// --- DLS elimination ------------------------------------------------------------

namespace {

struct StuckAt {
  Formula subformula;
};

// NNF-level sign flip of one predicate: rewrites the body of exists2(p, f)
// as an equivalent body over the complemented predicate.
Formula flip_pred(const Formula& f, const Symbol& p) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
      return f.head() == p ? Formula::neg(f) : f;
    case Formula::Kind::Not:
      if (f.kid().is(Formula::Kind::Atom) && f.kid().head() == p)
        return f.kid();
      return Formula::neg(flip_pred(f.kid(), p));
    case Formula::Kind::Eq:
    case Formula::Kind::True:
    case Formula::Kind::False:
      return f;
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<Formula> ks;
      ks.reserve(f.kids().size());
      for (const Formula& k : f.kids()) ks.push_back(flip_pred(k, p));
      return chain(f.kind(), std::move(ks));
    }
    case Formula::Kind::ForAll:
      return Formula::forall(f.binders(), flip_pred(f.kid(), p));
    case Formula::Kind::Exists:
      return Formula::exists(f.binders(), flip_pred(f.kid(), p));
    default:
      throw Error("sign flip expects a first-order formula in negation "
                  "normal form");
  }
}

// Abstraction parameters x1..xk named apart from everything in sight.
std::vector<Symbol> pick_params(size_t k, const std::set<Symbol>& avoid) {
  std::vector<Symbol> out;
  std::set<Symbol> picked;
  for (size_t i = 0; i < k; ++i) {
    for (size_t j = 0;; ++j) {
      Symbol s(j == 0 ? "x" + std::to_string(i + 1)
                      : "x" + std::to_string(i + 1) + "_" + std::to_string(j));
      if (!avoid.count(s) && !picked.count(s)) {
        picked.insert(s);
        out.push_back(s);
        break;
      }
    }
  }
  return out;
}

// The instance condition under which a definition clause forces pred at the
// abstraction point: exists(clause vars, params = args & complements of the
// side literals). Distinct variable arguments covering the clause keep the
// equations away.
Formula definition_piece(const Clause& c, size_t pred_at,
                         const std::vector<Symbol>& params) {
  const Literal& head = c.lits[pred_at];
  std::vector<Symbol> cvars = clause_vars(c);

  bool plain_vars = head.args.size() == cvars.size();
  std::set<Symbol> seen;
  for (const Term& t : head.args)
    plain_vars = plain_vars && t.is_var() && seen.insert(t.head()).second;

  std::vector<Formula> side;
  for (size_t i = 0; i < c.lits.size(); ++i)
    if (i != pred_at)
      side.push_back(literal_formula(c.lits[i].complement()));

  if (plain_vars) {
    std::vector<std::pair<Symbol, Term>> ren;
    for (size_t i = 0; i < params.size(); ++i)
      ren.emplace_back(head.args[i].head(), Term::var(params[i]));
    Formula cond = Formula::conj_of(std::move(side));
    return ren.empty() ? cond : substitute(cond, ren);
  }

  std::vector<Formula> parts;
  for (size_t i = 0; i < params.size(); ++i)
    parts.push_back(Formula::eq(Term::var(params[i]), head.args[i]));
  parts.insert(parts.end(), side.begin(), side.end());
  return Formula::exists(cvars, Formula::conj_of(std::move(parts)));
}

// One orientation attempt for exists2(p, body): clausify, read every clause
// with a positive p literal as a definition piece, keep the others as the
// rest, rewrite, and re-bind the clausification's Skolem symbols as inner
// existentials. Fails (nullopt) when a clause mixes signs of p, carries two
// positive p literals, or a Skolem symbol resists re-binding. The re-binding
// must happen here: the caller may splice the result under negations or
// quantifiers, where a leaked Skolem constant would change meaning.
std::optional<Formula> orient_and_rewrite(const Symbol& p, const Formula& body,
                                          SymbolGen& gen) {
  std::vector<Formula> keep;
  std::vector<Formula> active;
  for (const Formula& c : flatten(body, Formula::Kind::And))
    (mentions_pred(c, p) ? active : keep).push_back(c);

  ClauseSet cs = cnf(Formula::conj_of(std::move(active)), gen);

  std::vector<std::pair<const Clause*, size_t>> defs;  // clause, pred index
  std::vector<const Clause*> rest;
  for (const Clause& c : cs.clauses) {
    size_t pos = c.lits.size(), npos = 0, nneg = 0;
    for (size_t i = 0; i < c.lits.size(); ++i) {
      if (c.lits[i].pred != p) continue;
      if (c.lits[i].pos) {
        ++npos;
        pos = i;
      } else {
        ++nneg;
      }
    }
    if (npos == 0) {
      rest.push_back(&c);
    } else if (npos == 1 && nneg == 0) {
      defs.emplace_back(&c, pos);
    } else {
      return std::nullopt;
    }
  }

  size_t arity = 0;
  for (const Clause& c : cs.clauses)
    for (const Literal& l : c.lits)
      if (l.pred == p) arity = l.args.size();
  std::set<Symbol> avoid;
  for (const Clause& c : cs.clauses)
    for (const Literal& l : c.lits) {
      avoid.insert(l.pred);
      for (const Term& t : l.args) collect_symbols(t, avoid);
    }
  std::vector<Symbol> params = pick_params(arity, avoid);

  std::vector<Formula> pieces;
  pieces.reserve(defs.size());
  for (const auto& [c, at] : defs)
    pieces.push_back(definition_piece(*c, at, params));

  std::vector<Formula> rest_parts;
  rest_parts.reserve(rest.size());
  for (const Clause* c : rest)
    rest_parts.push_back(
        Formula::forall(clause_vars(*c), clause_formula(*c, ClauseStyle::Disjunctive)));

  AckermannForm af{p, params, Formula::disj_of(std::move(pieces)),
                   Formula::conj_of(std::move(rest_parts)), false};
  Formula rewritten = ackermann_rewrite(af);
  try {
    ClauseSet rs = cnf(rewritten, gen);
    rs.skolems.insert(cs.skolems.begin(), cs.skolems.end());
    std::set<Symbol> protect;
    for (const Clause& c : rs.clauses)
      for (const Literal& l : c.lits) protect.insert(l.pred);
    simplify_clauses(rs, protect);
    sort_clauses(rs);
    Unskolemized u = unskolemize(rs, ClauseStyle::Disjunctive);
    if (!u.complete) return std::nullopt;
    rewritten = u.formula;
  } catch (const ResourceLimit&) {
    // polish only; without Skolem symbols the raw rewrite stands
    if (!cs.skolems.empty()) throw;
  }
  keep.push_back(std::move(rewritten));
  return Formula::conj_of(std::move(keep));
}

bool term_ground(const Term& t) {
  if (t.is_var()) return false;
  for (const Term& a : t.args())
    if (!term_ground(a)) return false;
  return true;
}

// Argument tuples of p's occurrences, in traversal order, when every
// occurrence applies p to ground terms; nullopt otherwise.
bool collect_ground_instances(const Formula& f, const Symbol& p,
                              std::vector<std::vector<Term>>& out) {
  if (f.is(Formula::Kind::Atom) && f.head() == p) {
    for (const Term& t : f.terms())
      if (!term_ground(t)) return false;
    if (std::find(out.begin(), out.end(), f.terms()) == out.end())
      out.push_back(f.terms());
    return true;
  }
  for (const Formula& k : f.kids())
    if (!collect_ground_instances(k, p, out)) return false;
  return true;
}

size_t count_pred_atoms(const Formula& f, const Symbol& p) {
  if (f.is(Formula::Kind::Atom)) return f.head() == p ? 1 : 0;
  size_t n = 0;
  for (const Formula& k : f.kids()) n += count_pred_atoms(k, p);
  return n;
}

// Distribution attempts stop here; each level multiplies the branch count.
constexpr size_t kElimSplitDepth = 8;

// exists2(p, body) with body already first-order. The quantifier distributes
// over a disjunctive body; otherwise orientation with p negative in the rest
// is tried first, then the dual over the complemented predicate. A failed
// orientation pair is retried after distributing a disjunctive conjunct that
// blocks it; as a last resort, when p is only applied to ground terms, the
// finitely many instances are forgotten one at a time.
Formula elim_one(const Symbol& p, const Formula& body0, SymbolGen& gen,
                 size_t depth = 0) {
  Formula body = simplify(nnf(body0));
  if (!mentions_pred(body, p)) return body;

  if (body.is(Formula::Kind::Or)) {
    try {
      std::vector<Formula> ks;
      for (const Formula& k : flatten(body, Formula::Kind::Or))
        ks.push_back(elim_one(p, k, gen, depth));
      return simplify(Formula::disj_of(std::move(ks)));
    } catch (const StuckAt&) {
      // retry undistributed
    }
  }

  for (bool flipped : {false, true}) {
    Formula b = flipped ? simplify(nnf(flip_pred(body, p))) : body;
    std::optional<Formula> out;
    try {
      out = orient_and_rewrite(p, b, gen);
    } catch (const ResourceLimit&) {
      out = std::nullopt;
    }
    if (out) return simplify(*out);
  }

  // A conjunct that is itself a disjunction with mixed signs of p, or with
  // several p atoms, defeats the clause classification. Distributing it over
  // the remaining conjuncts leaves one disjunct each, and the disjunctive
  // split above takes over.
  if (depth < kElimSplitDepth) {
    std::vector<Formula> cj = flatten(body, Formula::Kind::And);
    size_t best = cj.size();
    int best_rank = 0;
    for (size_t i = 0; i < cj.size(); ++i) {
      if (!cj[i].is(Formula::Kind::Or)) continue;
      int rank = 0;
      if (pred_polarities(cj[i], p) == 3)
        rank = 2;
      else if (count_pred_atoms(cj[i], p) >= 2)
        rank = 1;
      if (rank > best_rank) {
        best_rank = rank;
        best = i;
      }
    }
    if (best < cj.size()) {
      try {
        std::vector<Formula> ks;
        for (const Formula& d : flatten(cj[best], Formula::Kind::Or)) {
          std::vector<Formula> parts;
          for (size_t i = 0; i < cj.size(); ++i)
            if (i != best) parts.push_back(cj[i]);
          parts.push_back(d);
          ks.push_back(
              elim_one(p, Formula::conj_of(std::move(parts)), gen, depth + 1));
        }
        return simplify(Formula::disj_of(std::move(ks)));
      } catch (const StuckAt&) {
        // fall through
      }
    }
  }

  std::vector<std::vector<Term>> insts;
  if (collect_ground_instances(body, p, insts)) {
    Formula out = body;
    for (const std::vector<Term>& args : insts)
      out = forget_ground_atom(out, Formula::atom(p, args));
    return simplify(out);
  }

  throw StuckAt{Formula::exists2({p}, body)};
}

// Innermost-first traversal; universal predicate quantifiers ride through
// their dual existential problem.
Formula elim_walk(const Formula& f, SymbolGen& gen) {
  switch (f.kind()) {
    case Formula::Kind::Atom:
    case Formula::Kind::Eq:
    case Formula::Kind::True:
    case Formula::Kind::False:
      return f;
    case Formula::Kind::Not:
      return Formula::neg(elim_walk(f.kid(), gen));
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff: {
      std::vector<Formula> ks;
      ks.reserve(f.kids().size());
      for (const Formula& k : f.kids())
        ks.push_back(elim_walk(k, gen));
      return chain(f.kind(), std::move(ks));
    }
    case Formula::Kind::ForAll:
      return Formula::forall(f.binders(), elim_walk(f.kid(), gen));
    case Formula::Kind::Exists:
      return Formula::exists(f.binders(), elim_walk(f.kid(), gen));
    case Formula::Kind::Exists2: {
      Formula cur = elim_walk(f.kid(), gen);
      const std::vector<Symbol>& ps = f.binders();
      for (auto it = ps.rbegin(); it != ps.rend(); ++it)
        cur = elim_one(*it, cur, gen);
      return cur;
    }
    case Formula::Kind::ForAll2: {
      Formula cur = Formula::neg(elim_walk(f.kid(), gen));
      const std::vector<Symbol>& ps = f.binders();
      for (auto it = ps.rbegin(); it != ps.rend(); ++it)
        cur = elim_one(*it, cur, gen);
      return Formula::neg(cur);
    }
    default:
      throw Error("macro call survived into elimination");
  }
}

}  // namespace

EliminationResult eliminate(const Formula& f, SymbolGen& gen,
                            const EliminationOptions& opts) {
  reserve_symbols(f, gen);
  EliminationResult res;
  Formula out = f;
  try {
    out = simplify(elim_walk(f, gen));
  } catch (const StuckAt& s) {
    res.stuck = s.subformula;
    return res;
  }

  // Presentation pass: clausal simplification with every predicate
  // protected, then quantifiers rebuilt from Skolem symbols. Skipped for
  // open formulas, where clausification would not preserve equivalence.
  bool open = !signature_of(out).free_vars.empty();
  if (!open) {
    try {
      ClauseSet cs = cnf(out, gen);
      std::set<Symbol> protect;
      for (const Clause& c : cs.clauses)
        for (const Literal& l : c.lits) protect.insert(l.pred);
      simplify_clauses(cs, protect);
      sort_clauses(cs);
      Unskolemized u = unskolemize(cs, ClauseStyle::Disjunctive);
      if (u.complete) {
        out = u.formula;
      } else {
        std::set<Symbol> left;
        collect_symbols(u.formula, left);
        for (const Symbol& s : cs.skolems)
          if (left.count(s)) res.skolems.insert(s);
        out = u.formula;
      }
    } catch (const ResourceLimit&) {
      // keep the direct result
    }
  }

  if (opts.shape_result) out = shape_readable(out, gen);
  res.result = simplify(out);
  return res;
}

// --- ground-atom forgetting -----------------------------------------------------

namespace {

Formula expand_atom(const Formula& f, const Symbol& p,
                    const std::vector<Term>& ground_args, bool keep_true) {
  switch (f.kind()) {
    case Formula::Kind::Atom: {
      if (f.head() != p || f.terms().size() != ground_args.size()) return f;
      bool identical = f.terms() == ground_args;
      if (identical) return Formula::truth(keep_true);
      std::vector<Formula> eqs;
      for (size_t i = 0; i < ground_args.size(); ++i)
        eqs.push_back(Formula::eq(f.terms()[i], ground_args[i]));
      Formula same = Formula::conj_of(eqs);
      Formula other = Formula::conj({Formula::neg(same), f});
      return keep_true ? Formula::disj({std::move(same), std::move(other)})
                       : other;
    }
    case Formula::Kind::Eq:
    case Formula::Kind::True:
    case Formula::Kind::False:
      return f;
    case Formula::Kind::Not:
      return Formula::neg(expand_atom(f.kid(), p, ground_args, keep_true));
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff: {
      std::vector<Formula> ks;
      ks.reserve(f.kids().size());
      for (const Formula& k : f.kids())
        ks.push_back(expand_atom(k, p, ground_args, keep_true));
      return chain(f.kind(), std::move(ks));
    }
    case Formula::Kind::ForAll:
      return Formula::forall(f.binders(),
                             expand_atom(f.kid(), p, ground_args, keep_true));
    case Formula::Kind::Exists:
      return Formula::exists(f.binders(),
                             expand_atom(f.kid(), p, ground_args, keep_true));
    default:
      throw Error("forgetting expects a first-order formula");
  }
}

}  // namespace

Formula forget_ground_atom(const Formula& f, const Formula& atom) {
  if (!atom.is(Formula::Kind::Atom))
    throw Error("forgetting needs an atom");
  for (const Term& t : atom.terms())
    if (!term_ground(t)) throw Error("forgetting needs ground arguments");
  Formula when_true = expand_atom(f, atom.head(), atom.terms(), true);
  Formula when_false = expand_atom(f, atom.head(), atom.terms(), false);
  return simplify(Formula::disj({when_true, when_false}));
}

// --- finite second-order equivalence oracle --------------------------------------

namespace {

struct OracleBudgetOut {};

size_t ipow(size_t b, size_t e) {
  size_t r = 1;
  while (e--) {
    if (r > ((size_t)1 << 50)) throw OracleBudgetOut{};
    r *= b;
  }
  return r;
}

// Arity tables for the symbols with at least one free occurrence in either
// formula. A name can be bound in one formula and free in the other; only
// the free occurrences need an interpretation, the environments shadow the
// rest.
struct OracleSig {
  std::map<Symbol, size_t> preds;
  std::map<Symbol, size_t> fns;     // arity >= 1
  std::set<Symbol> consts;          // includes free individual variables

  void note_pred(const Symbol& s, size_t n) {
    auto [it, fresh] = preds.emplace(s, n);
    if (!fresh && it->second != n)
      throw Error("arity clash on " + s.name());
  }
  void scan_term(const Term& t, const std::set<Symbol>& bound_vars) {
    if (t.is_var()) {
      if (!bound_vars.count(t.head())) consts.insert(t.head());
      return;
    }
    if (t.args().empty()) {
      consts.insert(t.head());
    } else {
      auto [it, fresh] = fns.emplace(t.head(), t.args().size());
      if (!fresh && it->second != t.args().size())
        throw Error("arity clash on " + t.head().name());
    }
    for (const Term& a : t.args()) scan_term(a, bound_vars);
  }
  void scan(const Formula& f, std::set<Symbol> bound_vars,
            std::set<Symbol> bound_preds) {
    switch (f.kind()) {
      case Formula::Kind::Atom:
        if (!bound_preds.count(f.head()))
          note_pred(f.head(), f.terms().size());
        for (const Term& t : f.terms()) scan_term(t, bound_vars);
        return;
      case Formula::Kind::Eq:
        scan_term(f.terms()[0], bound_vars);
        scan_term(f.terms()[1], bound_vars);
        return;
      case Formula::Kind::ForAll:
      case Formula::Kind::Exists:
        for (const Symbol& b : f.binders()) bound_vars.insert(b);
        scan(f.kid(), std::move(bound_vars), std::move(bound_preds));
        return;
      case Formula::Kind::ForAll2:
      case Formula::Kind::Exists2:
        for (const Symbol& b : f.binders()) bound_preds.insert(b);
        scan(f.kid(), std::move(bound_vars), std::move(bound_preds));
        return;
      case Formula::Kind::True:
      case Formula::Kind::False:
        return;
      case Formula::Kind::Not:
      case Formula::Kind::And:
      case Formula::Kind::Or:
      case Formula::Kind::Implies:
      case Formula::Kind::Iff:
        for (const Formula& k : f.kids()) scan(k, bound_vars, bound_preds);
        return;
      default:
        throw Error("oracle expects macro-free formulas");
    }
  }
};

struct Interp {
  size_t n = 1;
  std::map<Symbol, size_t> consts;
  std::map<Symbol, std::vector<size_t>> fns;
  std::map<Symbol, std::vector<char>> preds;
};

struct Evaluator {
  const Interp& in;
  size_t& budget;
  std::map<Symbol, size_t> env;                  // individual variables
  std::map<Symbol, std::vector<char>> rel_env;   // quantified predicates

  void spend() {
    if (budget == 0) throw OracleBudgetOut{};
    --budget;
  }

  size_t term(const Term& t) {
    spend();
    if (t.is_var()) {
      auto it = env.find(t.head());
      if (it != env.end()) return it->second;
      auto ic = in.consts.find(t.head());
      if (ic == in.consts.end())
        throw Error("unbound variable " + t.head().name());
      return ic->second;
    }
    if (t.args().empty()) return in.consts.at(t.head());
    size_t idx = 0;
    for (const Term& a : t.args()) idx = idx * in.n + term(a);
    return in.fns.at(t.head())[idx];
  }

  bool atom(const Symbol& p, const std::vector<Term>& args) {
    size_t idx = 0;
    for (const Term& a : args) idx = idx * in.n + term(a);
    auto it = rel_env.find(p);
    const std::vector<char>& table =
        it != rel_env.end() ? it->second : in.preds.at(p);
    return table[idx] != 0;
  }

  bool eval(const Formula& f) {
    spend();
    switch (f.kind()) {
      case Formula::Kind::Atom:
        return atom(f.head(), f.terms());
      case Formula::Kind::Eq:
        return term(f.terms()[0]) == term(f.terms()[1]);
      case Formula::Kind::True:
        return true;
      case Formula::Kind::False:
        return false;
      case Formula::Kind::Not:
        return !eval(f.kid());
      case Formula::Kind::And:
        for (const Formula& k : f.kids())
          if (!eval(k)) return false;
        return true;
      case Formula::Kind::Or:
        for (const Formula& k : f.kids())
          if (eval(k)) return true;
        return false;
      case Formula::Kind::Implies:
        return !eval(f.kid(0)) || eval(f.kid(1));
      case Formula::Kind::Iff:
        return eval(f.kid(0)) == eval(f.kid(1));
      case Formula::Kind::ForAll:
      case Formula::Kind::Exists:
        return quant(f, 0);
      case Formula::Kind::ForAll2:
      case Formula::Kind::Exists2:
        return quant2(f, 0);
      default:
        throw Error("oracle expects macro-free formulas");
    }
  }

  bool quant(const Formula& f, size_t i) {
    if (i == f.binders().size()) return eval(f.kid());
    bool universal = f.is(Formula::Kind::ForAll);
    const Symbol& v = f.binders()[i];
    auto saved = env.find(v) != env.end()
                     ? std::optional<size_t>(env[v])
                     : std::nullopt;
    bool out = universal;
    for (size_t d = 0; d < in.n; ++d) {
      env[v] = d;
      bool b = quant(f, i + 1);
      if (b != universal) {
        out = b;
        break;
      }
    }
    if (saved)
      env[v] = *saved;
    else
      env.erase(v);
    return out;
  }

  bool quant2(const Formula& f, size_t i) {
    if (i == f.binders().size()) return eval(f.kid());
    bool universal = f.is(Formula::Kind::ForAll2);
    const Symbol& v = f.binders()[i];
    std::optional<size_t> arity = pred_arity_in(f.kid(), v);
    size_t cells = ipow(in.n, arity.value_or(0));
    if (cells > 30) throw OracleBudgetOut{};
    auto saved = rel_env.find(v) != rel_env.end()
                     ? std::optional<std::vector<char>>(rel_env[v])
                     : std::nullopt;
    bool out = universal;
    for (size_t mask = 0; mask < ((size_t)1 << cells); ++mask) {
      spend();
      std::vector<char> table(cells);
      for (size_t c = 0; c < cells; ++c) table[c] = (mask >> c) & 1;
      rel_env[v] = std::move(table);
      bool b = quant2(f, i + 1);
      if (b != universal) {
        out = b;
        break;
      }
    }
    if (saved)
      rel_env[v] = *saved;
    else
      rel_env.erase(v);
    return out;
  }
};

}  // namespace

SoEquivalence so_equivalent_finite(const Formula& f, const Formula& g,
                                   size_t max_size, size_t budget) {
  OracleSig sig;
  sig.scan(f, {}, {});
  sig.scan(g, {}, {});

  std::vector<std::pair<Symbol, size_t>> free_preds(sig.preds.begin(),
                                                    sig.preds.end());
  std::vector<Symbol> free_consts(sig.consts.begin(), sig.consts.end());
  std::vector<std::pair<Symbol, size_t>> free_fns(sig.fns.begin(),
                                                  sig.fns.end());

  try {
    for (size_t n = 1; n <= max_size; ++n) {
      Interp in;
      in.n = n;

      // Odometer over every interpretation: constants, then function
      // tables, then predicate tables.
      for (const Symbol& c : free_consts) in.consts[c] = 0;
      for (const auto& [s, k] : free_fns) {
        size_t cells = ipow(n, k);
        if (cells > 60) throw OracleBudgetOut{};
        in.fns[s].assign(cells, 0);
      }
      for (const auto& [s, k] : free_preds) {
        size_t cells = ipow(n, k);
        if (cells > 30) throw OracleBudgetOut{};
        in.preds[s].assign(cells, 0);
      }

      for (;;) {
        if (budget == 0) throw OracleBudgetOut{};
        --budget;
        Evaluator ef{in, budget, {}, {}};
        bool vf = ef.eval(f);
        Evaluator eg{in, budget, {}, {}};
        bool vg = eg.eval(g);
        if (vf != vg) return SoEquivalence::Distinct;

        // advance the odometer
        bool carried = true;
        for (auto& [c, v] : in.consts) {
          if (!carried) break;
          v = (v + 1) % n;
          carried = v == 0;
        }
        for (auto& [s, table] : in.fns) {
          if (!carried) break;
          for (size_t& cell : table) {
            cell = (cell + 1) % n;
            if (cell != 0) {
              carried = false;
              break;
            }
          }
        }
        for (auto& [s, table] : in.preds) {
          if (!carried) break;
          for (char& cell : table) {
            cell = cell ? 0 : 1;
            if (cell) {
              carried = false;
              break;
            }
          }
        }
        if (carried) break;
      }
    }
  } catch (const OracleBudgetOut&) {
    return SoEquivalence::Overflow;
  }
  return SoEquivalence::Equivalent;
}

}  // namespace folio
