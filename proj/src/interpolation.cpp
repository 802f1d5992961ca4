#include "folio/interpolation.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <string>

#include "folio/macros.hpp"
#include "folio/signature.hpp"
#include "folio/transform.hpp"

namespace folio {

namespace {

// Strips a homogeneous second-order prefix, renaming each bound predicate to
// a fresh first-order incarnation in the matrix. `want` is the acceptable
// binder on this side; the dual binder cannot be reduced away and is an error.
Formula strip_so_prefix(Formula f, Formula::Kind want, SymbolGen& gen,
                        const char* side) {
  for (;;) {
    if (f.is(Formula::Kind::ForAll2) || f.is(Formula::Kind::Exists2)) {
      if (!f.is(want))
        throw Error(std::string("predicate quantifier of this polarity on the ")
                    + side + " side does not reduce to first order");
      Formula body = f.kid();
      for (const Symbol& p : f.binders())
        body = rename_free_predicate(body, p, gen.fresh(p.name()));
      f = body;
      continue;
    }
    break;
  }
  if (is_second_order(f))
    throw Error(std::string("second-order structure beyond the prefix on the ")
                + side + " side");
  return f;
}

}  // namespace

std::pair<Formula, Formula> reduce_so_entailment(const Formula& f,
                                                 const Formula& g,
                                                 SymbolGen& gen) {
  reserve_symbols(f, gen);
  reserve_symbols(g, gen);
  return {strip_so_prefix(f, Formula::Kind::Exists2, gen, "entailing"),
          strip_so_prefix(g, Formula::Kind::ForAll2, gen, "entailed")};
}

// --- ground interpolant extraction -------------------------------------------

namespace {

Color clause_color(const ClauseSet& cs, size_t idx) {
  if (idx >= cs.clauses.size()) throw Error("proof names a missing clause");
  const std::optional<Color>& c = cs.clauses[idx].color;
  if (!c) throw Error("interpolation needs every clause colored");
  return *c;
}

struct GroundIpol {
  const ClauseSet& cs;
  std::vector<Color> ancestors;  // colors of the clauses on the current path

  // `mine` is the color of the clause this literal belongs to.
  Formula node(const TableauNode& n, Color mine) {
    if (n.reduction) {
      size_t up = *n.reduction;
      if (up == 0 || up > ancestors.size())
        throw Error("reduction step reaches past the root");
      Color other = ancestors[ancestors.size() - up];
      if (mine == other)
        return Formula::truth(mine == Color::B);
      // The closing literal crosses sides; it enters the interpolant with
      // the polarity seen from the A side.
      if (mine == Color::A) return literal_formula(n.lit);
      return literal_formula(n.lit.complement());
    }
    if (!n.extension) throw Error("open branch in a closed tableau");
    Color ext = clause_color(cs, *n.extension);
    ancestors.push_back(mine);
    std::vector<Formula> parts;
    parts.reserve(n.children.size());
    for (const TableauNode& k : n.children) parts.push_back(node(k, ext));
    ancestors.pop_back();
    return ext == Color::A ? Formula::disj_of(std::move(parts))
                           : Formula::conj_of(std::move(parts));
  }
};

}  // namespace

Formula ground_ipol(const ClauseSet& cs, const Proof& p) {
  Color start = clause_color(cs, p.start_clause);
  GroundIpol gi{cs, {}};
  std::vector<Formula> parts;
  parts.reserve(p.goals.size());
  for (const TableauNode& g : p.goals) parts.push_back(gi.node(g, start));
  return start == Color::A ? Formula::disj_of(std::move(parts))
                           : Formula::conj_of(std::move(parts));
}

// --- lifting ------------------------------------------------------------------

namespace {

size_t term_size(const Term& t) {
  size_t n = 1;
  for (const Term& a : t.args()) n += term_size(a);
  return n;
}

// Collects the outermost occurrences of terms headed by a one-sided symbol.
// Nothing below such a term is collected; it vanishes with its superterm.
void collect_outermost(const Term& t, const std::set<Symbol>& local,
                       std::vector<Term>& out) {
  if (!t.is_var() && local.count(t.head())) {
    if (std::find(out.begin(), out.end(), t) == out.end()) out.push_back(t);
    return;
  }
  for (const Term& a : t.args()) collect_outermost(a, local, out);
}

void collect_outermost(const Formula& f, const std::set<Symbol>& local,
                       std::vector<Term>& out) {
  for (const Term& t : f.terms()) collect_outermost(t, local, out);
  for (const Formula& k : f.kids()) collect_outermost(k, local, out);
}

Term replace_outermost(const Term& t, const std::set<Symbol>& local,
                       const std::vector<std::pair<Term, Symbol>>& map) {
  if (!t.is_var() && local.count(t.head())) {
    for (const auto& [from, var] : map)
      if (t == from) return Term::var(var);
    throw Error("lifting lost track of a term");
  }
  if (t.is_var() || t.args().empty()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(replace_outermost(a, local, map));
  return Term::app(t.head(), std::move(args));
}

Formula replace_outermost(const Formula& f, const std::set<Symbol>& local,
                          const std::vector<std::pair<Term, Symbol>>& map) {
  switch (f.kind()) {
    case Formula::Kind::Atom: {
      std::vector<Term> args;
      args.reserve(f.terms().size());
      for (const Term& t : f.terms())
        args.push_back(replace_outermost(t, local, map));
      return Formula::atom(f.head(), std::move(args));
    }
    case Formula::Kind::Eq:
      return Formula::eq(replace_outermost(f.terms()[0], local, map),
                         replace_outermost(f.terms()[1], local, map));
    case Formula::Kind::True:
    case Formula::Kind::False:
      return f;
    case Formula::Kind::Not:
      return Formula::neg(replace_outermost(f.kid(), local, map));
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
    case Formula::Kind::Iff: {
      std::vector<Formula> ks;
      ks.reserve(f.kids().size());
      for (const Formula& k : f.kids())
        ks.push_back(replace_outermost(k, local, map));
      return chain(f.kind(), std::move(ks));
    }
    default:
      throw Error("lifting expects a quantifier-free first-order formula");
  }
}

// Picks binder names in the x, x1, x2, ... series that collide with nothing
// in the matrix and with no other picked name.
Symbol pick_var(const std::string& base, const std::set<Symbol>& avoid,
                std::set<Symbol>& picked) {
  for (size_t i = 0;; ++i) {
    Symbol s(i == 0 ? base : base + std::to_string(i));
    if (!avoid.count(s) && !picked.count(s)) {
      picked.insert(s);
      return s;
    }
  }
}

}  // namespace

Formula lift_interpolant(const Formula& ground, const std::set<Symbol>& a_local,
                         const std::set<Symbol>& b_local, SymbolGen& gen) {
  reserve_symbols(ground, gen);
  std::set<Symbol> local = a_local;
  local.insert(b_local.begin(), b_local.end());

  std::vector<Term> terms;
  collect_outermost(ground, local, terms);
  if (terms.empty()) return ground;

  // Subterms come before their superterms so their variables scope over
  // them; otherwise existential (A side) abstractions come first.
  std::stable_sort(terms.begin(), terms.end(),
                   [&](const Term& s, const Term& t) {
                     size_t ss = term_size(s), ts = term_size(t);
                     if (ss != ts) return ss < ts;
                     bool sa = a_local.count(s.head()) > 0;
                     bool ta = a_local.count(t.head()) > 0;
                     return sa && !ta;
                   });

  std::set<Symbol> avoid;
  collect_symbols(ground, avoid);
  std::set<Symbol> picked;
  std::vector<std::pair<Term, Symbol>> map;
  std::vector<std::pair<Symbol, bool>> prefix;  // (var, existential)
  for (const Term& t : terms) {
    bool ex = a_local.count(t.head()) > 0;
    Symbol v = pick_var(ex ? "x" : "y", avoid, picked);
    map.emplace_back(t, v);
    prefix.emplace_back(v, ex);
  }

  Formula out = replace_outermost(ground, local, map);
  // Innermost quantifier last in `prefix`; wrap back to front, merging
  // adjacent binders of one kind into a single block.
  size_t i = prefix.size();
  while (i > 0) {
    size_t j = i;
    bool ex = prefix[i - 1].second;
    while (j > 0 && prefix[j - 1].second == ex) --j;
    std::vector<Symbol> vs;
    for (size_t k = j; k < i; ++k) vs.push_back(prefix[k].first);
    out = ex ? Formula::exists(std::move(vs), out)
             : Formula::forall(std::move(vs), out);
    i = j;
  }
  return out;
}

// --- end-to-end interpolation -------------------------------------------------

namespace {

void term_vars(const Term& t, std::set<Symbol>& out) {
  if (t.is_var()) out.insert(t.head());
  for (const Term& a : t.args()) term_vars(a, out);
}

void proof_vars(const TableauNode& n, std::set<Symbol>& out) {
  for (const Term& t : n.lit.args) term_vars(t, out);
  for (const TableauNode& k : n.children) proof_vars(k, out);
}

Term freeze_term(const Term& t, const std::map<Symbol, Symbol>& m) {
  if (t.is_var()) {
    auto it = m.find(t.head());
    return it == m.end() ? t : Term::constant(it->second);
  }
  if (t.args().empty()) return t;
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const Term& a : t.args()) args.push_back(freeze_term(a, m));
  return Term::app(t.head(), std::move(args));
}

void freeze_node(TableauNode& n, const std::map<Symbol, Symbol>& m) {
  for (Term& t : n.lit.args) t = freeze_term(t, m);
  for (TableauNode& k : n.children) freeze_node(k, m);
}

void side_heads(const SignatureInfo& sig, std::set<Symbol>& out) {
  for (const auto& [f, n] : sig.functions) out.insert(f);
  out.insert(sig.constants.begin(), sig.constants.end());
}

}  // namespace

std::optional<Formula> interpolate(const Formula& f, const Formula& g,
                                   SymbolGen& gen,
                                   const InterpolationOptions& opts) {
  auto [fa, gb] = reduce_so_entailment(f, g, gen);

  ClauseSet side_a = cnf(fa, gen);
  ClauseSet side_b = cnf(Formula::neg(gb), gen);
  for (Clause& c : side_a.clauses) c.color = Color::A;
  for (Clause& c : side_b.clauses) c.color = Color::B;

  std::set<Symbol> a_heads, b_heads;
  side_heads(signature_of(fa), a_heads);
  side_heads(signature_of(gb), b_heads);
  a_heads.insert(side_a.skolems.begin(), side_a.skolems.end());
  b_heads.insert(side_b.skolems.begin(), side_b.skolems.end());

  ClauseSet cs;
  cs.clauses = std::move(side_a.clauses);
  cs.clauses.insert(cs.clauses.end(), side_b.clauses.begin(),
                    side_b.clauses.end());
  cs.skolems = side_a.skolems;
  cs.skolems.insert(side_b.skolems.begin(), side_b.skolems.end());
  add_equality_axioms(cs);

  ProveResult pr = prove(cs, opts.prover);
  if (pr.outcome != ProofOutcome::Proved || !pr.proof) return std::nullopt;
  Proof proof = *pr.proof;

  // Variables the refutation never bound are frozen to fresh constants; the
  // interpolant cannot mention them, so which side they join is a formality,
  // and the B side keeps them out of existential abstraction.
  std::set<Symbol> loose;
  for (const TableauNode& n : proof.goals) proof_vars(n, loose);
  if (!loose.empty()) {
    std::map<Symbol, Symbol> freeze;
    for (const Symbol& v : loose) {
      Symbol c = gen.fresh("w");
      freeze.emplace(v, c);
      b_heads.insert(c);
    }
    for (TableauNode& n : proof.goals) freeze_node(n, freeze);
  }

  std::set<Symbol> a_local, b_local;
  for (const Symbol& s : a_heads)
    if (!b_heads.count(s)) a_local.insert(s);
  for (const Symbol& s : b_heads)
    if (!a_heads.count(s)) b_local.insert(s);

  Formula h = simplify(ground_ipol(cs, proof));
  h = simplify(lift_interpolant(h, a_local, b_local, gen));
  if (opts.shape) h = shape_readable(h, gen);
  return h;
}

std::optional<std::vector<Formula>> symmetric_interpolate(
    const std::vector<Formula>& fs, const Formula& g, SymbolGen& gen,
    const InterpolationOptions& opts) {
  std::vector<Formula> hs;
  hs.reserve(fs.size());
  for (size_t i = 0; i < fs.size(); ++i) {
    std::vector<Formula> rest;
    for (size_t j = 0; j < i; ++j) rest.push_back(hs[j]);
    for (size_t j = i + 1; j < fs.size(); ++j) rest.push_back(fs[j]);
    Formula target =
        rest.empty() ? g : Formula::implies(Formula::conj_of(std::move(rest)), g);
    std::optional<Formula> h = interpolate(fs[i], target, gen, opts);
    if (!h) return std::nullopt;
    hs.push_back(std::move(*h));
  }
  return hs;
}

}  // namespace folio
