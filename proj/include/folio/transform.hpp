// Normal forms and clause-level operations: NNF, Skolemization, CNF/DNF,
// definitional CNF, clause simplification, un-Skolemization and the
// presentation shaping used for elimination output.

#pragma once

#include <map>
#include <optional>

#include "folio/syntax.hpp"

namespace folio {

struct ResourceLimit : Error {
  using Error::Error;
};

// Which input side a clause descends from, for interpolation.
enum class Color { A, B };

// A literal: possibly negated atom. Equality atoms use the head "=" with two
// arguments; no user identifier can collide with it.
struct Literal {
  bool pos = true;
  Symbol pred;
  std::vector<Term> args;

  bool is_eq() const { return pred.name() == "="; }
  Literal complement() const { return {!pos, pred, args}; }

  bool operator==(const Literal& o) const {
    return pos == o.pos && pred == o.pred && args == o.args;
  }
};

inline Symbol eq_symbol() { return Symbol("="); }

struct Clause {
  std::vector<Literal> lits;
  std::optional<Color> color;

  bool empty() const { return lits.empty(); }
};

struct ClauseSet {
  std::vector<Clause> clauses;
  // Symbols introduced by Skolemization while building this set.
  std::set<Symbol> skolems;
};

Formula literal_formula(const Literal& l);
Literal formula_literal(const Formula& f);  // pre: literal shape

// Free variables of a clause, in first-occurrence order.
std::vector<Symbol> clause_vars(const Clause& c);
bool clause_is_ground(const Clause& c);

// How a clause renders as a formula. Disjunctive is the plain disjunction;
// Implicative writes negative literals as an antecedent conjunction.
enum class ClauseStyle { Disjunctive, Implicative };
Formula clause_formula(const Clause& c, ClauseStyle style);
// Conjunction of per-clause universally closed formulas.
Formula clauses_formula(const ClauseSet& cs, ClauseStyle style);

// Negation normal form. Second-order quantifiers pass through; True/False are
// kept and Not only wraps atoms. Pre: macro-free.
Formula nnf(const Formula& f);

// Replaces existential variables of an NNF first-order formula by Skolem
// terms over the universals in scope and standardises universal binder names
// apart. Introduced symbols are drawn from gen and reported in *introduced.
Formula skolemize(const Formula& f, SymbolGen& gen,
                  std::set<Symbol>* introduced);

// Clausification: NNF, Skolemization, quantifier stripping, distribution.
// Equisatisfiable always; equivalent (under per-clause universal closure)
// when the NNF has no existential quantifiers. Throws ResourceLimit when
// distribution would exceed the clause guard.
ClauseSet cnf(const Formula& f, SymbolGen& gen);
inline constexpr size_t kCnfClauseGuard = 100000;

// Disjunctive normal form by duality (negated clausification of the negated
// formula). Equi-valid always; equivalent when the NNF has no universal
// quantifiers.
Formula dnf(const Formula& f, SymbolGen& gen);

// Structure-preserving CNF: each non-literal subformula gets a definition
// predicate over its free variables, with only the polarity-required
// direction of the definition. The result is satisfiability-equivalent, and
// equivalent to the input once the introduced predicates are existentially
// second-order quantified.
ClauseSet definitional_cnf(const Formula& f, SymbolGen& gen,
                           std::vector<Symbol>* introduced);

// Simplifies in place: duplicate and reflexivity-trivial literals,
// tautologies, unit subsumption resolution, theta-subsumption, and purity
// deletion for predicates not in protect. Preserves equivalence up to
// existential quantification of the unprotected predicates.
void simplify_clauses(ClauseSet& cs, const std::set<Symbol>& protect);

// Canonical presentation order: ground clauses first, then by literal count,
// then lexicographically; within a clause negative literals precede positive
// ones. Used anywhere clause output must be deterministic.
void sort_clauses(ClauseSet& cs);
bool literal_less(const Literal& a, const Literal& b);

struct Unskolemized {
  Formula formula;
  // False when some Skolem symbol could not be rebuilt as a quantifier; the
  // formula then still contains that symbol.
  bool complete = true;
};

// Rebuilds existential quantifiers from Skolem symbols where occurrences
// permit: every occurrence of a Skolem symbol must apply it to the same
// distinct variables, and the argument sets of Skolems sharing a clause must
// form a chain. Clauses sharing no Skolems are closed independently.
Unskolemized unskolemize(const ClauseSet& cs, ClauseStyle style);

// Readable shaping of a first-order result: clausify, simplify with all input
// predicates protected, order canonically, un-Skolemize, and render clauses
// as implications. Equivalent to the input when un-Skolemization succeeds
// fully; otherwise equisatisfiable, with leftover Skolem symbols visible.
Formula shape_readable(const Formula& f, SymbolGen& gen);

// Bottom-up boolean simplification: unit laws, duplicate and complementary
// members, double negation, t = t, vacuous binders.
Formula simplify(const Formula& f);

}  // namespace folio
