// Second-order quantifier elimination: Ackermann-based rewriting for
// predicate quantifiers, ground-atom forgetting by expansion, and a finite
// brute-force equivalence oracle used to check elimination results.

#pragma once

#include <optional>
#include <set>
#include <vector>

#include "folio/syntax.hpp"
#include "folio/transform.hpp"

namespace folio {

// One application site of Ackermann's equivalence. With `rest_positive`
// false this stands for exists2(pred, all(params, definition -> pred(params))
// & rest) where pred occurs only negatively in rest; with true for the dual
// all(params, pred(params) -> definition) & rest with pred only positive.
struct AckermannForm {
  Symbol pred;
  std::vector<Symbol> params;  // distinct; arity of pred
  Formula definition;          // over params, free of pred
  Formula rest;
  bool rest_positive = false;
};

// Replaces every pred atom of `rest` by the instantiated definition. The
// result is free of pred and equivalent to the quantified input form.
// Throws when the form's invariants fail (pred inside the definition, a
// wrongly signed occurrence in rest, arity mismatch).
Formula ackermann_rewrite(const AckermannForm& af);

struct EliminationOptions {
  // Run the readable clause shaping over the final result.
  bool shape_result = false;
};

struct EliminationResult {
  // Exactly one of result/stuck is set: a first-order formula free of the
  // eliminated predicates, or the subformula that resisted elimination.
  std::optional<Formula> result;
  std::optional<Formula> stuck;
  // Skolem symbols still present in result when un-Skolemization was partial.
  std::set<Symbol> skolems;

  bool ok() const { return result.has_value(); }
};

// Eliminates every predicate quantifier, innermost first; universal ones go
// through the dual existential problem. Pre: macro-free input.
EliminationResult eliminate(const Formula& f, SymbolGen& gen,
                            const EliminationOptions& opts = {});

// Forgetting a ground atom by two-way expansion; always succeeds. The result
// does not constrain the atom: either truth value for it yields an
// equivalent formula. Pre: atom is a ground Atom, f is first-order.
Formula forget_ground_atom(const Formula& f, const Formula& atom);

enum class SoEquivalence { Equivalent, Distinct, Overflow };

// Brute-force equivalence over all domains of size 1..max_size and all
// interpretations of the free symbols, with predicate quantifiers ranging
// over every relation of the right arity. Distinct reports a genuine
// disagreement; Overflow means the search exceeded `budget` evaluation
// steps before covering every case.
SoEquivalence so_equivalent_finite(const Formula& f, const Formula& g,
                                   size_t max_size,
                                   size_t budget = 10'000'000);

}  // namespace folio
