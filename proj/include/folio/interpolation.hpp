// Interpolant extraction from two-colored refutations.
//
// Given F entailing G, the clause forms of F (colored A) and ~G (colored B)
// are refuted together; a propositional interpolant is read off the closed
// tableau and generalized by abstracting one-sided terms into quantified
// variables. The result H satisfies F |= H, H |= G and uses only predicates
// and terms shared by both sides, with predicate polarities occurring in
// both.

#pragma once

#include <optional>
#include <set>

#include "folio/prover.hpp"
#include "folio/transform.hpp"

namespace folio {

// Turns a second-order entailment into a plain first-order one by renaming
// the quantified predicates apart and dropping the prefixes: F may carry an
// existential predicate prefix, G a universal one. Any interpolant of the
// result interpolates the original pair. Wrong-polarity prefixes are errors.
std::pair<Formula, Formula> reduce_so_entailment(const Formula& f,
                                                 const Formula& g,
                                                 SymbolGen& gen);

// Propositional interpolant of a closed colored tableau: every clause color
// must be set and the proof must be ground (freeze free variables first).
// The result I satisfies conj(A-clauses) |= I and I & conj(B-clauses) |= false.
Formula ground_ipol(const ClauseSet& cs, const Proof& p);

// Generalizes a ground interpolant: maximal subterms whose head is A-local
// become existentially quantified variables, B-local heads universally
// quantified ones; shared terms stay. Outer terms are abstracted before the
// subterms they expose, so their quantifiers end up outermost.
Formula lift_interpolant(const Formula& ground, const std::set<Symbol>& a_local,
                         const std::set<Symbol>& b_local, SymbolGen& gen);

struct InterpolationOptions {
  ProverOptions prover;
  bool shape = false;  // run the readable-form pipeline on the result
};

// Craig-Lyndon interpolant of F |= G, or nothing when the refutation search
// gives out. Second-order prefixes are reduced away first; shape errors from
// that reduction propagate.
std::optional<Formula> interpolate(const Formula& f, const Formula& g,
                                   SymbolGen& gen,
                                   const InterpolationOptions& opts = {});

// One interpolant per conjunct of an entailing conjunction: each H_i uses
// only symbols F_i shares with the other conjuncts and G, and the H_i
// together entail G. Empty when any binary step gives out.
std::optional<std::vector<Formula>> symmetric_interpolate(
    const std::vector<Formula>& fs, const Formula& g, SymbolGen& gen,
    const InterpolationOptions& opts = {});

}  // namespace folio
