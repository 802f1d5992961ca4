// Vocabulary of a formula: predicates with polarities, functions, constants,
// free individual variables.

#pragma once

#include <map>
#include <set>

#include "folio/syntax.hpp"

namespace folio {

struct Polarity {
  bool pos = false;
  bool neg = false;
  void add(int sign) {
    if (sign >= 0) pos = true;
    if (sign <= 0) neg = true;
  }
  bool subset_of(const Polarity& o) const {
    return (!pos || o.pos) && (!neg || o.neg);
  }
};

struct PredicateInfo {
  size_t arity = 0;
  Polarity polarity;
};

struct SignatureInfo {
  std::map<Symbol, PredicateInfo> predicates;  // equality is not listed
  std::map<Symbol, size_t> functions;          // arity >= 1
  std::set<Symbol> constants;
  std::set<Symbol> free_vars;

  bool has_symbol(const Symbol& s) const {
    return predicates.count(s) || functions.count(s) || constants.count(s) ||
           free_vars.count(s);
  }
};

// Pre: f is macro-free (no Call, no Lambda). Throws on arity clashes.
SignatureInfo signature_of(const Formula& f);

// True when p occurs as a predicate outside the scope of any second-order
// binder for p.
bool pred_occurs_free(const Formula& f, const Symbol& p);

// Arity of p's predicate occurrences in f, if it has any.
std::optional<size_t> pred_arity_in(const Formula& f, const Symbol& p);

}  // namespace folio
