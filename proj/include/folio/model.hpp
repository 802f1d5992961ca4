// Finite interpretations and formula evaluation, including evaluation under
// second-order quantifiers (which range over all relations of the bound
// predicate's arity).

#pragma once

#include <cstdint>
#include <map>
#include <utility>

#include "folio/signature.hpp"
#include "folio/syntax.hpp"

namespace folio {

// Interpretation over the domain {0, ..., size-1}. Tables are indexed by the
// mixed-radix encoding of the argument tuple: index = sum args[i] * size^i.
// Free individual variables are interpreted as constants.
struct Model {
  size_t size = 1;
  std::map<std::pair<Symbol, size_t>, std::vector<bool>> preds;
  std::map<std::pair<Symbol, size_t>, std::vector<size_t>> funcs;

  static size_t table_size(size_t domain, size_t arity);
};

struct BudgetExceeded : Error {
  BudgetExceeded() : Error("evaluation budget exceeded") {}
};

// Decremented on every node visit and every quantifier instance; throws
// BudgetExceeded at zero. A null pointer means no budget.
struct EvalBudget {
  std::uint64_t remaining = 0;
  void spend() {
    if (remaining == 0) throw BudgetExceeded();
    --remaining;
  }
};

// Pre: f is macro-free; every predicate/function/constant of f is interpreted
// by m (or bound by a second-order quantifier); every individual variable is
// bound by a quantifier or present in env.
bool eval_formula(const Model& m, const Formula& f,
                  const std::map<Symbol, size_t>& env = {},
                  EvalBudget* budget = nullptr);

// Calls fn with every interpretation of sig over the given domain size, in a
// deterministic order. Stops early when fn returns false. Returns false if
// enumeration was stopped or the budget ran out.
bool enumerate_models(const SignatureInfo& sig, size_t size,
                      const std::function<bool(const Model&)>& fn,
                      EvalBudget* budget = nullptr);

}  // namespace folio
