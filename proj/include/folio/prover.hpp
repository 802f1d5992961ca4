// Refutation prover (clausal tableaux with connections), finite model search,
// and the validity decision built from the two.

#pragma once

#include "folio/model.hpp"
#include "folio/transform.hpp"

namespace folio {

struct ProverOptions {
  // Iterative deepening bound: maximum number of clauses along one branch,
  // counting the start clause as depth 1.
  size_t max_depth = 12;
  // Unification attempts allowed within one depth level; exceeding it yields
  // ResourceOut.
  size_t budget = 5'000'000;
};

// A node of the closed tableau. Exactly one of the two closure forms holds:
// children carry an instance of clause `extension`, or `reduction` names how
// many levels up the complementary ancestor literal sits (1 = parent).
struct TableauNode {
  Literal lit;
  std::optional<size_t> extension;
  std::vector<TableauNode> children;
  std::optional<size_t> reduction;
};

struct Proof {
  size_t start_clause = 0;
  std::vector<TableauNode> goals;  // instance of the start clause
};

enum class ProofOutcome {
  Proved,
  Exhausted,    // no proof within max_depth
  ResourceOut,  // budget hit before the depth bound was exhausted
};

struct ProveResult {
  ProofOutcome outcome = ProofOutcome::Exhausted;
  std::optional<Proof> proof;
  size_t depth_used = 0;  // deepening bound active at the end
  // True when the whole search space was explored without any branch being
  // cut by the depth bound; an Exhausted result is then definitive, so the
  // clause set is satisfiable.
  bool exhaustive = false;
};

// Appends reflexivity, symmetry, transitivity and per-symbol congruence
// clauses when the set mentions equality. In a colored set each axiom takes
// the color of the side whose symbol it mentions; pure equality axioms go to
// B. No-op on sets without equality.
void add_equality_axioms(ClauseSet& cs);

// Searches for a closed connection tableau over cs. Start clauses are tried
// in order: B-colored first, then all-negative, then the rest. Free clause
// variables are universal; callers add equality axioms beforehand if wanted.
ProveResult prove(const ClauseSet& cs, const ProverOptions& opts = {});

// Independent proof check: every inner node's children must match its
// extension clause under one substitution, every leaf's reduction target must
// be complementary, and sibling lists must descend from their clause.
bool check_tableau(const ClauseSet& cs, const Proof& p);

// Propositional satisfiability over DIMACS-style literals: atom v is the
// integer v, its negation -v (atoms 1-based, v <= num_vars). Returns a
// satisfying assignment indexed by atom-1, or nothing when unsatisfiable.
// Unit propagation and pure-literal elimination over a backtracking core.
std::optional<std::vector<bool>> dpll(const std::vector<std::vector<int>>& clauses,
                                      size_t num_vars);

struct ModelOptions {
  size_t max_size = 4;          // domain sizes 1..max_size are tried in turn
  size_t ground_limit = 200000; // ground clause guard per size
  size_t budget = 2'000'000;    // propositional search steps
};

enum class ModelOutcome {
  Found,
  NoneWithinSize,  // exhausted every size up to max_size
  Budget,
};

struct ModelResult {
  ModelOutcome outcome = ModelOutcome::Budget;
  std::optional<Model> model;
};

// Finite-model search for a first-order formula; free variables are read
// existentially. Every returned model is re-verified by direct evaluation.
ModelResult find_model(const Formula& f, const ModelOptions& opts = {});

enum class Validity { Valid, NotValid, Unknown };

struct ValidityOptions {
  ProverOptions prover;
  ModelOptions model;
};

struct ValidityResult {
  Validity status = Validity::Unknown;
  std::optional<Model> counterexample;  // set for NotValid
  std::optional<Proof> proof;           // set for Valid
};

// Validity of the universal closure: first a countermodel hunt on the
// negation, then a refutation attempt. Unknown when both give out.
ValidityResult decide_validity(const Formula& f, const ValidityOptions& opts = {});

}  // namespace folio
