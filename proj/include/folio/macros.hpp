// Macro definitions and expansion.
//
// A definition binds a name and argument patterns to a body formula, plus
// optional computed "where" bindings evaluated by a fixed set of builtins.
// Expansion rewrites every call (including atoms whose name/arity is
// registered) until none remain.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "folio/syntax.hpp"

namespace folio {

// Computed bindings available in where clauses. Each builtin takes its
// written arguments and produces one value per target (RenameFreePredicate
// produces two: the renamed formula and the fresh predicate name).
enum class BuiltinKind {
  RenameFreePredicate,  // rename_free_predicate(F, P): F[P -> P'], P' fresh
  Arity,                // arity(P, F): arity of P's free occurrences in F
  Implications,         // implications(Ps, Qs): conj of all(x..., Ps_i -> Qs_i)
  FreshSymbol,          // fresh_symbol(base): unused symbol derived from base
};

const char* builtin_name(BuiltinKind k);
std::optional<BuiltinKind> builtin_by_name(const std::string& name);
size_t builtin_arg_count(BuiltinKind k);
size_t builtin_target_count(BuiltinKind k);

struct BuiltinExpr {
  BuiltinKind kind;
  std::vector<MacroArg> args;
};

// One where clause, written `T = builtin(args)` or `(T1, T2) = builtin(args)`.
struct WhereBinding {
  std::vector<Symbol> targets;  // parameter symbols receiving the results
  BuiltinExpr builtin;
};

// Patterns are macro arguments: a bare parameter symbol binds anything, any
// other (ground) shape must be structurally equal to the incoming argument.
struct MacroDef {
  Symbol name;
  std::vector<MacroArg> params;
  Formula body;
  std::vector<WhereBinding> where;
  std::string origin;  // defining document; empty for programmatic definitions
};

class MacroRegistry {
 public:
  // Validates and appends. A later definition with the same name and arity is
  // tried only where earlier patterns fail to match.
  void define(MacroDef def);

  // Drops every definition carrying this origin tag; reloading a document is
  // remove_origin followed by define for each of its blocks.
  void remove_origin(const std::string& origin);

  bool known(const Symbol& name, size_t arity) const;
  std::vector<const MacroDef*> lookup(const Symbol& name, size_t arity) const;
  const std::vector<MacroDef>& defs() const { return defs_; }

  // Marks every symbol mentioned by any definition as taken, so generated
  // names never collide with registry vocabulary.
  void reserve_into(SymbolGen& gen) const;

 private:
  std::vector<MacroDef> defs_;
};

struct ExpandOptions {
  size_t max_depth = 512;  // nesting bound; exceeding it signals runaway recursion
};

// Replaces every macro call in f, outside-in: arguments are substituted into
// the selected body unexpanded and the instantiated body is then expanded.
// Where bindings run left to right; their formula arguments are expanded
// before the builtin computes. Parameters that end up unbound receive fresh
// symbols. The result contains no call, lambda or parameter symbol.
Formula expand(const MacroRegistry& reg, const Formula& f, SymbolGen& gen,
               const ExpandOptions& opts = {});

// Capture-avoiding beta reduction of a Lambda formula applied to terms.
Formula apply_lambda(const Formula& l, const std::vector<Term>& args);

// Renames free occurrences of predicate `from` (atoms not shadowed by a
// second-order binder) to `to`. Terms are untouched: a constant or function
// spelled like `from` keeps its name.
Formula rename_free_predicate(const Formula& f, const Symbol& from,
                              const Symbol& to);

}  // namespace folio
