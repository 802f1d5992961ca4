// First-order unification and one-way matching over a backtrackable binding
// store.

#pragma once

#include <map>

#include "folio/syntax.hpp"

namespace folio {

class Bindings {
 public:
  // Follows variable bindings until a non-variable or an unbound variable.
  Term deref(Term t) const {
    while (t.is_var()) {
      auto it = map_.find(t.head());
      if (it == map_.end()) return t;
      t = it->second;
    }
    return t;
  }

  void bind(const Symbol& v, const Term& t) {
    map_.emplace(v, t);
    trail_.push_back(v);
  }

  bool bound(const Symbol& v) const { return map_.count(v) > 0; }

  size_t mark() const { return trail_.size(); }
  void undo(size_t mark) {
    while (trail_.size() > mark) {
      map_.erase(trail_.back());
      trail_.pop_back();
    }
  }

  // Fully applies the current bindings to t.
  Term resolve(const Term& t) const;

 private:
  std::map<Symbol, Term> map_;
  std::vector<Symbol> trail_;
};

// Unification with occurs check. On failure the bindings are restored.
bool unify(const Term& a, const Term& b, Bindings& b_);
bool unify_all(const std::vector<Term>& as, const std::vector<Term>& bs,
               Bindings& b_);

// One-way matching: only variables of the pattern may be bound. Variables of
// the target are treated as constants, so callers must standardise apart.
bool match(const Term& pattern, const Term& target, Bindings& b_);
bool match_all(const std::vector<Term>& ps, const std::vector<Term>& ts,
               Bindings& b_);

}  // namespace folio
