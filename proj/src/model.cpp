#include "folio/model.hpp"

namespace folio {

size_t Model::table_size(size_t domain, size_t arity) {
  size_t n = 1;
  for (size_t i = 0; i < arity; ++i) n *= domain;
  return n;
}

namespace {

struct Evaluator {
  const Model& m;
  EvalBudget* budget;
  // Overlay for predicates bound by second-order quantifiers.
  std::map<std::pair<Symbol, size_t>, std::vector<bool>> overlay;
  std::map<Symbol, size_t> env;

  void spend() {
    if (budget) budget->spend();
  }

  size_t term(const Term& t) {
    spend();
    if (t.is_var()) {
      auto it = env.find(t.head());
      if (it == env.end())
        throw Error("unbound variable '" + t.head().name() + "' in evaluation");
      return it->second;
    }
    size_t idx = 0;
    size_t mult = 1;
    for (const Term& a : t.args()) {
      idx += term(a) * mult;
      mult *= m.size;
    }
    auto key = std::make_pair(t.head(), t.args().size());
    auto it = m.funcs.find(key);
    if (it == m.funcs.end()) {
      // A free variable used as a constant may also arrive via env.
      if (t.args().empty()) {
        auto ev = env.find(t.head());
        if (ev != env.end()) return ev->second;
      }
      throw Error("uninterpreted function '" + t.head().name() + "'");
    }
    return it->second[idx];
  }

  bool go(const Formula& f) {
    using K = Formula::Kind;
    spend();
    switch (f.kind()) {
      case K::Atom: {
        size_t idx = 0;
        size_t mult = 1;
        for (const Term& t : f.terms()) {
          idx += term(t) * mult;
          mult *= m.size;
        }
        auto key = std::make_pair(f.head(), f.terms().size());
        auto ov = overlay.find(key);
        if (ov != overlay.end()) return ov->second[idx];
        auto it = m.preds.find(key);
        if (it == m.preds.end())
          throw Error("uninterpreted predicate '" + f.head().name() + "'");
        return it->second[idx];
      }
      case K::Eq:
        return term(f.terms()[0]) == term(f.terms()[1]);
      case K::True: return true;
      case K::False: return false;
      case K::Not: return !go(f.kid());
      case K::And:
        for (const Formula& kid : f.kids())
          if (!go(kid)) return false;
        return true;
      case K::Or:
        for (const Formula& kid : f.kids())
          if (go(kid)) return true;
        return false;
      case K::Implies: return !go(f.kid(0)) || go(f.kid(1));
      case K::Iff: return go(f.kid(0)) == go(f.kid(1));
      case K::ForAll:
      case K::Exists:
        return first_order(f, 0);
      case K::ForAll2:
      case K::Exists2:
        return second_order(f, 0);
      case K::Lambda:
      case K::Call:
        throw Error("evaluation of a formula with unexpanded macros");
    }
    throw Error("unhandled formula kind");
  }

  bool first_order(const Formula& f, size_t i) {
    bool universal = f.is(Formula::Kind::ForAll);
    if (i == f.binders().size()) return go(f.kid());
    const Symbol& v = f.binders()[i];
    size_t saved_has = env.count(v) ? env[v] + 1 : 0;
    for (size_t d = 0; d < m.size; ++d) {
      spend();
      env[v] = d;
      bool r = first_order(f, i + 1);
      if (universal && !r) {
        restore(v, saved_has);
        return false;
      }
      if (!universal && r) {
        restore(v, saved_has);
        return true;
      }
    }
    restore(v, saved_has);
    return universal;
  }

  void restore(const Symbol& v, size_t saved_has) {
    if (saved_has == 0)
      env.erase(v);
    else
      env[v] = saved_has - 1;
  }

  bool second_order(const Formula& f, size_t i) {
    bool universal = f.is(Formula::Kind::ForAll2);
    if (i == f.binders().size()) return go(f.kid());
    const Symbol& p = f.binders()[i];
    auto arity = pred_arity_in(f.kid(), p);
    if (!arity) return second_order(f, i + 1);  // vacuous binder
    auto key = std::make_pair(p, *arity);
    auto saved = overlay.count(key) ? std::optional(overlay[key]) : std::nullopt;
    std::vector<bool> table(Model::table_size(m.size, *arity), false);
    for (;;) {
      spend();
      overlay[key] = table;
      bool r = second_order(f, i + 1);
      if (universal && !r) {
        restore_overlay(key, saved);
        return false;
      }
      if (!universal && r) {
        restore_overlay(key, saved);
        return true;
      }
      // Advance the table like a binary counter; stop after all-ones.
      size_t j = 0;
      while (j < table.size() && table[j]) {
        table[j] = false;
        ++j;
      }
      if (j == table.size()) break;
      table[j] = true;
    }
    restore_overlay(key, saved);
    return universal;
  }

  void restore_overlay(const std::pair<Symbol, size_t>& key,
                       const std::optional<std::vector<bool>>& saved) {
    if (saved)
      overlay[key] = *saved;
    else
      overlay.erase(key);
  }
};

}  // namespace

bool eval_formula(const Model& m, const Formula& f,
                  const std::map<Symbol, size_t>& env, EvalBudget* budget) {
  Evaluator ev{m, budget, {}, {}};
  ev.env = env;
  return ev.go(f);
}

bool enumerate_models(const SignatureInfo& sig, size_t size,
                      const std::function<bool(const Model&)>& fn,
                      EvalBudget* budget) {
  Model m;
  m.size = size;
  // Free variables and constants both become 0-ary functions.
  for (const auto& [p, info] : sig.predicates)
    m.preds[{p, info.arity}] =
        std::vector<bool>(Model::table_size(size, info.arity), false);
  for (const auto& [fname, arity] : sig.functions)
    m.funcs[{fname, arity}] =
        std::vector<size_t>(Model::table_size(size, arity), 0);
  for (const Symbol& c : sig.constants) m.funcs[{c, 0}] = {0};
  for (const Symbol& v : sig.free_vars) m.funcs[{v, 0}] = {0};

  for (;;) {
    if (budget) budget->spend();
    if (!fn(m)) return false;
    // Odometer: advance predicate tables as binary counters, then function
    // tables as base-|domain| counters.
    bool carried = true;
    for (auto& [key, table] : m.preds) {
      if (!carried) break;
      for (size_t j = 0; j < table.size() && carried; ++j) {
        if (table[j]) {
          table[j] = false;
        } else {
          table[j] = true;
          carried = false;
        }
      }
    }
    for (auto& [key, table] : m.funcs) {
      if (!carried) break;
      for (size_t j = 0; j < table.size() && carried; ++j) {
        if (table[j] + 1 < size) {
          ++table[j];
          carried = false;
        } else {
          table[j] = 0;
        }
      }
    }
    if (carried) return true;  // wrapped around: all models visited
  }
}

}  // namespace folio
