#include "folio/macros.hpp"

#include <map>
#include <string>

#include "folio/signature.hpp"

namespace folio {

const char* builtin_name(BuiltinKind k) {
  switch (k) {
    case BuiltinKind::RenameFreePredicate:
      return "rename_free_predicate";
    case BuiltinKind::Arity:
      return "arity";
    case BuiltinKind::Implications:
      return "implications";
    case BuiltinKind::FreshSymbol:
      return "fresh_symbol";
  }
  return "";
}

std::optional<BuiltinKind> builtin_by_name(const std::string& name) {
  for (BuiltinKind k :
       {BuiltinKind::RenameFreePredicate, BuiltinKind::Arity,
        BuiltinKind::Implications, BuiltinKind::FreshSymbol})
    if (name == builtin_name(k)) return k;
  return std::nullopt;
}

size_t builtin_arg_count(BuiltinKind k) {
  return k == BuiltinKind::FreshSymbol ? 1 : 2;
}

size_t builtin_target_count(BuiltinKind k) {
  return k == BuiltinKind::RenameFreePredicate ? 2 : 1;
}

Formula rename_free_predicate(const Formula& f, const Symbol& from,
                              const Symbol& to) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::Atom:
      if (f.head() == from) return Formula::atom(to, f.terms());
      return f;
    case K::Eq:
    case K::True:
    case K::False:
      return f;
    case K::Not:
      return Formula::neg(rename_free_predicate(f.kid(), from, to));
    case K::And:
    case K::Or: {
      std::vector<Formula> ks;
      ks.reserve(f.kids().size());
      for (const Formula& kid : f.kids())
        ks.push_back(rename_free_predicate(kid, from, to));
      return f.kind() == K::And ? Formula::conj(std::move(ks))
                                : Formula::disj(std::move(ks));
    }
    case K::Implies:
      return Formula::implies(rename_free_predicate(f.kid(0), from, to),
                              rename_free_predicate(f.kid(1), from, to));
    case K::Iff:
      return Formula::iff(rename_free_predicate(f.kid(0), from, to),
                          rename_free_predicate(f.kid(1), from, to));
    case K::ForAll:
      return Formula::forall(f.binders(),
                             rename_free_predicate(f.kid(), from, to));
    case K::Exists:
      return Formula::exists(f.binders(),
                             rename_free_predicate(f.kid(), from, to));
    case K::Lambda:
      return Formula::lambda(f.binders(),
                             rename_free_predicate(f.kid(), from, to));
    case K::ForAll2:
    case K::Exists2: {
      for (const Symbol& b : f.binders())
        if (b == from) return f;  // shadowed, nothing below is free
      Formula body = rename_free_predicate(f.kid(), from, to);
      return f.kind() == K::ForAll2 ? Formula::forall2(f.binders(), body)
                                    : Formula::exists2(f.binders(), body);
    }
    case K::Call:
      throw Error("cannot rename inside an unexpanded macro call");
  }
  throw Error("unhandled formula kind");
}

Formula apply_lambda(const Formula& l, const std::vector<Term>& args) {
  if (!l.is(Formula::Kind::Lambda)) throw Error("apply_lambda: not a lambda");
  if (l.binders().size() != args.size())
    throw Error("lambda expects " + std::to_string(l.binders().size()) +
                " arguments, got " + std::to_string(args.size()));
  std::vector<std::pair<Symbol, Term>> sub;
  sub.reserve(args.size());
  for (size_t i = 0; i < args.size(); ++i)
    sub.emplace_back(l.binders()[i], args[i]);
  return substitute(l.kid(), sub);
}

namespace {

bool is_bare_param(const MacroArg& a) {
  return a.is_formula() && a.formula().is(Formula::Kind::Atom) &&
         a.formula().terms().empty() && a.formula().head().is_parameter();
}

void collect_params(const MacroArg& a, std::set<Symbol>& out) {
  if (a.is_formula()) {
    std::set<Symbol> all;
    collect_symbols(a.formula(), all);
    for (const Symbol& s : all)
      if (s.is_parameter()) out.insert(s);
  } else {
    for (const Symbol& s : a.symbols())
      if (s.is_parameter()) out.insert(s);
  }
}

// Arity of p's free occurrences; throws when they disagree.
void arity_scan(const Formula& f, const Symbol& p, std::optional<size_t>& out) {
  using K = Formula::Kind;
  if (f.kind() == K::Atom) {
    if (f.head() == p) {
      if (out && *out != f.terms().size())
        throw Error("predicate " + p.name() + " occurs with two arities");
      out = f.terms().size();
    }
    return;
  }
  if (f.kind() == K::ForAll2 || f.kind() == K::Exists2)
    for (const Symbol& b : f.binders())
      if (b == p) return;
  for (const Formula& kid : f.kids()) arity_scan(kid, p, out);
}

}  // namespace

void MacroRegistry::define(MacroDef def) {
  std::set<Symbol> bound;
  for (const MacroArg& p : def.params) {
    if (is_bare_param(p)) {
      bound.insert(p.formula().head());
      continue;
    }
    std::set<Symbol> stray;
    collect_params(p, stray);
    if (!stray.empty())
      throw Error("pattern of " + def.name.name() +
                  " nests parameter " + stray.begin()->name() +
                  " inside a structure; patterns are a bare parameter or ground");
  }
  for (const WhereBinding& w : def.where) {
    if (w.builtin.args.size() != builtin_arg_count(w.builtin.kind))
      throw Error(std::string(builtin_name(w.builtin.kind)) + " takes " +
                  std::to_string(builtin_arg_count(w.builtin.kind)) +
                  " arguments");
    if (w.targets.size() != builtin_target_count(w.builtin.kind))
      throw Error(std::string(builtin_name(w.builtin.kind)) + " produces " +
                  std::to_string(builtin_target_count(w.builtin.kind)) +
                  " values");
    std::set<Symbol> used;
    for (const MacroArg& a : w.builtin.args) collect_params(a, used);
    for (const Symbol& s : used)
      if (!bound.count(s))
        throw Error("parameter " + s.name() + " is unbound in a where clause of " +
                    def.name.name());
    for (const Symbol& t : w.targets) {
      if (!t.is_parameter())
        throw Error("where target " + t.name() + " is not a parameter");
      if (!bound.insert(t).second)
        throw Error("where clause of " + def.name.name() + " rebinds " + t.name());
    }
  }
  defs_.push_back(std::move(def));
}

void MacroRegistry::remove_origin(const std::string& origin) {
  std::erase_if(defs_, [&](const MacroDef& d) { return d.origin == origin; });
}

std::vector<const MacroDef*> MacroRegistry::lookup(const Symbol& name,
                                                   size_t arity) const {
  std::vector<const MacroDef*> out;
  for (const MacroDef& d : defs_)
    if (d.name == name && d.params.size() == arity) out.push_back(&d);
  return out;
}

bool MacroRegistry::known(const Symbol& name, size_t arity) const {
  for (const MacroDef& d : defs_)
    if (d.name == name && d.params.size() == arity) return true;
  return false;
}

void MacroRegistry::reserve_into(SymbolGen& gen) const {
  auto arg = [&](const MacroArg& a) {
    if (a.is_formula())
      reserve_symbols(a.formula(), gen);
    else
      for (const Symbol& s : a.symbols()) gen.reserve(s);
  };
  for (const MacroDef& d : defs_) {
    gen.reserve(d.name);
    for (const MacroArg& p : d.params) arg(p);
    reserve_symbols(d.body, gen);
    for (const WhereBinding& w : d.where) {
      for (const Symbol& t : w.targets) gen.reserve(t);
      for (const MacroArg& a : w.builtin.args) arg(a);
    }
  }
}

namespace {

struct Env {
  std::map<Symbol, MacroArg> vals;
  std::map<Symbol, size_t> arities;
};

struct Expander {
  const MacroRegistry& reg;
  SymbolGen& gen;
  size_t max_depth;
  size_t depth = 0;

  Formula walk(const Formula& f) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::Atom: {
        if (reg.known(f.head(), f.terms().size())) {
          std::vector<MacroArg> args;
          args.reserve(f.terms().size());
          for (const Term& t : f.terms())
            args.push_back(MacroArg{term_to_formula(t)});
          return expand_call(f.head(), args);
        }
        return f;
      }
      case K::Eq:
      case K::True:
      case K::False:
        return f;
      case K::Not:
        return Formula::neg(walk(f.kid()));
      case K::And:
      case K::Or: {
        std::vector<Formula> ks;
        ks.reserve(f.kids().size());
        for (const Formula& kid : f.kids()) ks.push_back(walk(kid));
        return f.kind() == K::And ? Formula::conj_of(std::move(ks))
                                  : Formula::disj_of(std::move(ks));
      }
      case K::Implies:
        return Formula::implies(walk(f.kid(0)), walk(f.kid(1)));
      case K::Iff:
        return Formula::iff(walk(f.kid(0)), walk(f.kid(1)));
      case K::ForAll:
        return Formula::forall(f.binders(), walk(f.kid()));
      case K::Exists:
        return Formula::exists(f.binders(), walk(f.kid()));
      case K::ForAll2:
        return Formula::forall2(f.binders(), walk(f.kid()));
      case K::Exists2:
        return Formula::exists2(f.binders(), walk(f.kid()));
      case K::Lambda:
        throw Error("lambda outside predicate position");
      case K::Call: {
        if (!reg.known(f.head(), f.call_args().size()))
          throw Error("unknown macro " + f.head().name() + "/" +
                      std::to_string(f.call_args().size()));
        return expand_call(f.head(), f.call_args());
      }
    }
    throw Error("unhandled formula kind");
  }

  Formula expand_call(const Symbol& name, const std::vector<MacroArg>& args) {
    if (++depth > max_depth)
      throw Error("macro expansion nested deeper than " +
                  std::to_string(max_depth) + " at " + name.name());
    const MacroDef* chosen = nullptr;
    Env env;
    for (const MacroDef* d : reg.lookup(name, args.size())) {
      Env trial;
      bool ok = true;
      for (size_t i = 0; i < args.size() && ok; ++i)
        ok = match(d->params[i], args[i], trial);
      if (ok) {
        chosen = d;
        env = std::move(trial);
        break;
      }
    }
    if (!chosen)
      throw Error("no definition of " + name.name() + "/" +
                  std::to_string(args.size()) + " matches the arguments");
    for (const WhereBinding& w : chosen->where) eval_builtin(w, env);
    Formula out = walk(subst_formula(chosen->body, env));
    --depth;
    return out;
  }

  bool match(const MacroArg& pat, const MacroArg& arg, Env& env) {
    if (is_bare_param(pat)) {
      const Symbol& p = pat.formula().head();
      auto it = env.vals.find(p);
      if (it != env.vals.end()) return it->second == arg;
      env.vals.emplace(p, arg);
      return true;
    }
    return pat == arg;
  }

  void bind(const Symbol& t, MacroArg v, Env& env) {
    if (!env.vals.emplace(t, std::move(v)).second)
      throw Error("parameter " + t.name() + " bound twice");
  }

  MacroArg lookup_or_fresh(const Symbol& p, Env& env) {
    auto it = env.vals.find(p);
    if (it != env.vals.end()) return it->second;
    std::string base = p.name();
    size_t i = 0;
    while (i < base.size() && base[i] == '_') ++i;
    base = base.substr(i);
    if (base.empty()) base = "v";
    if (base[0] >= 'A' && base[0] <= 'Z')
      base[0] = static_cast<char>(base[0] - 'A' + 'a');
    MacroArg v{Formula::atom(gen.fresh(base))};
    env.vals.emplace(p, v);
    return v;
  }

  // One name in a symbol-list or binder position: plain symbols stand for
  // themselves, a parameter contributes its symbol or splices its list.
  void push_symbol(const Symbol& s, Env& env, std::vector<Symbol>& out) {
    if (!s.is_parameter()) {
      out.push_back(s);
      return;
    }
    MacroArg v = lookup_or_fresh(s, env);
    if (v.is_formula()) {
      const Formula& f = v.formula();
      if (f.is(Formula::Kind::Atom) && f.terms().empty()) {
        out.push_back(f.head());
        return;
      }
      throw Error("parameter " + s.name() + " does not name a symbol");
    }
    for (const Symbol& e : v.symbols()) {
      if (e.is_parameter())
        throw Error("parameter " + e.name() + " inside a bound list");
      out.push_back(e);
    }
  }

  Term param_term(const Symbol& p, Env& env) {
    MacroArg v = lookup_or_fresh(p, env);
    if (v.is_formula())
      if (auto t = formula_to_term(v.formula())) return *t;
    throw Error("parameter " + p.name() + " does not hold a term");
  }

  Term subst_term(const Term& t, Env& env) {
    if (t.is_var()) {
      if (!t.head().is_parameter()) return t;
      return param_term(t.head(), env);
    }
    std::vector<Term> as;
    as.reserve(t.args().size());
    for (const Term& a : t.args()) as.push_back(subst_term(a, env));
    if (!t.head().is_parameter()) return Term::app(t.head(), std::move(as));
    Term v = param_term(t.head(), env);
    if (as.empty()) return v;
    if (!v.is_var() && v.args().empty())
      return Term::app(v.head(), std::move(as));
    throw Error("parameter " + t.head().name() +
                " used with arguments is not a function symbol");
  }

  Formula subst_formula(const Formula& f, Env& env) {
    using K = Formula::Kind;
    switch (f.kind()) {
      case K::Atom: {
        std::vector<Term> ts;
        ts.reserve(f.terms().size());
        for (const Term& t : f.terms()) ts.push_back(subst_term(t, env));
        if (!f.head().is_parameter())
          return Formula::atom(f.head(), std::move(ts));
        MacroArg v = lookup_or_fresh(f.head(), env);
        if (!v.is_formula())
          throw Error("parameter " + f.head().name() +
                      " holds a list but is used as a formula");
        const Formula& vf = v.formula();
        if (ts.empty()) return vf;
        if (vf.is(K::Lambda)) return apply_lambda(vf, ts);
        if (vf.is(K::Atom) && vf.terms().empty())
          return Formula::atom(vf.head(), std::move(ts));
        throw Error("parameter " + f.head().name() + " is not a predicate");
      }
      case K::Eq:
        return Formula::eq(subst_term(f.terms()[0], env),
                           subst_term(f.terms()[1], env));
      case K::True:
      case K::False:
        return f;
      case K::Not:
        return Formula::neg(subst_formula(f.kid(), env));
      case K::And:
      case K::Or: {
        std::vector<Formula> ks;
        ks.reserve(f.kids().size());
        for (const Formula& kid : f.kids()) ks.push_back(subst_formula(kid, env));
        return f.kind() == K::And ? Formula::conj_of(std::move(ks))
                                  : Formula::disj_of(std::move(ks));
      }
      case K::Implies:
        return Formula::implies(subst_formula(f.kid(0), env),
                                subst_formula(f.kid(1), env));
      case K::Iff:
        return Formula::iff(subst_formula(f.kid(0), env),
                            subst_formula(f.kid(1), env));
      case K::ForAll:
      case K::Exists:
      case K::ForAll2:
      case K::Exists2:
      case K::Lambda: {
        std::vector<Symbol> bs;
        for (const Symbol& b : f.binders()) push_symbol(b, env, bs);
        Formula body = subst_formula(f.kid(), env);
        switch (f.kind()) {
          case K::ForAll:
            return Formula::forall(std::move(bs), std::move(body));
          case K::Exists:
            return Formula::exists(std::move(bs), std::move(body));
          case K::ForAll2:
            return Formula::forall2(std::move(bs), std::move(body));
          case K::Exists2:
            return Formula::exists2(std::move(bs), std::move(body));
          default:
            return Formula::lambda(std::move(bs), std::move(body));
        }
      }
      case K::Call: {
        Symbol h = f.head();
        if (h.is_parameter()) {
          std::vector<Symbol> one;
          push_symbol(h, env, one);
          if (one.size() != 1)
            throw Error("parameter " + h.name() + " is not a macro name");
          h = one[0];
        }
        std::vector<MacroArg> args;
        args.reserve(f.call_args().size());
        for (const MacroArg& a : f.call_args()) {
          if (a.is_formula()) {
            args.push_back(MacroArg{subst_formula(a.formula(), env)});
          } else {
            std::vector<Symbol> ss;
            for (const Symbol& s : a.symbols()) push_symbol(s, env, ss);
            args.push_back(MacroArg{std::move(ss)});
          }
        }
        return Formula::call(std::move(h), std::move(args));
      }
    }
    throw Error("unhandled formula kind");
  }

  Formula resolve_formula(const MacroArg& a, Env& env) {
    if (!a.is_formula()) throw Error("expected a formula argument");
    // Expanded before the builtin runs, so renaming and arity inspection see
    // the whole formula behind a macro name like kb1.
    return walk(subst_formula(a.formula(), env));
  }

  Symbol resolve_symbol(const MacroArg& a, Env& env) {
    if (!a.is_formula()) throw Error("expected a symbol argument");
    Formula f = subst_formula(a.formula(), env);
    if (f.is(Formula::Kind::Atom) && f.terms().empty()) return f.head();
    throw Error("argument does not name a symbol");
  }

  std::vector<Symbol> resolve_symbol_list(const MacroArg& a, Env& env) {
    std::vector<Symbol> out;
    if (a.is_formula()) {
      const Formula& f = a.formula();
      if (f.is(Formula::Kind::Atom) && f.terms().empty())
        push_symbol(f.head(), env, out);
      else
        throw Error("expected a predicate list");
    } else {
      for (const Symbol& s : a.symbols()) push_symbol(s, env, out);
    }
    return out;
  }

  size_t pair_arity(const Symbol& p, const Symbol& q, Env& env) {
    auto ip = env.arities.find(p);
    auto iq = env.arities.find(q);
    if (ip != env.arities.end() && iq != env.arities.end() &&
        ip->second != iq->second)
      throw Error("implications: " + p.name() + " and " + q.name() +
                  " differ in arity");
    if (ip != env.arities.end()) return ip->second;
    if (iq != env.arities.end()) return iq->second;
    throw Error("implications: arity of " + p.name() +
                " unknown; bind it with arity or rename_free_predicate first");
  }

  void eval_builtin(const WhereBinding& w, Env& env) {
    const std::vector<MacroArg>& as = w.builtin.args;
    switch (w.builtin.kind) {
      case BuiltinKind::RenameFreePredicate: {
        Formula f = resolve_formula(as[0], env);
        Symbol p = resolve_symbol(as[1], env);
        std::optional<size_t> ar;
        arity_scan(f, p, ar);
        if (!ar)
          throw Error("predicate " + p.name() + " does not occur free");
        Symbol fresh = gen.fresh(p.name());
        env.arities[p] = *ar;
        env.arities[fresh] = *ar;
        bind(w.targets[0], MacroArg{rename_free_predicate(f, p, fresh)}, env);
        bind(w.targets[1], MacroArg{Formula::atom(fresh)}, env);
        break;
      }
      case BuiltinKind::Arity: {
        Symbol p = resolve_symbol(as[0], env);
        Formula f = resolve_formula(as[1], env);
        std::optional<size_t> ar;
        arity_scan(f, p, ar);
        if (!ar)
          throw Error("predicate " + p.name() + " does not occur free");
        env.arities[p] = *ar;
        bind(w.targets[0],
             MacroArg{Formula::atom(Symbol(std::to_string(*ar)))}, env);
        break;
      }
      case BuiltinKind::Implications: {
        std::vector<Symbol> ps = resolve_symbol_list(as[0], env);
        std::vector<Symbol> qs = resolve_symbol_list(as[1], env);
        if (ps.size() != qs.size())
          throw Error("implications: lists differ in length");
        std::vector<Formula> parts;
        for (size_t i = 0; i < ps.size(); ++i) {
          size_t k = pair_arity(ps[i], qs[i], env);
          if (k == 0) {
            parts.push_back(Formula::implies(Formula::atom(ps[i]),
                                             Formula::atom(qs[i])));
            continue;
          }
          std::vector<Symbol> vs;
          std::vector<Term> ts;
          for (size_t j = 0; j < k; ++j) {
            Symbol v(k == 1 ? "x" : "x" + std::to_string(j + 1));
            vs.push_back(v);
            ts.push_back(Term::var(v));
          }
          parts.push_back(Formula::forall(
              vs, Formula::implies(Formula::atom(ps[i], ts),
                                   Formula::atom(qs[i], ts))));
        }
        bind(w.targets[0], MacroArg{Formula::conj_of(std::move(parts))}, env);
        break;
      }
      case BuiltinKind::FreshSymbol: {
        Symbol base = resolve_symbol(as[0], env);
        bind(w.targets[0], MacroArg{Formula::atom(gen.fresh(base.name()))},
             env);
        break;
      }
    }
  }
};

void check_residue(const Formula& f) {
  using K = Formula::Kind;
  if (f.is(K::Call)) throw Error("unexpanded call survived expansion");
  if (f.is(K::Lambda)) throw Error("lambda outside predicate position");
  std::set<Symbol> all;
  collect_symbols(f, all);
  for (const Symbol& s : all)
    if (s.is_parameter())
      throw Error("unexpanded parameter " + s.name() + " in result");
  for (const Formula& kid : f.kids()) check_residue(kid);
}

}  // namespace

Formula expand(const MacroRegistry& reg, const Formula& f, SymbolGen& gen,
               const ExpandOptions& opts) {
  reserve_symbols(f, gen);
  reg.reserve_into(gen);
  Expander ex{reg, gen, opts.max_depth};
  Formula out = ex.walk(f);
  check_residue(out);
  return out;
}

}  // namespace folio
