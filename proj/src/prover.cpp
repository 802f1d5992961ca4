#include "folio/prover.hpp"

#include <algorithm>
#include <cstdlib>
#include <functional>
#include <limits>

#include "folio/signature.hpp"
#include "folio/unify.hpp"

namespace folio {

// --- equality axioms ---------------------------------------------------------

namespace {

void term_functions(const Term& t, std::map<Symbol, size_t>& fns) {
  if (t.is_var()) return;
  if (!t.args().empty()) fns.emplace(t.head(), t.args().size());
  for (const Term& a : t.args()) term_functions(a, fns);
}

Literal eq_lit(bool pos, Term l, Term r) {
  return {pos, eq_symbol(), {std::move(l), std::move(r)}};
}

}  // namespace

void add_equality_axioms(ClauseSet& cs) {
  bool has_eq = false;
  for (const Clause& c : cs.clauses)
    for (const Literal& l : c.lits) has_eq = has_eq || l.is_eq();
  if (!has_eq) return;

  bool colored = false;
  std::set<Symbol> in_a, in_b;
  std::map<Symbol, size_t> preds, fns;
  for (const Clause& c : cs.clauses) {
    colored = colored || c.color.has_value();
    for (const Literal& l : c.lits) {
      if (!l.is_eq()) {
        preds.emplace(l.pred, l.args.size());
        if (c.color) (c.color == Color::A ? in_a : in_b).insert(l.pred);
      }
      for (const Term& t : l.args) {
        std::map<Symbol, size_t> local;
        term_functions(t, local);
        for (const auto& [f, n] : local) {
          fns.emplace(f, n);
          if (c.color) (c.color == Color::A ? in_a : in_b).insert(f);
        }
      }
    }
  }

  // Axioms over a symbol of one side keep that side's color; everything else
  // (pure equality, shared symbols) goes to B.
  auto color_for = [&](const std::optional<Symbol>& s) -> std::optional<Color> {
    if (!colored) return std::nullopt;
    if (s && in_a.count(*s) && !in_b.count(*s)) return Color::A;
    return Color::B;
  };

  Term x = Term::var(Symbol("x")), y = Term::var(Symbol("y")),
       z = Term::var(Symbol("z"));
  cs.clauses.push_back(Clause{{eq_lit(true, x, x)}, color_for(std::nullopt)});
  cs.clauses.push_back(
      Clause{{eq_lit(false, x, y), eq_lit(true, y, x)}, color_for(std::nullopt)});
  cs.clauses.push_back(
      Clause{{eq_lit(false, x, y), eq_lit(false, y, z), eq_lit(true, x, z)},
             color_for(std::nullopt)});

  auto tuple_vars = [](const std::string& base, size_t n) {
    std::vector<Term> out;
    for (size_t i = 1; i <= n; ++i)
      out.push_back(Term::var(Symbol(base + std::to_string(i))));
    return out;
  };

  for (const auto& [f, n] : fns) {
    std::vector<Term> xs = tuple_vars("x", n), ys = tuple_vars("y", n);
    Clause c;
    for (size_t i = 0; i < n; ++i) c.lits.push_back(eq_lit(false, xs[i], ys[i]));
    c.lits.push_back(eq_lit(true, Term::app(f, xs), Term::app(f, ys)));
    c.color = color_for(f);
    cs.clauses.push_back(std::move(c));
  }
  for (const auto& [p, n] : preds) {
    if (n == 0) continue;
    std::vector<Term> xs = tuple_vars("x", n), ys = tuple_vars("y", n);
    Clause c;
    for (size_t i = 0; i < n; ++i) c.lits.push_back(eq_lit(false, xs[i], ys[i]));
    c.lits.push_back({false, p, xs});
    c.lits.push_back({true, p, ys});
    c.color = color_for(p);
    cs.clauses.push_back(std::move(c));
  }
}

// --- tableau search ----------------------------------------------------------

namespace {

struct Searcher {
  const ClauseSet& cs;
  size_t budget;
  bool out = false;        // budget exhausted
  bool depth_cut = false;  // some extension was blocked by the bound
  size_t rename_counter = 0;
  Bindings b;

  struct PathEntry {
    const Literal* lit;
  };
  std::vector<PathEntry> path;

  bool spend() {
    if (budget == 0) {
      out = true;
      return false;
    }
    --budget;
    return true;
  }

  Clause rename(const Clause& c) {
    std::map<Symbol, Term> m;
    Clause out_c;
    out_c.color = c.color;
    std::function<Term(const Term&)> rt = [&](const Term& t) -> Term {
      if (t.is_var()) {
        auto it = m.find(t.head());
        if (it == m.end()) {
          it = m.emplace(t.head(),
                         Term::var(Symbol("_V" + std::to_string(++rename_counter))))
                   .first;
        }
        return it->second;
      }
      if (t.args().empty()) return t;
      std::vector<Term> args;
      for (const Term& a : t.args()) args.push_back(rt(a));
      return Term::app(t.head(), std::move(args));
    };
    for (const Literal& l : c.lits) {
      Literal nl = l;
      for (Term& t : nl.args) t = rt(t);
      out_c.lits.push_back(std::move(nl));
    }
    return out_c;
  }

  bool same_resolved(const Literal& a, const Literal& bl) {
    if (a.pos != bl.pos || a.pred != bl.pred || a.args.size() != bl.args.size())
      return false;
    for (size_t i = 0; i < a.args.size(); ++i)
      if (!(b.resolve(a.args[i]) == b.resolve(bl.args[i]))) return false;
    return true;
  }

  bool close_goal(TableauNode& node, size_t bound,
                  const std::function<bool()>& cont) {
    if (out) return false;
    // Regularity: a branch never repeats a literal.
    for (const PathEntry& pe : path)
      if (same_resolved(node.lit, *pe.lit)) return false;

    for (size_t i = path.size(); i-- > 0;) {
      const Literal& anc = *path[i].lit;
      if (anc.pos == node.lit.pos || anc.pred != node.lit.pred ||
          anc.args.size() != node.lit.args.size())
        continue;
      if (!spend()) return false;
      size_t mark = b.mark();
      if (unify_all(node.lit.args, anc.args, b)) {
        node.reduction = path.size() - i;
        node.extension.reset();
        node.children.clear();
        if (cont()) return true;
      }
      b.undo(mark);
      if (out) return false;
    }

    if (path.size() + 2 > bound) {
      depth_cut = true;
      return false;
    }
    for (size_t ci = 0; ci < cs.clauses.size(); ++ci) {
      const Clause& cl = cs.clauses[ci];
      for (size_t j = 0; j < cl.lits.size(); ++j) {
        if (cl.lits[j].pos == node.lit.pos || cl.lits[j].pred != node.lit.pred ||
            cl.lits[j].args.size() != node.lit.args.size())
          continue;
        if (!spend()) return false;
        Clause inst = rename(cl);
        size_t mark = b.mark();
        if (unify_all(node.lit.args, inst.lits[j].args, b)) {
          node.extension = ci;
          node.reduction.reset();
          node.children.clear();
          node.children.resize(inst.lits.size());
          std::vector<size_t> open;
          for (size_t k = 0; k < inst.lits.size(); ++k) {
            node.children[k].lit = inst.lits[k];
            if (k == j) {
              node.children[k].reduction = 1;  // the connection itself
            } else {
              open.push_back(k);
            }
          }
          path.push_back({&node.lit});
          bool ok = close_seq(node.children, open, 0, bound, cont);
          path.pop_back();
          if (ok) return true;
        }
        b.undo(mark);
        if (out) return false;
      }
    }
    return false;
  }

  bool close_seq(std::vector<TableauNode>& nodes, const std::vector<size_t>& open,
                 size_t at, size_t bound, const std::function<bool()>& cont) {
    if (at == open.size()) return cont();
    return close_goal(nodes[open[at]], bound, [&, this] {
      return close_seq(nodes, open, at + 1, bound, cont);
    });
  }

  void resolve_tree(TableauNode& n) {
    for (Term& t : n.lit.args) t = b.resolve(t);
    for (TableauNode& k : n.children) resolve_tree(k);
  }
};

}  // namespace

ProveResult prove(const ClauseSet& cs, const ProverOptions& opts) {
  ProveResult res;
  for (size_t i = 0; i < cs.clauses.size(); ++i) {
    if (cs.clauses[i].lits.empty()) {
      res.outcome = ProofOutcome::Proved;
      res.proof = Proof{i, {}};
      res.depth_used = 1;
      return res;
    }
  }
  if (cs.clauses.empty()) return res;

  // Start order: B-colored clauses, then all-negative ones, then the rest.
  std::vector<size_t> starts(cs.clauses.size());
  for (size_t i = 0; i < starts.size(); ++i) starts[i] = i;
  auto group = [&](size_t i) {
    const Clause& c = cs.clauses[i];
    if (c.color == Color::B) return 0;
    bool all_neg = std::all_of(c.lits.begin(), c.lits.end(),
                               [](const Literal& l) { return !l.pos; });
    return all_neg ? 1 : 2;
  };
  std::stable_sort(starts.begin(), starts.end(),
                   [&](size_t a, size_t b) { return group(a) < group(b); });

  Searcher s{cs, opts.budget, false, false, 0, {}, {}};
  for (size_t bound = 1; bound <= opts.max_depth; ++bound) {
    s.budget = opts.budget;  // the cap applies per depth level
    s.depth_cut = false;
    res.depth_used = bound;
    for (size_t si : starts) {
      Clause inst = s.rename(cs.clauses[si]);
      std::vector<TableauNode> goals(inst.lits.size());
      std::vector<size_t> open;
      for (size_t k = 0; k < inst.lits.size(); ++k) {
        goals[k].lit = inst.lits[k];
        open.push_back(k);
      }
      if (s.close_seq(goals, open, 0, bound, [] { return true; })) {
        for (TableauNode& g : goals) s.resolve_tree(g);
        res.outcome = ProofOutcome::Proved;
        res.proof = Proof{si, std::move(goals)};
        return res;
      }
      if (s.out) {
        res.outcome = ProofOutcome::ResourceOut;
        return res;
      }
    }
    if (!s.depth_cut) {
      // No branch was cut by the bound: the space is finite and fully
      // explored, so deeper rounds cannot differ.
      res.exhaustive = true;
      break;
    }
  }
  res.outcome = ProofOutcome::Exhausted;
  return res;
}

// --- proof checking ----------------------------------------------------------

namespace {

Term tilde_vars(const Term& t) {
  if (t.is_var()) return Term::var(Symbol("~" + t.head().name()));
  if (t.args().empty()) return t;
  std::vector<Term> args;
  for (const Term& a : t.args()) args.push_back(tilde_vars(a));
  return Term::app(t.head(), std::move(args));
}

// One substitution must take the clause to the node literals, positionally.
bool instance_of(const Clause& c, const std::vector<TableauNode>& nodes) {
  if (c.lits.size() != nodes.size()) return false;
  Bindings b;
  for (size_t i = 0; i < c.lits.size(); ++i) {
    const Literal& pat = c.lits[i];
    const Literal& got = nodes[i].lit;
    if (pat.pos != got.pos || pat.pred != got.pred ||
        pat.args.size() != got.args.size())
      return false;
    for (size_t k = 0; k < pat.args.size(); ++k)
      if (!match(tilde_vars(pat.args[k]), got.args[k], b)) return false;
  }
  return true;
}

bool check_node(const ClauseSet& cs, const TableauNode& n,
                std::vector<const Literal*>& ancestors) {
  if (n.reduction) {
    if (!n.children.empty() || n.extension) return false;
    size_t k = *n.reduction;
    if (k < 1 || k > ancestors.size()) return false;
    const Literal& anc = *ancestors[ancestors.size() - k];
    return anc.pos != n.lit.pos && anc.pred == n.lit.pred &&
           anc.args == n.lit.args;
  }
  if (!n.extension) return false;
  if (*n.extension >= cs.clauses.size()) return false;
  if (!instance_of(cs.clauses[*n.extension], n.children)) return false;
  ancestors.push_back(&n.lit);
  for (const TableauNode& c : n.children)
    if (!check_node(cs, c, ancestors)) {
      ancestors.pop_back();
      return false;
    }
  ancestors.pop_back();
  return true;
}

}  // namespace

bool check_tableau(const ClauseSet& cs, const Proof& p) {
  if (p.start_clause >= cs.clauses.size()) return false;
  if (!instance_of(cs.clauses[p.start_clause], p.goals)) return false;
  std::vector<const Literal*> ancestors;
  for (const TableauNode& g : p.goals)
    if (!check_node(cs, g, ancestors)) return false;
  return true;
}

// --- propositional core ------------------------------------------------------

namespace {

enum class Sat { Yes, No, Out };

struct Dpll {
  // Literals are +-(var+1), DIMACS style.
  std::vector<std::vector<int>> clauses;
  size_t nvars = 0;
  std::vector<signed char> asg;  // -1 unset, 0 false, 1 true
  std::vector<size_t> trail;
  size_t budget = 0;

  bool assign(size_t v, bool val) {
    asg[v] = val ? 1 : 0;
    trail.push_back(v);
    return true;
  }

  void undo_to(size_t mark) {
    while (trail.size() > mark) {
      asg[trail.back()] = -1;
      trail.pop_back();
    }
  }

  // Unit propagation to fixpoint; false on conflict.
  bool propagate() {
    bool again = true;
    while (again) {
      again = false;
      for (const std::vector<int>& c : clauses) {
        int unit = 0;
        size_t unassigned = 0;
        bool sat = false;
        for (int lit : c) {
          size_t v = static_cast<size_t>(std::abs(lit)) - 1;
          if (asg[v] < 0) {
            ++unassigned;
            unit = lit;
            if (unassigned > 1) break;
          } else if ((asg[v] == 1) == (lit > 0)) {
            sat = true;
            break;
          }
        }
        if (sat || unassigned > 1) continue;
        if (unassigned == 0) return false;
        if (budget == 0) return false;  // counted as conflict; Out flagged below
        --budget;
        size_t v = static_cast<size_t>(std::abs(unit)) - 1;
        assign(v, unit > 0);
        again = true;
      }
    }
    return true;
  }

  // Pure-literal elimination: a variable occurring with a single polarity
  // among the not-yet-satisfied clauses is assigned that polarity. Pure
  // assignments only satisfy clauses, so they conflict with nothing and
  // shrink no clause; repeating the pass handles pures exposed by the last.
  bool pure_pass() {
    std::vector<unsigned char> pol(nvars, 0);
    for (const std::vector<int>& c : clauses) {
      bool sat = false;
      for (int lit : c) {
        size_t v = static_cast<size_t>(std::abs(lit)) - 1;
        if (asg[v] >= 0 && (asg[v] == 1) == (lit > 0)) {
          sat = true;
          break;
        }
      }
      if (sat) continue;
      for (int lit : c) {
        size_t v = static_cast<size_t>(std::abs(lit)) - 1;
        if (asg[v] < 0) pol[v] |= lit > 0 ? 1 : 2;
      }
    }
    bool any = false;
    for (size_t v = 0; v < nvars; ++v) {
      if (pol[v] == 1 || pol[v] == 2) {
        assign(v, pol[v] == 1);
        any = true;
      }
    }
    return any;
  }

  Sat solve() {
    if (budget == 0) return Sat::Out;
    size_t mark = trail.size();
    if (!propagate()) {
      undo_to(mark);
      return budget == 0 ? Sat::Out : Sat::No;
    }
    while (pure_pass()) {
    }
    size_t v = 0;
    while (v < nvars && asg[v] >= 0) ++v;
    if (v == nvars) return Sat::Yes;
    for (int val = 1; val >= 0; --val) {
      if (budget == 0) {
        undo_to(mark);
        return Sat::Out;
      }
      --budget;
      size_t m2 = trail.size();
      assign(v, val == 1);
      Sat r = solve();
      if (r == Sat::Yes) return r;
      undo_to(m2);
      if (r == Sat::Out) {
        undo_to(mark);
        return r;
      }
    }
    undo_to(mark);
    return Sat::No;
  }
};

// --- clause flattening for grounding ----------------------------------------
//
// Target literal shapes: p(vars...), +-(f(vars...) = var), +-(var = var).
// Extraction uses the identity  C v L[t]  ==  C v ~(t = u) v L[u]  with u a
// fresh universal variable.

struct Flattener {
  size_t counter = 0;

  Term fresh_var() { return Term::var(Symbol("_u" + std::to_string(++counter))); }

  bool flat_args(std::vector<Term>& args, std::vector<Literal>& extra) {
    bool changed = false;
    for (Term& a : args) {
      if (a.is_var()) continue;
      Term u = fresh_var();
      extra.push_back({false, eq_symbol(), {a, u}});
      a = u;
      changed = true;
    }
    return changed;
  }

  Clause flatten(const Clause& in) {
    std::vector<Literal> work = in.lits;
    std::vector<Literal> done;
    while (!work.empty()) {
      Literal l = work.back();
      work.pop_back();
      std::vector<Literal> extra;
      if (!l.is_eq()) {
        flat_args(l.args, extra);
      } else {
        if (l.args[0].is_var() && !l.args[1].is_var())
          std::swap(l.args[0], l.args[1]);
        if (!l.args[0].is_var()) {
          std::vector<Term> inner = l.args[0].args();
          if (flat_args(inner, extra)) l.args[0] = Term::app(l.args[0].head(), inner);
          if (!l.args[1].is_var()) {
            Term u = fresh_var();
            extra.push_back({false, eq_symbol(), {l.args[1], u}});
            l.args[1] = u;
          }
        }
      }
      done.push_back(std::move(l));
      for (Literal& e : extra) work.push_back(std::move(e));
    }
    return Clause{std::move(done), in.color};
  }
};

struct GroundTables {
  size_t size = 0;
  std::map<std::pair<Symbol, std::vector<size_t>>, int> atom_ids;
  std::map<std::pair<Symbol, std::vector<size_t>>, std::vector<int>> fgraph;
  int next_id = 1;

  int atom(const Symbol& p, const std::vector<size_t>& tuple) {
    auto [it, fresh] = atom_ids.emplace(std::make_pair(p, tuple), next_id);
    if (fresh) ++next_id;
    return it->second;
  }
  int fval(const Symbol& f, const std::vector<size_t>& tuple, size_t val) {
    auto [it, fresh] =
        fgraph.emplace(std::make_pair(f, tuple), std::vector<int>{});
    if (fresh) {
      it->second.resize(size);
      for (size_t e = 0; e < size; ++e) it->second[e] = next_id++;
    }
    return it->second[val];
  }
};

}  // namespace

std::optional<std::vector<bool>> dpll(const std::vector<std::vector<int>>& clauses,
                                      size_t num_vars) {
  Dpll d;
  d.clauses = clauses;
  d.nvars = num_vars;
  d.asg.assign(num_vars, -1);
  d.budget = std::numeric_limits<size_t>::max();
  if (d.solve() != Sat::Yes) return std::nullopt;
  std::vector<bool> out(num_vars, false);
  for (size_t v = 0; v < num_vars; ++v) out[v] = d.asg[v] == 1;
  return out;
}

ModelResult find_model(const Formula& f, const ModelOptions& opts) {
  SignatureInfo sig = signature_of(f);
  Formula closed = f;
  if (!sig.free_vars.empty()) {
    // Free variables become constants of the same name.
    std::vector<std::pair<Symbol, Term>> sub;
    for (const Symbol& v : sig.free_vars) sub.emplace_back(v, Term::constant(v));
    closed = substitute(f, sub);
    sig = signature_of(closed);
  }

  SymbolGen gen;
  ClauseSet cs = cnf(closed, gen);
  Flattener fl;
  std::vector<Clause> flat;
  flat.reserve(cs.clauses.size());
  for (const Clause& c : cs.clauses) flat.push_back(fl.flatten(c));

  // Functions that need graphs: those appearing in flattened equalities.
  std::map<Symbol, size_t> graph_fns;
  for (const Clause& c : flat)
    for (const Literal& l : c.lits)
      if (l.is_eq() && !l.args[0].is_var())
        graph_fns.emplace(l.args[0].head(), l.args[0].args().size());

  bool budget_hit = false;
  for (size_t n = 1; n <= opts.max_size; ++n) {
    GroundTables tab;
    tab.size = n;
    Dpll solver;
    bool too_big = false;

    auto push_clause = [&](std::vector<int>&& c) {
      solver.clauses.push_back(std::move(c));
      if (solver.clauses.size() > opts.ground_limit) too_big = true;
    };

    for (const Clause& c : flat) {
      std::vector<Symbol> vars = clause_vars(c);
      double combos = 1;
      for (size_t i = 0; i < vars.size(); ++i) combos *= double(n);
      if (combos > double(opts.ground_limit)) {
        too_big = true;
        break;
      }
      std::map<Symbol, size_t> env;
      std::vector<size_t> idx(vars.size(), 0);
      for (;;) {
        for (size_t i = 0; i < vars.size(); ++i) env[vars[i]] = idx[i];
        std::vector<int> pc;
        bool satisfied = false;
        for (const Literal& l : c.lits) {
          if (!l.is_eq()) {
            std::vector<size_t> tuple;
            for (const Term& a : l.args) tuple.push_back(env.at(a.head()));
            int id = tab.atom(l.pred, tuple);
            pc.push_back(l.pos ? id : -id);
          } else if (l.args[0].is_var()) {
            bool equal = env.at(l.args[0].head()) == env.at(l.args[1].head());
            if (equal == l.pos) satisfied = true;
            // A false ground literal simply drops out.
          } else {
            std::vector<size_t> tuple;
            for (const Term& a : l.args[0].args())
              tuple.push_back(env.at(a.head()));
            int id = tab.fval(l.args[0].head(), tuple, env.at(l.args[1].head()));
            pc.push_back(l.pos ? id : -id);
          }
          if (satisfied) break;
        }
        if (!satisfied) push_clause(std::move(pc));
        if (too_big) break;
        size_t i = 0;
        while (i < idx.size() && ++idx[i] == n) idx[i++] = 0;
        if (i == idx.size() && !idx.empty()) break;
        if (idx.empty()) break;
      }
      if (too_big) break;
    }

    if (!too_big) {
      // Totality and functionality for every graphed function, over every
      // argument tuple mentioned or not: enumerate all tuples.
      for (const auto& [fn, arity] : graph_fns) {
        double combos = 1;
        for (size_t i = 0; i < arity; ++i) combos *= double(n);
        if (combos > double(opts.ground_limit)) {
          too_big = true;
          break;
        }
        std::vector<size_t> idx(arity, 0);
        for (;;) {
          std::vector<int> least;
          for (size_t e = 0; e < n; ++e) least.push_back(tab.fval(fn, idx, e));
          for (size_t e1 = 0; e1 < n; ++e1)
            for (size_t e2 = e1 + 1; e2 < n; ++e2)
              push_clause({-tab.fval(fn, idx, e1), -tab.fval(fn, idx, e2)});
          push_clause(std::move(least));
          if (too_big) break;
          size_t i = 0;
          while (i < idx.size() && ++idx[i] == n) idx[i++] = 0;
          if (i == idx.size() && !idx.empty()) break;
          if (idx.empty()) break;
        }
        if (too_big) break;
      }
    }

    if (too_big) {
      budget_hit = true;
      break;  // larger domains only ground bigger
    }

    solver.nvars = static_cast<size_t>(tab.next_id - 1);
    solver.asg.assign(solver.nvars, -1);
    solver.budget = opts.budget;
    Sat r = solver.solve();
    if (r == Sat::Out) {
      budget_hit = true;
      continue;
    }
    if (r == Sat::No) continue;

    Model m;
    m.size = n;
    for (const auto& [p, info] : sig.predicates)
      m.preds[{p, info.arity}] =
          std::vector<bool>(Model::table_size(n, info.arity), false);
    for (const auto& [fn, arity] : sig.functions)
      m.funcs[{fn, arity}] = std::vector<size_t>(Model::table_size(n, arity), 0);
    for (const Symbol& c : sig.constants)
      m.funcs[{c, 0}] = std::vector<size_t>(1, 0);

    auto tuple_index = [&](const std::vector<size_t>& tuple) {
      size_t ix = 0, mul = 1;
      for (size_t v : tuple) {
        ix += v * mul;
        mul *= n;
      }
      return ix;
    };
    for (const auto& [key, id] : tab.atom_ids) {
      auto it = m.preds.find({key.first, key.second.size()});
      if (it == m.preds.end()) continue;  // flattening-only symbol
      if (solver.asg[size_t(id) - 1] == 1) it->second[tuple_index(key.second)] = true;
    }
    for (const auto& [key, ids] : tab.fgraph) {
      auto it = m.funcs.find({key.first, key.second.size()});
      if (it == m.funcs.end()) continue;  // Skolem symbol
      for (size_t e = 0; e < n; ++e)
        if (solver.asg[size_t(ids[e]) - 1] == 1) {
          it->second[tuple_index(key.second)] = e;
          break;
        }
    }

    EvalBudget vb{100'000'000};
    try {
      if (!eval_formula(m, closed, {}, &vb))
        throw Error("model extraction failed verification");
    } catch (const BudgetExceeded&) {
      // Verification is best effort on very large formulas.
    }
    return {ModelOutcome::Found, std::move(m)};
  }
  return {budget_hit ? ModelOutcome::Budget : ModelOutcome::NoneWithinSize,
          std::nullopt};
}

// --- validity ----------------------------------------------------------------

ValidityResult decide_validity(const Formula& f, const ValidityOptions& opts) {
  SignatureInfo sig = signature_of(f);
  Formula closed = f;
  if (!sig.free_vars.empty())
    closed = Formula::forall(
        std::vector<Symbol>(sig.free_vars.begin(), sig.free_vars.end()), f);
  Formula negated = Formula::neg(closed);

  ValidityResult res;
  ModelResult mr = find_model(negated, opts.model);
  if (mr.outcome == ModelOutcome::Found) {
    res.status = Validity::NotValid;
    res.counterexample = std::move(mr.model);
    return res;
  }

  SymbolGen gen;
  ClauseSet cs = cnf(negated, gen);
  add_equality_axioms(cs);
  ProveResult pr = prove(cs, opts.prover);
  if (pr.outcome == ProofOutcome::Proved) {
    res.status = Validity::Valid;
    res.proof = std::move(pr.proof);
    return res;
  }
  if (pr.outcome == ProofOutcome::Exhausted && pr.exhaustive) {
    // The refutation space was finite and holds no proof, so the negation is
    // satisfiable even though no small model was found.
    res.status = Validity::NotValid;
    return res;
  }
  return res;
}

}  // namespace folio
