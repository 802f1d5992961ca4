// Core syntax: symbols, terms, formulas.
//
// Terms and formulas are immutable trees with shared substructure; copying a
// Formula copies a pointer. All mutation happens by building new nodes, so
// values can be shared freely across threads and cached results never go
// stale.

#pragma once

#include <cstdint>
#include <functional>
#include <initializer_list>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace folio {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// A name. Whether it acts as a predicate, function, constant or variable is
// decided by the position it occupies, not by the symbol itself. Names that
// start with an upper-case letter or underscore are macro parameters.
class Symbol {
 public:
  Symbol() = default;
  explicit Symbol(std::string name) : name_(std::move(name)) {
    if (name_.empty()) throw Error("empty symbol name");
  }

  const std::string& name() const { return name_; }
  bool is_parameter() const {
    char c = name_[0];
    return (c >= 'A' && c <= 'Z') || c == '_';
  }

  auto operator<=>(const Symbol&) const = default;

 private:
  std::string name_;
};

inline Symbol sym(std::string name) { return Symbol(std::move(name)); }

// Deterministic fresh-name source. A fresh name is base + the smallest
// natural-number suffix not yet reserved; every name handed out is reserved.
class SymbolGen {
 public:
  void reserve(const Symbol& s) { used_.insert(s.name()); }
  bool is_reserved(const Symbol& s) const { return used_.count(s.name()) > 0; }

  Symbol fresh(const std::string& base) {
    for (std::uint64_t n = 1;; ++n) {
      std::string cand = base + std::to_string(n);
      if (used_.insert(cand).second) return Symbol(cand);
    }
  }

 private:
  std::set<std::string> used_;
};

class Term {
 public:
  enum class Kind { Var, App };

  static Term var(Symbol s) { return Term(Kind::Var, std::move(s), {}); }
  static Term app(Symbol f, std::vector<Term> args = {}) {
    return Term(Kind::App, std::move(f), std::move(args));
  }
  static Term constant(Symbol c) { return app(std::move(c)); }

  Kind kind() const { return node_->kind; }
  bool is_var() const { return node_->kind == Kind::Var; }
  const Symbol& head() const { return node_->head; }
  const std::vector<Term>& args() const { return node_->args; }

  bool operator==(const Term& o) const {
    if (node_ == o.node_) return true;
    if (node_->kind != o.node_->kind || node_->head != o.node_->head ||
        node_->args.size() != o.node_->args.size())
      return false;
    for (size_t i = 0; i < node_->args.size(); ++i)
      if (!(node_->args[i] == o.node_->args[i])) return false;
    return true;
  }
  bool operator!=(const Term& o) const { return !(*this == o); }

 private:
  struct Node {
    Kind kind;
    Symbol head;
    std::vector<Term> args;
  };
  Term(Kind k, Symbol h, std::vector<Term> a)
      : node_(std::make_shared<const Node>(Node{k, std::move(h), std::move(a)})) {}
  std::shared_ptr<const Node> node_;
};

class Formula;

// Argument of a macro call: a formula (atoms double as plain symbols and
// terms) or a bracketed symbol list.
struct MacroArg;

class Formula {
 public:
  enum class Kind {
    Atom,     // sym + terms
    Eq,       // terms[0] = terms[1]
    True,
    False,
    Not,      // kids[0]
    And,      // kids, n >= 2
    Or,       // kids, n >= 2
    Implies,  // kids[0] -> kids[1]
    Iff,      // kids[0] <-> kids[1]
    ForAll,   // binders over kids[0]
    Exists,
    ForAll2,  // second order: binders are predicate symbols
    Exists2,
    Lambda,   // binders are individual parameters of kids[0]
    Call,     // macro call: sym + margs
  };

  Formula() = default;  // empty handle; only valid as an assignment target

  static Formula atom(Symbol p, std::vector<Term> args = {});
  static Formula eq(Term l, Term r);
  static Formula truth(bool b);
  static Formula neg(Formula f);
  static Formula conj(std::vector<Formula> fs);   // n >= 2
  static Formula disj(std::vector<Formula> fs);   // n >= 2
  static Formula implies(Formula a, Formula b);
  static Formula iff(Formula a, Formula b);
  static Formula forall(std::vector<Symbol> vs, Formula body);
  static Formula exists(std::vector<Symbol> vs, Formula body);
  static Formula forall2(std::vector<Symbol> ps, Formula body);
  static Formula exists2(std::vector<Symbol> ps, Formula body);
  static Formula lambda(std::vector<Symbol> vs, Formula body);
  static Formula call(Symbol name, std::vector<MacroArg> args);

  // And/or of an arbitrary list: empty collapses to true/false, singleton to
  // the element itself.
  static Formula conj_of(std::vector<Formula> fs);
  static Formula disj_of(std::vector<Formula> fs);

  // Accessors are defined after Node below; nested Node is still incomplete
  // here.
  bool empty() const { return node_ == nullptr; }
  Kind kind() const;
  const Symbol& head() const;
  const std::vector<Term>& terms() const;
  const std::vector<Formula>& kids() const;
  const std::vector<Symbol>& binders() const;
  const std::vector<MacroArg>& call_args() const;
  const Formula& kid(size_t i = 0) const;
  bool is(Kind k) const;

  bool operator==(const Formula& o) const;
  bool operator!=(const Formula& o) const { return !(*this == o); }

  // Node layout is public so construction helpers in the implementation can
  // build nodes; everything else should go through the accessors.
  struct Node;

 private:
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

struct MacroArg {
  std::variant<Formula, std::vector<Symbol>> value;

  bool is_formula() const { return value.index() == 0; }
  const Formula& formula() const { return std::get<0>(value); }
  const std::vector<Symbol>& symbols() const { return std::get<1>(value); }
  bool operator==(const MacroArg&) const;
};

struct Formula::Node {
  Kind kind;
  Symbol sym;
  std::vector<Term> terms;
  std::vector<Formula> kids;
  std::vector<Symbol> binders;
  std::vector<MacroArg> margs;
};

inline Formula::Kind Formula::kind() const { return node_->kind; }
inline const Symbol& Formula::head() const { return node_->sym; }
inline const std::vector<Term>& Formula::terms() const { return node_->terms; }
inline const std::vector<Formula>& Formula::kids() const { return node_->kids; }
inline const std::vector<Symbol>& Formula::binders() const {
  return node_->binders;
}
inline const std::vector<MacroArg>& Formula::call_args() const {
  return node_->margs;
}
inline const Formula& Formula::kid(size_t i) const { return node_->kids[i]; }
inline bool Formula::is(Kind k) const { return node_ && node_->kind == k; }

// --- structural helpers -----------------------------------------------------

// Flattens nested And (resp. Or) chains into one n-ary node list.
std::vector<Formula> flatten(const Formula& f, Formula::Kind k);

// Right-nested binary chain over a binary connective kind. Empty input
// yields the connective's unit (true for And, false otherwise).
Formula chain(Formula::Kind k, std::vector<Formula> fs);

bool is_quantifier(Formula::Kind k);
bool is_second_order(const Formula& f);  // contains ForAll2/Exists2/Lambda/Call

// Term <-> formula coercions used when macro arguments shift positions.
// An atom p(t...) reads as the term p(t...); a Var x reads as the atom x.
std::optional<Term> formula_to_term(const Formula& f);
Formula term_to_formula(const Term& t);

// Collects every symbol occurring anywhere in f (heads, binders, variables).
void collect_symbols(const Formula& f, std::set<Symbol>& out);
void collect_symbols(const Term& t, std::set<Symbol>& out);
void reserve_symbols(const Formula& f, SymbolGen& gen);

// Capture-avoiding substitution of terms for free individual variables.
// Bound variables are renamed (base + number) when a range term would be
// captured. Substituting for a symbol that occurs in predicate position is an
// error; predicate replacement is macro application, not substitution.
Formula substitute(const Formula& f, const std::vector<std::pair<Symbol, Term>>& sub);
Term substitute(const Term& t, const std::vector<std::pair<Symbol, Term>>& sub);

// Marks occurrences of the given symbols as Var nodes inside terms. Used by
// the parser when it discovers the binder context of an identifier.
Formula bind_vars(const Formula& f, const std::set<Symbol>& vars);
Term bind_vars(const Term& t, const std::set<Symbol>& vars);

}  // namespace folio

template <>
struct std::hash<folio::Symbol> {
  size_t operator()(const folio::Symbol& s) const noexcept {
    return std::hash<std::string>()(s.name());
  }
};
