#include "folio/unify.hpp"

namespace folio {

Term Bindings::resolve(const Term& t) const {
  Term d = deref(t);
  if (d.is_var()) return d;
  if (d.args().empty()) return d;
  std::vector<Term> args;
  args.reserve(d.args().size());
  for (const Term& a : d.args()) args.push_back(resolve(a));
  return Term::app(d.head(), std::move(args));
}

namespace {

bool occurs(const Symbol& v, const Term& t, const Bindings& b) {
  Term d = b.deref(t);
  if (d.is_var()) return d.head() == v;
  for (const Term& a : d.args())
    if (occurs(v, a, b)) return true;
  return false;
}

}  // namespace

bool unify(const Term& a, const Term& b, Bindings& b_) {
  Term x = b_.deref(a);
  Term y = b_.deref(b);
  if (x.is_var()) {
    if (y.is_var() && y.head() == x.head()) return true;
    if (occurs(x.head(), y, b_)) return false;
    b_.bind(x.head(), y);
    return true;
  }
  if (y.is_var()) {
    if (occurs(y.head(), x, b_)) return false;
    b_.bind(y.head(), x);
    return true;
  }
  if (x.head() != y.head() || x.args().size() != y.args().size()) return false;
  return unify_all(x.args(), y.args(), b_);
}

bool unify_all(const std::vector<Term>& as, const std::vector<Term>& bs,
               Bindings& b_) {
  if (as.size() != bs.size()) return false;
  size_t m = b_.mark();
  for (size_t i = 0; i < as.size(); ++i) {
    if (!unify(as[i], bs[i], b_)) {
      b_.undo(m);
      return false;
    }
  }
  return true;
}

bool match(const Term& pattern, const Term& target, Bindings& b_) {
  if (pattern.is_var()) {
    // A pattern variable seen twice must map to identical target terms;
    // target-side variables are opaque constants here, never bound.
    if (b_.bound(pattern.head())) return b_.deref(pattern) == target;
    b_.bind(pattern.head(), target);
    return true;
  }
  if (target.is_var()) return false;
  if (pattern.head() != target.head() ||
      pattern.args().size() != target.args().size())
    return false;
  return match_all(pattern.args(), target.args(), b_);
}

bool match_all(const std::vector<Term>& ps, const std::vector<Term>& ts,
               Bindings& b_) {
  if (ps.size() != ts.size()) return false;
  size_t m = b_.mark();
  for (size_t i = 0; i < ps.size(); ++i) {
    if (!match(ps[i], ts[i], b_)) {
      b_.undo(m);
      return false;
    }
  }
  return true;
}

}  // namespace folio
