// Formula rendering: reparsable text and plain math-mode LaTeX.

#pragma once

#include <string>

#include "folio/syntax.hpp"

namespace folio {

struct PrintOptions {
  enum class Mode { Text, Latex };
  Mode mode = Mode::Text;
  // Latex only: atoms render as "p\,a\,x" instead of "p(a,x)".
  bool compact = false;
  // Latex only: a trailing "_p" renders as a prime, "kb1" as kb with
  // subscript 1.
  bool prime_rendering = true;
  bool subscript_digits = true;
};

std::string print_formula(const Formula& f, const PrintOptions& opts = {});
std::string print_term(const Term& t, const PrintOptions& opts = {});

std::string to_text(const Formula& f);
std::string to_latex(const Formula& f, bool compact = false);

// A single name as LaTeX, honoring prime/subscript conventions. Italic is
// used for variables and bound predicate symbols, upright sans otherwise.
std::string latex_symbol(const Symbol& s, bool italic, const PrintOptions& opts);

// Operator priority used for parenthesization, matching the parser's table;
// 0 for atoms, quantifiers and other self-delimiting forms.
int render_precedence(const Formula& f);

}  // namespace folio
