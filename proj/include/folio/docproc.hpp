// Literate documents: LaTeX prose interleaved with macro definitions,
// configuration defaults and reasoner directives. Loading registers the
// definitions; processing additionally runs the directives in order and
// emits a LaTeX rendering with task outputs inlined.
//
// Grammar (statements end with a top-level `.`; `%` comments run to end of
// line outside prose fences):
//   @text ... @end                      LaTeX prose, passed through verbatim
//   def NAME :: FORMULA.                macro definition
//   def name(P1, ...) :: FORMULA where B1, ..., Bn.
//       bindings: T = builtin(args) or [T1, T2] = builtin(args)
//   :- valid(F [, Opts]).               validity check
//   :- ipol(F -> G [, Opts]).           interpolation (argument must be ->)
//   :- elim(F [, Opts]).                second-order quantifier elimination
//   :- print(F [, Opts]).               macro-expand and display
//   :- set(key=value, ...).             document-level defaults
// Opts is a bracketed key=value list, e.g. [simp_result=c6, r=result1].

#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "folio/macros.hpp"
#include "folio/syntax.hpp"

namespace folio {

struct Prose {
  std::string latex;
};

struct Directive {
  enum class Kind { Valid, Ipol, Elim, Print };
  Kind kind = Kind::Valid;
  Formula formula;  // unexpanded; an implication for Ipol
  std::map<std::string, std::string> options;
};

struct ConfigBlock {
  std::map<std::string, std::string> defaults;
};

struct DocBlock {
  std::variant<Prose, MacroDef, Directive, ConfigBlock> content;
  int line = 0;  // 1-based source line the block starts on
};

struct Document {
  std::string origin;  // registry ownership tag, normally the file name
  std::vector<DocBlock> blocks;
};

// Throws ParseError (with the statement's source line) on malformed input.
Document parse_document(const std::string& text,
                        const std::string& origin = "document");

// Processing state threaded through directives. Registers are exposed to
// formulas as 0-ary macros; `last_result` tracks the most recent
// formula-producing directive.
struct Session {
  Session();

  MacroRegistry registry;
  std::map<std::string, std::string> config;  // effective defaults
  SymbolGen gen;
  std::map<std::string, Formula> registers;
  std::optional<Formula> last_result;
};

// Registers the document's macros (replacing definitions from an earlier
// load of the same origin) and merges its configuration defaults. Runs no
// directive. Returns warnings for cross-document redefinitions.
std::vector<std::string> load_document(const Document& doc, Session& s);

struct ProcessResult {
  std::string latex;  // rendered body fragment
  bool ok = true;     // false when any directive failed
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
};

// Loads the document, then walks its blocks in order: prose and definition
// boxes render directly, directives execute with the merged configuration
// (session < document < directive) and render one output box each unless
// printing=false. Failures render an inline note and processing continues.
ProcessResult process_document(const Document& doc, Session& s);

// Wraps a rendered body as a complete compilable LaTeX article; the preamble
// defines the `outbox` environment and the `\defhead` command.
std::string standalone_latex(const std::string& body);

}  // namespace folio
