// Surface syntax reader.
//
// Operator table (loosest binds last, all right-associative):
//   ;            1100   disjunction
//   ->  <->      1050   implication, biconditional
//   ,            1000   conjunction
//   ~             900   negation (prefix)
//   =             700   equation between terms
// Binders are written all(x, F), ex([x,y], F), all2(p, F), ex2([p,q], F),
// lambda([u,v], F). Arguments of an application parse below 1000, so a
// conjunction passed as an argument must be parenthesised.

#pragma once

#include <optional>
#include <string>
#include <vector>

#include "folio/syntax.hpp"

namespace folio {

struct ParseError : Error {
  int line;
  int column;
  ParseError(const std::string& msg, int line, int column)
      : Error(msg + " at " + std::to_string(line) + ":" + std::to_string(column)),
        line(line),
        column(column) {}
};

Formula parse_formula(const std::string& text);

// A name applied to macro-style arguments, e.g. a definition head
// "circ(P, F)" or a builtin call "rename_free_predicate(F, P)".
struct ParsedCall {
  Symbol name;
  std::vector<MacroArg> args;
};

ParsedCall parse_call(const std::string& text);

std::vector<Symbol> parse_symbol_list(const std::string& text);

// Splits on commas that sit outside every parenthesis and bracket.
std::vector<std::string> split_top_level_commas(const std::string& text);

// Byte offset of a bare identifier occurring outside parens/brackets.
std::optional<size_t> find_top_level_word(const std::string& text,
                                          const std::string& word);

}  // namespace folio
