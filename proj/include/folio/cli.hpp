// Command-line front end and external-format exporters.

#pragma once

#include <string>

#include "folio/transform.hpp"

namespace folio {

enum class TptpRole { Axiom, Conjecture };

// Renders one `fof(name, role, ...).` unit. Symbols are sanitized to TPTP
// lexical classes (lowercase-initial functors and predicates,
// uppercase-initial variables); every renamed symbol is listed in a leading
// '%' comment line so the original names can be recovered. Free individual
// variables are universally closed first. Throws on second-order content.
std::string export_tptp(const Formula& f, TptpRole role,
                        const std::string& name);

// DIMACS CNF: atom-numbering comment lines, a `p cnf n m` header, then one
// line per clause of space-separated signed integers terminated by 0. Atoms
// are numbered 1..n in lexicographic symbol order. Throws on
// non-propositional literals (arguments or equality).
std::string export_dimacs(const ClauseSet& cs);

// Runs one command; returns the process exit code: 0 success, 1 failed or
// not valid, 2 gave out (unknown validity, interpolation resources), 3
// usage, parse or input errors.
int run_cli(int argc, const char* const* argv);

}  // namespace folio
