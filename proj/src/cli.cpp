#include "folio/cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>

#include "CLI11.hpp"
#include "folio/docproc.hpp"
#include "folio/elimination.hpp"
#include "folio/interpolation.hpp"
#include "folio/parse.hpp"
#include "folio/print.hpp"
#include "folio/prover.hpp"
#include "folio/signature.hpp"

namespace folio {

namespace {

// --- TPTP export ---------------------------------------------------------------

bool tptp_word(const std::string& s, bool upper_start) {
  if (s.empty()) return false;
  char c = s[0];
  bool start_ok = upper_start ? (c >= 'A' && c <= 'Z')
                              : (c >= 'a' && c <= 'z');
  if (!start_ok) return false;
  return std::all_of(s.begin(), s.end(), [](char ch) {
    return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') ||
           (ch >= '0' && ch <= '9') || ch == '_';
  });
}

// Assigns each symbol a TPTP-legal name, uppercase-initial for variables and
// lowercase-initial otherwise, and records every change.
struct TptpNamer {
  std::map<std::pair<Symbol, bool>, std::string> assigned;
  std::set<std::string> used;
  std::vector<std::pair<std::string, std::string>> renames;  // new <- old

  std::string get(const Symbol& s, bool variable) {
    auto key = std::make_pair(s, variable);
    if (auto it = assigned.find(key); it != assigned.end()) return it->second;
    std::string base;
    for (char c : s.name()) {
      bool ok = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') ||
                (c >= '0' && c <= '9') || c == '_';
      base += ok ? c : '_';
    }
    if (base.empty()) base = variable ? "V" : "s";
    if (variable) {
      if (base[0] >= 'a' && base[0] <= 'z')
        base[0] = (char)(base[0] - 'a' + 'A');
      else if (!(base[0] >= 'A' && base[0] <= 'Z'))
        base = "V" + base;
    } else {
      if (base[0] >= 'A' && base[0] <= 'Z')
        base[0] = (char)(base[0] - 'A' + 'a');
      else if (!(base[0] >= 'a' && base[0] <= 'z'))
        base = "s" + base;
    }
    std::string name = base;
    for (int n = 2; used.count(name); ++n)
      name = base + "_" + std::to_string(n);
    used.insert(name);
    assigned[key] = name;
    if (name != s.name()) renames.emplace_back(name, s.name());
    return name;
  }
};

struct TptpWriter {
  TptpNamer& namer;
  std::set<Symbol> bound;  // individual variables in scope

  std::string term(const Term& t) {
    if (t.is_var()) return namer.get(t.head(), true);
    std::string out = namer.get(t.head(), false);
    if (t.args().empty()) return out;
    out += "(";
    for (size_t i = 0; i < t.args().size(); ++i) {
      if (i) out += ",";
      out += term(t.args()[i]);
    }
    return out + ")";
  }

  // A formula usable as an operand of a binary connective: atomic forms and
  // negations stand bare, everything else is parenthesized.
  std::string operand(const Formula& f) {
    switch (f.kind()) {
      case Formula::Kind::Atom:
      case Formula::Kind::Eq:
      case Formula::Kind::True:
      case Formula::Kind::False:
      case Formula::Kind::Not:
        return render(f);
      default:
        return "(" + render(f) + ")";
    }
  }

  std::string join(const std::vector<Formula>& fs, const std::string& op) {
    std::string out;
    for (size_t i = 0; i < fs.size(); ++i) {
      if (i) out += op;
      out += operand(fs[i]);
    }
    return out;
  }

  std::string render(const Formula& f) {
    switch (f.kind()) {
      case Formula::Kind::Atom: {
        std::string out = namer.get(f.head(), false);
        if (f.terms().empty()) return out;
        out += "(";
        for (size_t i = 0; i < f.terms().size(); ++i) {
          if (i) out += ",";
          out += term(f.terms()[i]);
        }
        return out + ")";
      }
      case Formula::Kind::Eq:
        return term(f.terms()[0]) + " = " + term(f.terms()[1]);
      case Formula::Kind::True: return "$true";
      case Formula::Kind::False: return "$false";
      case Formula::Kind::Not:
        if (f.kid().is(Formula::Kind::Eq))
          return term(f.kid().terms()[0]) + " != " + term(f.kid().terms()[1]);
        return "~ " + operand(f.kid());
      case Formula::Kind::And: return join(f.kids(), " & ");
      case Formula::Kind::Or: return join(f.kids(), " | ");
      case Formula::Kind::Implies:
        return operand(f.kid(0)) + " => " + operand(f.kid(1));
      case Formula::Kind::Iff:
        return operand(f.kid(0)) + " <=> " + operand(f.kid(1));
      case Formula::Kind::ForAll:
      case Formula::Kind::Exists: {
        std::string out = f.is(Formula::Kind::ForAll) ? "! [" : "? [";
        for (size_t i = 0; i < f.binders().size(); ++i) {
          if (i) out += ",";
          out += namer.get(f.binders()[i], true);
        }
        return out + "] : " + operand(f.kid());
      }
      default:
        throw Error("TPTP export supports only first-order formulas");
    }
  }
};

// --- command plumbing ----------------------------------------------------------

struct CliState {
  Session session;
  std::vector<std::string> load_files;
  std::string shape = "none";
  bool compact = false;
  bool latex = false;
  std::string out_path;

  void apply_loads() {
    for (const std::string& path : load_files) {
      std::ifstream in(path);
      if (!in) throw Error("cannot open " + path);
      std::stringstream buf;
      buf << in.rdbuf();
      Document doc = parse_document(buf.str(), path);
      for (const std::string& w : load_document(doc, session))
        std::cerr << "warning: " << w << "\n";
    }
  }

  Formula input(const std::string& text) {
    apply_loads();
    Formula f = parse_formula(text);
    reserve_symbols(f, session.gen);
    return expand(session.registry, f, session.gen);
  }

  std::string show(const Formula& f) const {
    PrintOptions po;
    if (latex) {
      po.mode = PrintOptions::Mode::Latex;
      po.compact = compact;
    }
    return print_formula(f, po);
  }

  int emit(const std::string& text) const {
    if (out_path.empty() || out_path == "-") {
      std::cout << text;
      return 0;
    }
    std::ofstream out(out_path);
    if (!out) {
      std::cerr << "error: cannot write " << out_path << "\n";
      return 3;
    }
    out << text;
    return 0;
  }

  size_t num(const std::string& key, size_t fallback) const {
    auto it = session.config.find(key);
    if (it == session.config.end()) return fallback;
    return std::stoull(it->second);
  }
};

int cmd_process(CliState& st, const std::string& path, bool standalone) {
  std::ifstream in(path);
  if (!in) {
    std::cerr << "error: cannot open " << path << "\n";
    return 3;
  }
  std::stringstream buf;
  buf << in.rdbuf();
  Document doc = parse_document(buf.str(), path);
  st.apply_loads();
  ProcessResult res = process_document(doc, st.session);
  for (const std::string& w : res.warnings) std::cerr << "warning: " << w << "\n";
  for (const std::string& e : res.errors) std::cerr << "error: " << e << "\n";
  std::string text = standalone ? standalone_latex(res.latex) : res.latex;
  std::string out = st.out_path;
  if (out.empty()) {
    out = path;
    size_t dot = out.find_last_of("./");
    out = (dot != std::string::npos && out[dot] == '.') ? out.substr(0, dot)
                                                        : out;
    out += ".tex";
  }
  if (out == "-") {
    std::cout << text;
  } else {
    std::ofstream sink(out);
    if (!sink) {
      std::cerr << "error: cannot write " << out << "\n";
      return 3;
    }
    sink << text;
  }
  return res.ok ? 0 : 1;
}

int cmd_valid(CliState& st, const std::string& text) {
  Formula f = st.input(text);
  if (is_second_order(f)) {
    std::cerr << "error: valid needs a first-order formula after expansion\n";
    return 3;
  }
  ValidityOptions vo;
  vo.prover.max_depth = st.num("max_depth", vo.prover.max_depth);
  vo.prover.budget = st.num("budget", vo.prover.budget);
  vo.model.max_size = st.num("model_max", vo.model.max_size);
  ValidityResult vr = decide_validity(f, vo);
  switch (vr.status) {
    case Validity::Valid: std::cout << "*Valid*\n"; return 0;
    case Validity::NotValid: std::cout << "*Not valid*\n"; return 1;
    default: std::cout << "*Failed to validate*\n"; return 2;
  }
}

int cmd_ipol(CliState& st, const std::string& text) {
  Formula f = st.input(text);
  if (!f.is(Formula::Kind::Implies)) {
    std::cerr << "error: ipol needs an implication\n";
    return 3;
  }
  InterpolationOptions io;
  io.prover.max_depth = st.num("max_depth", io.prover.max_depth);
  io.prover.budget = st.num("budget", io.prover.budget);
  io.shape = st.shape == "c6";
  std::optional<Formula> h =
      interpolate(f.kid(0), f.kid(1), st.session.gen, io);
  if (!h) {
    std::cerr << "error: no proof found within limits\n";
    return 2;
  }
  return st.emit(st.show(*h) + "\n");
}

int cmd_elim(CliState& st, const std::string& text) {
  Formula f = st.input(text);
  EliminationOptions eo;
  eo.shape_result = st.shape == "c6";
  EliminationResult er = eliminate(f, st.session.gen, eo);
  if (!er.ok()) {
    std::cerr << "error: elimination failed; stuck at "
              << to_text(*er.stuck) << "\n";
    return 1;
  }
  if (!er.skolems.empty())
    std::cerr << "warning: un-Skolemization incomplete\n";
  return st.emit(st.show(*er.result) + "\n");
}

int cmd_expand(CliState& st, const std::string& text) {
  return st.emit(st.show(st.input(text)) + "\n");
}

int cmd_tptp(CliState& st, const std::string& text, const std::string& role,
             const std::string& name) {
  Formula f = st.input(text);
  TptpRole r = role == "conjecture" ? TptpRole::Conjecture : TptpRole::Axiom;
  return st.emit(export_tptp(f, r, name));
}

int cmd_dimacs(CliState& st, const std::string& text) {
  Formula f = st.input(text);
  ClauseSet cs = cnf(f, st.session.gen);
  return st.emit(export_dimacs(cs));
}

}  // namespace

std::string export_tptp(const Formula& f, TptpRole role,
                        const std::string& name) {
  if (is_second_order(f))
    throw Error("TPTP export supports only first-order formulas");
  SignatureInfo sig = signature_of(f);
  Formula closed = f;
  if (!sig.free_vars.empty()) {
    std::vector<Symbol> vs(sig.free_vars.begin(), sig.free_vars.end());
    closed = Formula::forall(std::move(vs), closed);
  }
  TptpNamer namer;
  TptpWriter writer{namer, {}};
  std::string body = writer.render(closed);
  std::string out;
  for (const auto& [now, was] : namer.renames)
    out += "% renamed: " + now + " <- " + was + "\n";
  if (!tptp_word(name, false)) throw Error("unit name must be a TPTP word");
  out += "fof(" + name + ", " +
         (role == TptpRole::Conjecture ? "conjecture" : "axiom") + ", " +
         body + ").\n";
  return out;
}

std::string export_dimacs(const ClauseSet& cs) {
  std::map<Symbol, size_t> index;
  for (const Clause& c : cs.clauses) {
    for (const Literal& l : c.lits) {
      if (!l.args.empty() || l.is_eq())
        throw Error("DIMACS export needs propositional clauses");
      index.emplace(l.pred, 0);
    }
  }
  size_t n = 0;
  for (auto& [sym, id] : index) id = ++n;
  std::string out;
  for (const auto& [sym, id] : index)
    out += "c " + std::to_string(id) + " " + sym.name() + "\n";
  out += "p cnf " + std::to_string(n) + " " +
         std::to_string(cs.clauses.size()) + "\n";
  for (const Clause& c : cs.clauses) {
    std::string line;
    for (const Literal& l : c.lits) {
      line += (l.pos ? "" : "-") + std::to_string(index[l.pred]) + " ";
    }
    out += line + "0\n";
  }
  return out;
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"first-order logic workbench"};
  app.require_subcommand(1);
  // global flags remain usable after the subcommand name
  app.fallthrough();

  CliState st;
  app.add_option("--load", st.load_files,
                 "document whose macros are loaded first")
      ->type_name("FILE");
  app.add_option("--out", st.out_path, "write output here instead of stdout");
  app.add_flag("--compact", st.compact, "omit parentheses in LaTeX atoms");
  app.add_flag("--latex", st.latex, "print formulas as LaTeX");
  app.add_option("--shape", st.shape, "result shaping: none or c6")
      ->check(CLI::IsMember({"none", "c6"}));
  std::map<std::string, std::string> overrides;
  app.add_option_function<size_t>(
      "--max-depth",
      [&](size_t v) { overrides["max_depth"] = std::to_string(v); },
      "prover depth bound");
  app.add_option_function<size_t>(
      "--model-max",
      [&](size_t v) { overrides["model_max"] = std::to_string(v); },
      "countermodel domain size bound");
  app.add_option_function<size_t>(
      "--budget", [&](size_t v) { overrides["budget"] = std::to_string(v); },
      "prover step budget");

  std::string formula_text, file_path;
  std::string role = "axiom", unit_name = "f1";
  bool standalone = false;

  CLI::App* process = app.add_subcommand("process", "render a document");
  process->add_option("file", file_path, "document file")->required();
  process->add_flag("--standalone", standalone,
                    "emit a complete LaTeX article");

  CLI::App* valid = app.add_subcommand("valid", "decide validity");
  valid->add_option("formula", formula_text)->required();
  CLI::App* ipol = app.add_subcommand("ipol", "interpolate an implication");
  ipol->add_option("formula", formula_text)->required();
  CLI::App* elim = app.add_subcommand("elim", "eliminate predicate quantifiers");
  elim->add_option("formula", formula_text)->required();
  CLI::App* expand_cmd = app.add_subcommand("expand", "expand macros");
  expand_cmd->add_option("formula", formula_text)->required();
  CLI::App* tptp = app.add_subcommand("tptp", "export as a TPTP fof unit");
  tptp->add_option("formula", formula_text)->required();
  tptp->add_option("--role", role, "axiom or conjecture")
      ->check(CLI::IsMember({"axiom", "conjecture"}));
  tptp->add_option("--name", unit_name, "unit name");
  CLI::App* dimacs = app.add_subcommand("dimacs", "export the CNF as DIMACS");
  dimacs->add_option("formula", formula_text)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 3;
  }

  try {
    for (const auto& [k, v] : overrides) st.session.config[k] = v;
    if (process->parsed()) return cmd_process(st, file_path, standalone);
    if (valid->parsed()) return cmd_valid(st, formula_text);
    if (ipol->parsed()) return cmd_ipol(st, formula_text);
    if (elim->parsed()) return cmd_elim(st, formula_text);
    if (expand_cmd->parsed()) return cmd_expand(st, formula_text);
    if (tptp->parsed()) return cmd_tptp(st, formula_text, role, unit_name);
    if (dimacs->parsed()) return cmd_dimacs(st, formula_text);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 3;
}

}  // namespace folio
