#include "folio/docproc.hpp"

#include <sstream>

#include "folio/elimination.hpp"
#include "folio/interpolation.hpp"
#include "folio/parse.hpp"
#include "folio/print.hpp"
#include "folio/prover.hpp"

namespace folio {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::string strip_comment(const std::string& line) {
  size_t p = line.find('%');
  return p == std::string::npos ? line : line.substr(0, p);
}

std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : text) {
    if (c == '\n') {
      lines.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  lines.push_back(cur);
  return lines;
}

// First depth-0 occurrence of `what` in s.
std::optional<size_t> find_top_level(const std::string& s, const std::string& what) {
  int depth = 0;
  for (size_t i = 0; i + what.size() <= s.size(); ++i) {
    char c = s[i];
    if (c == '(' || c == '[') ++depth;
    if (c == ')' || c == ']') --depth;
    if (depth == 0 && s.compare(i, what.size(), what) == 0) return i;
  }
  return std::nullopt;
}

// --- statement parsing -------------------------------------------------------

std::map<std::string, std::string> parse_kv_list(
    const std::string& text, int line) {
  std::map<std::string, std::string> out;
  for (const std::string& raw : split_top_level_commas(text)) {
    std::string piece = trim(raw);
    if (piece.empty())
      throw ParseError("empty option", line, 1);
    size_t eq = piece.find('=');
    if (eq == std::string::npos)
      throw ParseError("option '" + piece + "' is not key=value", line, 1);
    std::string key = trim(piece.substr(0, eq));
    std::string val = trim(piece.substr(eq + 1));
    if (val.size() >= 2 && val.front() == '[' && val.back() == ']')
      val = trim(val.substr(1, val.size() - 2));
    if (key.empty() || val.empty())
      throw ParseError("option '" + piece + "' is not key=value", line, 1);
    out[key] = val;
  }
  return out;
}

WhereBinding parse_binding(const std::string& text, int line) {
  std::optional<size_t> eq = find_top_level(text, "=");
  if (!eq)
    throw ParseError("where binding needs 'target = builtin(...)'", line, 1);
  std::string lhs = trim(text.substr(0, *eq));
  std::string rhs = trim(text.substr(*eq + 1));
  WhereBinding b;
  if (!lhs.empty() && lhs.front() == '[') {
    b.targets = parse_symbol_list(lhs);
  } else {
    ParsedCall t = parse_call(lhs);
    if (!t.args.empty())
      throw ParseError("binding target must be a symbol or symbol list", line, 1);
    b.targets = {t.name};
  }
  ParsedCall c = parse_call(rhs);
  std::optional<BuiltinKind> k = builtin_by_name(c.name.name());
  if (!k)
    throw ParseError("unknown builtin '" + c.name.name() + "'", line, 1);
  b.builtin = BuiltinExpr{*k, std::move(c.args)};
  return b;
}

MacroDef parse_def(const std::string& text, int line) {
  std::optional<size_t> sep = find_top_level(text, "::");
  if (!sep) throw ParseError("definition needs '::'", line, 1);
  std::string head = trim(text.substr(0, *sep));
  std::string rest = text.substr(*sep + 2);
  MacroDef def;
  ParsedCall h = parse_call(head);
  def.name = h.name;
  def.params = std::move(h.args);
  std::string body = rest;
  if (std::optional<size_t> w = find_top_level_word(rest, "where")) {
    body = rest.substr(0, *w);
    for (const std::string& piece :
         split_top_level_commas(rest.substr(*w + 5)))
      def.where.push_back(parse_binding(trim(piece), line));
  }
  def.body = parse_formula(body);
  return def;
}

DocBlock parse_statement(const std::string& text, int line) {
  std::string s = trim(text);
  if (s.rfind("def", 0) == 0 && s.size() > 3 &&
      (s[3] == ' ' || s[3] == '\t' || s[3] == '\n'))
    return DocBlock{parse_def(s.substr(3), line), line};
  if (s.rfind(":-", 0) != 0)
    throw ParseError("expected @text, def or a ':-' directive", line, 1);
  s = trim(s.substr(2));
  size_t open = s.find('(');
  if (open == std::string::npos || s.back() != ')')
    throw ParseError("directive needs the form name(...)", line, 1);
  std::string name = trim(s.substr(0, open));
  std::string inner = s.substr(open + 1, s.size() - open - 2);
  if (name == "set")
    return DocBlock{ConfigBlock{parse_kv_list(inner, line)}, line};

  Directive d;
  if (name == "valid") d.kind = Directive::Kind::Valid;
  else if (name == "ipol") d.kind = Directive::Kind::Ipol;
  else if (name == "elim") d.kind = Directive::Kind::Elim;
  else if (name == "print") d.kind = Directive::Kind::Print;
  else throw ParseError("unknown directive '" + name + "'", line, 1);

  std::vector<std::string> formulas;
  for (const std::string& raw : split_top_level_commas(inner)) {
    std::string piece = trim(raw);
    if (!piece.empty() && piece.front() == '[' &&
        piece.find('=') != std::string::npos) {
      for (const auto& [k, v] :
           parse_kv_list(piece.substr(1, piece.size() - 2), line))
        d.options[k] = v;
    } else {
      formulas.push_back(piece);
    }
  }
  if (formulas.size() != 1)
    throw ParseError(
        "directive expects one formula argument (parenthesize conjunctions)",
        line, 1);
  d.formula = parse_formula(formulas[0]);
  if (d.kind == Directive::Kind::Ipol && !d.formula.is(Formula::Kind::Implies))
    throw ParseError("ipol argument must be an implication", line, 1);
  return DocBlock{std::move(d), line};
}

// --- LaTeX rendering ---------------------------------------------------------

PrintOptions render_options(const std::map<std::string, std::string>& cfg) {
  PrintOptions po;
  po.mode = PrintOptions::Mode::Latex;
  auto it = cfg.find("compact");
  po.compact = it != cfg.end() && it->second == "true";
  return po;
}

std::string inline_math(const Formula& f, const PrintOptions& po) {
  return "$" + print_formula(f, po) + ".$";
}

// Display block: a top-level conjunction gets one line per conjunct with the
// connective pushed to the right margin, anything else a single line.
std::string display_array(const Formula& f, const PrintOptions& po) {
  std::vector<std::string> lines;
  if (f.is(Formula::Kind::And)) {
    for (const Formula& c : flatten(f, Formula::Kind::And)) {
      std::string s = print_formula(c, po);
      if (render_precedence(c) >= 1000) s = "(" + s + ")";
      lines.push_back(s);
    }
  } else {
    lines.push_back(print_formula(f, po));
  }
  std::string out = "\\[\\begin{array}{lllll}\n";
  for (size_t i = 0; i < lines.size(); ++i) {
    out += lines[i];
    out += i + 1 == lines.size() ? ".\n" : " &&&&\\; \\land \\\\\n";
  }
  out += "\\end{array}\n\\]\n";
  return out;
}

std::string latex_list(const std::vector<Symbol>& syms, const PrintOptions& po) {
  std::string out = "{[}";
  for (size_t i = 0; i < syms.size(); ++i) {
    if (i) out += ",";
    out += latex_symbol(syms[i], syms[i].is_parameter(), po);
  }
  return out + "{]}";
}

std::string latex_arg(const MacroArg& a, const PrintOptions& po) {
  if (a.is_formula()) return print_formula(a.formula(), po);
  return latex_list(a.symbols(), po);
}

std::string render_binding(const WhereBinding& b, const PrintOptions& po) {
  std::string t0 = latex_symbol(b.targets[0], true, po);
  const std::vector<MacroArg>& as = b.builtin.args;
  switch (b.builtin.kind) {
    case BuiltinKind::RenameFreePredicate: {
      std::string t1 = latex_symbol(b.targets[1], true, po);
      return t0 + " \\mathrel{\\mathop:}= " + latex_arg(as[0], po) + "[" +
             latex_arg(as[1], po) + " \\mapsto " + t1 + "]";
    }
    case BuiltinKind::Arity:
      return t0 + " \\mathrel{\\mathop:}= \\mathrm{arity\\ of}\\;" +
             latex_arg(as[0], po) + "\\;\\mathrm{in}\\;" + latex_arg(as[1], po);
    case BuiltinKind::Implications:
      return t0 + " \\mathrel{\\mathop:}= \\mathrm{implications}\\;" +
             latex_arg(as[0], po) + " \\rightarrow " + latex_arg(as[1], po);
    case BuiltinKind::FreshSymbol:
      return t0 + " \\mathrel{\\mathop:}= \\mathrm{fresh\\ symbol}\\;(" +
             latex_arg(as[0], po) + ")";
  }
  throw Error("unhandled builtin kind");
}

std::string render_def(const MacroDef& d, const PrintOptions& po) {
  // latex_symbol yields \mathsf{...} for upright names; definition heads use
  // the \defhead face instead.
  std::string head = latex_symbol(d.name, false, po);
  head = "\\defhead" + head.substr(7);
  if (!d.params.empty()) {
    head += "(";
    for (size_t i = 0; i < d.params.size(); ++i) {
      if (i) head += ",";
      head += latex_arg(d.params[i], po);
    }
    head += ")";
  }
  std::string out = "\\begin{outbox}\n\\noindent $" + head +
                    "$ $\\mathrel{\\mathop:}=$\n" + display_array(d.body, po);
  if (!d.where.empty()) {
    out += "\\par\\noindent where\n\\begin{center}\n$\\begin{array}{l}\n";
    for (size_t i = 0; i < d.where.size(); ++i) {
      out += render_binding(d.where[i], po);
      out += i + 1 == d.where.size() ? ".\n" : ",\\\\\n";
    }
    out += "\\end{array}$\n\\end{center}\n";
  }
  return out + "\\end{outbox}\n";
}

std::string latex_escape_text(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '\\': out += "\\textbackslash{}"; break;
      case '#': case '$': case '%': case '&': case '_': case '{': case '}':
        out += '\\';
        out += c;
        break;
      case '^': out += "\\^{}"; break;
      case '~': out += "\\~{}"; break;
      default: out += c;
    }
  }
  return out;
}

// --- directive execution -----------------------------------------------------

std::string cfg_get(const std::map<std::string, std::string>& cfg,
                    const std::string& key, const std::string& fallback) {
  auto it = cfg.find(key);
  return it == cfg.end() ? fallback : it->second;
}

size_t cfg_num(const std::map<std::string, std::string>& cfg,
               const std::string& key, size_t fallback) {
  auto it = cfg.find(key);
  if (it == cfg.end()) return fallback;
  size_t pos = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(it->second, &pos);
  } catch (const std::exception&) {
    throw Error("option " + key + ": '" + it->second + "' is not a number");
  }
  if (pos != it->second.size())
    throw Error("option " + key + ": '" + it->second + "' is not a number");
  return static_cast<size_t>(v);
}

void bind_register(Session& s, const std::string& name, const Formula& f) {
  std::string origin = "@register:" + name;
  s.registry.remove_origin(origin);
  s.registry.define(MacroDef{Symbol(name), {}, f, {}, origin});
  s.registers[name] = f;
}

void bind_results(Session& s, const std::map<std::string, std::string>& cfg,
                  const Formula& f) {
  if (auto it = cfg.find("r"); it != cfg.end()) bind_register(s, it->second, f);
  bind_register(s, "last_result", f);
  s.last_result = f;
}

struct DirectiveOutcome {
  std::string latex;
  std::optional<std::string> error;
  std::optional<std::string> warning;
};

DirectiveOutcome run_directive(const Directive& d, Session& s) {
  std::map<std::string, std::string> cfg = s.config;
  for (const auto& [k, v] : d.options) cfg[k] = v;
  PrintOptions po = render_options(cfg);
  bool printing = cfg_get(cfg, "printing", "true") != "false";
  bool shape = cfg_get(cfg, "simp_result", "none") == "c6";

  DirectiveOutcome out;
  try {
    Formula expanded = expand(s.registry, d.formula, s.gen);
    switch (d.kind) {
      case Directive::Kind::Valid: {
        if (is_second_order(expanded))
          throw Error("valid needs a first-order formula after expansion");
        ValidityOptions vo;
        vo.prover.max_depth = cfg_num(cfg, "max_depth", vo.prover.max_depth);
        vo.prover.budget = cfg_num(cfg, "budget", vo.prover.budget);
        vo.model.max_size = cfg_num(cfg, "model_max", vo.model.max_size);
        ValidityResult vr = decide_validity(expanded, vo);
        std::string label =
            vr.status == Validity::Valid      ? "Valid:"
            : vr.status == Validity::NotValid ? "Not valid:"
                                              : "Failed to validate:";
        if (printing)
          out.latex = "\\begin{outbox}\n\\noindent " + label + " " +
                      inline_math(d.formula, po) + "\n\\end{outbox}\n";
        if (vr.status == Validity::Unknown)
          out.error = "validation gave out (neither proof nor countermodel)";
        return out;
      }
      case Directive::Kind::Ipol: {
        InterpolationOptions io;
        io.prover.max_depth = cfg_num(cfg, "max_depth", io.prover.max_depth);
        io.prover.budget = cfg_num(cfg, "budget", io.prover.budget);
        io.shape = shape;
        std::optional<Formula> h =
            interpolate(expanded.kid(0), expanded.kid(1), s.gen, io);
        std::string box = "\\begin{outbox}\n\\noindent Input: " +
                          inline_math(d.formula, po) + "\\\\\n" +
                          "\\noindent Result of interpolation:";
        if (h) {
          bind_results(s, cfg, *h);
          box += "\n" + display_array(*h, po);
        } else {
          out.error = "interpolation failed (no proof found within limits)";
          box += " failed (no proof found within limits).\n";
        }
        if (printing) out.latex = box + "\\end{outbox}\n";
        return out;
      }
      case Directive::Kind::Elim: {
        EliminationOptions eo;
        eo.shape_result = shape;
        EliminationResult er = eliminate(expanded, s.gen, eo);
        std::string box = "\\begin{outbox}\n\\noindent Input: " +
                          inline_math(d.formula, po) + "\\\\\n" +
                          "\\noindent Result of elimination:";
        if (er.ok()) {
          bind_results(s, cfg, *er.result);
          box += "\n" + display_array(*er.result, po);
          if (!er.skolems.empty()) {
            std::string names;
            for (const Symbol& k : er.skolems) {
              if (!names.empty()) names += ", ";
              names += "$" + latex_symbol(k, false, po) + "$";
            }
            box += "\\noindent (un-Skolemization incomplete; Skolem functions: " +
                   names + ")\n";
            out.warning = "elimination result keeps Skolem functions";
          }
        } else {
          out.error = "elimination failed (a second-order subformula resisted)";
          box += " failed ($" + print_formula(*er.stuck, po) +
                 "$ resisted elimination).\n";
        }
        if (printing) out.latex = box + "\\end{outbox}\n";
        return out;
      }
      case Directive::Kind::Print: {
        bind_results(s, cfg, expanded);
        if (printing)
          out.latex = "\\begin{outbox}\n" + display_array(expanded, po) +
                      "\\end{outbox}\n";
        return out;
      }
    }
    throw Error("unhandled directive kind");
  } catch (const Error& e) {
    out.error = e.what();
    out.latex = "\\begin{outbox}\n\\noindent Failed: " +
                latex_escape_text(e.what()) + ".\n\\end{outbox}\n";
    return out;
  }
}

}  // namespace

// --- document parsing ----------------------------------------------------------

Document parse_document(const std::string& text, const std::string& origin) {
  Document doc;
  doc.origin = origin;
  std::vector<std::string> lines = split_lines(text);
  size_t i = 0;
  while (i < lines.size()) {
    std::string head = trim(lines[i]);
    if (head == "@text") {
      size_t j = i + 1;
      std::string prose;
      while (j < lines.size() && trim(lines[j]) != "@end") {
        if (j > i + 1) prose += "\n";
        prose += lines[j];
        ++j;
      }
      if (j == lines.size())
        throw ParseError("unterminated @text fence", (int)i + 1, 1);
      doc.blocks.push_back(DocBlock{Prose{prose}, (int)i + 1});
      i = j + 1;
      continue;
    }
    if (trim(strip_comment(lines[i])).empty()) {
      ++i;
      continue;
    }
    // statement: accumulate lines until a '.' outside all brackets
    int start_line = (int)i + 1;
    std::string stmt;
    bool done = false;
    int depth = 0;
    while (i < lines.size() && !done) {
      std::string code = strip_comment(lines[i]);
      for (size_t p = 0; p < code.size(); ++p) {
        char c = code[p];
        if (c == '(' || c == '[') ++depth;
        if (c == ')' || c == ']') --depth;
        if (c == '.' && depth == 0) {
          stmt += code.substr(0, p);
          if (!trim(code.substr(p + 1)).empty())
            throw ParseError("unexpected text after statement end",
                             (int)i + 1, (int)p + 2);
          done = true;
          break;
        }
      }
      if (!done) {
        stmt += code + "\n";
        ++i;
      }
    }
    if (!done)
      throw ParseError("statement is missing its terminating '.'", start_line, 1);
    ++i;
    try {
      doc.blocks.push_back(parse_statement(stmt, start_line));
    } catch (const ParseError&) {
      throw;
    } catch (const Error& e) {
      throw ParseError(std::string(e.what()) + " in statement beginning",
                       start_line, 1);
    }
  }
  return doc;
}

// --- session, load, process ----------------------------------------------------

Session::Session()
    : config{{"printing", "true"},
             {"simp_result", "none"},
             {"compact", "false"},
             {"max_depth", "12"},
             {"budget", "5000000"},
             {"model_max", "4"}} {}

std::vector<std::string> load_document(const Document& doc, Session& s) {
  std::vector<std::string> warnings;
  s.registry.remove_origin(doc.origin);
  for (const DocBlock& b : doc.blocks) {
    if (const MacroDef* def = std::get_if<MacroDef>(&b.content)) {
      for (const MacroDef& old : s.registry.defs()) {
        if (old.name == def->name && old.params.size() == def->params.size() &&
            old.origin != doc.origin) {
          warnings.push_back("macro " + def->name.name() + "/" +
                             std::to_string(def->params.size()) +
                             " already defined by '" + old.origin + "'");
          break;
        }
      }
      MacroDef copy = *def;
      copy.origin = doc.origin;
      s.registry.define(std::move(copy));
    } else if (const ConfigBlock* cb = std::get_if<ConfigBlock>(&b.content)) {
      for (const auto& [k, v] : cb->defaults) s.config[k] = v;
    }
  }
  s.registry.reserve_into(s.gen);
  return warnings;
}

ProcessResult process_document(const Document& doc, Session& s) {
  ProcessResult res;
  res.warnings = load_document(doc, s);
  for (const DocBlock& b : doc.blocks) {
    if (const Prose* p = std::get_if<Prose>(&b.content)) {
      res.latex += p->latex + "\n";
    } else if (const MacroDef* def = std::get_if<MacroDef>(&b.content)) {
      res.latex += render_def(*def, render_options(s.config));
    } else if (const Directive* d = std::get_if<Directive>(&b.content)) {
      DirectiveOutcome out = run_directive(*d, s);
      res.latex += out.latex;
      if (out.error) {
        res.ok = false;
        res.errors.push_back("line " + std::to_string(b.line) + ": " +
                             *out.error);
      }
      if (out.warning)
        res.warnings.push_back("line " + std::to_string(b.line) + ": " +
                               *out.warning);
    }
    // config blocks were merged during load and render nothing
  }
  return res;
}

std::string standalone_latex(const std::string& body) {
  std::string out =
      "\\documentclass{article}\n"
      "\\usepackage{amsmath}\n"
      "\\usepackage{amssymb}\n"
      "\\newcommand{\\defhead}[1]{\\mathbf{#1}}\n"
      "\\newenvironment{outbox}\n"
      "  {\\par\\medskip\\noindent\\hrule\\smallskip\\noindent}\n"
      "  {\\par\\smallskip\\hrule\\medskip}\n"
      "\\begin{document}\n";
  out += body;
  if (!body.empty() && body.back() != '\n') out += "\n";
  return out + "\\end{document}\n";
}

}  // namespace folio
