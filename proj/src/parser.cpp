// Copyright (c) the treemi contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Recursive-descent parser for the s-expression problem format:
//
//   document := form*
//   form     := decl | assert | weight
//   decl     := "(declare-real" NAME ")" | "(declare-bool" NAME ")"
//   assert   := "(assert" clause ")"
//   clause   := lit | "(or" lit+ ")"
//   lit      := atom | "(not" atom ")" | BOOLNAME | "(not" BOOLNAME ")"
//   atom     := "(<" expr expr ")" | "(<=" expr expr ")"
//   expr     := RATIONAL | NAME | "(+" expr+ ")" | "(-" expr expr ")"
//             | "(*" RATIONAL NAME ")"
//   weight   := "(weight" lit RATIONAL monom* ")"
//   monom    := NAME | "(^" NAME INT ")"
//   RATIONAL := INT | INT "/" POSINT ; comments ";" to end of line
#include "treemi/parser.hpp"

#include <cctype>
#include <memory>
#include <set>
#include <variant>
#include <vector>

namespace treemi {

namespace {

struct Node {
  // leaf symbol when children empty and !is_list
  std::string sym;
  std::vector<Node> children;
  bool is_list = false;
  int line = 0, col = 0;
};

struct Lexer {
  std::string_view text;
  size_t pos = 0;
  int line = 1, col = 1;

  void advance() {
    if (pos < text.size() && text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void skip_ws() {
    while (pos < text.size()) {
      char c = text[pos];
      if (c == ';') {
        while (pos < text.size() && text[pos] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  bool eof() {
    skip_ws();
    return pos >= text.size();
  }

  Node next() {
    skip_ws();
    if (pos >= text.size()) throw ParseError("unexpected end of input", line, col);
    int l = line, c = col;
    char ch = text[pos];
    if (ch == '(') {
      advance();
      Node list;
      list.is_list = true;
      list.line = l;
      list.col = c;
      while (true) {
        skip_ws();
        if (pos >= text.size()) throw ParseError("unclosed '('", l, c);
        if (text[pos] == ')') {
          advance();
          return list;
        }
        list.children.push_back(next());
      }
    }
    if (ch == ')') throw ParseError("unexpected ')'", l, c);
    Node leaf;
    leaf.line = l;
    leaf.col = c;
    while (pos < text.size()) {
      char d = text[pos];
      if (std::isspace(static_cast<unsigned char>(d)) || d == '(' || d == ')' || d == ';')
        break;
      leaf.sym.push_back(d);
      advance();
    }
    return leaf;
  }
};

bool is_number(const std::string& s) {
  if (s.empty()) return false;
  size_t i = (s[0] == '-') ? 1 : 0;
  if (i >= s.size()) return false;
  bool saw_slash = false;
  for (; i < s.size(); ++i) {
    if (s[i] == '/' && !saw_slash && i + 1 < s.size()) {
      saw_slash = true;
      continue;
    }
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  }
  return true;
}

struct DocParser {
  WmiProblem doc;

  [[noreturn]] void fail(const Node& n, const std::string& msg) {
    throw ParseError(msg, n.line, n.col);
  }

  Rational parse_rational(const Node& n) {
    if (n.is_list || !is_number(n.sym)) fail(n, "expected a rational literal");
    Rational r = rational_from_string(n.sym);
    return r;
  }

  VarId real_var(const Node& n) {
    VarId v = doc.real_var_id(n.sym);
    if (v < 0) fail(n, "unknown variable '" + n.sym + "'");
    return v;
  }

  LinearExpr parse_expr(const Node& n) {
    LinearExpr e;
    if (!n.is_list) {
      if (is_number(n.sym)) {
        e.constant = parse_rational(n);
        return e;
      }
      e.add_term(real_var(n), Rational(1));
      return e;
    }
    if (n.children.empty() || n.children[0].is_list) fail(n, "syntax error in expression");
    const std::string& op = n.children[0].sym;
    if (op == "+") {
      if (n.children.size() < 2) fail(n, "'+' needs at least one argument");
      for (size_t i = 1; i < n.children.size(); ++i) e = e + parse_expr(n.children[i]);
      return e;
    }
    if (op == "-") {
      if (n.children.size() != 3) fail(n, "'-' needs exactly two arguments");
      return parse_expr(n.children[1]) - parse_expr(n.children[2]);
    }
    if (op == "*") {
      if (n.children.size() != 3) fail(n, "'*' needs a rational and a variable");
      Rational c = parse_rational(n.children[1]);
      e.add_term(real_var(n.children[2]), c);
      return e;
    }
    fail(n, "syntax error: unknown operator '" + op + "' in expression");
  }

  Atom parse_atom(const Node& n) {
    if (!n.is_list || n.children.size() != 3 || n.children[0].is_list)
      fail(n, "expected an atom (< e e) or (<= e e)");
    const std::string& op = n.children[0].sym;
    if (op == "=" || op == "==")
      fail(n, "measure-zero atom rejected: equality atoms have no volume");
    if (op != "<" && op != "<=") fail(n, "expected '<' or '<=' in atom");
    Atom a;
    a.expr = parse_expr(n.children[1]) - parse_expr(n.children[2]);
    a.rel = (op == "<") ? Rel::LT : Rel::LE;
    return a;
  }

  WmiLiteral parse_literal(const Node& n) {
    if (!n.is_list) {
      int b = doc.bool_var_id(n.sym);
      if (b < 0) fail(n, "unknown Boolean variable '" + n.sym + "'");
      return BoolLit{b, false};
    }
    if (!n.children.empty() && !n.children[0].is_list && n.children[0].sym == "not") {
      if (n.children.size() != 2) fail(n, "'not' needs exactly one argument");
      const Node& inner = n.children[1];
      if (!inner.is_list) {
        int b = doc.bool_var_id(inner.sym);
        if (b < 0) fail(inner, "unknown Boolean variable '" + inner.sym + "'");
        return BoolLit{b, true};
      }
      return parse_atom(inner).negated();
    }
    return parse_atom(n);
  }

  WmiClause parse_clause(const Node& n) {
    WmiClause c;
    if (n.is_list && !n.children.empty() && !n.children[0].is_list &&
        n.children[0].sym == "or") {
      if (n.children.size() < 2) fail(n, "'or' needs at least one literal");
      for (size_t i = 1; i < n.children.size(); ++i)
        c.literals.push_back(parse_literal(n.children[i]));
      return c;
    }
    c.literals.push_back(parse_literal(n));
    return c;
  }

  void parse_weight(const Node& n) {
    if (n.children.size() < 3) fail(n, "'weight' needs a literal and a coefficient");
    WeightSpec w;
    w.literal = parse_literal(n.children[1]);
    w.coefficient = parse_rational(n.children[2]);
    if (!(w.coefficient > 0)) fail(n.children[2], "weight coefficient must be positive");
    for (size_t i = 3; i < n.children.size(); ++i) {
      const Node& m = n.children[i];
      if (!m.is_list) {
        w.monomial.emplace_back(real_var(m), 1);
        continue;
      }
      if (m.children.size() != 3 || m.children[0].is_list || m.children[0].sym != "^")
        fail(m, "expected a monomial NAME or (^ NAME INT)");
      VarId v = real_var(m.children[1]);
      Rational e = parse_rational(m.children[2]);
      if (e.get_den() != 1 || e < 0) fail(m.children[2], "monomial exponent must be a non-negative integer");
      w.monomial.emplace_back(v, static_cast<int>(e.get_num().get_si()));
    }
    doc.weights.push_back(std::move(w));
  }

  void parse_form(const Node& n) {
    if (!n.is_list || n.children.empty() || n.children[0].is_list)
      fail(n, "expected a top-level form");
    const std::string& head = n.children[0].sym;
    if (head == "declare-real" || head == "declare-bool") {
      if (n.children.size() != 2 || n.children[1].is_list)
        fail(n, "declaration needs exactly one name");
      const std::string& name = n.children[1].sym;
      if (is_number(name)) fail(n.children[1], "variable name cannot be a number");
      if (doc.real_var_id(name) >= 0 || doc.bool_var_id(name) >= 0)
        fail(n.children[1], "variable '" + name + "' declared twice");
      if (head == "declare-real")
        doc.real_vars.push_back(name);
      else
        doc.bool_vars.push_back(name);
      return;
    }
    if (head == "assert") {
      if (n.children.size() != 2) fail(n, "'assert' needs exactly one clause");
      doc.clauses.push_back(parse_clause(n.children[1]));
      return;
    }
    if (head == "weight") {
      parse_weight(n);
      return;
    }
    fail(n, "syntax error: unknown form '" + head + "'");
  }
};

}  // namespace

VarId WmiProblem::real_var_id(const std::string& name) const {
  for (size_t i = 0; i < real_vars.size(); ++i)
    if (real_vars[i] == name) return static_cast<VarId>(i);
  return -1;
}

int WmiProblem::bool_var_id(const std::string& name) const {
  for (size_t i = 0; i < bool_vars.size(); ++i)
    if (bool_vars[i] == name) return static_cast<int>(i);
  return -1;
}

WmiProblem parse_wmi(std::string_view text) {
  Lexer lex{text};
  DocParser p;
  while (!lex.eof()) p.parse_form(lex.next());
  return p.doc;
}

Problem parse_problem(std::string_view text, bool allow_wide_clauses) {
  WmiProblem doc = parse_wmi(text);
  if (!doc.bool_vars.empty())
    throw ParseError("Boolean declarations are not allowed in a model-integration problem; "
                     "run the reduce step first", 1, 1);
  if (!doc.weights.empty())
    throw ParseError("weights are not allowed in a model-integration problem; "
                     "run the reduce step first", 1, 1);
  std::vector<Clause> clauses;
  clauses.reserve(doc.clauses.size());
  for (auto& wc : doc.clauses) {
    Clause c;
    for (auto& lit : wc.literals) c.literals.push_back(std::get<Atom>(lit));
    clauses.push_back(std::move(c));
  }
  return Problem::from_clauses(std::move(doc.real_vars), std::move(clauses),
                               allow_wide_clauses);
}

Query parse_query(std::string_view line, const Problem& p) {
  Lexer lex{line};
  DocParser dp;
  dp.doc.real_vars = p.variables;

  Query q;
  if (lex.eof()) throw ParseError("empty query", 1, 1);
  Node n = lex.next();
  if (!lex.eof()) throw ParseError("trailing input after query", lex.line, lex.col);

  if (!n.is_list && n.sym == "true") return q;  // no constraints
  if (!n.is_list && n.sym == "false") {
    Clause never;
    Atom a;  // 0 < 0, constant false
    a.rel = Rel::LT;
    never.literals.push_back(a);
    q.clauses.push_back(never);
    return q;
  }

  std::vector<Node> clause_nodes;
  if (n.is_list && !n.children.empty() && !n.children[0].is_list &&
      n.children[0].sym == "and") {
    for (size_t i = 1; i < n.children.size(); ++i) clause_nodes.push_back(n.children[i]);
    if (clause_nodes.empty()) throw ParseError("'and' needs at least one clause", n.line, n.col);
  } else {
    clause_nodes.push_back(n);
  }

  std::set<VarId> vars;
  for (const auto& cn : clause_nodes) {
    WmiClause wc = dp.parse_clause(cn);
    Clause c;
    for (auto& lit : wc.literals) c.literals.push_back(std::get<Atom>(lit));
    for (VarId v : c.vars()) vars.insert(v);
    q.clauses.push_back(std::move(c));
  }
  q.vars.assign(vars.begin(), vars.end());
  return q;
}

}  // namespace treemi
