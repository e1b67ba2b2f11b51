// Copyright (c) the treemi contributors.
// SPDX-License-Identifier: Apache-2.0
#include "treemi/json_io.hpp"

namespace treemi {

using nlohmann::json;

json to_json(const PiecewisePoly& pw) {
  json arr = json::array();
  for (const auto& piece : pw.pieces()) {
    json coeffs = json::array();
    for (const auto& c : piece.poly.coeffs()) coeffs.push_back(to_string(c));
    arr.push_back(json{{"lower", to_string(piece.lower)},
                       {"upper", to_string(piece.upper)},
                       {"coeffs", coeffs}});
  }
  return arr;
}

PiecewisePoly piecewise_from_json(const json& j) {
  std::vector<Piece> pieces;
  for (const auto& pj : j) {
    std::vector<Rational> coeffs;
    for (const auto& cj : pj.at("coeffs")) coeffs.push_back(rational_from_string(cj.get<std::string>()));
    pieces.push_back(Piece{rational_from_string(pj.at("lower").get<std::string>()),
                           rational_from_string(pj.at("upper").get<std::string>()),
                           Polynomial(std::move(coeffs))});
  }
  return PiecewisePoly::from_pieces(std::move(pieces));
}

namespace {

json atom_to_json(const Atom& a, const Problem& p) {
  json coeffs = json::object();
  for (const auto& [v, c] : a.expr.coeffs) coeffs[p.variables[v]] = to_string(c);
  return json{{"coeffs", coeffs},
              {"const", to_string(a.expr.constant)},
              {"rel", a.rel == Rel::LT ? "<" : "<="}};
}

json clause_to_json(const Clause& c, const Problem& p) {
  json lits = json::array();
  for (const auto& a : c.literals) lits.push_back(atom_to_json(a, p));
  return lits;
}

}  // namespace

json to_json(const Problem& p) {
  json j;
  j["variables"] = p.variables;
  json cls = json::array();
  for (const auto& c : p.clauses) cls.push_back(clause_to_json(c, p));
  j["clauses"] = cls;
  if (p.decomposed) {
    json nodes = json::object();
    for (VarId v = 0; v < p.var_count(); ++v) {
      json arr = json::array();
      for (const auto& c : p.node_formulas[v]) arr.push_back(clause_to_json(c, p));
      nodes[p.variables[v]] = arr;
    }
    j["node_formulas"] = nodes;
    json edges = json::array();
    for (const auto& [key, cls2] : p.edge_formulas) {
      json arr = json::array();
      for (const auto& c : cls2) arr.push_back(clause_to_json(c, p));
      edges.push_back(json{{"vars", {p.variables[key.first], p.variables[key.second]}},
                           {"clauses", arr}});
    }
    j["edge_formulas"] = edges;
  }
  if (p.support_ok) {
    json sup = json::object();
    for (VarId v = 0; v < p.var_count(); ++v)
      sup[p.variables[v]] = {to_string(p.support[v].lo), to_string(p.support[v].hi)};
    j["support"] = sup;
    j["infeasible"] = p.infeasible;
  }
  return j;
}

json to_json(const GraphStats& s) {
  return json{{"n", s.n},         {"m", s.m},
              {"diameter", s.diameter}, {"h_t", s.h_t},
              {"h_p", s.h_p},     {"leaves", s.leaves},
              {"cost_estimate", s.cost_estimate.get_str()}};
}

json to_json(const BeliefTable& t, const Problem& p) {
  json j;
  j["mi"] = to_string(t.mi_value);
  json msgs = json::array();
  for (const auto& [edge, value] : t.messages)
    msgs.push_back(json{{"from", p.variables[edge.first]},
                        {"to", p.variables[edge.second]},
                        {"value", to_json(value)}});
  j["messages"] = msgs;
  json beliefs = json::object();
  for (VarId v = 0; v < p.var_count(); ++v) beliefs[p.variables[v]] = to_json(t.beliefs[v]);
  j["beliefs"] = beliefs;
  json comps = json::array();
  for (const auto& c : t.component_mi) comps.push_back(to_string(c));
  j["component_mi"] = comps;
  return j;
}

BeliefTable belief_table_from_json(const json& j, const Problem& p) {
  BeliefTable t;
  t.mi_value = rational_from_string(j.at("mi").get<std::string>());
  for (const auto& mj : j.at("messages")) {
    VarId from = p.var_id(mj.at("from").get<std::string>());
    VarId to = p.var_id(mj.at("to").get<std::string>());
    if (from < 0 || to < 0) throw std::invalid_argument("belief table names unknown variable");
    t.messages[{from, to}] = piecewise_from_json(mj.at("value"));
  }
  t.beliefs.assign(p.var_count(), PiecewisePoly());
  for (VarId v = 0; v < p.var_count(); ++v)
    t.beliefs[v] = piecewise_from_json(j.at("beliefs").at(p.variables[v]));
  for (const auto& cj : j.at("component_mi"))
    t.component_mi.push_back(rational_from_string(cj.get<std::string>()));
  return t;
}

std::uint64_t problem_fingerprint(const Problem& p, VarId root) {
  std::string text = pretty_print(p) + "#root=" + std::to_string(root);
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace treemi
