// Copyright (c) the treemi contributors.
// SPDX-License-Identifier: Apache-2.0
//
// Command line driver. Exit codes: 0 success (MI = 0 included), 2 parse
// error, 3 non-tree structure, 4 unbounded variable, 5 undefined
// distribution, 6 unsupported weight, 1 anything else.
#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "treemi/engine.hpp"
#include "treemi/graph.hpp"
#include "treemi/json_io.hpp"
#include "treemi/parser.hpp"
#include "treemi/verify.hpp"
#include "treemi/wmi.hpp"

using namespace treemi;
using nlohmann::json;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in.good()) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out.good()) throw std::runtime_error("cannot write " + path);
  out << text;
}

std::string mi_line(const Rational& mi) {
  return "MI = " + to_string(mi) + " ≈ " + to_decimal_string(mi, 12);
}

VarId var_or_throw(const Problem& p, const std::string& name) {
  VarId v = p.var_id(name);
  if (v < 0) throw std::runtime_error("unknown variable " + name);
  return v;
}

struct LoadedProblem {
  Problem problem;
  PseudoTree tree;
  GraphStats stats;
  double parse_seconds = 0, analyze_seconds = 0;
};

LoadedProblem load_problem(const std::string& path, const std::string& root,
                           bool allow_wide = false) {
  LoadedProblem lp;
  auto t0 = Clock::now();
  lp.problem = parse_problem(read_file(path), allow_wide);
  lp.parse_seconds = seconds_since(t0);
  t0 = Clock::now();
  establish_support(lp.problem);
  PrimalGraph g = primal_graph(lp.problem);
  assert_tree(g, lp.problem.variables);
  lp.tree = root.empty() || root == "auto"
                ? choose_root(g)
                : root_at(g, var_or_throw(lp.problem, root));
  lp.stats = graph_stats(lp.problem, lp.tree);
  lp.analyze_seconds = seconds_since(t0);
  return lp;
}

json stats_report(const LoadedProblem& lp, const std::string& path) {
  json j;
  j["problem"] = path;
  j["stats"] = to_json(lp.stats);
  j["root"] = lp.problem.variables[lp.tree.root()];
  return j;
}

// ---------------------------------------------------------------- solve --

int cmd_solve(const std::string& path, const std::string& root, bool as_json,
              const std::string& save_table) {
  LoadedProblem lp = load_problem(path, root);
  auto t0 = Clock::now();
  BeliefTable table = run(lp.problem, lp.tree);
  Rational value = mi(table, lp.problem);
  double pass_seconds = seconds_since(t0);

  if (!save_table.empty()) {
    json tj = to_json(table, lp.problem);
    tj["fingerprint"] = problem_fingerprint(lp.problem, lp.tree.root());
    write_file(save_table, tj.dump(2));
  }
  if (as_json) {
    json j = stats_report(lp, path);
    j["mi"] = to_string(value);
    j["mi_decimal"] = to_decimal_string(value, 12);
    j["seconds"] = {{"parse", lp.parse_seconds},
                    {"analyze", lp.analyze_seconds},
                    {"passes", pass_seconds}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << mi_line(value) << "\n";
  }
  return 0;
}

// ---------------------------------------------------------------- query --

struct QueryOutcome {
  std::string text;
  std::string kind;  // "univariate" | "bivariate" | "nonconforming" | "error"
  std::string probability;
  std::string note;
};

QueryOutcome answer_query(const Solved& s, const Rational& base_mi,
                          const std::string& line) {
  QueryOutcome out;
  out.text = line;
  Query q = parse_query(line, s.problem);
  try {
    if (q.vars.size() <= 1) {
      out.kind = "univariate";
      VarId i = q.vars.empty() ? 0 : q.vars[0];
      out.probability = to_string(query_univariate(s.table, s.problem, s.tree, i, q.clauses));
      return out;
    }
    if (q.vars.size() == 2) {
      VarId i = q.vars[0], j = q.vars[1];
      if (s.tree.parent[i] == j || s.tree.parent[j] == i) {
        out.kind = "bivariate";
        out.probability =
            to_string(query_bivariate(s.table, s.problem, s.tree, i, j, q.clauses));
        return out;
      }
    }
  } catch (const NonconformingQueryError&) {
    // fall through to the constrained re-run below
  }

  out.kind = "nonconforming";
  out.note = "answered by a fresh constrained run";
  Problem constrained = s.problem.conjoin(q.clauses);
  try {
    Solved cs = solve_problem(std::move(constrained));
    out.probability = to_string(cs.table.mi_value / base_mi);
  } catch (const NonTreeError&) {
    // The conjunction closed a cycle; fall back to the exponential oracle.
    Problem again = s.problem.conjoin(q.clauses);
    establish_support(again);
    if (again.var_count() <= 8 && again.decomposed) {
      out.probability = to_string(oracle_nested_mi(again) / base_mi);
      out.note = "cycle-closing query answered by nested elimination";
    } else {
      out.kind = "error";
      out.note = "query closes a cycle and the problem is too large for the oracle";
    }
  }
  return out;
}

int cmd_query(const std::string& path, const std::string& queries_path,
              const std::string& root, bool as_json, const std::string& load_table,
              const std::string& save_table) {
  LoadedProblem lp = load_problem(path, root);
  auto t0 = Clock::now();
  Solved s;
  s.problem = std::move(lp.problem);
  s.tree = lp.tree;
  if (!load_table.empty()) {
    json tj = json::parse(read_file(load_table));
    if (tj.at("fingerprint").get<std::uint64_t>() !=
        problem_fingerprint(s.problem, s.tree.root()))
      throw std::runtime_error("belief table does not match this problem/root");
    s.table = belief_table_from_json(tj, s.problem);
  } else {
    s.table = run(s.problem, s.tree);
  }
  Rational base_mi = mi(s.table, s.problem);
  double pass_seconds = seconds_since(t0);
  if (!save_table.empty()) {
    json tj = to_json(s.table, s.problem);
    tj["fingerprint"] = problem_fingerprint(s.problem, s.tree.root());
    write_file(save_table, tj.dump(2));
  }

  std::vector<QueryOutcome> outcomes;
  t0 = Clock::now();
  std::istringstream lines(read_file(queries_path));
  std::string line;
  while (std::getline(lines, line)) {
    std::string trimmed = line;
    size_t a = trimmed.find_first_not_of(" \t\r");
    if (a == std::string::npos || trimmed[a] == ';') continue;
    outcomes.push_back(answer_query(s, base_mi, line));
  }
  double query_seconds = seconds_since(t0);

  if (as_json) {
    json j = stats_report(lp, path);
    j["mi"] = to_string(base_mi);
    j["seconds"] = {{"parse", lp.parse_seconds},
                    {"analyze", lp.analyze_seconds},
                    {"passes", pass_seconds},
                    {"queries", query_seconds}};
    json qs = json::array();
    for (const auto& o : outcomes)
      qs.push_back(json{{"query", o.text},
                        {"kind", o.kind},
                        {"probability", o.probability},
                        {"note", o.note}});
    j["queries"] = qs;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << mi_line(base_mi) << "\n";
    for (const auto& o : outcomes) {
      std::cout << "Pr[" << o.text << "] = " << o.probability << "  (" << o.kind << ")";
      if (!o.note.empty()) std::cout << "  ; " << o.note;
      std::cout << "\n";
    }
  }
  return 0;
}

// ------------------------------------------------------ marginal/moment --

int cmd_marginal(const std::string& path, const std::string& var, bool as_json) {
  LoadedProblem lp = load_problem(path, "");
  BeliefTable table = run(lp.problem, lp.tree);
  VarId v = var_or_throw(lp.problem, var);
  PiecewisePoly m = marginal(table, lp.problem, v);
  json j = to_json(m);
  if (as_json) {
    std::cout << json{{"variable", var}, {"marginal", j}}.dump(2) << "\n";
  } else {
    std::cout << j.dump() << "\n";
  }
  return 0;
}

int cmd_moment(const std::string& path, const std::string& var, int k, bool as_json) {
  LoadedProblem lp = load_problem(path, "");
  BeliefTable table = run(lp.problem, lp.tree);
  VarId v = var_or_throw(lp.problem, var);
  Rational m = moment(table, lp.problem, v, k);
  if (as_json) {
    std::cout << json{{"variable", var}, {"k", k}, {"moment", to_string(m)}}.dump(2)
              << "\n";
  } else {
    std::cout << "E[" << var << "^" << k << "] = " << to_string(m) << " ≈ "
              << to_decimal_string(m, 12) << "\n";
  }
  return 0;
}

// --------------------------------------------------------------- reduce --

int cmd_reduce(const std::string& path, const std::string& out_path, bool as_json) {
  std::string text = read_file(path);
  WmiProblem w = parse_wmi(text);
  std::string output;
  std::vector<VarOrigin> origins;
  if (w.pure_mi()) {
    output = text;  // byte-identical pass-through
  } else {
    BoolElimResult be = eliminate_booleans(w);
    ReduceResult rr = reduce_weights(be.problem);
    origins = be.origins;
    origins.insert(origins.end(), rr.origins.begin(), rr.origins.end());
    std::ostringstream os;
    os << "; reduced from " << std::filesystem::path(path).filename().string() << "\n";
    for (const auto& o : origins) os << "; origin " << o.var << ": " << o.note << "\n";
    os << pretty_print(rr.problem);
    output = os.str();
  }
  if (out_path.empty() || out_path == "-") {
    std::cout << output;
  } else {
    write_file(out_path, output);
  }
  if (as_json) {
    json js = json::array();
    for (const auto& o : origins) js.push_back(json{{"var", o.var}, {"note", o.note}});
    std::cout << json{{"origins", js}}.dump(2) << "\n";
  }
  return 0;
}

// ------------------------------------------------------------------ gen --

int cmd_gen(const std::string& shape, int n, std::uint64_t seed,
            const std::string& subset_list, long target, const std::string& out_path,
            bool as_json) {
  Problem problem;
  json truth;
  truth["shape"] = shape;
  truth["seed"] = seed;

  if (shape == "path" || shape == "star" || shape == "snow") {
    problem = shape == "path" ? gen_path(n, seed)
              : shape == "star" ? gen_star(n, seed)
                                : gen_snow(n, seed);
    truth["n"] = n;
    Problem copy = problem;
    Solved s = solve_problem(copy);
    truth["mi"] = to_string(s.table.mi_value);
  } else if (shape == "subset-chain" || shape == "subset-tree") {
    SubsetInstance inst;
    std::istringstream ss(subset_list);
    std::string tok;
    while (std::getline(ss, tok, ',')) inst.s.push_back(std::stol(tok));
    if (inst.s.empty()) throw std::runtime_error("--S is required for subset shapes");
    inst.target = target;
    truth["S"] = inst.s;
    truth["L"] = target;
    int nn = static_cast<int>(inst.s.size());
    if (shape == "subset-chain") {
      ChainInstance chain = gen_subset_chain(inst);
      problem = std::move(chain.problem);
      Rational mi_total(1), per(1);
      for (int i = 0; i < nn; ++i) {
        mi_total *= rat(2, nn);  // 2^n / n^n
        per *= rat(1, nn);
      }
      truth["mi"] = to_string(mi_total);
      truth["mi_with_query"] = to_string(Rational(subset_count(inst)) * per);
      truth["subset_count"] = subset_count(inst);
      truth["query"] = "(and (< " + to_string(Rational(target) - rat(1, 2)) + " x" +
                       std::to_string(nn) + ") (< x" + std::to_string(nn) + " " +
                       to_string(Rational(target) + rat(1, 2)) + "))";
    } else {
      problem = gen_subset_tree(inst);
      Rational mi_total(1);
      for (int i = 0; i < nn; ++i) mi_total *= 2;
      for (int i = 0; i < 2 * nn - 1; ++i) mi_total /= (2 * nn);
      truth["mi"] = to_string(mi_total);  // 2^n * (1/(2n))^(2n-1)
      truth["note"] = "primal graph contains triangles; tree solvers must reject it";
    }
  } else {
    throw std::runtime_error("unknown shape " + shape);
  }

  std::string text = pretty_print(problem);
  write_file(out_path, text);
  write_file(out_path + ".truth.json", truth.dump(2) + "\n");
  if (as_json)
    std::cout << truth.dump(2) << "\n";
  else
    std::cout << "wrote " << out_path << " (" << problem.var_count() << " variables)\n";
  return 0;
}

// --------------------------------------------------------------- oracle --

int cmd_oracle(const std::string& path, const std::string& mode, std::uint64_t samples,
               std::uint64_t seed, bool has_seed, bool as_json) {
  if (mode == "nested") {
    Problem p = parse_problem(read_file(path));
    establish_support(p);
    Rational value = oracle_nested_mi(p);
    if (as_json)
      std::cout << json{{"mode", "nested"}, {"mi", to_string(value)}}.dump(2) << "\n";
    else
      std::cout << mi_line(value) << "\n";
    return 0;
  }
  if (mode == "mc") {
    if (!has_seed) throw std::runtime_error("--seed is required for the Monte Carlo oracle");
    Problem p = parse_problem(read_file(path), /*allow_wide_clauses=*/true);
    establish_support(p);
    McEstimate est = oracle_monte_carlo(p, samples, seed);
    if (as_json) {
      std::cout << json{{"mode", "mc"},
                        {"estimate", est.estimate},
                        {"std_error", est.std_error},
                        {"samples", est.samples},
                        {"seed", est.seed},
                        {"hits", est.hits}}
                       .dump(2)
                << "\n";
    } else {
      std::cout << "MI ≈ " << est.estimate << " ± " << est.std_error << " ("
                << est.samples << " samples, seed " << est.seed << ")\n";
    }
    return 0;
  }
  throw std::runtime_error("unknown oracle mode " + mode);
}

// ---------------------------------------------------------------- bench --

struct BenchQuery {
  std::vector<Clause> clauses;
  VarId i = 0, j = -1;  // j >= 0 for bivariate
};

BenchQuery random_query(const Solved& s, SplitMix64& rng) {
  BenchQuery q;
  const Problem& p = s.problem;
  bool bivariate = !p.edge_formulas.empty() && rng.next() % 2 == 0;
  if (bivariate) {
    auto it = p.edge_formulas.begin();
    std::advance(it, rng.next() % p.edge_formulas.size());
    q.i = it->first.first;
    q.j = it->first.second;
    Clause c{{Atom{}}};
    c.literals[0].rel = Rel::LT;
    c.literals[0].expr.add_term(q.i, rat(rng.next() % 2 == 0 ? 1 : -1));
    c.literals[0].expr.add_term(q.j, rat(rng.next() % 2 == 0 ? -1 : 1));
    c.literals[0].expr.constant = rat(static_cast<long>(rng.next() % 9) - 4, 2);
    q.clauses.push_back(std::move(c));
    return q;
  }
  q.i = static_cast<VarId>(rng.next() % p.var_count());
  const Interval& sup = p.support[q.i];
  Rational a = sup.lo + (sup.hi - sup.lo) * rat(static_cast<long>(rng.next() % 101), 102);
  Rational b = sup.lo + (sup.hi - sup.lo) * rat(static_cast<long>(rng.next() % 101), 102);
  if (b < a) std::swap(a, b);
  Clause lower{{Atom{}}}, upper{{Atom{}}};
  lower.literals[0].rel = Rel::LT;
  lower.literals[0].expr.constant = a;
  lower.literals[0].expr.add_term(q.i, rat(-1));
  upper.literals[0].rel = Rel::LT;
  upper.literals[0].expr.constant = -b;
  upper.literals[0].expr.add_term(q.i, rat(1));
  q.clauses.push_back(std::move(lower));
  q.clauses.push_back(std::move(upper));
  return q;
}

int cmd_bench(const std::string& path, int n_queries, std::uint64_t seed,
              const std::string& out_csv, bool as_json) {
  std::vector<std::string> files;
  if (std::filesystem::is_directory(path)) {
    for (const auto& entry : std::filesystem::directory_iterator(path))
      if (entry.path().extension() == ".mi") files.push_back(entry.path().string());
    std::sort(files.begin(), files.end());
  } else {
    files.push_back(path);
  }
  if (files.empty()) throw std::runtime_error("no .mi problems found in " + path);

  std::ostringstream csv;
  csv << "problem,query_index,amortized_cum_seconds,scratch_cum_seconds\n";
  json summary = json::array();

  for (const auto& file : files) {
    SplitMix64 rng(seed);
    Problem parsed = parse_problem(read_file(file));

    // Amortized: one full message-passing run, then table lookups.
    auto t0 = Clock::now();
    Solved s = solve_problem(parsed);
    Rational base_mi = s.table.mi_value;
    double table_cum = seconds_since(t0);
    if (base_mi == 0) throw std::runtime_error(file + " has MI = 0; benchmark skipped");

    std::vector<BenchQuery> queries;
    for (int k = 0; k < n_queries; ++k) queries.push_back(random_query(s, rng));

    std::vector<double> amortized_cum, scratch_cum;
    std::vector<Rational> amortized_vals, scratch_vals;
    for (const auto& q : queries) {
      t0 = Clock::now();
      Rational v = q.j >= 0
                       ? query_bivariate(s.table, s.problem, s.tree, q.i, q.j, q.clauses)
                       : query_univariate(s.table, s.problem, s.tree, q.i, q.clauses);
      table_cum += seconds_since(t0);
      amortized_cum.push_back(table_cum);
      amortized_vals.push_back(v);
    }

    // Baseline: a fresh single-rooted upward pass per query.
    double scratch = 0;
    for (const auto& q : queries) {
      t0 = Clock::now();
      Problem constrained = s.problem.conjoin(q.clauses);
      establish_support(constrained);
      Rational v;
      if (constrained.infeasible) {
        v = 0;
      } else {
        PrimalGraph g = primal_graph(constrained);
        PseudoTree t = root_at(g, q.i);
        v = mi_upward_only(constrained, t) / base_mi;
      }
      scratch += seconds_since(t0);
      scratch_cum.push_back(scratch);
      scratch_vals.push_back(v);
    }

    for (int k = 0; k < n_queries; ++k) {
      if (amortized_vals[k] != scratch_vals[k])
        throw std::logic_error("benchmark answers diverge on " + file);
      csv << file << "," << k << "," << amortized_cum[k] << "," << scratch_cum[k] << "\n";
    }
    summary.push_back(json{{"problem", file},
                           {"queries", n_queries},
                           {"amortized_total_seconds", amortized_cum.back()},
                           {"scratch_total_seconds", scratch_cum.back()},
                           {"speedup", scratch_cum.back() / amortized_cum.back()}});
  }

  if (!out_csv.empty()) write_file(out_csv, csv.str());
  if (as_json)
    std::cout << summary.dump(2) << "\n";
  else
    for (const auto& row : summary)
      std::cout << row["problem"].get<std::string>() << ": amortized "
                << row["amortized_total_seconds"].get<double>() << "s vs scratch "
                << row["scratch_total_seconds"].get<double>() << "s (speedup "
                << row["speedup"].get<double>() << "x)\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact model integration over SMT(LRA) formulas with tree primal graphs"};
  app.require_subcommand(1);

  std::string file, root = "auto", queries_file, out, var, save_table, load_table;
  std::string shape = "path", subset_list, mode = "nested";
  bool as_json = false;
  int k = 1, n = 5, n_queries = 100;
  long target = 1;
  std::uint64_t seed = 0, samples = 1000000;

  auto* solve = app.add_subcommand("solve", "compute the model integral");
  solve->add_option("file", file)->required();
  solve->add_option("--root", root, "root variable name or 'auto'");
  solve->add_flag("--json", as_json);
  solve->add_option("--save-table", save_table, "write the belief table as JSON");

  auto* query = app.add_subcommand("query", "answer queries from one run");
  query->add_option("file", file)->required();
  query->add_option("queries", queries_file, "file with one query per line")->required();
  query->add_option("--root", root);
  query->add_flag("--json", as_json);
  query->add_option("--save-table", save_table);
  query->add_option("--load-table", load_table);

  auto* marg = app.add_subcommand("marginal", "normalized marginal density");
  marg->add_option("file", file)->required();
  marg->add_option("var", var)->required();
  marg->add_flag("--json", as_json);

  auto* mom = app.add_subcommand("moment", "k-th moment of a variable");
  mom->add_option("file", file)->required();
  mom->add_option("var", var)->required();
  mom->add_option("k", k)->required();
  mom->add_flag("--json", as_json);

  auto* reduce = app.add_subcommand("reduce", "weighted/Boolean problem to pure MI");
  reduce->add_option("file", file)->required();
  reduce->add_option("-o,--out", out, "output problem file (default stdout)");
  reduce->add_flag("--json", as_json);

  auto* gen = app.add_subcommand("gen", "generate benchmark problems");
  gen->add_option("--shape", shape, "path|star|snow|subset-chain|subset-tree")->required();
  gen->add_option("--n", n);
  auto* gen_seed = gen->add_option("--seed", seed, "required for randomized shapes");
  gen->add_option("--S", subset_list, "comma-separated positive integers");
  gen->add_option("--L", target, "subset-sum target");
  gen->add_option("-o,--out", out)->required();
  gen->add_flag("--json", as_json);

  auto* oracle = app.add_subcommand("oracle", "independent MI oracles");
  oracle->add_option("file", file)->required();
  oracle->add_option("--mode", mode, "nested|mc");
  oracle->add_option("--samples", samples);
  auto* oracle_seed = oracle->add_option("--seed", seed);
  oracle->add_flag("--json", as_json);

  auto* bench = app.add_subcommand("bench", "amortized vs from-scratch query timing");
  bench->add_option("corpus", file, "a .mi file or a directory of them")->required();
  bench->add_option("--queries", n_queries);
  bench->add_option("--seed", seed)->required();
  bench->add_option("--out", out, "CSV output path");
  bench->add_flag("--json", as_json);

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(solve)) return cmd_solve(file, root, as_json, save_table);
    if (app.got_subcommand(query))
      return cmd_query(file, queries_file, root, as_json, load_table, save_table);
    if (app.got_subcommand(marg)) return cmd_marginal(file, var, as_json);
    if (app.got_subcommand(mom)) return cmd_moment(file, var, k, as_json);
    if (app.got_subcommand(reduce)) return cmd_reduce(file, out, as_json);
    if (app.got_subcommand(gen)) {
      bool randomized = shape == "path" || shape == "star" || shape == "snow";
      if (randomized && gen_seed->count() == 0)
        throw std::runtime_error("--seed is required for randomized shapes");
      return cmd_gen(shape, n, seed, subset_list, target, out, as_json);
    }
    if (app.got_subcommand(oracle))
      return cmd_oracle(file, mode, samples, seed, oracle_seed->count() > 0, as_json);
    if (app.got_subcommand(bench)) return cmd_bench(file, n_queries, seed, out, as_json);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const NonTreeError& e) {
    std::cerr << "structure error: " << e.what() << "\n";
    return 3;
  } catch (const UnboundedError& e) {
    std::cerr << "support error: " << e.what() << "\n";
    return 4;
  } catch (const UndefinedDistributionError& e) {
    std::cerr << "undefined distribution: " << e.what() << "\n";
    return 5;
  } catch (const UnsupportedWeightError& e) {
    std::cerr << "unsupported weight: " << e.what() << "\n";
    return 6;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
