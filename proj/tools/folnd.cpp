#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "folnd/identities.hpp"
#include "folnd/json_io.hpp"
#include "folnd/rewrite.hpp"
#include "folnd/testkit.hpp"

using namespace folnd;

namespace {

struct CliError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CliError("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

std::string chomp(std::string s) {
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

struct Session {
  Signature sig;
  VarTable vars;
  std::vector<FiniteModel> models;
  std::vector<std::string> model_names;

  void load_models(const std::vector<std::string>& paths) {
    for (const auto& p : paths) {
      FiniteModel m = load_model(p);
      for (const auto& [name, arity] : m.sig.predicates) {
        if (sig.declared(name) && sig.arity(name) != arity)
          throw CliError("conflicting arity for predicate " + name + " in " + p);
        if (!sig.declared(name)) sig.declare(name, arity);
      }
      models.push_back(std::move(m));
      model_names.push_back(p);
    }
  }

  FormulaPtr read_formula(const std::string& inline_text, const std::string& file) {
    std::string text = inline_text;
    if (!file.empty()) {
      if (!text.empty()) throw CliError("give either an inline formula or a file, not both");
      text = chomp(slurp(file));
    }
    if (text.empty()) throw CliError("no formula given");
    return parse_infer(text, sig, vars);
  }
};

Assignment parse_assignment(Session& s, const std::string& spec, int domain_size) {
  std::set<VarId> seen;
  std::vector<std::pair<VarId, int>> pairs;
  std::istringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    auto eq = item.find('=');
    if (eq == std::string::npos) throw CliError("bad assignment item: " + item);
    auto trim = [](std::string t) {
      size_t a = t.find_first_not_of(" \t");
      size_t b = t.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : t.substr(a, b - a + 1);
    };
    std::string name = trim(item.substr(0, eq));
    std::string val = trim(item.substr(eq + 1));
    if (name.empty() || val.empty()) throw CliError("bad assignment item: " + item);
    VarId v = s.vars.intern(name);
    int e = std::stoi(val);
    if (e < 0 || e >= domain_size) throw CliError("value outside the domain in: " + item);
    if (!seen.insert(v).second) throw CliError("variable assigned twice: " + name);
    pairs.push_back({v, e});
  }
  std::sort(pairs.begin(), pairs.end());
  Assignment a;
  for (const auto& [v, e] : pairs) {
    a.window.push_back(v);
    a.values.push_back(e);
  }
  return a;
}

QuantifierPrefix parse_prefix(Session& s, const std::string& spec) {
  QuantifierPrefix out;
  std::istringstream in(spec);
  std::string q, v;
  while (in >> q) {
    if (!(in >> v)) throw CliError("prefix wants pairs like \"forall z exists w\"");
    if (q != "forall" && q != "exists") throw CliError("prefix quantifier must be forall or exists");
    out.push_back({q == "forall" ? QKind::Forall : QKind::Exists, s.vars.intern(v)});
  }
  return out;
}

std::string show_assignment(const Session& s, const Assignment& a) {
  std::ostringstream out;
  for (size_t i = 0; i < a.window.size(); ++i) {
    if (i) out << ", ";
    out << s.vars.name_of(a.window[i]) << "=" << a.values[i];
  }
  return out.str();
}

nlohmann::json assignment_json(const Session& s, const Assignment& a) {
  nlohmann::json j = nlohmann::json::object();
  for (size_t i = 0; i < a.window.size(); ++i) j[s.vars.name_of(a.window[i])] = a.values[i];
  return j;
}

int cmd_parse(Session& s, const std::string& formula, const std::string& file, bool json_out) {
  FormulaPtr f = s.read_formula(formula, file);
  if (json_out) {
    nlohmann::json j;
    j["formula"] = print(f, s.vars);
    j["size"] = formula_size(f);
    nlohmann::json fv = nlohmann::json::array();
    for (VarId v : free_vars(f)) fv.push_back(s.vars.name_of(v));
    j["free_vars"] = std::move(fv);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << print(f, s.vars) << "\n";
  }
  return 0;
}

int cmd_eval(Session& s, const std::string& formula, const std::string& file,
             const std::string& assign, bool json_out) {
  if (s.models.size() != 1) throw CliError("eval wants exactly one --model");
  FormulaPtr f = s.read_formula(formula, file);
  validate(f, s.sig);
  Assignment a = parse_assignment(s, assign, s.models[0].domain_size);
  for (VarId v : free_vars(f))
    if (!a.has(v)) throw CliError("free variable " + s.vars.name_of(v) + " is unassigned");
  bool sat = satisfies(s.models[0], f, a);
  if (json_out) {
    nlohmann::json j;
    j["satisfied"] = sat;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << (sat ? "true" : "false") << "\n";
  }
  return sat ? 0 : 1;
}

int cmd_meaning(Session& s, const std::string& formula, const std::string& file,
                const std::string& window_spec, bool json_out) {
  if (s.models.size() != 1) throw CliError("meaning wants exactly one --model");
  FormulaPtr f = s.read_formula(formula, file);
  validate(f, s.sig);
  Window w;
  if (window_spec.empty()) {
    w = make_window(free_vars(f));
  } else {
    std::istringstream in(window_spec);
    std::string name;
    std::set<VarId> vs;
    while (std::getline(in, name, ',')) vs.insert(s.vars.intern(name));
    w = make_window(vs);
  }
  MeaningSet ms = meaning(s.models[0], f, w);
  if (json_out) {
    nlohmann::json j;
    nlohmann::json wj = nlohmann::json::array();
    for (VarId v : ms.window) wj.push_back(s.vars.name_of(v));
    j["window"] = std::move(wj);
    j["rows"] = nlohmann::json::array();
    for (const auto& row : ms.rows) j["rows"].push_back(row);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "window:";
    for (VarId v : ms.window) std::cout << " " << s.vars.name_of(v);
    std::cout << "\n";
    for (const auto& row : ms.rows) {
      for (size_t i = 0; i < row.size(); ++i) std::cout << (i ? " " : "") << row[i];
      std::cout << "\n";
    }
    std::cout << ms.rows.size() << " row(s)\n";
  }
  return 0;
}

int cmd_nondep(Session& s, const std::string& formula, const std::string& file,
               const std::string& var, const std::string& theta_text, bool json_out) {
  if (s.models.empty()) throw CliError("nondep wants at least one --model");
  FormulaPtr f = s.read_formula(formula, file);
  FormulaPtr theta = theta_text.empty() ? f_true() : parse_infer(theta_text, s.sig, s.vars);
  VarId x = s.vars.intern(var);
  validate(f, s.sig);
  validate(theta, s.sig);
  bool all_hold = true;
  nlohmann::json models_j = nlohmann::json::array();
  for (size_t i = 0; i < s.models.size(); ++i) {
    NonDepVerdict v = check_nondep(s.models[i], f, x, theta);
    if (json_out) {
      nlohmann::json mj;
      mj["model"] = s.model_names[i];
      mj["holds"] = v.holds;
      if (!v.holds) {
        mj["counterexample"] = assignment_json(s, v.cex_assignment);
        mj["b"] = v.cex_b;
      }
      models_j.push_back(std::move(mj));
    } else {
      std::cout << s.model_names[i] << ": " << (v.holds ? "non-dependent" : "dependent");
      if (!v.holds)
        std::cout << "  [" << show_assignment(s, v.cex_assignment) << "; "
                  << s.vars.name_of(x) << " -> " << v.cex_b << "]";
      std::cout << "\n";
    }
    all_hold = all_hold && v.holds;
  }
  if (json_out) {
    nlohmann::json j;
    j["holds"] = all_hold;
    j["models"] = std::move(models_j);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << (all_hold ? "holds" : "fails") << "\n";
  }
  return all_hold ? 0 : 1;
}

struct IdentityArgs {
  std::string name;
  std::vector<std::string> phis;
  std::string psi, theta, iota, epsilon, templ, prefix, outer, zs;
  std::string var = "x", u;
  bool outer_exists = false;
};

int cmd_identity(Session& s, const IdentityArgs& args, bool json_out) {
  if (s.models.size() != 1) throw CliError("identity wants exactly one --model");
  IdentitySlots slots;
  slots.x = s.vars.intern(args.var);
  if (!args.u.empty()) slots.u = s.vars.intern(args.u);
  for (const auto& p : args.phis) slots.phis.push_back(parse_infer(p, s.sig, s.vars));
  if (!slots.phis.empty()) slots.phi = slots.phis.front();
  if (!args.psi.empty()) slots.psi = parse_infer(args.psi, s.sig, s.vars);
  if (!args.theta.empty()) slots.theta = parse_infer(args.theta, s.sig, s.vars);
  if (!args.iota.empty()) slots.iota = parse_infer(args.iota, s.sig, s.vars);
  if (!args.epsilon.empty()) slots.epsilon = parse_infer(args.epsilon, s.sig, s.vars);
  if (!args.templ.empty()) slots.templ = parse_boolean_template(args.templ);
  if (!args.prefix.empty()) slots.prefix = parse_prefix(s, args.prefix);
  if (!args.outer.empty()) slots.outer = parse_prefix(s, args.outer);
  if (!args.zs.empty()) {
    std::istringstream in(args.zs);
    std::string name;
    while (std::getline(in, name, ',')) slots.zs.push_back(s.vars.intern(name));
  }
  slots.outer_exists = args.outer_exists;
  IdentityReport rep;
  try {
    rep = check_identity(args.name, s.models[0], slots);
  } catch (const std::invalid_argument& e) {
    throw CliError(e.what());
  }
  std::string status = rep.status == IdentityStatus::Holds    ? "holds"
                       : rep.status == IdentityStatus::Fails ? "fails"
                                                             : "side-conditions-unmet";
  if (json_out) {
    nlohmann::json j;
    j["identity"] = args.name;
    j["status"] = status;
    j["detail"] = rep.detail;
    if (rep.status == IdentityStatus::Fails)
      j["counterexample"] = assignment_json(s, rep.counterexample);
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << args.name << ": " << status << " (" << rep.detail << ")";
    if (rep.status == IdentityStatus::Fails && !rep.counterexample.window.empty())
      std::cout << "  [" << show_assignment(s, rep.counterexample) << "]";
    std::cout << "\n";
  }
  return rep.status == IdentityStatus::Fails ? 1 : 0;
}

int cmd_simplify(Session& s, const std::string& formula, const std::string& file,
                 const std::string& facts_path, int budget, const std::string& trace_out,
                 bool json_out) {
  FormulaPtr f = s.read_formula(formula, file);
  RewriteSession rs;
  rs.vars = &s.vars;
  if (!facts_path.empty()) rs.facts = load_facts(facts_path, s.sig, s.vars);
  validate(f, s.sig);
  rs.sig = s.sig;
  rs.models = s.models;
  rs.model_names = s.model_names;
  auto [result, trace] = simplify(rs, f, budget);
  if (!trace_out.empty()) save_trace(trace, s.vars, trace_out);
  if (json_out) {
    std::cout << trace_to_json_text(trace, s.vars);
  } else {
    std::cout << print(result, s.vars) << "\n";
    for (const auto& st : trace.steps) {
      std::cout << "  step: " << st.rule << " at [";
      for (size_t i = 0; i < st.path.size(); ++i) std::cout << (i ? "," : "") << st.path[i];
      std::cout << "]\n";
      for (const auto& fu : st.facts_used) std::cout << "    using: " << fu << "\n";
    }
    if (trace.budget_exhausted) std::cout << "  (budget exhausted)\n";
  }
  return 0;
}

int cmd_verify(Session& s, const std::string& trace_path, const std::string& facts_path,
               bool json_out) {
  RewriteSession rs;
  rs.vars = &s.vars;
  if (!facts_path.empty()) rs.facts = load_facts(facts_path, s.sig, s.vars);
  RewriteTrace trace = load_trace(trace_path, s.sig, s.vars);
  rs.sig = s.sig;
  rs.models = s.models;
  rs.model_names = s.model_names;
  TraceReport rep = verify_trace(rs, trace);
  if (json_out) {
    nlohmann::json j;
    j["ok"] = rep.ok;
    j["lines"] = rep.lines;
    std::cout << j.dump(2) << "\n";
  } else {
    for (const auto& l : rep.lines) std::cout << l << "\n";
    std::cout << (rep.ok ? "trace verified" : "trace verification FAILED") << "\n";
  }
  return rep.ok ? 0 : 1;
}

int cmd_proptest(uint64_t seed, int iters, bool json_out) {
  GenConfig cfg;
  cfg.seed = seed;
  cfg.pool = default_pool();
  Rng rng(seed);
  int triangle_fail = 0, roundtrip_fail = 0, sugar_fail = 0;
  for (int i = 0; i < iters; ++i) {
    FiniteModel m = gen_model(cfg, rng);
    FormulaPtr phi = gen_formula(cfg, rng);
    VarId x{1 + (int)rng.below((uint64_t)cfg.max_vars)};
    bool direct = check_nondep(m, phi, x, f_true()).holds;
    bool plain = check_nondep_plain_equiv(m, phi, x);
    bool subst = check_nondep_subst(m, phi, x, f_true());
    if (direct != plain || plain != subst) ++triangle_fail;
    VarTable vt;
    Signature sig = cfg.pool;
    try {
      FormulaPtr back = parse(print(phi, vt), sig, vt);
      if (!struct_eq(back, phi)) ++roundtrip_fail;
    } catch (const std::exception&) {
      ++roundtrip_fail;
    }
    if (!struct_eq(desugar(sugar(phi)), desugar(phi))) ++sugar_fail;
  }
  bool ok = triangle_fail == 0 && roundtrip_fail == 0 && sugar_fail == 0;
  if (json_out) {
    nlohmann::json j;
    j["seed"] = seed;
    j["iters"] = iters;
    j["triangle_failures"] = triangle_fail;
    j["roundtrip_failures"] = roundtrip_fail;
    j["sugar_failures"] = sugar_fail;
    j["ok"] = ok;
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "seed " << seed << ", " << iters << " iteration(s)\n"
              << "nondep triangle failures: " << triangle_fail << "\n"
              << "parse/print roundtrip failures: " << roundtrip_fail << "\n"
              << "sugar/desugar failures: " << sugar_fail << "\n"
              << (ok ? "all properties passed" : "PROPERTY FAILURES") << "\n";
  }
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite-model toolkit for variable non-dependence and certified simplification"};
  app.require_subcommand(1);
  bool json_out = false;
  app.add_flag("--json", json_out, "JSON output");

  Session session;
  std::vector<std::string> model_paths;
  std::string formula, formula_file;

  auto add_common = [&](CLI::App* sub, bool with_formula) {
    sub->add_option("--model,--models", model_paths, "model file(s)");
    if (with_formula) {
      sub->add_option("--formula,-f", formula, "formula text");
      sub->add_option("--formula-file", formula_file, "file holding the formula");
    }
  };

  auto* parse_cmd = app.add_subcommand("parse", "parse and reprint a formula");
  add_common(parse_cmd, true);

  std::string assign;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a formula under an assignment");
  add_common(eval_cmd, true);
  eval_cmd->add_option("--assign", assign, "assignment, e.g. \"x=0,y=1\"");

  std::string window_spec;
  auto* meaning_cmd = app.add_subcommand("meaning", "enumerate the meaning set");
  add_common(meaning_cmd, true);
  meaning_cmd->add_option("--window", window_spec, "comma separated window variables");

  std::string var = "x", theta_text;
  auto* nondep_cmd = app.add_subcommand("nondep", "check variable non-dependence");
  add_common(nondep_cmd, true);
  nondep_cmd->add_option("--var", var, "the variable")->required();
  nondep_cmd->add_option("--theta", theta_text, "provided condition (default true)");

  IdentityArgs ia;
  auto* identity_cmd = app.add_subcommand("identity", "check a named identity on a model");
  add_common(identity_cmd, false);
  identity_cmd->add_option("--name", ia.name, "identity name")->required();
  identity_cmd->add_option("--phi", ia.phis, "phi (repeatable for phi_1..phi_n)");
  identity_cmd->add_option("--psi", ia.psi, "psi");
  identity_cmd->add_option("--theta", ia.theta, "theta");
  identity_cmd->add_option("--iota", ia.iota, "iota");
  identity_cmd->add_option("--epsilon", ia.epsilon, "epsilon");
  identity_cmd->add_option("--template", ia.templ, "boolean template over _1, _2, ...");
  identity_cmd->add_option("--prefix", ia.prefix, "prefix, e.g. \"forall z exists w\"");
  identity_cmd->add_option("--outer", ia.outer, "outer bounded block, same syntax");
  identity_cmd->add_option("--zs", ia.zs, "comma separated z variables");
  identity_cmd->add_option("--var", ia.var, "the x variable (default x)");
  identity_cmd->add_option("--u", ia.u, "the wrapper variable");
  identity_cmd->add_flag("--outer-exists", ia.outer_exists, "existential wrapper");

  std::string facts_path, trace_out;
  int budget = 64;
  auto* simplify_cmd = app.add_subcommand("simplify", "simplify with a certified trace");
  add_common(simplify_cmd, true);
  simplify_cmd->add_option("--facts", facts_path, "facts file");
  simplify_cmd->add_option("--budget", budget, "step budget (default 64)");
  simplify_cmd->add_option("--trace-out", trace_out, "write the trace here");

  std::string trace_path;
  auto* verify_cmd = app.add_subcommand("verify", "replay and verify a trace");
  add_common(verify_cmd, false);
  verify_cmd->add_option("--trace", trace_path, "trace file")->required();
  verify_cmd->add_option("--facts", facts_path, "facts file");

  uint64_t seed = 0;
  int iters = 200;
  auto* proptest_cmd = app.add_subcommand("proptest", "run the property battery");
  proptest_cmd->add_option("--seed", seed, "seed (default 0)");
  proptest_cmd->add_option("--iters", iters, "iterations (default 200)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    session.load_models(model_paths);
    if (parse_cmd->parsed()) return cmd_parse(session, formula, formula_file, json_out);
    if (eval_cmd->parsed()) return cmd_eval(session, formula, formula_file, assign, json_out);
    if (meaning_cmd->parsed())
      return cmd_meaning(session, formula, formula_file, window_spec, json_out);
    if (nondep_cmd->parsed())
      return cmd_nondep(session, formula, formula_file, var, theta_text, json_out);
    if (identity_cmd->parsed()) return cmd_identity(session, ia, json_out);
    if (simplify_cmd->parsed())
      return cmd_simplify(session, formula, formula_file, facts_path, budget, trace_out,
                          json_out);
    if (verify_cmd->parsed()) return cmd_verify(session, trace_path, facts_path, json_out);
    if (proptest_cmd->parsed()) return cmd_proptest(seed, iters, json_out);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const CliError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
