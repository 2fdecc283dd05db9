#include "folnd/json_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace folnd {

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

FactStatus status_from(const std::string& s) {
  if (s == "asserted") return FactStatus::Asserted;
  if (s == "verified") return FactStatus::Verified;
  throw std::runtime_error("facts: status must be \"asserted\" or \"verified\", got " + s);
}

std::string status_to(FactStatus s) {
  return s == FactStatus::Asserted ? "asserted" : "verified";
}

}  // namespace

FactLedger load_facts(const std::string& path, const Signature& sig, VarTable& vars) {
  nlohmann::json j = nlohmann::json::parse(slurp(path));
  if (!j.is_array()) throw std::runtime_error("facts: expected a JSON list");
  FactLedger ledger;
  for (const auto& e : j) {
    std::vector<std::string> models;
    if (e.contains("models"))
      models = e.at("models").get<std::vector<std::string>>();
    FactStatus st = status_from(e.value("status", "asserted"));
    if (e.value("kind", "nondep") == "valid") {
      ValidityFact f;
      f.formula = parse(e.at("formula").get<std::string>(), sig, vars);
      f.status = st;
      f.model_ids = std::move(models);
      ledger.valids.push_back(std::move(f));
    } else {
      NonDepFact f;
      f.query.formula = parse(e.at("formula").get<std::string>(), sig, vars);
      f.query.var = vars.intern(e.at("var").get<std::string>());
      f.query.theta = parse(e.at("theta").get<std::string>(), sig, vars);
      f.status = st;
      f.model_ids = std::move(models);
      ledger.nondep.push_back(std::move(f));
    }
  }
  return ledger;
}

std::string facts_to_json_text(const FactLedger& ledger, const VarTable& vars) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& f : ledger.nondep) {
    nlohmann::json e;
    e["formula"] = print(f.query.formula, vars);
    e["var"] = vars.name_of(f.query.var);
    e["theta"] = print(f.query.theta, vars);
    e["status"] = status_to(f.status);
    e["models"] = f.model_ids;
    j.push_back(std::move(e));
  }
  for (const auto& f : ledger.valids) {
    nlohmann::json e;
    e["kind"] = "valid";
    e["formula"] = print(f.formula, vars);
    e["status"] = status_to(f.status);
    e["models"] = f.model_ids;
    j.push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

std::string trace_to_json_text(const RewriteTrace& trace, const VarTable& vars) {
  nlohmann::json j;
  j["start"] = print(trace.start, vars);
  j["result"] = print(trace.result, vars);
  j["budget_exhausted"] = trace.budget_exhausted;
  j["steps"] = nlohmann::json::array();
  for (const auto& st : trace.steps) {
    nlohmann::json e;
    e["rule"] = st.rule;
    e["path"] = st.path;
    e["facts_used"] = st.facts_used;
    e["before"] = print(st.before, vars);
    e["after"] = print(st.after, vars);
    j["steps"].push_back(std::move(e));
  }
  j["rejected"] = nlohmann::json::array();
  for (const auto& rj : trace.rejected) {
    nlohmann::json e;
    e["rule"] = rj.rule;
    e["path"] = rj.path;
    e["reason"] = rj.reason;
    j["rejected"].push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

RewriteTrace load_trace(const std::string& path, const Signature& sig, VarTable& vars) {
  nlohmann::json j = nlohmann::json::parse(slurp(path));
  RewriteTrace trace;
  trace.start = parse(j.at("start").get<std::string>(), sig, vars);
  trace.result = parse(j.at("result").get<std::string>(), sig, vars);
  trace.budget_exhausted = j.value("budget_exhausted", false);
  for (const auto& e : j.at("steps")) {
    RewriteStep st;
    st.rule = e.at("rule").get<std::string>();
    st.path = e.at("path").get<Path>();
    if (e.contains("facts_used"))
      st.facts_used = e.at("facts_used").get<std::vector<std::string>>();
    st.before = parse(e.at("before").get<std::string>(), sig, vars);
    st.after = parse(e.at("after").get<std::string>(), sig, vars);
    trace.steps.push_back(std::move(st));
  }
  if (j.contains("rejected")) {
    for (const auto& e : j.at("rejected")) {
      RejectedStep rj;
      rj.rule = e.at("rule").get<std::string>();
      rj.path = e.at("path").get<Path>();
      rj.reason = e.at("reason").get<std::string>();
      trace.rejected.push_back(std::move(rj));
    }
  }
  return trace;
}

void save_trace(const RewriteTrace& trace, const VarTable& vars, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write trace file: " + path);
  out << trace_to_json_text(trace, vars);
}

}  // namespace folnd
