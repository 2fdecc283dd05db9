#pragma once

#include "folnd/nondep.hpp"
#include "folnd/parser.hpp"

namespace folnd {

// Everything a rewrite needs: parsing context, verification models, and the
// ledger of asserted / verified facts that discharge rule obligations.
struct RewriteSession {
  Signature sig;
  VarTable* vars = nullptr;
  std::vector<FiniteModel> models;
  std::vector<std::string> model_names;
  FactLedger facts;
};

struct Obligation {
  enum class Kind { NonDep, Valid } kind = Kind::NonDep;
  FormulaPtr formula;  // NonDep: the body; Valid: the closed witness formula
  VarId var;           // NonDep only
  FormulaPtr theta;    // NonDep only
};

enum class DischargeStatus { Verified, Asserted, Failed };

struct DischargeResult {
  DischargeStatus status = DischargeStatus::Failed;
  std::string description;
};

// Verified on every session model when models are attached, otherwise matched
// against an asserted fact (monotonicity: an asserted "provided theta_f"
// discharges "provided theta_o" when theta_f's conjuncts all occur in theta_o).
DischargeResult discharge(const RewriteSession& s, const Obligation& ob);

struct RewriteStep {
  std::string rule;
  Path path;
  std::vector<std::string> facts_used;
  FormulaPtr before;  // whole formula
  FormulaPtr after;
};

struct RejectedStep {
  std::string rule;
  Path path;
  std::string reason;
};

struct RewriteTrace {
  FormulaPtr start;
  FormulaPtr result;
  std::vector<RewriteStep> steps;
  std::vector<RejectedStep> rejected;
  bool budget_exhausted = false;
};

// Extra inputs for rules that are not fully determined by the target position.
struct RuleOptions {
  FormulaPtr theta;  // r_wrap
  VarId var;         // r_wrap
  bool reverse = false;
};

struct RuleResult {
  bool applied = false;
  std::string reason;  // why not, when !applied
  FormulaPtr result;   // whole rewritten formula
  std::vector<std::string> facts_used;
};

std::vector<std::string> rule_names();

RuleResult apply_rule(const RewriteSession& s, const std::string& rule,
                      const FormulaPtr& formula, const Path& path,
                      const RuleOptions& opts = {});

// Guards syntactically known to hold at the position, collected from
// enclosing g -> _, g & _, forall u in g. _, exists u in g. _ shapes.
// Guards whose variables get rebound below the collection point are dropped.
std::vector<FormulaPtr> guard_context(const FormulaPtr& root, const Path& path);

// Termination measure: lexicographic (bounded-quantifier count, total depth of
// bounded-quantifier nodes, total size of quantifier bodies, formula size).
// Every committed step strictly decreases it.
struct Measure {
  long long bounded = 0, bdepth = 0, qbody = 0, size = 0;
  friend auto operator<=>(const Measure&, const Measure&) = default;
};
Measure measure(const FormulaPtr& f);

// Applies rules in priority order, innermost positions first, until fixpoint
// or budget steps. When models are attached, each step is committed only after
// check_equivalent passes on every model.
std::pair<FormulaPtr, RewriteTrace> simplify(const RewriteSession& s,
                                             const FormulaPtr& formula,
                                             int budget = 64);

struct TraceReport {
  bool ok = true;
  std::vector<std::string> lines;  // per-step, per-model verdicts
};

// Replays the trace: re-applies each step's rule at the recorded path, checks
// the recorded after-formula matches, re-discharges obligations, and checks
// before/after equivalence on every session model.
TraceReport verify_trace(const RewriteSession& s, const RewriteTrace& trace);

}  // namespace folnd
