#pragma once

#include "folnd/rewrite.hpp"

namespace folnd {

// Facts file: a JSON list of entries. Non-dependence entries:
//   {"formula": f, "var": x, "theta": t, "status": "asserted"|"verified", "models": [...]}
// Validity entries carry "kind": "valid":
//   {"kind": "valid", "formula": f, "status": ..., "models": [...]}
FactLedger load_facts(const std::string& path, const Signature& sig, VarTable& vars);
std::string facts_to_json_text(const FactLedger& ledger, const VarTable& vars);

// Trace file: {"start", "result", "budget_exhausted", "steps": [...], "rejected": [...]}
// with formulas serialized in the concrete grammar.
std::string trace_to_json_text(const RewriteTrace& trace, const VarTable& vars);
RewriteTrace load_trace(const std::string& path, const Signature& sig, VarTable& vars);
void save_trace(const RewriteTrace& trace, const VarTable& vars, const std::string& path);

}  // namespace folnd
