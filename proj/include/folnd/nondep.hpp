#pragma once

#include "folnd/semantics.hpp"

namespace folnd {

struct NonDepQuery {
  FormulaPtr formula;
  VarId var;
  FormulaPtr theta;  // f_true() for the unconditioned definition
};

struct NonDepVerdict {
  bool holds = true;
  Assignment cex_assignment;  // minimal under (assignment lex, then b)
  int cex_b = 0;
};

// Decides "phi is non-dependent of x in m provided theta" by enumerating all
// assignments over free_vars(phi) | free_vars(theta) | {x} and all b.
NonDepVerdict check_nondep(const FiniteModel& m, const FormulaPtr& phi, VarId x,
                           const FormulaPtr& theta);

// Unconditioned route: valid(m, exists x phi <-> forall x phi).
bool check_nondep_plain_equiv(const FiniteModel& m, const FormulaPtr& phi, VarId x);

// Substitution route: picks fresh y, z not occurring in phi or theta and
// checks valid(m, (theta^x_y & theta^x_z) -> (phi^x_y <-> phi^x_z)).
bool check_nondep_subst(const FiniteModel& m, const FormulaPtr& phi, VarId x,
                        const FormulaPtr& theta);

enum class FactStatus { Asserted, Verified };

struct NonDepFact {
  NonDepQuery query;
  FactStatus status = FactStatus::Asserted;
  std::vector<std::string> model_ids;  // nonempty when verified
};

struct ValidityFact {
  FormulaPtr formula;
  FactStatus status = FactStatus::Asserted;
  std::vector<std::string> model_ids;
};

struct FactLedger {
  std::vector<NonDepFact> nondep;
  std::vector<ValidityFact> valids;
};

}  // namespace folnd
