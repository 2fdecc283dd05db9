#pragma once

#include "folnd/nondep.hpp"

namespace folnd {

// "unmet" means a syntactic or semantic side condition of the identity does
// not hold on the model; it is reported separately from a genuine failure.
enum class IdentityStatus { Holds, Fails, SideConditionsUnmet };

struct IdentityReport {
  IdentityStatus status = IdentityStatus::Holds;
  std::string detail;
  Assignment counterexample;  // meaningful when status == Fails
};

// Slot bundle; each identity reads the slots it mentions and rejects missing
// or malformed ones with std::invalid_argument.
struct IdentitySlots {
  FormulaPtr phi, psi, theta, iota, epsilon;
  std::vector<FormulaPtr> phis;  // phi_1..phi_n for template identities
  FormulaPtr templ;              // boolean template with holes
  VarId x;                       // the hoisted variable
  VarId u;                       // bounded wrapper variable (guard-drop-bool)
  std::vector<VarId> zs;         // plain z-bar block (pull-exists)
  QuantifierPrefix prefix;       // Q-bar z-bar
  QuantifierPrefix outer;        // outer bounded block for "simp"
  bool outer_exists = false;     // guard-drop-bool wrapper kind
};

std::vector<std::string> identity_names();

// Checks the named identity on m. Side conditions (freeness, non-dependence,
// validity of witnesses) are checked first; when they hold both sides are
// compared by meaning enumeration.
IdentityReport check_identity(const std::string& name, const FiniteModel& m,
                              const IdentitySlots& slots);

}  // namespace folnd
