#pragma once

#include "folnd/formula.hpp"

namespace folnd {

// Expands bounded quantifiers and derived connectives down to the
// {true, false, pred, =, ~, &, exists} core. Idempotent.
FormulaPtr desugar(const FormulaPtr& f);

// Re-folds the expansions desugar produces: or/implies/iff/forall plus the
// bounded-quantifier shapes forall x (g -> b) and exists x (g & b).
// desugar(sugar(f)) is structurally equal to desugar(f).
FormulaPtr sugar(const FormulaPtr& f);

// Tarskian substitution: returns exists x (x = y & phi). No renaming happens.
FormulaPtr substitute(const FormulaPtr& phi, VarId x, VarId y);

// Structural, capture-avoiding replacement of free occurrences of x by w.
// Used internally by alpha renaming and guard instantiation.
FormulaPtr subst_struct(const FormulaPtr& phi, VarId x, VarId w);

// Smallest index strictly greater than every index occurring in the formula.
VarId fresh_var(const FormulaPtr& f);
VarId fresh_var(const std::vector<FormulaPtr>& fs);

// Renames every binder to a fresh variable so that bound variables are
// pairwise distinct and distinct from all free variables. Fresh indices are
// taken from fresh_from upward, skipping indices already present in f.
FormulaPtr alpha_rename(const FormulaPtr& f, VarId fresh_from);
FormulaPtr alpha_rename(const FormulaPtr& f);

// Prenex normal form: the returned prefix applied to the matrix is equivalent
// to the input on every model; the matrix contains no quantifiers.
std::pair<QuantifierPrefix, FormulaPtr> prenex(const FormulaPtr& f);

}  // namespace folnd
