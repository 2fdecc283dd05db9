#pragma once

#include "folnd/model.hpp"
#include "folnd/syntax.hpp"

namespace folnd {

// Recursive satisfaction. The assignment's window must cover free_vars(f).
// Bounded quantifiers and derived connectives are evaluated through desugar.
bool satisfies(const FiniteModel& m, const FormulaPtr& f, const Assignment& a);

// All assignments over the window satisfying f. The window must cover
// free_vars(f).
MeaningSet meaning(const FiniteModel& m, const FormulaPtr& f, const Window& w);

MeaningSet complement(const FiniteModel& m, const MeaningSet& s);
MeaningSet intersect(const MeaningSet& a, const MeaningSet& b);
MeaningSet unite(const MeaningSet& a, const MeaningSet& b);
// {a : override(a, x, b) in s for some b}. x must be in the window.
MeaningSet cylindrify(const FiniteModel& m, const MeaningSet& s, VarId x);

// True in m under every evaluation of the variables.
bool valid(const FiniteModel& m, const FormulaPtr& f);

struct EquivResult {
  bool equivalent = true;
  Assignment counterexample;  // least differing assignment when not equivalent
};

// Meaning equality over the joint window free_vars(f) | free_vars(g).
EquivResult check_equivalent(const FiniteModel& m, const FormulaPtr& f, const FormulaPtr& g);

}  // namespace folnd
