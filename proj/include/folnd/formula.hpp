#pragma once

#include <compare>
#include <map>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace folnd {

// Variables are identified by their position in the fixed ordering v1, v2, ...
struct VarId {
  int index = 0;
  friend auto operator<=>(const VarId&, const VarId&) = default;
};

// Relational signature: predicate name -> arity. "=" is built in and reserved.
struct Signature {
  std::map<std::string, int> predicates;

  bool declared(const std::string& name) const { return predicates.count(name) != 0; }
  int arity(const std::string& name) const;
  void declare(const std::string& name, int arity);
};

enum class Kind {
  True,
  False,
  Pred,
  Eq,
  Not,
  And,
  Or,
  Implies,
  Iff,
  Exists,
  Forall,
  BForall,  // bounded: forall x in guard. body
  BExists,  // bounded: exists x in guard. body
  Hole,     // numbered hole of a boolean template
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

// Immutable AST node. Shared freely across threads once built.
struct Formula {
  Kind kind = Kind::True;
  std::string pred;         // Pred
  std::vector<VarId> args;  // Pred
  VarId lhs, rhs;           // Eq
  VarId var;                // quantifiers
  FormulaPtr a, b;          // Not: a; binary connectives: a, b;
                            // Exists/Forall: a = body; BForall/BExists: a = guard, b = body
  int hole = 0;             // Hole
};

FormulaPtr f_true();
FormulaPtr f_false();
FormulaPtr f_pred(std::string name, std::vector<VarId> args);
FormulaPtr f_eq(VarId lhs, VarId rhs);
FormulaPtr f_not(FormulaPtr a);
FormulaPtr f_and(FormulaPtr a, FormulaPtr b);
FormulaPtr f_or(FormulaPtr a, FormulaPtr b);
FormulaPtr f_implies(FormulaPtr a, FormulaPtr b);
FormulaPtr f_iff(FormulaPtr a, FormulaPtr b);
FormulaPtr f_exists(VarId x, FormulaPtr body);
FormulaPtr f_forall(VarId x, FormulaPtr body);
FormulaPtr f_bforall(VarId x, FormulaPtr guard, FormulaPtr body);
FormulaPtr f_bexists(VarId x, FormulaPtr guard, FormulaPtr body);
FormulaPtr f_hole(int index);

bool is_quantifier(Kind k);
bool is_binary(Kind k);

// Structural equality (no alpha conversion).
bool struct_eq(const FormulaPtr& a, const FormulaPtr& b);
// Equality up to renaming of bound variables.
bool alpha_eq(const FormulaPtr& a, const FormulaPtr& b);

int formula_size(const FormulaPtr& f);
std::set<VarId> free_vars(const FormulaPtr& f);
std::set<VarId> all_vars(const FormulaPtr& f);
int max_var_index(const FormulaPtr& f);

// Checks predicate use against a signature; throws std::runtime_error on mismatch.
void validate(const FormulaPtr& f, const Signature& sig);

// Positions: a path is the list of child indices from the root.
// Children: Not -> {0}; binary -> {0, 1}; Exists/Forall -> {0 = body};
// BForall/BExists -> {0 = guard, 1 = body}.
using Path = std::vector<int>;
int child_count(const FormulaPtr& f);
FormulaPtr child_at(const FormulaPtr& f, int i);
FormulaPtr subformula_at(const FormulaPtr& f, const Path& path);
FormulaPtr replace_at(const FormulaPtr& f, const Path& path, const FormulaPtr& repl);

// Boolean templates: trees over {Not, And, Or, Implies, Iff} with Hole leaves.
bool is_boolean_template(const FormulaPtr& f, int& max_hole);
FormulaPtr instantiate(const FormulaPtr& templ, const std::vector<FormulaPtr>& fills);

enum class QKind { Forall, Exists };
using QuantifierPrefix = std::vector<std::pair<QKind, VarId>>;
FormulaPtr apply_prefix(const QuantifierPrefix& prefix, FormulaPtr body);

}  // namespace folnd
