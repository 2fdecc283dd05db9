#include "folnd/formula.hpp"

#include <algorithm>
#include <optional>

namespace folnd {

int Signature::arity(const std::string& name) const {
  auto it = predicates.find(name);
  if (it == predicates.end()) throw std::runtime_error("unknown predicate: " + name);
  return it->second;
}

void Signature::declare(const std::string& name, int arity) {
  if (name == "=") throw std::runtime_error("predicate name \"=\" is reserved");
  if (arity < 0) throw std::runtime_error("negative arity for predicate " + name);
  auto it = predicates.find(name);
  if (it != predicates.end()) {
    if (it->second != arity)
      throw std::runtime_error("conflicting arity for predicate " + name);
    return;
  }
  predicates.emplace(name, arity);
}

namespace {

FormulaPtr make(Formula f) { return std::make_shared<const Formula>(std::move(f)); }

void require(bool ok, const char* what) {
  if (!ok) throw std::runtime_error(what);
}

}  // namespace

FormulaPtr f_true() {
  static const FormulaPtr t = make({.kind = Kind::True});
  return t;
}

FormulaPtr f_false() {
  static const FormulaPtr f = make({.kind = Kind::False});
  return f;
}

FormulaPtr f_pred(std::string name, std::vector<VarId> args) {
  for (VarId v : args) require(v.index >= 1, "predicate argument with invalid variable");
  return make({.kind = Kind::Pred, .pred = std::move(name), .args = std::move(args)});
}

FormulaPtr f_eq(VarId lhs, VarId rhs) {
  require(lhs.index >= 1 && rhs.index >= 1, "equality over invalid variable");
  return make({.kind = Kind::Eq, .lhs = lhs, .rhs = rhs});
}

FormulaPtr f_not(FormulaPtr a) { return make({.kind = Kind::Not, .a = std::move(a)}); }

FormulaPtr f_and(FormulaPtr a, FormulaPtr b) {
  return make({.kind = Kind::And, .a = std::move(a), .b = std::move(b)});
}

FormulaPtr f_or(FormulaPtr a, FormulaPtr b) {
  return make({.kind = Kind::Or, .a = std::move(a), .b = std::move(b)});
}

FormulaPtr f_implies(FormulaPtr a, FormulaPtr b) {
  return make({.kind = Kind::Implies, .a = std::move(a), .b = std::move(b)});
}

FormulaPtr f_iff(FormulaPtr a, FormulaPtr b) {
  return make({.kind = Kind::Iff, .a = std::move(a), .b = std::move(b)});
}

FormulaPtr f_exists(VarId x, FormulaPtr body) {
  require(x.index >= 1, "quantifier over invalid variable");
  return make({.kind = Kind::Exists, .var = x, .a = std::move(body)});
}

FormulaPtr f_forall(VarId x, FormulaPtr body) {
  require(x.index >= 1, "quantifier over invalid variable");
  return make({.kind = Kind::Forall, .var = x, .a = std::move(body)});
}

FormulaPtr f_bforall(VarId x, FormulaPtr guard, FormulaPtr body) {
  require(x.index >= 1, "quantifier over invalid variable");
  return make({.kind = Kind::BForall, .var = x, .a = std::move(guard), .b = std::move(body)});
}

FormulaPtr f_bexists(VarId x, FormulaPtr guard, FormulaPtr body) {
  require(x.index >= 1, "quantifier over invalid variable");
  return make({.kind = Kind::BExists, .var = x, .a = std::move(guard), .b = std::move(body)});
}

FormulaPtr f_hole(int index) {
  require(index >= 1, "hole index must be positive");
  return make({.kind = Kind::Hole, .hole = index});
}

bool is_quantifier(Kind k) {
  return k == Kind::Exists || k == Kind::Forall || k == Kind::BForall || k == Kind::BExists;
}

bool is_binary(Kind k) {
  return k == Kind::And || k == Kind::Or || k == Kind::Implies || k == Kind::Iff;
}

bool struct_eq(const FormulaPtr& a, const FormulaPtr& b) {
  if (a == b) return true;
  if (!a || !b) return false;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Kind::True:
    case Kind::False:
      return true;
    case Kind::Pred:
      return a->pred == b->pred && a->args == b->args;
    case Kind::Eq:
      return a->lhs == b->lhs && a->rhs == b->rhs;
    case Kind::Not:
      return struct_eq(a->a, b->a);
    case Kind::And:
    case Kind::Or:
    case Kind::Implies:
    case Kind::Iff:
      return struct_eq(a->a, b->a) && struct_eq(a->b, b->b);
    case Kind::Exists:
    case Kind::Forall:
      return a->var == b->var && struct_eq(a->a, b->a);
    case Kind::BForall:
    case Kind::BExists:
      return a->var == b->var && struct_eq(a->a, b->a) && struct_eq(a->b, b->b);
    case Kind::Hole:
      return a->hole == b->hole;
  }
  return false;
}

namespace {

// Bound variables are compared through parallel renaming maps; free variables
// must match exactly.
bool alpha_eq_rec(const FormulaPtr& a, const FormulaPtr& b, std::map<int, int>& la,
                  std::map<int, int>& lb, int& depth) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  auto var_eq = [&](VarId va, VarId vb) {
    auto ia = la.find(va.index);
    auto ib = lb.find(vb.index);
    if ((ia == la.end()) != (ib == lb.end())) return false;
    if (ia == la.end()) return va == vb;
    return ia->second == ib->second;
  };
  switch (a->kind) {
    case Kind::True:
    case Kind::False:
      return true;
    case Kind::Hole:
      return a->hole == b->hole;
    case Kind::Pred: {
      if (a->pred != b->pred || a->args.size() != b->args.size()) return false;
      for (size_t i = 0; i < a->args.size(); ++i)
        if (!var_eq(a->args[i], b->args[i])) return false;
      return true;
    }
    case Kind::Eq:
      return var_eq(a->lhs, b->lhs) && var_eq(a->rhs, b->rhs);
    case Kind::Not:
      return alpha_eq_rec(a->a, b->a, la, lb, depth);
    case Kind::And:
    case Kind::Or:
    case Kind::Implies:
    case Kind::Iff:
      return alpha_eq_rec(a->a, b->a, la, lb, depth) &&
             alpha_eq_rec(a->b, b->b, la, lb, depth);
    case Kind::Exists:
    case Kind::Forall:
    case Kind::BForall:
    case Kind::BExists: {
      int level = depth++;
      auto olda = la.find(a->var.index) != la.end() ? std::optional<int>(la[a->var.index])
                                                   : std::nullopt;
      auto oldb = lb.find(b->var.index) != lb.end() ? std::optional<int>(lb[b->var.index])
                                                   : std::nullopt;
      la[a->var.index] = level;
      lb[b->var.index] = level;
      bool ok;
      if (a->kind == Kind::Exists || a->kind == Kind::Forall) {
        ok = alpha_eq_rec(a->a, b->a, la, lb, depth);
      } else {
        ok = alpha_eq_rec(a->a, b->a, la, lb, depth) &&
             alpha_eq_rec(a->b, b->b, la, lb, depth);
      }
      if (olda) la[a->var.index] = *olda; else la.erase(a->var.index);
      if (oldb) lb[b->var.index] = *oldb; else lb.erase(b->var.index);
      return ok;
    }
  }
  return false;
}

}  // namespace

bool alpha_eq(const FormulaPtr& a, const FormulaPtr& b) {
  std::map<int, int> la, lb;
  int depth = 0;
  return alpha_eq_rec(a, b, la, lb, depth);
}

int formula_size(const FormulaPtr& f) {
  if (!f) return 0;
  int n = 1;
  for (int i = 0; i < child_count(f); ++i) n += formula_size(child_at(f, i));
  return n;
}

namespace {

void collect_free(const FormulaPtr& f, std::set<VarId>& bound, std::set<VarId>& out) {
  if (!f) return;
  switch (f->kind) {
    case Kind::True:
    case Kind::False:
    case Kind::Hole:
      return;
    case Kind::Pred:
      for (VarId v : f->args)
        if (!bound.count(v)) out.insert(v);
      return;
    case Kind::Eq:
      if (!bound.count(f->lhs)) out.insert(f->lhs);
      if (!bound.count(f->rhs)) out.insert(f->rhs);
      return;
    case Kind::Not:
      collect_free(f->a, bound, out);
      return;
    case Kind::And:
    case Kind::Or:
    case Kind::Implies:
    case Kind::Iff:
      collect_free(f->a, bound, out);
      collect_free(f->b, bound, out);
      return;
    case Kind::Exists:
    case Kind::Forall:
    case Kind::BForall:
    case Kind::BExists: {
      bool was_bound = bound.count(f->var) != 0;
      bound.insert(f->var);
      collect_free(f->a, bound, out);
      if (f->b) collect_free(f->b, bound, out);
      if (!was_bound) bound.erase(f->var);
      return;
    }
  }
}

void collect_all(const FormulaPtr& f, std::set<VarId>& out) {
  if (!f) return;
  switch (f->kind) {
    case Kind::Pred:
      out.insert(f->args.begin(), f->args.end());
      break;
    case Kind::Eq:
      out.insert(f->lhs);
      out.insert(f->rhs);
      break;
    case Kind::Exists:
    case Kind::Forall:
    case Kind::BForall:
    case Kind::BExists:
      out.insert(f->var);
      break;
    default:
      break;
  }
  for (int i = 0; i < child_count(f); ++i) collect_all(child_at(f, i), out);
}

}  // namespace

std::set<VarId> free_vars(const FormulaPtr& f) {
  std::set<VarId> bound, out;
  collect_free(f, bound, out);
  return out;
}

std::set<VarId> all_vars(const FormulaPtr& f) {
  std::set<VarId> out;
  collect_all(f, out);
  return out;
}

int max_var_index(const FormulaPtr& f) {
  auto vars = all_vars(f);
  return vars.empty() ? 0 : vars.rbegin()->index;
}

void validate(const FormulaPtr& f, const Signature& sig) {
  if (!f) throw std::runtime_error("null formula");
  if (f->kind == Kind::Pred) {
    int ar = sig.arity(f->pred);
    if (static_cast<int>(f->args.size()) != ar)
      throw std::runtime_error("arity mismatch for predicate " + f->pred);
  }
  if (f->kind == Kind::Hole) throw std::runtime_error("hole outside a boolean template");
  for (int i = 0; i < child_count(f); ++i) validate(child_at(f, i), sig);
}

int child_count(const FormulaPtr& f) {
  switch (f->kind) {
    case Kind::True:
    case Kind::False:
    case Kind::Pred:
    case Kind::Eq:
    case Kind::Hole:
      return 0;
    case Kind::Not:
    case Kind::Exists:
    case Kind::Forall:
      return 1;
    default:
      return 2;
  }
}

FormulaPtr child_at(const FormulaPtr& f, int i) {
  if (i < 0 || i >= child_count(f)) throw std::runtime_error("invalid child index");
  return i == 0 ? f->a : f->b;
}

FormulaPtr subformula_at(const FormulaPtr& f, const Path& path) {
  FormulaPtr cur = f;
  for (int i : path) cur = child_at(cur, i);
  return cur;
}

FormulaPtr replace_at(const FormulaPtr& f, const Path& path, const FormulaPtr& repl) {
  if (path.empty()) return repl;
  Formula copy = *f;
  Path rest(path.begin() + 1, path.end());
  if (path.front() == 0)
    copy.a = replace_at(f->a, rest, repl);
  else
    copy.b = replace_at(f->b, rest, repl);
  return std::make_shared<const Formula>(std::move(copy));
}

namespace {

bool template_rec(const FormulaPtr& f, std::set<int>& holes, int& max_hole) {
  if (!f) return false;
  switch (f->kind) {
    case Kind::Hole:
      holes.insert(f->hole);
      max_hole = std::max(max_hole, f->hole);
      return f->hole >= 1;
    case Kind::Not:
      return template_rec(f->a, holes, max_hole);
    case Kind::And:
    case Kind::Or:
    case Kind::Implies:
    case Kind::Iff:
      return template_rec(f->a, holes, max_hole) && template_rec(f->b, holes, max_hole);
    default:
      return false;
  }
}

}  // namespace

bool is_boolean_template(const FormulaPtr& f, int& max_hole) {
  std::set<int> holes;
  max_hole = 0;
  if (!template_rec(f, holes, max_hole)) return false;
  // every hole index 1..n occurs at least once
  for (int i = 1; i <= max_hole; ++i)
    if (!holes.count(i)) return false;
  return max_hole >= 1;
}

FormulaPtr instantiate(const FormulaPtr& templ, const std::vector<FormulaPtr>& fills) {
  switch (templ->kind) {
    case Kind::Hole: {
      int i = templ->hole;
      if (i < 1 || i > static_cast<int>(fills.size()))
        throw std::runtime_error("hole index out of range");
      return fills[i - 1];
    }
    case Kind::Not:
      return f_not(instantiate(templ->a, fills));
    case Kind::And:
      return f_and(instantiate(templ->a, fills), instantiate(templ->b, fills));
    case Kind::Or:
      return f_or(instantiate(templ->a, fills), instantiate(templ->b, fills));
    case Kind::Implies:
      return f_implies(instantiate(templ->a, fills), instantiate(templ->b, fills));
    case Kind::Iff:
      return f_iff(instantiate(templ->a, fills), instantiate(templ->b, fills));
    default:
      throw std::runtime_error("not a boolean template");
  }
}

FormulaPtr apply_prefix(const QuantifierPrefix& prefix, FormulaPtr body) {
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it)
    body = it->first == QKind::Forall ? f_forall(it->second, body) : f_exists(it->second, body);
  return body;
}

}  // namespace folnd
