#include "folnd/syntax.hpp"

#include <algorithm>
#include <optional>

namespace folnd {

FormulaPtr desugar(const FormulaPtr& f) {
  switch (f->kind) {
    case Kind::True:
    case Kind::False:
    case Kind::Pred:
    case Kind::Eq:
    case Kind::Hole:
      return f;
    case Kind::Not:
      return f_not(desugar(f->a));
    case Kind::And:
      return f_and(desugar(f->a), desugar(f->b));
    case Kind::Or:
      // phi | psi == ~(~phi & ~psi)
      return f_not(f_and(f_not(desugar(f->a)), f_not(desugar(f->b))));
    case Kind::Implies:
      return desugar(f_or(f_not(f->a), f->b));
    case Kind::Iff:
      return desugar(f_and(f_implies(f->a, f->b), f_implies(f->b, f->a)));
    case Kind::Exists:
      return f_exists(f->var, desugar(f->a));
    case Kind::Forall:
      // forall x phi == ~exists x ~phi
      return f_not(f_exists(f->var, f_not(desugar(f->a))));
    case Kind::BForall:
      return desugar(f_forall(f->var, f_implies(f->a, f->b)));
    case Kind::BExists:
      return f_exists(f->var, f_and(desugar(f->a), desugar(f->b)));
  }
  throw std::runtime_error("desugar: bad kind");
}

namespace {

// One folding pass at a single node whose children are already folded.
// Returns null when no fold applies.
FormulaPtr fold_once(const FormulaPtr& f) {
  if (f->kind == Kind::Not) {
    // ~(~a & ~b) -> a | b
    if (f->a->kind == Kind::And && f->a->a->kind == Kind::Not && f->a->b->kind == Kind::Not)
      return f_or(f->a->a->a, f->a->b->a);
    // ~exists x ~b -> forall x b
    if (f->a->kind == Kind::Exists && f->a->a->kind == Kind::Not)
      return f_forall(f->a->var, f->a->a->a);
  }
  if (f->kind == Kind::Or && f->a->kind == Kind::Not) return f_implies(f->a->a, f->b);
  if (f->kind == Kind::And && f->a->kind == Kind::Implies && f->b->kind == Kind::Implies &&
      struct_eq(f->a->a, f->b->b) && struct_eq(f->a->b, f->b->a) &&
      !struct_eq(f->a->a, f->a->b))
    return f_iff(f->a->a, f->a->b);
  if (f->kind == Kind::Forall && f->a->kind == Kind::Implies)
    return f_bforall(f->var, f->a->a, f->a->b);
  if (f->kind == Kind::Exists && f->a->kind == Kind::And)
    return f_bexists(f->var, f->a->a, f->a->b);
  return nullptr;
}

FormulaPtr rebuild(const FormulaPtr& f, const FormulaPtr& a, const FormulaPtr& b) {
  switch (f->kind) {
    case Kind::Not: return f_not(a);
    case Kind::And: return f_and(a, b);
    case Kind::Or: return f_or(a, b);
    case Kind::Implies: return f_implies(a, b);
    case Kind::Iff: return f_iff(a, b);
    case Kind::Exists: return f_exists(f->var, a);
    case Kind::Forall: return f_forall(f->var, a);
    case Kind::BForall: return f_bforall(f->var, a, b);
    case Kind::BExists: return f_bexists(f->var, a, b);
    default: return f;
  }
}

}  // namespace

FormulaPtr sugar(const FormulaPtr& f) {
  FormulaPtr cur = f;
  int n = child_count(f);
  if (n == 1) cur = rebuild(f, sugar(f->a), nullptr);
  else if (n == 2) cur = rebuild(f, sugar(f->a), sugar(f->b));
  while (FormulaPtr folded = fold_once(cur)) cur = folded;
  return cur;
}

FormulaPtr substitute(const FormulaPtr& phi, VarId x, VarId y) {
  return f_exists(x, f_and(f_eq(x, y), phi));
}

namespace {

FormulaPtr subst_rec(const FormulaPtr& f, VarId x, VarId w, int& fresh_counter);

FormulaPtr subst_binder(const FormulaPtr& f, VarId x, VarId w, int& fresh_counter) {
  // x bound here: nothing below is a free occurrence of x.
  if (f->var == x) return f;
  FormulaPtr guard = f->a, body = f->b;
  VarId v = f->var;
  bool bodies_mention_x = free_vars(f).count(x) != 0;
  if (!bodies_mention_x) return f;
  if (v == w) {
    // would capture w; rename the binder first
    VarId nv{fresh_counter++};
    if (f->kind == Kind::Exists || f->kind == Kind::Forall) {
      guard = subst_rec(guard, v, nv, fresh_counter);
    } else {
      guard = subst_rec(guard, v, nv, fresh_counter);
      body = subst_rec(body, v, nv, fresh_counter);
    }
    v = nv;
  }
  if (f->kind == Kind::Exists)
    return f_exists(v, subst_rec(guard, x, w, fresh_counter));
  if (f->kind == Kind::Forall)
    return f_forall(v, subst_rec(guard, x, w, fresh_counter));
  if (f->kind == Kind::BForall)
    return f_bforall(v, subst_rec(guard, x, w, fresh_counter), subst_rec(body, x, w, fresh_counter));
  return f_bexists(v, subst_rec(guard, x, w, fresh_counter), subst_rec(body, x, w, fresh_counter));
}

FormulaPtr subst_rec(const FormulaPtr& f, VarId x, VarId w, int& fresh_counter) {
  switch (f->kind) {
    case Kind::True:
    case Kind::False:
    case Kind::Hole:
      return f;
    case Kind::Pred: {
      std::vector<VarId> args = f->args;
      for (VarId& v : args)
        if (v == x) v = w;
      return f_pred(f->pred, std::move(args));
    }
    case Kind::Eq:
      return f_eq(f->lhs == x ? w : f->lhs, f->rhs == x ? w : f->rhs);
    case Kind::Not:
      return f_not(subst_rec(f->a, x, w, fresh_counter));
    case Kind::And:
      return f_and(subst_rec(f->a, x, w, fresh_counter), subst_rec(f->b, x, w, fresh_counter));
    case Kind::Or:
      return f_or(subst_rec(f->a, x, w, fresh_counter), subst_rec(f->b, x, w, fresh_counter));
    case Kind::Implies:
      return f_implies(subst_rec(f->a, x, w, fresh_counter),
                       subst_rec(f->b, x, w, fresh_counter));
    case Kind::Iff:
      return f_iff(subst_rec(f->a, x, w, fresh_counter), subst_rec(f->b, x, w, fresh_counter));
    case Kind::Exists:
    case Kind::Forall:
    case Kind::BForall:
    case Kind::BExists:
      return subst_binder(f, x, w, fresh_counter);
  }
  throw std::runtime_error("subst: bad kind");
}

}  // namespace

FormulaPtr subst_struct(const FormulaPtr& phi, VarId x, VarId w) {
  int counter = std::max({max_var_index(phi), x.index, w.index}) + 1;
  return subst_rec(phi, x, w, counter);
}

VarId fresh_var(const FormulaPtr& f) { return VarId{max_var_index(f) + 1}; }

VarId fresh_var(const std::vector<FormulaPtr>& fs) {
  int m = 0;
  for (const auto& f : fs) m = std::max(m, max_var_index(f));
  return VarId{m + 1};
}

namespace {

struct Renamer {
  std::set<int> used;
  int counter;

  VarId fresh() {
    while (used.count(counter)) ++counter;
    used.insert(counter);
    return VarId{counter};
  }

  FormulaPtr run(const FormulaPtr& f, std::map<int, int>& map) {
    auto lookup = [&](VarId v) {
      auto it = map.find(v.index);
      return it == map.end() ? v : VarId{it->second};
    };
    switch (f->kind) {
      case Kind::True:
      case Kind::False:
      case Kind::Hole:
        return f;
      case Kind::Pred: {
        std::vector<VarId> args = f->args;
        for (VarId& v : args) v = lookup(v);
        return f_pred(f->pred, std::move(args));
      }
      case Kind::Eq:
        return f_eq(lookup(f->lhs), lookup(f->rhs));
      case Kind::Not:
        return f_not(run(f->a, map));
      case Kind::And:
        return f_and(run(f->a, map), run(f->b, map));
      case Kind::Or:
        return f_or(run(f->a, map), run(f->b, map));
      case Kind::Implies:
        return f_implies(run(f->a, map), run(f->b, map));
      case Kind::Iff:
        return f_iff(run(f->a, map), run(f->b, map));
      case Kind::Exists:
      case Kind::Forall:
      case Kind::BForall:
      case Kind::BExists: {
        VarId nv = fresh();
        auto old = map.find(f->var.index) != map.end()
                       ? std::optional<int>(map[f->var.index])
                       : std::nullopt;
        map[f->var.index] = nv.index;
        FormulaPtr out;
        if (f->kind == Kind::Exists)
          out = f_exists(nv, run(f->a, map));
        else if (f->kind == Kind::Forall)
          out = f_forall(nv, run(f->a, map));
        else if (f->kind == Kind::BForall)
          out = f_bforall(nv, run(f->a, map), run(f->b, map));
        else
          out = f_bexists(nv, run(f->a, map), run(f->b, map));
        if (old) map[f->var.index] = *old; else map.erase(f->var.index);
        return out;
      }
    }
    throw std::runtime_error("alpha_rename: bad kind");
  }
};

}  // namespace

FormulaPtr alpha_rename(const FormulaPtr& f, VarId fresh_from) {
  Renamer r;
  for (VarId v : all_vars(f)) r.used.insert(v.index);
  r.counter = fresh_from.index;
  std::map<int, int> map;
  return r.run(f, map);
}

FormulaPtr alpha_rename(const FormulaPtr& f) {
  return alpha_rename(f, VarId{max_var_index(f) + 1});
}

namespace {

// Assumes derived Iff and bounded quantifiers have been expanded and binders
// renamed apart.
std::pair<QuantifierPrefix, FormulaPtr> pull(const FormulaPtr& f) {
  auto flip = [](QuantifierPrefix p) {
    for (auto& [k, v] : p) k = k == QKind::Forall ? QKind::Exists : QKind::Forall;
    return p;
  };
  switch (f->kind) {
    case Kind::Not: {
      auto [p, m] = pull(f->a);
      return {flip(std::move(p)), f_not(m)};
    }
    case Kind::And: {
      auto [pa, ma] = pull(f->a);
      auto [pb, mb] = pull(f->b);
      pa.insert(pa.end(), pb.begin(), pb.end());
      return {std::move(pa), f_and(ma, mb)};
    }
    case Kind::Or: {
      auto [pa, ma] = pull(f->a);
      auto [pb, mb] = pull(f->b);
      pa.insert(pa.end(), pb.begin(), pb.end());
      return {std::move(pa), f_or(ma, mb)};
    }
    case Kind::Implies: {
      auto [pa, ma] = pull(f->a);
      auto [pb, mb] = pull(f->b);
      auto p = flip(std::move(pa));
      p.insert(p.end(), pb.begin(), pb.end());
      return {std::move(p), f_implies(ma, mb)};
    }
    case Kind::Exists: {
      auto [p, m] = pull(f->a);
      p.insert(p.begin(), {QKind::Exists, f->var});
      return {std::move(p), m};
    }
    case Kind::Forall: {
      auto [p, m] = pull(f->a);
      p.insert(p.begin(), {QKind::Forall, f->var});
      return {std::move(p), m};
    }
    default:
      return {{}, f};
  }
}

// Expands Iff (which has no direct pull-out law) and bounded quantifiers,
// keeping And/Or/Implies/Not intact.
FormulaPtr expand_for_prenex(const FormulaPtr& f) {
  switch (f->kind) {
    case Kind::Iff:
      return f_and(expand_for_prenex(f_implies(f->a, f->b)),
                   expand_for_prenex(f_implies(f->b, f->a)));
    case Kind::BForall:
      return f_forall(f->var, expand_for_prenex(f_implies(f->a, f->b)));
    case Kind::BExists:
      return f_exists(f->var, f_and(expand_for_prenex(f->a), expand_for_prenex(f->b)));
    case Kind::Not:
      return f_not(expand_for_prenex(f->a));
    case Kind::And:
      return f_and(expand_for_prenex(f->a), expand_for_prenex(f->b));
    case Kind::Or:
      return f_or(expand_for_prenex(f->a), expand_for_prenex(f->b));
    case Kind::Implies:
      return f_implies(expand_for_prenex(f->a), expand_for_prenex(f->b));
    case Kind::Exists:
      return f_exists(f->var, expand_for_prenex(f->a));
    case Kind::Forall:
      return f_forall(f->var, expand_for_prenex(f->a));
    default:
      return f;
  }
}

}  // namespace

std::pair<QuantifierPrefix, FormulaPtr> prenex(const FormulaPtr& f) {
  return pull(alpha_rename(expand_for_prenex(f)));
}

}  // namespace folnd
