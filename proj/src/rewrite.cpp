#include "folnd/rewrite.hpp"

#include <algorithm>
#include <sstream>

namespace folnd {

namespace {

void flatten_and(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  if (f->kind == Kind::And) {
    flatten_and(f->a, out);
    flatten_and(f->b, out);
  } else if (f->kind != Kind::True) {
    out.push_back(f);
  }
}

bool alpha_eq_core(const FormulaPtr& a, const FormulaPtr& b) {
  return alpha_eq(desugar(a), desugar(b));
}

// Every conjunct of weak occurs among the conjuncts of strong, so strong
// implies weak and monotonicity applies.
bool conjuncts_cover(const FormulaPtr& weak, const FormulaPtr& strong) {
  std::vector<FormulaPtr> ws, ss;
  flatten_and(weak, ws);
  flatten_and(strong, ss);
  for (const auto& w : ws) {
    bool found = false;
    for (const auto& s : ss)
      if (alpha_eq_core(w, s)) { found = true; break; }
    if (!found) return false;
  }
  return true;
}

FormulaPtr conj_all(const std::vector<FormulaPtr>& fs) {
  if (fs.empty()) return f_true();
  FormulaPtr out = fs[0];
  for (size_t i = 1; i < fs.size(); ++i) out = f_and(out, fs[i]);
  return out;
}

std::string show(const RewriteSession& s, const FormulaPtr& f) {
  if (s.vars) return print(f, *s.vars);
  VarTable tmp;
  return print(f, tmp);
}

}  // namespace

std::vector<FormulaPtr> guard_context(const FormulaPtr& root, const Path& path) {
  std::vector<FormulaPtr> out;
  FormulaPtr cur = root;
  auto drop_rebound = [&](VarId v) {
    out.erase(std::remove_if(out.begin(), out.end(),
                             [&](const FormulaPtr& g) { return free_vars(g).count(v) != 0; }),
              out.end());
  };
  for (int i : path) {
    if (i < 0 || i >= child_count(cur)) throw std::out_of_range("guard_context: bad path");
    switch (cur->kind) {
      case Kind::And:
        out.push_back(i == 0 ? cur->b : cur->a);
        break;
      case Kind::Implies:
        if (i == 1) out.push_back(cur->a);
        break;
      case Kind::Exists:
      case Kind::Forall:
        drop_rebound(cur->var);
        break;
      case Kind::BForall:
      case Kind::BExists:
        drop_rebound(cur->var);
        if (i == 1) out.push_back(cur->a);
        break;
      default:
        break;
    }
    cur = child_at(cur, i);
  }
  return out;
}

namespace {

void measure_rec(const FormulaPtr& f, int depth, Measure& m) {
  m.size += 1;
  if (f->kind == Kind::BForall || f->kind == Kind::BExists) {
    m.bounded += 1;
    m.bdepth += depth;
  }
  if (is_quantifier(f->kind)) m.qbody += formula_size(f);
  int n = child_count(f);
  for (int i = 0; i < n; ++i) measure_rec(child_at(f, i), depth + 1, m);
}

}  // namespace

Measure measure(const FormulaPtr& f) {
  Measure m;
  measure_rec(f, 0, m);
  return m;
}

DischargeResult discharge(const RewriteSession& s, const Obligation& ob) {
  DischargeResult res;
  std::ostringstream d;
  if (ob.kind == Obligation::Kind::NonDep) {
    if (ob.formula && !free_vars(ob.formula).count(ob.var)) {
      res.status = DischargeStatus::Verified;
      res.description = "nondep trivially: the variable does not occur free";
      return res;
    }
    if (!s.models.empty()) {
      for (size_t i = 0; i < s.models.size(); ++i) {
        if (!check_nondep(s.models[i], ob.formula, ob.var, ob.theta).holds) {
          res.status = DischargeStatus::Failed;
          res.description = "nondep fails on model " +
                            (i < s.model_names.size() ? s.model_names[i] : std::to_string(i));
          return res;
        }
      }
      res.status = DischargeStatus::Verified;
      d << "nondep verified on " << s.models.size() << " model(s)";
      res.description = d.str();
      return res;
    }
    // Fact matching. Quantifiers over other variables may be stripped first,
    // since non-dependence is closed under them.
    FormulaPtr probe = ob.formula;
    for (;;) {
      for (const auto& fact : s.facts.nondep) {
        if (fact.query.var != ob.var) continue;
        if (!alpha_eq_core(fact.query.formula, probe)) continue;
        if (!conjuncts_cover(fact.query.theta, ob.theta)) continue;
        res.status = fact.status == FactStatus::Verified ? DischargeStatus::Verified
                                                         : DischargeStatus::Asserted;
        d << "nondep fact: " << show(s, fact.query.formula) << " over "
          << (s.vars ? s.vars->name_of(ob.var) : "v" + std::to_string(ob.var.index))
          << " provided " << show(s, fact.query.theta)
          << (fact.status == FactStatus::Verified ? " [verified]" : " [asserted]");
        res.description = d.str();
        return res;
      }
      if ((probe->kind == Kind::Forall || probe->kind == Kind::Exists) && probe->var != ob.var)
        probe = probe->a;
      else
        break;
    }
    res.status = DischargeStatus::Failed;
    res.description = "no matching non-dependence fact for " + show(s, ob.formula);
    return res;
  }
  if (!s.models.empty()) {
    for (size_t i = 0; i < s.models.size(); ++i) {
      if (!valid(s.models[i], ob.formula)) {
        res.status = DischargeStatus::Failed;
        res.description = "validity fails on model " +
                          (i < s.model_names.size() ? s.model_names[i] : std::to_string(i));
        return res;
      }
    }
    res.status = DischargeStatus::Verified;
    d << "validity verified on " << s.models.size() << " model(s)";
    res.description = d.str();
    return res;
  }
  for (const auto& fact : s.facts.valids) {
    if (!alpha_eq_core(fact.formula, ob.formula)) continue;
    res.status = fact.status == FactStatus::Verified ? DischargeStatus::Verified
                                                     : DischargeStatus::Asserted;
    d << "validity fact: " << show(s, fact.formula)
      << (fact.status == FactStatus::Verified ? " [verified]" : " [asserted]");
    res.description = d.str();
    return res;
  }
  res.status = DischargeStatus::Failed;
  res.description = "no matching validity fact for " + show(s, ob.formula);
  return res;
}

namespace {

RuleResult fail_rule(std::string why) {
  RuleResult r;
  r.reason = std::move(why);
  return r;
}

// Discharges one obligation into an in-progress result; on failure overwrites
// the result with the reason.
bool take(const RewriteSession& s, const Obligation& ob, RuleResult& r) {
  DischargeResult d = discharge(s, ob);
  if (d.status == DischargeStatus::Failed) {
    r = fail_rule("obligation: " + d.description);
    return false;
  }
  r.facts_used.push_back(d.description);
  return true;
}

Obligation nondep_ob(FormulaPtr phi, VarId x, FormulaPtr theta) {
  Obligation ob;
  ob.kind = Obligation::Kind::NonDep;
  ob.formula = std::move(phi);
  ob.var = x;
  ob.theta = std::move(theta);
  return ob;
}

Obligation valid_ob(FormulaPtr f) {
  Obligation ob;
  ob.kind = Obligation::Kind::Valid;
  ob.formula = std::move(f);
  return ob;
}

struct Rebound {
  bool ok = false;
  FormulaPtr guard, body;
};

// Rebinds a bounded quantifier node to variable x; fails when x already
// occurs free below the node.
Rebound rebind(const FormulaPtr& bq, VarId x) {
  Rebound r;
  if (bq->var == x) {
    r.ok = true;
    r.guard = bq->a;
    r.body = bq->b;
    return r;
  }
  if (free_vars(bq).count(x)) return r;
  r.ok = true;
  r.guard = subst_struct(bq->a, bq->var, x);
  r.body = subst_struct(bq->b, bq->var, x);
  return r;
}

struct GuardMatch {
  bool ok = false;
  VarId x;
  FormulaPtr guard, body;
};

// Matches a bounded node against an expected guard, retargeting the bound
// variable when needed.
GuardMatch match_guard(const FormulaPtr& bq, const FormulaPtr& expected) {
  GuardMatch gm;
  if (alpha_eq_core(bq->a, expected)) {
    gm.ok = true;
    gm.x = bq->var;
    gm.guard = bq->a;
    gm.body = bq->b;
    return gm;
  }
  for (VarId v : free_vars(expected)) {
    Rebound rb = rebind(bq, v);
    if (rb.ok && alpha_eq_core(rb.guard, expected)) {
      gm.ok = true;
      gm.x = v;
      gm.guard = rb.guard;
      gm.body = rb.body;
      return gm;
    }
  }
  return gm;
}

RuleResult done(const FormulaPtr& whole, const Path& path, const FormulaPtr& repl, RuleResult r) {
  r.applied = true;
  r.result = replace_at(whole, path, repl);
  return r;
}

// theta * BQ[x in theta'. phi]  =>  theta * phi   (* is & or ->)
RuleResult rule_dedup(const RewriteSession& s, const FormulaPtr& whole, const Path& path,
                      Kind outer, Kind bkind) {
  FormulaPtr t = subformula_at(whole, path);
  if (t->kind != outer) return fail_rule("target does not have the dedup shape");
  int sides = outer == Kind::And ? 2 : 1;  // conjunction commutes at the root
  for (int side = 0; side < sides; ++side) {
    FormulaPtr theta = side == 0 ? t->a : t->b;
    FormulaPtr bq = side == 0 ? t->b : t->a;
    if (bq->kind != bkind) continue;
    GuardMatch gm = match_guard(bq, theta);
    if (!gm.ok) continue;
    RuleResult r;
    if (!take(s, nondep_ob(gm.body, gm.x, gm.guard), r)) return r;
    FormulaPtr repl = outer == Kind::And
                          ? (side == 0 ? f_and(t->a, gm.body) : f_and(gm.body, t->b))
                          : f_implies(t->a, gm.body);
    return done(whole, path, repl, std::move(r));
  }
  return fail_rule("guard does not match the adjacent formula");
}

// exists x in theta. phi  <=>  forall x in theta. phi
RuleResult rule_flip(const RewriteSession& s, const FormulaPtr& whole, const Path& path,
                     bool reverse) {
  FormulaPtr t = subformula_at(whole, path);
  Kind from = reverse ? Kind::BForall : Kind::BExists;
  if (t->kind != from) return fail_rule("target is not the expected bounded quantifier");
  RuleResult r;
  if (!take(s, nondep_ob(t->b, t->var, t->a), r)) return r;
  if (!take(s, valid_ob(f_exists(t->var, t->a)), r)) return r;
  FormulaPtr repl = reverse ? f_bexists(t->var, t->a, t->b) : f_bforall(t->var, t->a, t->b);
  return done(whole, path, repl, std::move(r));
}

// ~BQ[x in theta. phi]  <=>  BQ[x in theta. ~phi]
RuleResult rule_neg_push(const RewriteSession& s, const FormulaPtr& whole, const Path& path,
                         Kind bkind, bool reverse) {
  FormulaPtr t = subformula_at(whole, path);
  FormulaPtr bq;
  if (!reverse) {
    if (t->kind != Kind::Not || t->a->kind != bkind)
      return fail_rule("target is not a negated bounded quantifier");
    bq = t->a;
  } else {
    if (t->kind != bkind || t->b->kind != Kind::Not)
      return fail_rule("target is not a bounded quantifier over a negation");
    bq = t;
  }
  VarId x = bq->var;
  FormulaPtr theta = bq->a;
  FormulaPtr phi = reverse ? bq->b->a : bq->b;
  RuleResult r;
  if (!take(s, nondep_ob(phi, x, theta), r)) return r;
  if (!take(s, valid_ob(f_exists(x, theta)), r)) return r;
  FormulaPtr repl;
  if (!reverse) {
    repl = bkind == Kind::BExists ? f_bexists(x, theta, f_not(phi))
                                  : f_bforall(x, theta, f_not(phi));
  } else {
    repl = f_not(bkind == Kind::BExists ? f_bexists(x, theta, phi) : f_bforall(x, theta, phi));
  }
  return done(whole, path, repl, std::move(r));
}

// forall x in theta. (phi & psi)  <=>  (forall x in theta. phi) & (forall x in theta. psi)
RuleResult rule_dist_conj(const RewriteSession&, const FormulaPtr& whole, const Path& path,
                          bool reverse) {
  FormulaPtr t = subformula_at(whole, path);
  if (!reverse) {
    if (t->kind != Kind::BForall || t->b->kind != Kind::And)
      return fail_rule("target is not a bounded forall over a conjunction");
    FormulaPtr repl = f_and(f_bforall(t->var, t->a, t->b->a), f_bforall(t->var, t->a, t->b->b));
    return done(whole, path, repl, RuleResult{});
  }
  if (t->kind != Kind::And || t->a->kind != Kind::BForall || t->b->kind != Kind::BForall)
    return fail_rule("target is not a conjunction of bounded foralls");
  Rebound rb = rebind(t->b, t->a->var);
  if (!rb.ok || !alpha_eq_core(t->a->a, rb.guard))
    return fail_rule("the two bounded foralls have different guards");
  FormulaPtr repl = f_bforall(t->a->var, t->a->a, f_and(t->a->b, rb.body));
  return done(whole, path, repl, RuleResult{});
}

// Boolean template decomposition: connective spine over non-connective leaves.
struct Decomp {
  FormulaPtr templ;
  std::vector<FormulaPtr> leaves;
};

FormulaPtr decomp_rec(const FormulaPtr& f, std::vector<FormulaPtr>& leaves) {
  switch (f->kind) {
    case Kind::Not:
      return f_not(decomp_rec(f->a, leaves));
    case Kind::And:
    case Kind::Or:
    case Kind::Implies:
    case Kind::Iff: {
      FormulaPtr a = decomp_rec(f->a, leaves);
      FormulaPtr b = decomp_rec(f->b, leaves);
      switch (f->kind) {
        case Kind::And: return f_and(a, b);
        case Kind::Or: return f_or(a, b);
        case Kind::Implies: return f_implies(a, b);
        default: return f_iff(a, b);
      }
    }
    default:
      leaves.push_back(f);
      return f_hole((int)leaves.size());
  }
}

Decomp decompose(const FormulaPtr& f) {
  Decomp d;
  d.templ = decomp_rec(f, d.leaves);
  return d;
}

// Classified leaves of a pull target: each is either a bounded quantifier
// over the shared (x, theta) or a formula with x not free in it.
struct PullMatrix {
  bool ok = false;
  std::string why;
  VarId x;
  FormulaPtr theta;
  FormulaPtr templ;
  std::vector<FormulaPtr> phis;       // bodies, expressed in x
  std::vector<bool> was_bounded;      // per leaf
  int bounded_count = 0;
  int connectives = 0;
};

// expected_theta null means the shared guard is learned from the first
// bounded leaf. allow_bexists admits mixed bounded quantifier leaves.
PullMatrix match_pull_matrix(const FormulaPtr& matrix, VarId expected_x,
                             const FormulaPtr& expected_theta, bool allow_bexists) {
  PullMatrix pm;
  Decomp d = decompose(matrix);
  pm.templ = d.templ;
  pm.connectives = formula_size(d.templ) - (int)d.leaves.size();
  pm.x = expected_x;
  pm.theta = expected_theta;
  for (const auto& leaf : d.leaves) {
    bool bounded = leaf->kind == Kind::BForall || (allow_bexists && leaf->kind == Kind::BExists);
    if (bounded) {
      if (!pm.theta) {
        // first bounded leaf fixes the shared guard (and x when unset)
        if (pm.x.index == 0) pm.x = leaf->var;
        Rebound rb = rebind(leaf, pm.x);
        if (!rb.ok) {
          pm.why = "cannot rebind a bounded leaf to the shared variable";
          return pm;
        }
        pm.theta = rb.guard;
        pm.phis.push_back(rb.body);
      } else {
        GuardMatch gm = match_guard(leaf, pm.theta);
        if (!gm.ok || (pm.x.index != 0 && gm.x != pm.x)) {
          // retarget explicitly to the shared x
          Rebound rb = rebind(leaf, pm.x);
          if (!rb.ok || !alpha_eq_core(rb.guard, pm.theta)) {
            pm.why = "a bounded leaf has a different guard";
            return pm;
          }
          pm.phis.push_back(rb.body);
        } else {
          pm.phis.push_back(gm.body);
        }
      }
      pm.was_bounded.push_back(true);
      ++pm.bounded_count;
    } else {
      pm.phis.push_back(leaf);
      pm.was_bounded.push_back(false);
    }
  }
  if (pm.bounded_count == 0) {
    pm.why = "no bounded quantifier leaf";
    return pm;
  }
  for (size_t i = 0; i < pm.phis.size(); ++i) {
    if (!pm.was_bounded[i] && free_vars(pm.phis[i]).count(pm.x)) {
      pm.why = "the quantified variable occurs free in an unbounded leaf";
      return pm;
    }
  }
  pm.ok = true;
  return pm;
}

// exists x theta -> f(forall x in theta. phi_1, ...)  =>  forall x in theta. f(phi_1, ...)
RuleResult rule_pull_bool(const RewriteSession& s, const FormulaPtr& whole, const Path& path) {
  FormulaPtr t = subformula_at(whole, path);
  if (t->kind != Kind::Implies || t->a->kind != Kind::Exists)
    return fail_rule("target is not of the shape exists x theta -> ...");
  VarId x = t->a->var;
  FormulaPtr theta = t->a->a;
  PullMatrix pm = match_pull_matrix(t->b, x, theta, false);
  if (!pm.ok) return fail_rule(pm.why);
  RuleResult r;
  for (const auto& phi : pm.phis)
    if (!take(s, nondep_ob(phi, x, theta), r)) return r;
  FormulaPtr repl = f_bforall(x, theta, instantiate(pm.templ, pm.phis));
  return done(whole, path, repl, std::move(r));
}

// forall x exists zbar (theta -> psi)  =>  exists x theta -> exists zbar forall x in theta. psi
RuleResult rule_pull_exists(const RewriteSession& s, const FormulaPtr& whole, const Path& path) {
  FormulaPtr t = subformula_at(whole, path);
  if (t->kind != Kind::Forall) return fail_rule("target is not a plain forall");
  VarId x = t->var;
  std::vector<VarId> zs;
  FormulaPtr body = t->a;
  while (body->kind == Kind::Exists) {
    zs.push_back(body->var);
    body = body->a;
  }
  if (zs.empty()) return fail_rule("no existential block under the forall");
  if (body->kind != Kind::Implies) return fail_rule("the matrix is not an implication");
  FormulaPtr theta = body->a, psi = body->b;
  std::set<VarId> th_free = free_vars(theta);
  for (VarId z : zs)
    if (th_free.count(z)) return fail_rule("a z variable occurs free in theta");
  RuleResult r;
  if (!take(s, nondep_ob(psi, x, theta), r)) return r;
  FormulaPtr inner = f_bforall(x, theta, psi);
  for (auto it = zs.rbegin(); it != zs.rend(); ++it) inner = f_exists(*it, inner);
  FormulaPtr repl = f_implies(f_exists(x, theta), inner);
  return done(whole, path, repl, std::move(r));
}

// exists x theta -> Qbar zbar f(forall x in theta. phi_i, ...)
//   =>  forall x in theta. Qbar zbar f(phi_i, ...)
// Variant without the wrapper, with mixed bounded leaves, needs exists x theta valid:
// Qbar zbar f(BQ[x in theta. phi_i], ...)  =>  forall x in theta. Qbar zbar f(phi_i, ...)
RuleResult rule_pull_prefix(const RewriteSession& s, const FormulaPtr& whole, const Path& path) {
  FormulaPtr t = subformula_at(whole, path);
  bool wrapped = t->kind == Kind::Implies && t->a->kind == Kind::Exists;
  VarId x{0};
  FormulaPtr theta, rest;
  if (wrapped) {
    x = t->a->var;
    theta = t->a->a;
    rest = t->b;
  } else {
    rest = t;
  }
  QuantifierPrefix prefix;
  while (rest->kind == Kind::Forall || rest->kind == Kind::Exists) {
    prefix.push_back({rest->kind == Kind::Forall ? QKind::Forall : QKind::Exists, rest->var});
    rest = rest->a;
  }
  PullMatrix pm = match_pull_matrix(rest, x, theta, !wrapped);
  if (!pm.ok) return fail_rule(pm.why);
  x = pm.x;
  theta = pm.theta;
  std::set<VarId> th_free = free_vars(theta);
  for (const auto& [q, z] : prefix) {
    if (th_free.count(z)) return fail_rule("a prefix variable occurs free in theta");
    if (z == x) return fail_rule("the prefix rebinds the bounded variable");
  }
  if (wrapped && prefix.empty() && pm.bounded_count == 1 && pm.connectives == 0)
    return fail_rule("degenerate instance, use r_pull_bool");
  if (!wrapped && prefix.empty())
    return fail_rule("no prefix to pull through, use r_pull_bool");
  RuleResult r;
  for (const auto& phi : pm.phis)
    if (!take(s, nondep_ob(phi, x, theta), r)) return r;
  if (!wrapped)
    if (!take(s, valid_ob(f_exists(x, theta)), r)) return r;
  FormulaPtr repl =
      f_bforall(x, theta, apply_prefix(prefix, instantiate(pm.templ, pm.phis)));
  return done(whole, path, repl, std::move(r));
}

// A universally quantified implication whose guard conjunction contains iota;
// covers both the plain forall spelling and the bounded one.
struct GuardedLeaf {
  bool ok = false;
  VarId x;
  FormulaPtr guard, body;
  bool bounded = false;
};

GuardedLeaf as_guarded(const FormulaPtr& f) {
  GuardedLeaf g;
  if (f->kind == Kind::BForall) {
    g.ok = true;
    g.bounded = true;
    g.x = f->var;
    g.guard = f->a;
    g.body = f->b;
  } else if (f->kind == Kind::Forall && f->a->kind == Kind::Implies) {
    g.ok = true;
    g.x = f->var;
    g.guard = f->a->a;
    g.body = f->a->b;
  }
  return g;
}

FormulaPtr rebuild_guarded(const GuardedLeaf& g, const FormulaPtr& new_guard) {
  if (g.bounded) return f_bforall(g.x, new_guard, g.body);
  return f_forall(g.x, f_implies(new_guard, g.body));
}

// Removes the iota conjunct from the guard when present.
FormulaPtr strip_iota(const FormulaPtr& guard, const FormulaPtr& iota, VarId x) {
  if (free_vars(iota).count(x)) return nullptr;
  std::vector<FormulaPtr> cs;
  flatten_and(guard, cs);
  std::vector<FormulaPtr> kept;
  bool removed = false;
  for (const auto& c : cs) {
    if (!removed && alpha_eq_core(c, iota))
      removed = true;
    else
      kept.push_back(c);
  }
  if (!removed || kept.empty()) return nullptr;
  return conj_all(kept);
}

// iota -> forall x (iota & eps -> phi)  =>  iota -> forall x (eps -> phi)
// iota &  forall x (iota & eps -> phi)  =>  iota &  forall x (eps -> phi)
// and the boolean lift under a BQ[u in iota] wrapper.
RuleResult rule_guard_drop(const RewriteSession&, const FormulaPtr& whole, const Path& path) {
  FormulaPtr t = subformula_at(whole, path);
  if (t->kind == Kind::Implies || t->kind == Kind::And) {
    FormulaPtr iota = t->a;
    GuardedLeaf g = as_guarded(t->b);
    if (g.ok) {
      FormulaPtr slim = strip_iota(g.guard, iota, g.x);
      if (slim) {
        FormulaPtr inner = rebuild_guarded(g, slim);
        FormulaPtr repl = t->kind == Kind::Implies ? f_implies(iota, inner) : f_and(iota, inner);
        return done(whole, path, repl, RuleResult{});
      }
    }
    return fail_rule("no droppable guard conjunct");
  }
  if (t->kind == Kind::BForall || t->kind == Kind::BExists) {
    FormulaPtr iota = t->a;
    Decomp d = decompose(t->b);
    bool any = false;
    std::vector<FormulaPtr> leaves;
    for (const auto& leaf : d.leaves) {
      GuardedLeaf g = as_guarded(leaf);
      FormulaPtr slim = g.ok ? strip_iota(g.guard, iota, g.x) : nullptr;
      if (slim) {
        leaves.push_back(rebuild_guarded(g, slim));
        any = true;
      } else {
        leaves.push_back(leaf);
      }
    }
    if (!any) return fail_rule("no droppable guard conjunct under the wrapper");
    FormulaPtr body = instantiate(d.templ, leaves);
    FormulaPtr repl = t->kind == Kind::BForall ? f_bforall(t->var, iota, body)
                                               : f_bexists(t->var, iota, body);
    return done(whole, path, repl, RuleResult{});
  }
  return fail_rule("target does not have a guard-drop shape");
}

// Qbar zbar f(forall x in eps. phi_i, ...)  =>  forall x in eps. Qbar zbar f(phi_i, ...)
// with iota taken from the guard context.
RuleResult rule_simp(const RewriteSession& s, const FormulaPtr& whole, const Path& path) {
  FormulaPtr t = subformula_at(whole, path);
  QuantifierPrefix prefix;
  FormulaPtr rest = t;
  while (rest->kind == Kind::Forall || rest->kind == Kind::Exists) {
    prefix.push_back({rest->kind == Kind::Forall ? QKind::Forall : QKind::Exists, rest->var});
    rest = rest->a;
  }
  PullMatrix pm = match_pull_matrix(rest, VarId{0}, nullptr, false);
  if (!pm.ok) return fail_rule(pm.why);
  VarId x = pm.x;
  FormulaPtr eps = pm.theta;
  std::set<VarId> eps_free = free_vars(eps);
  for (const auto& [q, z] : prefix) {
    if (z == x) return fail_rule("the prefix rebinds the bounded variable");
    if (eps_free.count(z)) return fail_rule("a prefix variable occurs free in epsilon");
  }
  if (pm.bounded_count < 2 && prefix.empty() && pm.connectives == 0)
    return fail_rule("no progress: single bounded leaf with no prefix or connective");
  // context guards play the iota role; keep only the ones the theorem allows
  std::vector<FormulaPtr> iota_parts;
  for (const auto& g : guard_context(whole, path)) {
    std::set<VarId> gf = free_vars(g);
    if (gf.count(x)) continue;
    bool touches_z = false;
    for (const auto& [q, z] : prefix)
      if (gf.count(z)) { touches_z = true; break; }
    if (!touches_z) iota_parts.push_back(g);
  }
  FormulaPtr iota = conj_all(iota_parts);
  FormulaPtr cond = iota->kind == Kind::True ? eps : f_and(iota, eps);
  RuleResult r;
  for (const auto& phi : pm.phis)
    if (!take(s, nondep_ob(phi, x, cond), r)) return r;
  if (!take(s, valid_ob(f_exists(x, eps)), r)) return r;
  FormulaPtr repl = f_bforall(x, eps, apply_prefix(prefix, instantiate(pm.templ, pm.phis)));
  return done(whole, path, repl, std::move(r));
}

// The five scope equivalences, in the scope-shrinking direction.
RuleResult rule_scope(const RewriteSession&, const FormulaPtr& whole, const Path& path,
                      int which) {
  FormulaPtr t = subformula_at(whole, path);
  auto x_free_in = [](const FormulaPtr& f, VarId v) { return free_vars(f).count(v) != 0; };
  switch (which) {
    case 1: {  // exists x (phi & psi) => phi & exists x psi
      if (t->kind != Kind::Exists || t->a->kind != Kind::And)
        return fail_rule("target is not exists over a conjunction");
      VarId x = t->var;
      if (!x_free_in(t->a->a, x))
        return done(whole, path, f_and(t->a->a, f_exists(x, t->a->b)), RuleResult{});
      if (!x_free_in(t->a->b, x))
        return done(whole, path, f_and(f_exists(x, t->a->a), t->a->b), RuleResult{});
      return fail_rule("the variable is free on both sides");
    }
    case 2: {  // forall x (phi | psi) => phi | forall x psi
      if (t->kind != Kind::Forall || t->a->kind != Kind::Or)
        return fail_rule("target is not forall over a disjunction");
      VarId x = t->var;
      if (!x_free_in(t->a->a, x))
        return done(whole, path, f_or(t->a->a, f_forall(x, t->a->b)), RuleResult{});
      if (!x_free_in(t->a->b, x))
        return done(whole, path, f_or(f_forall(x, t->a->a), t->a->b), RuleResult{});
      return fail_rule("the variable is free on both sides");
    }
    case 3: {  // exists x (phi -> psi) => phi -> exists x psi
      if (t->kind != Kind::Exists || t->a->kind != Kind::Implies)
        return fail_rule("target is not exists over an implication");
      VarId x = t->var;
      if (x_free_in(t->a->a, x)) return fail_rule("the variable is free in the antecedent");
      return done(whole, path, f_implies(t->a->a, f_exists(x, t->a->b)), RuleResult{});
    }
    case 4: {  // forall x (phi -> psi) => phi -> forall x psi
      if (t->kind != Kind::Forall || t->a->kind != Kind::Implies)
        return fail_rule("target is not forall over an implication");
      VarId x = t->var;
      if (x_free_in(t->a->a, x)) return fail_rule("the variable is free in the antecedent");
      return done(whole, path, f_implies(t->a->a, f_forall(x, t->a->b)), RuleResult{});
    }
    default: {  // forall x (psi -> phi) => exists x psi -> phi
      if (t->kind != Kind::Forall || t->a->kind != Kind::Implies)
        return fail_rule("target is not forall over an implication");
      VarId x = t->var;
      if (x_free_in(t->a->b, x)) return fail_rule("the variable is free in the consequent");
      return done(whole, path, f_implies(f_exists(x, t->a->a), t->a->b), RuleResult{});
    }
  }
}

// phi  =>  forall x in theta. phi   (x not free in phi, exists x theta valid)
RuleResult rule_wrap(const RewriteSession& s, const FormulaPtr& whole, const Path& path,
                     const RuleOptions& opts) {
  if (!opts.theta || opts.var.index < 1) return fail_rule("r_wrap needs --theta and --var");
  FormulaPtr t = subformula_at(whole, path);
  if (free_vars(t).count(opts.var)) return fail_rule("the variable is free in the target");
  RuleResult r;
  if (!take(s, valid_ob(f_exists(opts.var, opts.theta)), r)) return r;
  return done(whole, path, f_bforall(opts.var, opts.theta, t), std::move(r));
}

// forall x in theta. psi  =>  psi[x := w] when the context contains theta[x := w]
RuleResult rule_instantiate(const RewriteSession& s, const FormulaPtr& whole, const Path& path) {
  FormulaPtr t = subformula_at(whole, path);
  if (t->kind != Kind::BForall) return fail_rule("target is not a bounded forall");
  VarId x = t->var;
  FormulaPtr theta = t->a, psi = t->b;
  std::vector<FormulaPtr> ctx = guard_context(whole, path);
  std::vector<FormulaPtr> usable;  // guards with x not free, soundness needs this
  for (const auto& g : ctx)
    if (!free_vars(g).count(x)) usable.push_back(g);
  // innermost guard first, smallest witness variable first
  for (auto it = usable.rbegin(); it != usable.rend(); ++it) {
    std::set<VarId> cands = free_vars(*it);
    for (VarId v : free_vars(theta))
      if (v != x) cands.insert(v);
    for (VarId w : cands) {
      if (w == x) continue;
      if (!alpha_eq_core(subst_struct(theta, x, w), *it)) continue;
      FormulaPtr theta_o = theta;
      for (const auto& g : usable) theta_o = f_and(theta_o, g);
      RuleResult r;
      if (!take(s, nondep_ob(psi, x, theta_o), r)) return r;
      std::ostringstream note;
      note << "witness " << (s.vars ? s.vars->name_of(w) : "v" + std::to_string(w.index))
           << " from context guard " << show(s, *it);
      r.facts_used.push_back(note.str());
      return done(whole, path, subst_struct(psi, x, w), std::move(r));
    }
  }
  return fail_rule("no context guard matches theta at any witness");
}

}  // namespace

std::vector<std::string> rule_names() {
  return {"r_dedup_and_e", "r_dedup_and_a", "r_dedup_imp_a", "r_dedup_imp_e", "r_flip",
          "r_neg_push_e",  "r_neg_push_a",  "r_dist_conj",   "r_pull_bool",   "r_pull_exists",
          "r_pull_prefix", "r_guard_drop",  "r_simp",        "r_scope_1",     "r_scope_2",
          "r_scope_3",     "r_scope_4",     "r_scope_5",     "r_wrap",        "r_instantiate"};
}

RuleResult apply_rule(const RewriteSession& s, const std::string& rule, const FormulaPtr& formula,
                      const Path& path, const RuleOptions& opts) {
  subformula_at(formula, path);  // throws on a bad path
  if (rule == "r_dedup_and_e") return rule_dedup(s, formula, path, Kind::And, Kind::BExists);
  if (rule == "r_dedup_and_a") return rule_dedup(s, formula, path, Kind::And, Kind::BForall);
  if (rule == "r_dedup_imp_a") return rule_dedup(s, formula, path, Kind::Implies, Kind::BForall);
  if (rule == "r_dedup_imp_e") return rule_dedup(s, formula, path, Kind::Implies, Kind::BExists);
  if (rule == "r_flip") return rule_flip(s, formula, path, opts.reverse);
  if (rule == "r_neg_push_e") return rule_neg_push(s, formula, path, Kind::BExists, opts.reverse);
  if (rule == "r_neg_push_a") return rule_neg_push(s, formula, path, Kind::BForall, opts.reverse);
  if (rule == "r_dist_conj") return rule_dist_conj(s, formula, path, opts.reverse);
  if (rule == "r_pull_bool") return rule_pull_bool(s, formula, path);
  if (rule == "r_pull_exists") return rule_pull_exists(s, formula, path);
  if (rule == "r_pull_prefix") return rule_pull_prefix(s, formula, path);
  if (rule == "r_guard_drop") return rule_guard_drop(s, formula, path);
  if (rule == "r_simp") return rule_simp(s, formula, path);
  if (rule == "r_scope_1") return rule_scope(s, formula, path, 1);
  if (rule == "r_scope_2") return rule_scope(s, formula, path, 2);
  if (rule == "r_scope_3") return rule_scope(s, formula, path, 3);
  if (rule == "r_scope_4") return rule_scope(s, formula, path, 4);
  if (rule == "r_scope_5") return rule_scope(s, formula, path, 5);
  if (rule == "r_wrap") return rule_wrap(s, formula, path, opts);
  if (rule == "r_instantiate") return rule_instantiate(s, formula, path);
  throw std::invalid_argument("unknown rule: " + rule);
}

namespace {

void postorder_paths(const FormulaPtr& f, Path& cur, std::vector<Path>& out) {
  int n = child_count(f);
  for (int i = 0; i < n; ++i) {
    cur.push_back(i);
    postorder_paths(child_at(f, i), cur, out);
    cur.pop_back();
  }
  out.push_back(cur);
}

const std::vector<std::pair<std::string, bool>>& driver_rules() {
  // rule name, reverse flag
  static const std::vector<std::pair<std::string, bool>> rules = {
      {"r_dedup_and_e", false}, {"r_dedup_and_a", false}, {"r_dedup_imp_a", false},
      {"r_dedup_imp_e", false}, {"r_instantiate", false}, {"r_simp", false},
      {"r_pull_prefix", false}, {"r_pull_bool", false},   {"r_guard_drop", false},
      {"r_dist_conj", true},    {"r_scope_1", false},     {"r_scope_2", false},
      {"r_scope_3", false},     {"r_scope_4", false},     {"r_scope_5", false}};
  return rules;
}

}  // namespace

std::pair<FormulaPtr, RewriteTrace> simplify(const RewriteSession& s, const FormulaPtr& formula,
                                             int budget) {
  RewriteTrace trace;
  trace.start = formula;
  FormulaPtr cur = formula;
  for (;;) {
    Measure cur_m = measure(cur);
    std::vector<Path> paths;
    Path tmp;
    postorder_paths(cur, tmp, paths);
    bool committed = false;
    bool found_any = false;
    for (const auto& [rule, reverse] : driver_rules()) {
      RuleOptions opts;
      opts.reverse = reverse;
      for (const Path& p : paths) {
        RuleResult rr = apply_rule(s, rule, cur, p, opts);
        if (!rr.applied) {
          if (rr.reason.rfind("obligation:", 0) == 0)
            trace.rejected.push_back({rule, p, rr.reason});
          continue;
        }
        if (!(measure(rr.result) < cur_m)) {
          trace.rejected.push_back({rule, p, "no measure decrease"});
          continue;
        }
        bool equiv_ok = true;
        for (size_t i = 0; i < s.models.size(); ++i) {
          if (!check_equivalent(s.models[i], cur, rr.result).equivalent) {
            trace.rejected.push_back(
                {rule, p,
                 "not equivalent on model " +
                     (i < s.model_names.size() ? s.model_names[i] : std::to_string(i))});
            equiv_ok = false;
            break;
          }
        }
        if (!equiv_ok) continue;
        found_any = true;
        if ((int)trace.steps.size() >= budget) {
          trace.budget_exhausted = true;
          break;
        }
        trace.steps.push_back({rule, p, rr.facts_used, cur, rr.result});
        cur = rr.result;
        committed = true;
        break;
      }
      if (committed || trace.budget_exhausted) break;
    }
    if (!committed || trace.budget_exhausted) {
      (void)found_any;
      break;
    }
  }
  trace.result = cur;
  return {cur, trace};
}

TraceReport verify_trace(const RewriteSession& s, const RewriteTrace& trace) {
  TraceReport rep;
  FormulaPtr cur = trace.start;
  for (size_t i = 0; i < trace.steps.size(); ++i) {
    const RewriteStep& st = trace.steps[i];
    std::ostringstream line;
    line << "step " << i + 1 << " [" << st.rule << "]";
    if (!struct_eq(cur, st.before)) {
      rep.ok = false;
      line << " broken chain: recorded before-formula differs";
      rep.lines.push_back(line.str());
      return rep;
    }
    RuleResult rr = apply_rule(s, st.rule, st.before, st.path);
    if (!rr.applied || !struct_eq(rr.result, st.after)) {
      RuleOptions rev;
      rev.reverse = true;
      rr = apply_rule(s, st.rule, st.before, st.path, rev);
    }
    if (!rr.applied) {
      rep.ok = false;
      line << " replay failed: " << rr.reason;
      rep.lines.push_back(line.str());
      return rep;
    }
    if (!struct_eq(rr.result, st.after)) {
      rep.ok = false;
      line << " replay diverged from the recorded after-formula";
      rep.lines.push_back(line.str());
      return rep;
    }
    line << " replayed";
    for (size_t mi = 0; mi < s.models.size(); ++mi) {
      std::string mname = mi < s.model_names.size() ? s.model_names[mi] : std::to_string(mi);
      if (check_equivalent(s.models[mi], st.before, st.after).equivalent) {
        line << "; equivalent on " << mname;
      } else {
        rep.ok = false;
        line << "; NOT equivalent on " << mname;
      }
    }
    rep.lines.push_back(line.str());
    cur = st.after;
  }
  if (trace.result && !struct_eq(cur, trace.result)) {
    rep.ok = false;
    rep.lines.push_back("final formula differs from the recorded result");
  }
  return rep;
}

}  // namespace folnd
