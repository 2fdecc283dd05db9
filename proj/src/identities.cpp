#include "folnd/identities.hpp"

#include <algorithm>
#include <sstream>

namespace folnd {

namespace {

[[noreturn]] void bad_slots(const std::string& what) { throw std::invalid_argument(what); }

void need(const FormulaPtr& f, const std::string& slot) {
  if (!f) bad_slots("identity needs slot: " + slot);
}

void need_var(VarId v, const std::string& slot) {
  if (v.index < 1) bad_slots("identity needs slot: " + slot);
}

IdentityReport unmet(std::string why) {
  IdentityReport r;
  r.status = IdentityStatus::SideConditionsUnmet;
  r.detail = std::move(why);
  return r;
}

IdentityReport from_equiv(const FiniteModel& m, const FormulaPtr& lhs, const FormulaPtr& rhs) {
  EquivResult e = check_equivalent(m, lhs, rhs);
  IdentityReport r;
  if (e.equivalent) {
    r.detail = "both sides have the same meaning";
    return r;
  }
  r.status = IdentityStatus::Fails;
  r.detail = "the sides differ";
  r.counterexample = e.counterexample;
  return r;
}

// Conjoins a second equation into an existing report.
IdentityReport also(IdentityReport first, const FiniteModel& m, const FormulaPtr& lhs,
                    const FormulaPtr& rhs) {
  if (first.status != IdentityStatus::Holds) return first;
  return from_equiv(m, lhs, rhs);
}

bool subset(const MeaningSet& a, const MeaningSet& b) {
  return std::includes(b.rows.begin(), b.rows.end(), a.rows.begin(), a.rows.end());
}

bool nondep_ok(const FiniteModel& m, const FormulaPtr& phi, VarId x, const FormulaPtr& theta) {
  return check_nondep(m, phi, x, theta).holds;
}

std::vector<FormulaPtr> wrap_bforall(const std::vector<FormulaPtr>& phis, VarId x,
                                     const FormulaPtr& theta) {
  std::vector<FormulaPtr> out;
  out.reserve(phis.size());
  for (const auto& p : phis) out.push_back(f_bforall(x, theta, p));
  return out;
}

void need_template(const IdentitySlots& s, int& max_hole) {
  need(s.templ, "template");
  if (!is_boolean_template(s.templ, max_hole)) bad_slots("template slot is not a boolean template");
  if ((int)s.phis.size() != max_hole)
    bad_slots("template wants " + std::to_string(max_hole) + " formulas, got " +
              std::to_string(s.phis.size()));
}

IdentityReport five_forms(const FiniteModel& m, const IdentitySlots& s) {
  need(s.phi, "phi");
  need(s.theta, "theta");
  need_var(s.x, "x");
  const FormulaPtr &phi = s.phi, &theta = s.theta;
  VarId x = s.x;
  Window w = window_union(make_window(free_vars(phi)), make_window(free_vars(theta)));
  w = window_union(w, {x});
  auto same = [&](const FormulaPtr& a, const FormulaPtr& b) {
    return meaning(m, a, w).rows == meaning(m, b, w).rows;
  };
  bool i = check_nondep(m, phi, x, theta).holds;
  bool ii = same(f_and(theta, f_bexists(x, theta, phi)), f_and(theta, phi));
  bool iii = same(f_and(theta, f_bforall(x, theta, phi)), f_and(theta, phi));
  bool iv = same(f_implies(theta, f_bforall(x, theta, phi)), f_implies(theta, phi));
  bool v = same(f_implies(theta, f_bexists(x, theta, phi)), f_implies(theta, phi));
  IdentityReport r;
  if (i == ii && ii == iii && iii == iv && iv == v) {
    std::ostringstream d;
    d << "all five formulations agree (" << (i ? "non-dependent" : "dependent") << ")";
    r.detail = d.str();
    return r;
  }
  r.status = IdentityStatus::Fails;
  std::ostringstream d;
  d << "formulations disagree: i=" << i << " ii=" << ii << " iii=" << iii << " iv=" << iv
    << " v=" << v;
  r.detail = d.str();
  return r;
}

IdentityReport chain(const FiniteModel& m, const IdentitySlots& s) {
  need(s.phi, "phi");
  need(s.theta, "theta");
  need_var(s.x, "x");
  const FormulaPtr &phi = s.phi, &theta = s.theta;
  VarId x = s.x;
  Window w = window_union(make_window(free_vars(phi)), make_window(free_vars(theta)));
  w = window_union(w, {x});
  MeaningSet a = meaning(m, f_and(theta, f_exists(x, f_and(theta, phi))), w);
  MeaningSet b = meaning(m, f_and(theta, phi), w);
  MeaningSet c = meaning(m, phi, w);
  MeaningSet d = meaning(m, f_implies(theta, phi), w);
  MeaningSet e = meaning(m, f_implies(theta, f_forall(x, f_implies(theta, phi))), w);
  IdentityReport r;
  if (subset(b, a) && subset(b, c) && subset(c, d) && subset(e, d)) {
    r.detail = "containment chain holds";
    return r;
  }
  r.status = IdentityStatus::Fails;
  r.detail = "a containment in the chain fails";
  return r;
}

IdentityReport chain_q(const FiniteModel& m, const IdentitySlots& s) {
  need(s.phi, "phi");
  need_var(s.x, "x");
  Window w = window_union(make_window(free_vars(s.phi)), {s.x});
  MeaningSet lo = meaning(m, f_forall(s.x, s.phi), w);
  MeaningSet mid = meaning(m, s.phi, w);
  MeaningSet hi = meaning(m, f_exists(s.x, s.phi), w);
  IdentityReport r;
  if (subset(lo, mid) && subset(mid, hi)) {
    r.detail = "forall below, exists above";
    return r;
  }
  r.status = IdentityStatus::Fails;
  r.detail = "quantifier containment fails";
  return r;
}

IdentityReport scope(const FiniteModel& m, const IdentitySlots& s, int which) {
  need(s.phi, "phi");
  need(s.psi, "psi");
  need_var(s.x, "x");
  if (free_vars(s.phi).count(s.x))
    return unmet("x occurs free in phi");
  const FormulaPtr &phi = s.phi, &psi = s.psi;
  VarId x = s.x;
  switch (which) {
    case 1: return from_equiv(m, f_exists(x, f_and(phi, psi)), f_and(phi, f_exists(x, psi)));
    case 2: return from_equiv(m, f_forall(x, f_or(phi, psi)), f_or(phi, f_forall(x, psi)));
    case 3: return from_equiv(m, f_exists(x, f_implies(phi, psi)), f_implies(phi, f_exists(x, psi)));
    case 4: return from_equiv(m, f_forall(x, f_implies(phi, psi)), f_implies(phi, f_forall(x, psi)));
    default:
      return from_equiv(m, f_forall(x, f_implies(psi, phi)), f_implies(f_exists(x, psi), phi));
  }
}

IdentityReport rel_complement(const FiniteModel& m, const IdentitySlots& s) {
  need(s.phi, "phi");
  need(s.theta, "theta");
  need_var(s.x, "x");
  if (!nondep_ok(m, s.phi, s.x, s.theta))
    return unmet("phi is not non-dependent of x provided theta");
  FormulaPtr lhs = f_bexists(s.x, s.theta, f_not(s.phi));
  FormulaPtr rhs = f_and(f_exists(s.x, s.theta), f_not(f_bexists(s.x, s.theta, s.phi)));
  return from_equiv(m, lhs, rhs);
}

IdentityReport neg_bforall(const FiniteModel& m, const IdentitySlots& s) {
  need(s.phi, "phi");
  need(s.theta, "theta");
  need_var(s.x, "x");
  if (!nondep_ok(m, s.phi, s.x, s.theta))
    return unmet("phi is not non-dependent of x provided theta");
  FormulaPtr lhs = f_bforall(s.x, s.theta, f_not(s.phi));
  FormulaPtr rhs = f_implies(f_exists(s.x, s.theta), f_not(f_bforall(s.x, s.theta, s.phi)));
  return from_equiv(m, lhs, rhs);
}

IdentityReport neg_push(const FiniteModel& m, const IdentitySlots& s) {
  need(s.phi, "phi");
  need(s.theta, "theta");
  need_var(s.x, "x");
  if (!nondep_ok(m, s.phi, s.x, s.theta))
    return unmet("phi is not non-dependent of x provided theta");
  if (!valid(m, f_exists(s.x, s.theta))) return unmet("exists x theta is not valid");
  IdentityReport r = from_equiv(m, f_not(f_bexists(s.x, s.theta, s.phi)),
                                f_bexists(s.x, s.theta, f_not(s.phi)));
  return also(std::move(r), m, f_not(f_bforall(s.x, s.theta, s.phi)),
              f_bforall(s.x, s.theta, f_not(s.phi)));
}

IdentityReport prop_h(const FiniteModel& m, const IdentitySlots& s) {
  need(s.phi, "phi");
  need(s.theta, "theta");
  need_var(s.x, "x");
  if (!nondep_ok(m, s.phi, s.x, s.theta))
    return unmet("phi is not non-dependent of x provided theta");
  if (!valid(m, f_exists(s.x, s.theta))) return unmet("exists x theta is not valid");
  return from_equiv(m, f_bexists(s.x, s.theta, s.phi), f_bforall(s.x, s.theta, s.phi));
}

IdentityReport prop_b(const FiniteModel& m, const IdentitySlots& s) {
  need(s.phi, "phi");
  need(s.psi, "psi");
  need(s.theta, "theta");
  need_var(s.x, "x");
  FormulaPtr lhs = f_bforall(s.x, s.theta, f_and(s.phi, s.psi));
  FormulaPtr rhs = f_and(f_bforall(s.x, s.theta, s.phi), f_bforall(s.x, s.theta, s.psi));
  return from_equiv(m, lhs, rhs);
}

IdentityReport prop_c(const FiniteModel& m, const IdentitySlots& s) {
  int n = 0;
  need_template(s, n);
  need(s.theta, "theta");
  need_var(s.x, "x");
  for (int i = 0; i < n; ++i)
    if (!nondep_ok(m, s.phis[i], s.x, s.theta))
      return unmet("phi_" + std::to_string(i + 1) + " is not non-dependent of x provided theta");
  FormulaPtr lhs = f_implies(f_exists(s.x, s.theta),
                             instantiate(s.templ, wrap_bforall(s.phis, s.x, s.theta)));
  FormulaPtr rhs = f_bforall(s.x, s.theta, instantiate(s.templ, s.phis));
  return from_equiv(m, lhs, rhs);
}

IdentityReport pull_exists(const FiniteModel& m, const IdentitySlots& s) {
  need(s.phi, "phi");
  need(s.theta, "theta");
  need_var(s.x, "x");
  std::set<VarId> th_free = free_vars(s.theta);
  for (VarId z : s.zs)
    if (th_free.count(z)) return unmet("a z variable occurs free in theta");
  if (!nondep_ok(m, s.phi, s.x, s.theta))
    return unmet("phi is not non-dependent of x provided theta");
  QuantifierPrefix ez;
  for (VarId z : s.zs) ez.push_back({QKind::Exists, z});
  FormulaPtr lhs = f_forall(s.x, apply_prefix(ez, f_implies(s.theta, s.phi)));
  FormulaPtr rhs = f_implies(f_exists(s.x, s.theta),
                             apply_prefix(ez, f_bforall(s.x, s.theta, s.phi)));
  return from_equiv(m, lhs, rhs);
}

IdentityReport pull_prefix(const FiniteModel& m, const IdentitySlots& s, bool exists_form) {
  int n = 0;
  need_template(s, n);
  need(s.theta, "theta");
  need_var(s.x, "x");
  std::set<VarId> th_free = free_vars(s.theta);
  for (const auto& [q, z] : s.prefix)
    if (th_free.count(z)) return unmet("a prefix variable occurs free in theta");
  for (int i = 0; i < n; ++i)
    if (!nondep_ok(m, s.phis[i], s.x, s.theta))
      return unmet("phi_" + std::to_string(i + 1) + " is not non-dependent of x provided theta");
  if (exists_form) {
    if (!valid(m, f_exists(s.x, s.theta))) return unmet("exists x theta is not valid");
    std::vector<FormulaPtr> wrapped;
    for (const auto& p : s.phis) wrapped.push_back(f_bexists(s.x, s.theta, p));
    FormulaPtr lhs = apply_prefix(s.prefix, instantiate(s.templ, wrapped));
    FormulaPtr rhs = f_bexists(s.x, s.theta, apply_prefix(s.prefix, instantiate(s.templ, s.phis)));
    return from_equiv(m, lhs, rhs);
  }
  FormulaPtr lhs = f_implies(
      f_exists(s.x, s.theta),
      apply_prefix(s.prefix, instantiate(s.templ, wrap_bforall(s.phis, s.x, s.theta))));
  FormulaPtr rhs = f_bforall(s.x, s.theta, apply_prefix(s.prefix, instantiate(s.templ, s.phis)));
  return from_equiv(m, lhs, rhs);
}

IdentityReport guard_drop(const FiniteModel& m, const IdentitySlots& s) {
  need(s.phi, "phi");
  need(s.iota, "iota");
  need(s.epsilon, "epsilon");
  need_var(s.x, "x");
  if (free_vars(s.iota).count(s.x)) return unmet("x occurs free in iota");
  FormulaPtr guarded = f_forall(s.x, f_implies(f_and(s.iota, s.epsilon), s.phi));
  FormulaPtr plain = f_forall(s.x, f_implies(s.epsilon, s.phi));
  IdentityReport r = from_equiv(m, f_implies(s.iota, guarded), f_implies(s.iota, plain));
  return also(std::move(r), m, f_and(s.iota, guarded), f_and(s.iota, plain));
}

IdentityReport guard_drop_bool(const FiniteModel& m, const IdentitySlots& s) {
  int n = 0;
  need_template(s, n);
  need(s.iota, "iota");
  need(s.epsilon, "epsilon");
  need_var(s.x, "x");
  need_var(s.u, "u");
  if (free_vars(s.iota).count(s.x)) return unmet("x occurs free in iota");
  std::vector<FormulaPtr> plain, guarded;
  for (const auto& p : s.phis) {
    plain.push_back(f_forall(s.x, f_implies(s.epsilon, p)));
    guarded.push_back(f_forall(s.x, f_implies(f_and(s.iota, s.epsilon), p)));
  }
  FormulaPtr fp = instantiate(s.templ, plain), fg = instantiate(s.templ, guarded);
  if (s.outer_exists)
    return from_equiv(m, f_bexists(s.u, s.iota, fp), f_bexists(s.u, s.iota, fg));
  return from_equiv(m, f_bforall(s.u, s.iota, fp), f_bforall(s.u, s.iota, fg));
}

IdentityReport simp(const FiniteModel& m, const IdentitySlots& s) {
  int n = 0;
  need_template(s, n);
  need(s.iota, "iota");
  need(s.epsilon, "epsilon");
  need_var(s.x, "x");
  if (s.outer.empty()) bad_slots("identity needs slot: outer");
  if (free_vars(s.iota).count(s.x)) return unmet("x occurs free in iota");
  std::set<VarId> fr = free_vars(s.iota);
  for (VarId v : free_vars(s.epsilon)) fr.insert(v);
  for (const auto& [q, z] : s.prefix)
    if (fr.count(z)) return unmet("a z variable occurs free in iota or epsilon");
  FormulaPtr cond = f_and(s.iota, s.epsilon);
  for (int i = 0; i < n; ++i)
    if (!nondep_ok(m, s.phis[i], s.x, cond))
      return unmet("phi_" + std::to_string(i + 1) +
                   " is not non-dependent of x provided iota & epsilon");
  if (!valid(m, f_exists(s.x, s.epsilon))) return unmet("exists x epsilon is not valid");

  std::vector<FormulaPtr> wrapped = wrap_bforall(s.phis, s.x, s.epsilon);
  FormulaPtr lhs = apply_prefix(s.prefix, instantiate(s.templ, wrapped));
  FormulaPtr rhs = f_bforall(s.x, s.epsilon, apply_prefix(s.prefix, instantiate(s.templ, s.phis)));
  // wrap both in the outer bounded-by-iota block, innermost first
  for (auto it = s.outer.rbegin(); it != s.outer.rend(); ++it) {
    if (it->first == QKind::Forall) {
      lhs = f_bforall(it->second, s.iota, lhs);
      rhs = f_bforall(it->second, s.iota, rhs);
    } else {
      lhs = f_bexists(it->second, s.iota, lhs);
      rhs = f_bexists(it->second, s.iota, rhs);
    }
  }
  return from_equiv(m, lhs, rhs);
}

IdentityReport subst_reform(const FiniteModel& m, const IdentitySlots& s) {
  need(s.phi, "phi");
  need(s.theta, "theta");
  need_var(s.x, "x");
  bool direct = check_nondep(m, s.phi, s.x, s.theta).holds;
  bool via_subst = check_nondep_subst(m, s.phi, s.x, s.theta);
  IdentityReport r;
  if (direct == via_subst) {
    r.detail = std::string("both routes answer ") + (direct ? "non-dependent" : "dependent");
    return r;
  }
  r.status = IdentityStatus::Fails;
  r.detail = "the direct and substitution routes disagree";
  return r;
}

IdentityReport subst_semantics(const FiniteModel& m, const IdentitySlots& s) {
  need(s.phi, "phi");
  need_var(s.x, "x");
  need_var(s.u, "u");
  VarId y = s.u;
  FormulaPtr substituted = substitute(s.phi, s.x, y);
  std::set<VarId> vars = free_vars(s.phi);
  vars.insert(s.x);
  vars.insert(y);
  Window w = make_window(vars);
  std::vector<int> row(w.size(), 0);
  IdentityReport r;
  for (;;) {
    Assignment a{w, row};
    bool left = satisfies(m, substituted, a);
    bool right = satisfies(m, s.phi, override_at(a, s.x, a.value_of(y), m.domain_size));
    if (left != right) {
      r.status = IdentityStatus::Fails;
      r.detail = "substitution semantics mismatch";
      r.counterexample = a;
      return r;
    }
    size_t i = row.size();
    while (i > 0 && ++row[i - 1] == m.domain_size) row[--i] = 0;
    if (i == 0) break;
  }
  r.detail = "substitution agrees with reindexed evaluation everywhere";
  return r;
}

}  // namespace

std::vector<std::string> identity_names() {
  return {"five-forms", "rel-complement", "neg-bforall", "neg-push",   "prop-h",
          "prop-B",     "prop-C",         "pull-exists", "pull-prefix", "pull-prefix-e",
          "scope-1",    "scope-2",        "scope-3",     "scope-4",     "scope-5",
          "guard-drop", "guard-drop-bool", "simp",       "subst-reform", "subst-semantics",
          "chain",      "chain-q"};
}

IdentityReport check_identity(const std::string& name, const FiniteModel& m,
                              const IdentitySlots& slots) {
  if (name == "five-forms") return five_forms(m, slots);
  if (name == "rel-complement") return rel_complement(m, slots);
  if (name == "neg-bforall") return neg_bforall(m, slots);
  if (name == "neg-push") return neg_push(m, slots);
  if (name == "prop-h") return prop_h(m, slots);
  if (name == "prop-B") return prop_b(m, slots);
  if (name == "prop-C") return prop_c(m, slots);
  if (name == "pull-exists") return pull_exists(m, slots);
  if (name == "pull-prefix") return pull_prefix(m, slots, false);
  if (name == "pull-prefix-e") return pull_prefix(m, slots, true);
  if (name == "scope-1") return scope(m, slots, 1);
  if (name == "scope-2") return scope(m, slots, 2);
  if (name == "scope-3") return scope(m, slots, 3);
  if (name == "scope-4") return scope(m, slots, 4);
  if (name == "scope-5") return scope(m, slots, 5);
  if (name == "guard-drop") return guard_drop(m, slots);
  if (name == "guard-drop-bool") return guard_drop_bool(m, slots);
  if (name == "simp") return simp(m, slots);
  if (name == "subst-reform") return subst_reform(m, slots);
  if (name == "subst-semantics") return subst_semantics(m, slots);
  if (name == "chain") return chain(m, slots);
  if (name == "chain-q") return chain_q(m, slots);
  throw std::invalid_argument("unknown identity: " + name);
}

}  // namespace folnd
