#include "folnd/testkit.hpp"

#include <algorithm>

namespace folnd {

uint64_t Rng::next() {
  state += 0x9e3779b97f4a7c15ULL;
  uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

uint64_t Rng::below(uint64_t n) {
  if (n == 0) throw std::invalid_argument("below(0)");
  // rejection sampling keeps the draw unbiased
  uint64_t limit = UINT64_MAX - UINT64_MAX % n;
  uint64_t v;
  do { v = next(); } while (v >= limit);
  return v % n;
}

Rng Rng::split() { return Rng(next()); }

Signature default_pool() {
  Signature sig;
  sig.declare("p", 1);
  sig.declare("q", 1);
  sig.declare("r", 2);
  return sig;
}

FiniteModel gen_model(const GenConfig& cfg, Rng& rng) {
  FiniteModel m;
  m.domain_size = 1 + (int)rng.below((uint64_t)cfg.max_domain);
  m.sig = cfg.pool;
  for (const auto& [name, arity] : cfg.pool.predicates) {
    std::set<std::vector<int>> tuples;
    std::vector<int> t(arity, 0);
    for (;;) {
      if (rng.coin()) tuples.insert(t);
      int i = arity;
      while (i > 0 && ++t[i - 1] == m.domain_size) t[--i] = 0;
      if (i == 0) break;
    }
    m.interp[name] = std::move(tuples);
  }
  return m;
}

namespace {

VarId pick_var(const GenConfig& cfg, Rng& rng) {
  return VarId{1 + (int)rng.below((uint64_t)cfg.max_vars)};
}

FormulaPtr gen_rec(const GenConfig& cfg, Rng& rng, int depth) {
  if (depth <= 0) {
    // atom or equality
    std::vector<std::pair<std::string, int>> preds(cfg.pool.predicates.begin(),
                                                   cfg.pool.predicates.end());
    uint64_t pick = rng.below(preds.size() + 1);
    if (pick == preds.size()) return f_eq(pick_var(cfg, rng), pick_var(cfg, rng));
    const auto& [name, arity] = preds[pick];
    std::vector<VarId> args;
    for (int i = 0; i < arity; ++i) args.push_back(pick_var(cfg, rng));
    return f_pred(name, std::move(args));
  }
  switch (rng.below(9)) {
    case 0: return gen_rec(cfg, rng, 0);
    case 1: return f_not(gen_rec(cfg, rng, depth - 1));
    case 2: return f_and(gen_rec(cfg, rng, depth - 1), gen_rec(cfg, rng, depth - 1));
    case 3: return f_or(gen_rec(cfg, rng, depth - 1), gen_rec(cfg, rng, depth - 1));
    case 4: return f_implies(gen_rec(cfg, rng, depth - 1), gen_rec(cfg, rng, depth - 1));
    case 5: return f_exists(pick_var(cfg, rng), gen_rec(cfg, rng, depth - 1));
    case 6: return f_forall(pick_var(cfg, rng), gen_rec(cfg, rng, depth - 1));
    case 7: {
      VarId x = pick_var(cfg, rng);
      return f_bforall(x, gen_rec(cfg, rng, depth - 1), gen_rec(cfg, rng, depth - 1));
    }
    default: {
      VarId x = pick_var(cfg, rng);
      return f_bexists(x, gen_rec(cfg, rng, depth - 1), gen_rec(cfg, rng, depth - 1));
    }
  }
}

FormulaPtr gen_avoiding(const GenConfig& cfg, Rng& rng, int depth, VarId avoid) {
  for (int tries = 0; tries < 50; ++tries) {
    FormulaPtr f = gen_rec(cfg, rng, depth);
    if (!free_vars(f).count(avoid)) return f;
  }
  return f_pred("q", {VarId{avoid.index == 1 ? 2 : 1}});
}

}  // namespace

FormulaPtr gen_formula(const GenConfig& cfg, Rng& rng) {
  return gen_rec(cfg, rng, cfg.max_depth);
}

FormulaPtr gen_guard(const GenConfig& cfg, Rng& rng, VarId x) {
  // guards from the designated unary predicate family, sometimes strengthened
  FormulaPtr g = f_pred("p", {x});
  if (rng.coin()) return g;
  if (rng.coin()) return f_and(g, f_pred("q", {x}));
  return f_and(g, f_pred("q", {pick_var(cfg, rng)}));
}

std::optional<ConditionedInstance> gen_conditioned_instance(const GenConfig& cfg, Rng& rng,
                                                            const std::string& identity) {
  for (int attempt = 0; attempt < 200; ++attempt) {
    FiniteModel m = gen_model(cfg, rng);
    IdentitySlots slots;
    slots.x = pick_var(cfg, rng);
    slots.theta = gen_guard(cfg, rng, slots.x);
    slots.iota = gen_avoiding(cfg, rng, 1, slots.x);
    slots.epsilon = gen_guard(cfg, rng, slots.x);
    slots.phi = gen_rec(cfg, rng, cfg.max_depth - 1);
    slots.psi = gen_rec(cfg, rng, cfg.max_depth - 1);
    slots.u = VarId{slots.x.index % cfg.max_vars + 1};
    slots.templ = rng.coin() ? f_and(f_hole(1), f_not(f_hole(2)))
                             : f_implies(f_hole(1), f_hole(2));
    slots.phis = {gen_rec(cfg, rng, 1), gen_rec(cfg, rng, 1)};
    VarId z{cfg.max_vars + 1};
    slots.zs = {z};
    slots.prefix = {{rng.coin() ? QKind::Forall : QKind::Exists, z}};
    slots.outer = {{QKind::Forall, VarId{cfg.max_vars + 2}}};
    try {
      IdentityReport rep = check_identity(identity, m, slots);
      if (rep.status != IdentityStatus::SideConditionsUnmet)
        return ConditionedInstance{std::move(m), std::move(slots)};
    } catch (const std::invalid_argument&) {
      return std::nullopt;  // slot shape wrong for this identity, retrying will not help
    }
  }
  return std::nullopt;
}

namespace {

void collect_subformulas(const FormulaPtr& f, std::vector<FormulaPtr>& out) {
  int n = child_count(f);
  for (int i = 0; i < n; ++i) {
    FormulaPtr c = child_at(f, i);
    out.push_back(c);
    collect_subformulas(c, out);
  }
}

}  // namespace

std::vector<Instance> shrink(const Instance& inst) {
  std::vector<Instance> out;
  // shrink the domain
  if (inst.model.domain_size > 1) {
    FiniteModel m = inst.model;
    m.domain_size -= 1;
    for (auto& [name, tuples] : m.interp) {
      std::set<std::vector<int>> kept;
      for (const auto& t : tuples)
        if (std::all_of(t.begin(), t.end(), [&](int e) { return e < m.domain_size; }))
          kept.insert(t);
      tuples = std::move(kept);
    }
    out.push_back({std::move(m), inst.formula});
  }
  // remove one tuple at a time
  for (const auto& [name, tuples] : inst.model.interp) {
    for (const auto& t : tuples) {
      FiniteModel m = inst.model;
      m.interp[name].erase(t);
      out.push_back({std::move(m), inst.formula});
    }
  }
  // promote proper subformulas
  std::vector<FormulaPtr> subs;
  collect_subformulas(inst.formula, subs);
  for (const auto& sf : subs)
    if (sf->kind != Kind::Hole) out.push_back({inst.model, sf});
  return out;
}

Instance shrink_to_minimal(const Instance& inst,
                           const std::function<bool(const Instance&)>& fails) {
  Instance cur = inst;
  for (;;) {
    bool advanced = false;
    for (const Instance& cand : shrink(cur)) {
      if (fails(cand)) {
        cur = cand;
        advanced = true;
        break;
      }
    }
    if (!advanced) return cur;
  }
}

}  // namespace folnd
