#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "folnd/parser.hpp"
#include "folnd/testkit.hpp"

using namespace folnd;

TEST_CASE("rng: determinism, range, splitting") {
  Rng a(12345), b(12345);
  for (int i = 0; i < 100; ++i) CHECK(a.next() == b.next());
  Rng c(7);
  for (int i = 0; i < 1000; ++i) {
    uint64_t v = c.below(17);
    CHECK(v < 17);
  }
  CHECK_THROWS_AS(c.below(0), std::invalid_argument);
  Rng parent(99);
  Rng child = parent.split();
  CHECK(child.next() != parent.next());  // astronomically unlikely to collide
}

TEST_CASE("gen_model: deterministic, well-formed, roughly fair tuples") {
  GenConfig cfg;
  cfg.pool = default_pool();
  Rng r1(1), r2(1);
  FiniteModel m1 = gen_model(cfg, r1), m2 = gen_model(cfg, r2);
  CHECK(m1.domain_size == m2.domain_size);
  CHECK(m1.interp == m2.interp);
  CHECK(m1.domain_size >= 1);
  CHECK(m1.domain_size <= cfg.max_domain);
  for (const auto& [name, tuples] : m1.interp)
    for (const auto& t : tuples) {
      CHECK((int)t.size() == m1.sig.arity(name));
      for (int e : t) CHECK(e < m1.domain_size);
    }
  // distribution: over 1000 draws the tuple (0) of p is present about half the time
  Rng rd(2);
  int present = 0;
  GenConfig one = cfg;
  one.max_domain = 1;
  for (int i = 0; i < 1000; ++i)
    if (gen_model(one, rd).interp["p"].count({0})) ++present;
  CHECK(present > 450);
  CHECK(present < 550);
}

TEST_CASE("gen_formula: depth bound, signature respected, determinism") {
  GenConfig cfg;
  cfg.pool = default_pool();
  std::function<int(const FormulaPtr&)> depth = [&](const FormulaPtr& f) {
    int d = 0;
    for (int i = 0; i < child_count(f); ++i) d = std::max(d, depth(child_at(f, i)));
    return d + 1;
  };
  Rng r1(5), r2(5);
  for (int i = 0; i < 200; ++i) {
    FormulaPtr f = gen_formula(cfg, r1);
    CHECK(struct_eq(f, gen_formula(cfg, r2)));
    CHECK(depth(f) <= cfg.max_depth + 1);
    CHECK_NOTHROW(validate(f, cfg.pool));
    for (VarId v : all_vars(f)) {
      CHECK(v.index >= 1);
      CHECK(v.index <= cfg.max_vars);
    }
  }
}

TEST_CASE("gen_guard avoids binding surprises and stays in the guard family") {
  GenConfig cfg;
  cfg.pool = default_pool();
  Rng rng(9);
  VarId x{1};
  for (int i = 0; i < 100; ++i) {
    FormulaPtr g = gen_guard(cfg, rng, x);
    CHECK(free_vars(g).count(x) == 1);
    CHECK_NOTHROW(validate(g, cfg.pool));
  }
}

TEST_CASE("conditioned instances verify their side conditions by construction") {
  GenConfig cfg;
  cfg.pool = default_pool();
  Rng rng(42);
  int produced = 0;
  for (int i = 0; i < 40; ++i) {
    auto inst = gen_conditioned_instance(cfg, rng, "prop-h");
    if (!inst) continue;
    ++produced;
    IdentityReport r = check_identity("prop-h", inst->model, inst->slots);
    CHECK(r.status != IdentityStatus::SideConditionsUnmet);
  }
  CHECK(produced >= 24);  // at least 60% of attempts succeed at this scale
}

TEST_CASE("shrink: candidates are strictly smaller and well-formed") {
  Signature sig = default_pool();
  VarTable vars;
  Instance inst;
  inst.formula = parse("forall x. (p(x) -> q(x))", sig, vars);
  inst.model.domain_size = 2;
  inst.model.sig = sig;
  inst.model.interp["p"] = {{0}, {1}};
  inst.model.interp["q"] = {{0}};
  inst.model.interp["r"] = {};
  auto size_of = [](const Instance& i) {
    size_t tuples = 0;
    for (const auto& [n, ts] : i.model.interp) tuples += ts.size();
    return (size_t)formula_size(i.formula) + tuples + (size_t)i.model.domain_size;
  };
  std::vector<Instance> cands = shrink(inst);
  CHECK(!cands.empty());
  for (const Instance& cand : cands) {
    CHECK(size_of(cand) < size_of(inst));
    for (const auto& [name, tuples] : cand.model.interp)
      for (const auto& t : tuples)
        for (int e : t) CHECK(e < cand.model.domain_size);
  }
}

TEST_CASE("shrink_to_minimal returns a local minimum of the failing predicate") {
  // Injected bug: an evaluator that treats negation as identity. Formulas with
  // an essential negation expose it; the shrinker should descend to a tiny
  // witness.
  Signature sig = default_pool();
  VarTable vars;
  std::function<bool(const FiniteModel&, const FormulaPtr&, Assignment&)> buggy =
      [&](const FiniteModel& m, const FormulaPtr& f, Assignment& a) -> bool {
    std::function<bool(const FormulaPtr&)> go = [&](const FormulaPtr& g) -> bool {
      switch (g->kind) {
        case Kind::Not: return go(g->a);  // the bug
        case Kind::And: return go(g->a) && go(g->b);
        case Kind::Pred: {
          std::vector<int> t;
          for (VarId v : g->args) t.push_back(a.value_of(v));
          return m.holds(g->pred, t);
        }
        case Kind::True: return true;
        default: return satisfies(m, g, a);
      }
    };
    return go(desugar(f));
  };
  auto fails = [&](const Instance& inst) {
    Window w = make_window(free_vars(inst.formula));
    std::vector<int> row(w.size(), 0);
    for (;;) {
      Assignment a{w, row};
      if (buggy(inst.model, inst.formula, a) != satisfies(inst.model, inst.formula, a))
        return true;
      size_t i = row.size();
      while (i > 0 && ++row[i - 1] == inst.model.domain_size) row[--i] = 0;
      if (i == 0) break;
    }
    return false;
  };
  Instance big;
  big.formula = parse("~p(x) & (q(y) & ~q(x))", sig, vars);
  big.model.domain_size = 3;
  big.model.sig = sig;
  big.model.interp["p"] = {{0}, {2}};
  big.model.interp["q"] = {{0}, {1}, {2}};
  big.model.interp["r"] = {{0, 1}, {2, 2}};
  REQUIRE(fails(big));
  Instance small = shrink_to_minimal(big, fails);
  CHECK(fails(small));
  // a negation over a single atom on a tiny model suffices
  CHECK(formula_size(small.formula) <= 3);
  CHECK(small.model.domain_size <= 2);
  size_t tuples = 0;
  for (const auto& [n, ts] : small.model.interp) tuples += ts.size();
  CHECK(tuples <= 2);
  // minimality: no shrink candidate still fails
  for (const Instance& cand : shrink(small)) CHECK(!fails(cand));
}

TEST_CASE("shrinking a passing instance goes nowhere") {
  Signature sig = default_pool();
  VarTable vars;
  Instance inst;
  inst.formula = parse("p(x)", sig, vars);
  inst.model.domain_size = 1;
  inst.model.sig = sig;
  inst.model.interp["p"] = {};
  inst.model.interp["q"] = {};
  inst.model.interp["r"] = {};
  auto never = [](const Instance&) { return false; };
  Instance out = shrink_to_minimal(inst, never);
  CHECK(struct_eq(out.formula, inst.formula));
  CHECK(out.model.domain_size == inst.model.domain_size);
}
