#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "folnd/identities.hpp"
#include "folnd/parser.hpp"
#include "folnd/testkit.hpp"

using namespace folnd;

namespace {

struct Ctx {
  Signature sig = default_pool();
  VarTable vars;
  FormulaPtr operator()(const std::string& text) { return parse(text, sig, vars); }
};

FiniteModel proper_p(Ctx& c) {
  FiniteModel m;
  m.domain_size = 2;
  m.sig = c.sig;
  m.interp["p"] = {{0}};
  m.interp["q"] = {{0}, {1}};
  m.interp["r"] = {{0, 1}};
  return m;
}

}  // namespace

TEST_CASE("non-dependence of a variable not occurring free") {
  Ctx c;
  FiniteModel m = proper_p(c);
  VarId x = c.vars.intern("x");
  CHECK(check_nondep(m, c("q(y)"), x, f_true()).holds);
  CHECK(check_nondep(m, c("exists x. p(x)"), x, f_true()).holds);
}

TEST_CASE("x=x is non-dependent of x although x occurs free") {
  Ctx c;
  VarId x = c.vars.intern("x");
  for (int n = 1; n <= 3; ++n) {
    FiniteModel m;
    m.domain_size = n;
    m.sig = c.sig;
    CHECK(check_nondep(m, f_eq(x, x), x, f_true()).holds);
    CHECK(check_nondep_plain_equiv(m, f_eq(x, x), x));
  }
}

TEST_CASE("exists-another-element is non-dependent of x in every model") {
  Ctx c;
  FormulaPtr f = c("exists y. ~(y = x)");
  VarId x = c.vars.intern("x");
  for (int n = 1; n <= 3; ++n) {
    FiniteModel m;
    m.domain_size = n;
    m.sig = c.sig;
    CHECK(check_nondep(m, f, x, f_true()).holds);
  }
}

TEST_CASE("theta is non-dependent of x provided theta") {
  Ctx c;
  FiniteModel m = proper_p(c);
  VarId x = c.vars.intern("x");
  FormulaPtr p = c("p(x)");
  CHECK(check_nondep(m, p, x, p).holds);
  // without the proviso it is dependent
  NonDepVerdict v = check_nondep(m, p, x, f_true());
  REQUIRE(!v.holds);
  // minimal counterexample: x=0 (in p), b=1 (out of p)
  CHECK(v.cex_assignment.values == std::vector<int>{0});
  CHECK(v.cex_b == 1);
}

TEST_CASE("counterexample replays against the defining condition") {
  Ctx c;
  FiniteModel m = proper_p(c);
  VarId x = c.vars.intern("x");
  FormulaPtr phi = c("r(x,y)"), theta = c("q(y)");
  NonDepVerdict v = check_nondep(m, phi, x, theta);
  if (!v.holds) {
    const Assignment& a = v.cex_assignment;
    Assignment ab = override_at(a, x, v.cex_b, m.domain_size);
    CHECK(satisfies(m, theta, a));
    CHECK(satisfies(m, theta, ab));
    CHECK(satisfies(m, phi, a) != satisfies(m, phi, ab));
  }
}

TEST_CASE("definitional triangle agrees on generated instances") {
  Ctx c;
  GenConfig cfg;
  cfg.pool = c.sig;
  Rng rng(42);
  VarId x{1};
  int dependent = 0;
  for (int i = 0; i < 150; ++i) {
    FiniteModel m = gen_model(cfg, rng);
    FormulaPtr phi = gen_formula(cfg, rng);
    bool direct = check_nondep(m, phi, x, f_true()).holds;
    CAPTURE(print(phi, c.vars));
    CHECK(direct == check_nondep_plain_equiv(m, phi, x));
    CHECK(direct == check_nondep_subst(m, phi, x, f_true()));
    if (!direct) ++dependent;
  }
  // the sample must exercise both verdicts
  CHECK(dependent > 10);
  CHECK(dependent < 140);
}

TEST_CASE("conditioned triangle: check_nondep vs check_nondep_subst with guards") {
  Ctx c;
  GenConfig cfg;
  cfg.pool = c.sig;
  Rng rng(43);
  VarId x{1};
  for (int i = 0; i < 100; ++i) {
    FiniteModel m = gen_model(cfg, rng);
    FormulaPtr phi = gen_formula(cfg, rng);
    FormulaPtr theta = gen_guard(cfg, rng, x);
    CHECK(check_nondep(m, phi, x, theta).holds == check_nondep_subst(m, phi, x, theta));
  }
}

TEST_CASE("closure: negation, conjunction, exists, and monotone weakening") {
  Ctx c;
  GenConfig cfg;
  cfg.pool = c.sig;
  Rng rng(44);
  VarId x{1}, y{2};
  int closed_pairs = 0;
  for (int i = 0; i < 200; ++i) {
    FiniteModel m = gen_model(cfg, rng);
    FormulaPtr phi = gen_formula(cfg, rng), psi = gen_formula(cfg, rng);
    FormulaPtr theta = gen_guard(cfg, rng, x);
    if (!check_nondep(m, phi, x, theta).holds) continue;
    CHECK(check_nondep(m, f_not(phi), x, theta).holds);
    CHECK(check_nondep(m, f_exists(y, phi), x, theta).holds);
    if (check_nondep(m, psi, x, theta).holds) {
      ++closed_pairs;
      CHECK(check_nondep(m, f_and(phi, psi), x, theta).holds);
    }
    // strengthening the proviso preserves non-dependence
    FormulaPtr stronger = f_and(theta, gen_formula(cfg, rng));
    if (valid(m, f_implies(stronger, theta)))
      CHECK(check_nondep(m, phi, x, stronger).holds);
  }
  CHECK(closed_pairs > 20);
}

TEST_CASE("binary connective lift under joined provisos") {
  Ctx c;
  GenConfig cfg;
  cfg.pool = c.sig;
  Rng rng(45);
  VarId x{1};
  int lifted = 0;
  for (int i = 0; i < 200 && lifted < 40; ++i) {
    FiniteModel m = gen_model(cfg, rng);
    FormulaPtr p1 = gen_formula(cfg, rng), p2 = gen_formula(cfg, rng);
    FormulaPtr t1 = gen_guard(cfg, rng, x), t2 = gen_guard(cfg, rng, x);
    if (!check_nondep(m, p1, x, t1).holds || !check_nondep(m, p2, x, t2).holds) continue;
    ++lifted;
    FormulaPtr t12 = f_and(t1, t2);
    CHECK(check_nondep(m, f_and(p1, p2), x, t12).holds);
    CHECK(check_nondep(m, f_or(p1, p2), x, t12).holds);
    CHECK(check_nondep(m, f_implies(p1, p2), x, t12).holds);
    CHECK(check_nondep(m, f_iff(p1, p2), x, t12).holds);
  }
  CHECK(lifted >= 40);
}

TEST_CASE("identity: five formulations agree everywhere") {
  Ctx c;
  GenConfig cfg;
  cfg.pool = c.sig;
  Rng rng(46);
  for (int i = 0; i < 100; ++i) {
    IdentitySlots s;
    s.x = VarId{1};
    s.phi = gen_formula(cfg, rng);
    s.theta = gen_guard(cfg, rng, s.x);
    FiniteModel m = gen_model(cfg, rng);
    IdentityReport r = check_identity("five-forms", m, s);
    CAPTURE(print(s.phi, c.vars));
    CHECK(r.status == IdentityStatus::Holds);
  }
}

TEST_CASE("identity: prop-B has no side conditions") {
  Ctx c;
  FiniteModel m = proper_p(c);
  IdentitySlots s;
  s.x = c.vars.intern("u");
  s.theta = c("p(u)");
  s.phi = c("q(u)");
  s.psi = c("r(u,u)");
  CHECK(check_identity("prop-B", m, s).status == IdentityStatus::Holds);
  GenConfig cfg;
  cfg.pool = c.sig;
  Rng rng(47);
  for (int i = 0; i < 80; ++i) {
    IdentitySlots t;
    t.x = VarId{1};
    t.theta = gen_formula(cfg, rng);
    t.phi = gen_formula(cfg, rng);
    t.psi = gen_formula(cfg, rng);
    CHECK(check_identity("prop-B", gen_model(cfg, rng), t).status == IdentityStatus::Holds);
  }
}

TEST_CASE("identity: prop-h with x not free in phi and a nonempty guard") {
  Ctx c;
  FiniteModel m = proper_p(c);
  IdentitySlots s;
  s.x = c.vars.intern("x");
  s.theta = c("q(x)");  // q is total here, exists x q(x) is valid
  s.phi = c("p(y)");
  IdentityReport r = check_identity("prop-h", m, s);
  CHECK(r.status == IdentityStatus::Holds);
  // empty guard: side condition unmet, not a failure
  FiniteModel m0 = m;
  m0.interp["q"].clear();
  s.theta = c("q(x)");
  CHECK(check_identity("prop-h", m0, s).status == IdentityStatus::SideConditionsUnmet);
}

TEST_CASE("identity: scope equivalences and their freeness condition") {
  Ctx c;
  IdentitySlots s;
  s.x = c.vars.intern("x");
  s.phi = c("q(y)");
  s.psi = c("r(x,y)");
  FiniteModel m = proper_p(c);
  for (int k = 1; k <= 5; ++k)
    CHECK(check_identity("scope-" + std::to_string(k), m, s).status == IdentityStatus::Holds);
  s.phi = c("p(x)");  // x free: condition unmet
  CHECK(check_identity("scope-1", m, s).status == IdentityStatus::SideConditionsUnmet);
}

TEST_CASE("identity: subst-reform and subst-semantics on random instances") {
  Ctx c;
  GenConfig cfg;
  cfg.pool = c.sig;
  Rng rng(48);
  for (int i = 0; i < 60; ++i) {
    IdentitySlots s;
    s.x = VarId{1};
    s.u = VarId{2};
    s.phi = gen_formula(cfg, rng);
    s.theta = gen_guard(cfg, rng, s.x);
    FiniteModel m = gen_model(cfg, rng);
    CHECK(check_identity("subst-reform", m, s).status == IdentityStatus::Holds);
    CHECK(check_identity("subst-semantics", m, s).status == IdentityStatus::Holds);
  }
}

TEST_CASE("identity: simp on a handcrafted instance") {
  Ctx c;
  FiniteModel m = proper_p(c);
  IdentitySlots s;
  s.x = c.vars.intern("x");
  s.iota = c("q(k)");
  s.epsilon = c("q(x)");
  s.templ = parse_boolean_template("_1 & _2");
  s.phis = {c("p(y)"), c("q(y)")};
  s.prefix = {{QKind::Forall, c.vars.intern("z")}};
  s.outer = {{QKind::Forall, c.vars.intern("k")}};
  IdentityReport r = check_identity("simp", m, s);
  CAPTURE(r.detail);
  CHECK(r.status == IdentityStatus::Holds);
}

TEST_CASE("identity: conditioned generator produces passing instances") {
  Ctx c;
  GenConfig cfg;
  cfg.pool = c.sig;
  cfg.seed = 49;
  Rng rng(cfg.seed);
  for (const char* name : {"rel-complement", "neg-push", "prop-h", "pull-exists"}) {
    int produced = 0;
    for (int i = 0; i < 30; ++i) {
      auto inst = gen_conditioned_instance(cfg, rng, name);
      if (!inst) continue;
      ++produced;
      IdentityReport r = check_identity(name, inst->model, inst->slots);
      CAPTURE(name);
      CHECK(r.status == IdentityStatus::Holds);
    }
    CHECK(produced >= 15);
  }
}

TEST_CASE("unknown identity and missing slots are rejected") {
  Ctx c;
  FiniteModel m = proper_p(c);
  IdentitySlots s;
  CHECK_THROWS_AS(check_identity("no-such", m, s), std::invalid_argument);
  CHECK_THROWS_AS(check_identity("prop-B", m, s), std::invalid_argument);
  IdentitySlots t;
  t.x = VarId{1};
  t.theta = c("p(x)");
  t.templ = parse_boolean_template("_1 & _2");
  t.phis = {c("q(y)")};  // wrong count
  CHECK_THROWS_AS(check_identity("prop-C", m, t), std::invalid_argument);
}
