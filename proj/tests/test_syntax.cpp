#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "folnd/parser.hpp"
#include "folnd/semantics.hpp"
#include "folnd/syntax.hpp"
#include "folnd/testkit.hpp"

using namespace folnd;

namespace {

struct Ctx {
  Signature sig = default_pool();
  VarTable vars;
  FormulaPtr operator()(const std::string& text) { return parse(text, sig, vars); }
};

}  // namespace

TEST_CASE("parser: precedence and associativity") {
  Ctx c;
  // ~ binds tighter than &, & tighter than |, | tighter than ->, -> tighter than <->
  CHECK(struct_eq(c("~p(x) & q(x)"), f_and(f_not(c("p(x)")), c("q(x)"))));
  CHECK(struct_eq(c("p(x) & q(x) | r(x,y)"), f_or(c("p(x) & q(x)"), c("r(x,y)"))));
  CHECK(struct_eq(c("p(x) | q(x) -> r(x,y)"), f_implies(c("p(x) | q(x)"), c("r(x,y)"))));
  CHECK(struct_eq(c("p(x) -> q(x) <-> r(x,y)"), f_iff(c("p(x) -> q(x)"), c("r(x,y)"))));
  // -> is right associative
  CHECK(struct_eq(c("p(x) -> q(x) -> r(x,y)"), f_implies(c("p(x)"), c("q(x) -> r(x,y)"))));
  CHECK(struct_eq(c("(p(x) -> q(x)) -> r(x,y)"), f_implies(c("p(x) -> q(x)"), c("r(x,y)"))));
}

TEST_CASE("parser: quantifiers scope maximally right") {
  Ctx c;
  FormulaPtr f = c("forall x. p(x) -> q(x)");
  REQUIRE(f->kind == Kind::Forall);
  CHECK(f->a->kind == Kind::Implies);

  FormulaPtr g = c("exists e in q(e). r(k,e)");
  REQUIRE(g->kind == Kind::BExists);
  CHECK(struct_eq(g->a, c("q(e)")));
  CHECK(struct_eq(g->b, c("r(k,e)")));

  FormulaPtr h = c("forall x in p(x) & q(x). r(x,x)");
  REQUIRE(h->kind == Kind::BForall);
  CHECK(h->a->kind == Kind::And);
}

TEST_CASE("parser: truth constants, equality, bare parens") {
  Ctx c;
  CHECK(c("true")->kind == Kind::True);
  CHECK(c("false")->kind == Kind::False);
  FormulaPtr e = c("x = y");
  REQUIRE(e->kind == Kind::Eq);
  CHECK(e->lhs != e->rhs);
  CHECK(struct_eq(c("((p(x)))"), c("p(x)")));
}

TEST_CASE("parser: v<digits> names map onto the fixed variable ordering") {
  Ctx c;
  FormulaPtr f = c("v3 = v3");
  CHECK(f->lhs == VarId{3});
  // a plain identifier interned later must not collide with v3
  FormulaPtr g = c("p(w)");
  CHECK(g->args[0] != VarId{3});
}

TEST_CASE("parser: error positions are 1-based offsets") {
  Ctx c;
  try {
    c("p(x,y");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.offset == 6);
    CHECK(e.line == 1);
    CHECK(e.col == 6);
  }
  CHECK_THROWS_AS(c("p(x) &"), ParseError);
  CHECK_THROWS_AS(c("forall . p(x)"), ParseError);
  CHECK_THROWS_AS(c("unknown(x)"), ParseError);     // undeclared predicate
  CHECK_THROWS_AS(c("p(x, y)"), ParseError);        // arity mismatch
  CHECK_THROWS_AS(c("forall x in exists y. p(y). q(x)"), ParseError);  // quantifier in guard
}

TEST_CASE("parser: print/parse round trip on handwritten formulas") {
  Ctx c;
  for (const char* text : {
           "forall x. (p(x) -> q(x))",
           "exists e in q(e). r(k,e)",
           "~(p(x) & ~q(y)) | x = y",
           "p(x) -> q(x) -> r(x,y)",
           "(p(x) <-> q(x)) <-> r(x,y)",
           "forall x in p(x). exists y in q(y). (r(x,y) & true)",
           "false -> forall x. exists y. ~(x = y)",
       }) {
    FormulaPtr f = c(text);
    CHECK(struct_eq(parse(print(f, c.vars), c.sig, c.vars), f));
  }
}

TEST_CASE("parser: round trip on generated formulas") {
  Ctx c;
  GenConfig cfg;
  cfg.pool = c.sig;
  Rng rng(101);
  for (int i = 0; i < 300; ++i) {
    FormulaPtr f = gen_formula(cfg, rng);
    CAPTURE(print(f, c.vars));
    CHECK(struct_eq(parse(print(f, c.vars), c.sig, c.vars), f));
  }
}

TEST_CASE("parse_boolean_template") {
  FormulaPtr t = parse_boolean_template("_1 & ~_2");
  int max_hole = 0;
  REQUIRE(is_boolean_template(t, max_hole));
  CHECK(max_hole == 2);
  Ctx c;
  FormulaPtr inst = instantiate(t, {c("p(x)"), c("q(y)")});
  CHECK(struct_eq(inst, c("p(x) & ~q(y)")));
}

TEST_CASE("desugar: expansions follow the abbreviation scheme") {
  Ctx c;
  VarId u = c("p(u)")->args[0];
  FormulaPtr th = c("p(u)"), body = c("q(u)");

  // forall u in th. body -> forall u (th -> body) -> core
  FormulaPtr bfa = f_bforall(u, th, body);
  FormulaPtr expect = desugar(f_forall(u, f_implies(th, body)));
  CHECK(struct_eq(desugar(bfa), expect));
  // fully expanded: ~exists u ~(~(th & ~body))... check core shape directly
  FormulaPtr core = desugar(bfa);
  CHECK(core->kind == Kind::Not);
  CHECK(core->a->kind == Kind::Exists);

  FormulaPtr bex = f_bexists(u, th, body);
  CHECK(struct_eq(desugar(bex), f_exists(u, f_and(th, body))));

  // or / implies / iff
  FormulaPtr a = c("p(x)"), b = c("q(y)");
  CHECK(struct_eq(desugar(f_or(a, b)), f_not(f_and(f_not(a), f_not(b)))));
  CHECK(struct_eq(desugar(f_implies(a, b)), desugar(f_or(f_not(a), b))));
  CHECK(struct_eq(desugar(f_iff(a, b)),
                  desugar(f_and(f_implies(a, b), f_implies(b, a)))));
}

TEST_CASE("desugar: idempotent, core formulas untouched, free vars preserved") {
  Ctx c;
  GenConfig cfg;
  cfg.pool = c.sig;
  Rng rng(55);
  for (int i = 0; i < 200; ++i) {
    FormulaPtr f = gen_formula(cfg, rng);
    FormulaPtr d = desugar(f);
    CHECK(struct_eq(desugar(d), d));
    CHECK(free_vars(d) == free_vars(f));
    // sugar round trip collapses to the same core
    CHECK(struct_eq(desugar(sugar(f)), d));
  }
  FormulaPtr core = c("~(p(x) & ~(x = y)) & exists z. r(z,z)");
  CHECK(struct_eq(desugar(core), core));
}

TEST_CASE("sugar refolds the bounded-quantifier shapes") {
  Ctx c;
  VarId u = c("p(u)")->args[0];
  FormulaPtr bfa = f_bforall(u, c("p(u)"), c("q(u)"));
  CHECK(struct_eq(sugar(desugar(bfa)), bfa));
  FormulaPtr bex = f_bexists(u, c("p(u)"), c("q(u)"));
  CHECK(struct_eq(sugar(desugar(bex)), bex));
}

TEST_CASE("substitute is the literal Tarskian form") {
  Ctx c;
  VarId x = c.vars.intern("x"), y = c.vars.intern("y");
  FormulaPtr s = substitute(c("p(x)"), x, y);
  CHECK(struct_eq(s, f_exists(x, f_and(f_eq(x, y), c("p(x)")))));
  CHECK(struct_eq(substitute(f_eq(x, x), x, y),
                  f_exists(x, f_and(f_eq(x, y), f_eq(x, x)))));
  // no capture by construction
  std::set<VarId> fv = free_vars(s);
  CHECK(fv == std::set<VarId>{y});
}

TEST_CASE("substitute semantics: phi^x_y under a equals phi under a^x_{a(y)}") {
  Ctx c;
  GenConfig cfg;
  cfg.pool = c.sig;
  Rng rng(77);
  VarId x{1}, y{2};
  for (int i = 0; i < 60; ++i) {
    FiniteModel m = gen_model(cfg, rng);
    FormulaPtr phi = gen_formula(cfg, rng);
    Window w = make_window([&] {
      auto s = free_vars(phi);
      s.insert(x);
      s.insert(y);
      return s;
    }());
    std::vector<int> row(w.size(), 0);
    for (;;) {
      Assignment a{w, row};
      bool lhs = satisfies(m, substitute(phi, x, y), a);
      bool rhs = satisfies(m, phi, override_at(a, x, a.value_of(y), m.domain_size));
      CHECK(lhs == rhs);
      size_t k = row.size();
      while (k > 0 && ++row[k - 1] == m.domain_size) row[--k] = 0;
      if (k == 0) break;
    }
  }
}

TEST_CASE("subst_struct avoids capture") {
  Ctx c;
  VarId x = c.vars.intern("x"), y = c.vars.intern("y");
  FormulaPtr f = f_exists(y, c("r(x,y)"));  // exists y. r(x,y)
  FormulaPtr g = subst_struct(f, x, y);
  // the binder must have been renamed away from y
  REQUIRE(g->kind == Kind::Exists);
  CHECK(g->var != y);
  CHECK(free_vars(g) == std::set<VarId>{y});
  // semantically: g under a == f under a^x_{a(y)} on a model where it matters
  FiniteModel m;
  m.domain_size = 2;
  m.sig = c.sig;
  m.interp["r"] = {{0, 1}};
  for (int vy = 0; vy < 2; ++vy) {
    Assignment a{{y}, {vy}};
    Assignment ax{{x, y}, {vy, vy}};
    CHECK(satisfies(m, g, a) == satisfies(m, f, ax));
  }
}

TEST_CASE("fresh_var and alpha_rename") {
  Ctx c;
  FormulaPtr f = c("forall x. p(x) & forall x. q(x)");
  CHECK(fresh_var(f).index == max_var_index(f) + 1);

  FormulaPtr r = alpha_rename(f, VarId{10});
  // binders distinct from each other and from the original's variables
  REQUIRE(r->kind == Kind::Forall);
  CHECK(alpha_eq(r, f));
  CHECK(!struct_eq(r, f));

  FormulaPtr two = alpha_rename(f_and(f_forall(VarId{1}, f_pred("p", {VarId{1}})),
                                      f_forall(VarId{1}, f_pred("q", {VarId{1}}))),
                                VarId{10});
  CHECK(two->a->var != two->b->var);
  CHECK(two->a->var.index >= 10);

  FormulaPtr closed = c("p(x) & q(y)");
  CHECK(struct_eq(alpha_rename(closed, VarId{10}), closed));
}

TEST_CASE("alpha_eq distinguishes binder structure, not names") {
  Ctx c;
  FormulaPtr f = parse("forall x. p(x)", c.sig, c.vars);
  FormulaPtr g = parse("forall y. p(y)", c.sig, c.vars);
  CHECK(alpha_eq(f, g));
  CHECK(!struct_eq(f, g));
  CHECK(!alpha_eq(f, parse("forall y. q(y)", c.sig, c.vars)));
  CHECK(!alpha_eq(parse("forall x. r(x,y)", c.sig, c.vars),
                  parse("forall y. r(y,y)", c.sig, c.vars)));
}

TEST_CASE("prenex: quantifier-free matrix, equivalent on random models") {
  Ctx c;
  GenConfig cfg;
  cfg.pool = c.sig;
  Rng rng(313);
  std::function<bool(const FormulaPtr&)> qfree = [&](const FormulaPtr& f) {
    if (is_quantifier(f->kind)) return false;
    for (int i = 0; i < child_count(f); ++i)
      if (!qfree(child_at(f, i))) return false;
    return true;
  };
  for (int i = 0; i < 50; ++i) {
    FormulaPtr f = gen_formula(cfg, rng);
    auto [prefix, matrix] = prenex(f);
    CHECK(qfree(desugar(matrix)));
    FiniteModel m = gen_model(cfg, rng);
    EquivResult eq = check_equivalent(m, f, apply_prefix(prefix, matrix));
    CHECK(eq.equivalent);
  }
  // spot shapes
  auto [p1, m1] = prenex(c("forall x. p(x)"));
  REQUIRE(p1.size() == 1);
  CHECK(p1[0].first == QKind::Forall);
  auto [p2, m2] = prenex(c("~exists x. p(x)"));
  REQUIRE(p2.size() == 1);
  CHECK(p2[0].first == QKind::Forall);
  CHECK(m2->kind == Kind::Not);
}

TEST_CASE("free_vars on the anchor examples") {
  Ctx c;
  VarId x = c.vars.intern("x"), y = c.vars.intern("y");
  CHECK(free_vars(c("exists x. ~(y = x)")) == std::set<VarId>{y});
  CHECK(free_vars(f_eq(x, x)) == std::set<VarId>{x});
  CHECK(free_vars(c("r(x,y) & forall y. q(y)")) == (std::set<VarId>{x, y}));
}

TEST_CASE("paths: subformula_at and replace_at agree") {
  Ctx c;
  FormulaPtr f = c("forall x in p(x). (q(x) -> r(x,x))");
  CHECK(struct_eq(subformula_at(f, {0}), c("p(x)")));
  CHECK(struct_eq(subformula_at(f, {1, 1}), c("r(x,x)")));
  FormulaPtr g = replace_at(f, {1, 1}, c("true"));
  CHECK(struct_eq(subformula_at(g, {1, 1}), f_true()));
  CHECK(struct_eq(subformula_at(g, {0}), c("p(x)")));
  CHECK_THROWS(subformula_at(f, {5}));
}
