#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "folnd/parser.hpp"
#include "folnd/semantics.hpp"
#include "folnd/testkit.hpp"
#include "oracle.hpp"

using namespace folnd;

namespace {

struct Ctx {
  Signature sig = default_pool();
  VarTable vars;
  FormulaPtr operator()(const std::string& text) { return parse(text, sig, vars); }
};

FiniteModel two_elem(Ctx& c) {
  FiniteModel m;
  m.domain_size = 2;
  m.sig = c.sig;
  m.interp["p"] = {{0}};
  m.interp["q"] = {{0}, {1}};
  m.interp["r"] = {{0, 1}};
  return m;
}

}  // namespace

TEST_CASE("satisfaction base clauses") {
  Ctx c;
  FiniteModel m = two_elem(c);
  VarId x = c.vars.intern("x");
  CHECK(satisfies(m, c("p(x)"), {{x}, {0}}));
  CHECK(!satisfies(m, c("p(x)"), {{x}, {1}}));
  CHECK(satisfies(m, f_eq(x, x), {{x}, {1}}));
  CHECK(satisfies(m, c("~p(x) & q(x)"), {{x}, {1}}));
  CHECK(satisfies(m, c("exists y. r(x,y)"), {{x}, {0}}));
  CHECK(!satisfies(m, c("exists y. r(x,y)"), {{x}, {1}}));
}

TEST_CASE("exists another element: true iff the domain has two elements") {
  Ctx c;
  FormulaPtr f = c("exists y. ~(y = x)");
  VarId x = c.vars.intern("x");
  FiniteModel m2 = two_elem(c);
  FiniteModel m1;
  m1.domain_size = 1;
  m1.sig = c.sig;
  for (int a = 0; a < 2; ++a) CHECK(satisfies(m2, f, {{x}, {a}}));
  CHECK(!satisfies(m1, f, {{x}, {0}}));
}

TEST_CASE("satisfies agrees with the set-operation oracle") {
  Ctx c;
  GenConfig cfg;
  cfg.pool = c.sig;
  Rng rng(2024);
  for (int i = 0; i < 150; ++i) {
    FiniteModel m = gen_model(cfg, rng);
    FormulaPtr f = gen_formula(cfg, rng);
    Window w = make_window(free_vars(f));
    MeaningSet got = meaning(m, f, w);
    oracle::Rows want = oracle::meaning_setops(m, f, w);
    CAPTURE(print(f, c.vars));
    CHECK(got.rows == want);
  }
}

TEST_CASE("meaning basics") {
  Ctx c;
  FiniteModel m = two_elem(c);
  VarId x = c.vars.intern("x");
  MeaningSet s = meaning(m, c("p(x)"), {x});
  CHECK(s.rows == std::set<std::vector<int>>{{0}});
  MeaningSet refl = meaning(m, f_eq(x, x), {x});
  CHECK(refl.rows.size() == 2);
  CHECK_THROWS(meaning(m, c("r(x,y)"), {x}));  // window misses y
}

TEST_CASE("set operations are the connective homomorphisms") {
  Ctx c;
  GenConfig cfg;
  cfg.pool = c.sig;
  Rng rng(31);
  for (int i = 0; i < 60; ++i) {
    FiniteModel m = gen_model(cfg, rng);
    FormulaPtr f = gen_formula(cfg, rng), g = gen_formula(cfg, rng);
    Window w = make_window([&] {
      auto s = free_vars(f);
      for (VarId v : free_vars(g)) s.insert(v);
      s.insert(VarId{1});
      return s;
    }());
    CHECK(meaning(m, f_not(f), w).rows == complement(m, meaning(m, f, w)).rows);
    CHECK(meaning(m, f_and(f, g), w).rows ==
          intersect(meaning(m, f, w), meaning(m, g, w)).rows);
    CHECK(meaning(m, f_or(f, g), w).rows ==
          unite(meaning(m, f, w), meaning(m, g, w)).rows);
    CHECK(meaning(m, f_exists(VarId{1}, f), w).rows ==
          cylindrify(m, meaning(m, f, w), VarId{1}).rows);
  }
}

TEST_CASE("cylindrify edge cases and window mismatch") {
  Ctx c;
  FiniteModel m = two_elem(c);
  VarId x = c.vars.intern("x"), y = c.vars.intern("y");
  MeaningSet empty{{x}, {}};
  CHECK(cylindrify(m, empty, x).rows.empty());
  MeaningSet a{{x}, {{0}}}, b{{y}, {{0}}};
  CHECK_THROWS(intersect(a, b));
  CHECK_THROWS(unite(a, b));
}

TEST_CASE("valid") {
  Ctx c;
  FiniteModel m = two_elem(c);
  VarId x = c.vars.intern("x");
  CHECK(valid(m, f_eq(x, x)));
  CHECK(valid(m, c("exists x. p(x)")));
  FiniteModel m0 = m;
  m0.interp["p"].clear();
  CHECK(!valid(m0, c("exists x. p(x)")));
  CHECK(valid(m, f_true()));
  CHECK(!valid(m, f_false()));
}

TEST_CASE("containment chains over the corpus") {
  Ctx c;
  GenConfig cfg;
  cfg.pool = c.sig;
  Rng rng(404);
  auto subset = [](const MeaningSet& a, const MeaningSet& b) {
    REQUIRE(a.window == b.window);
    return std::includes(b.rows.begin(), b.rows.end(), a.rows.begin(), a.rows.end());
  };
  VarId x{1};
  for (int i = 0; i < 60; ++i) {
    FiniteModel m = gen_model(cfg, rng);
    FormulaPtr phi = gen_formula(cfg, rng);
    FormulaPtr theta = gen_formula(cfg, rng);
    Window w = make_window([&] {
      auto s = free_vars(phi);
      for (VarId v : free_vars(theta)) s.insert(v);
      s.insert(x);
      return s;
    }());
    // forall x phi <= phi <= exists x phi
    CHECK(subset(meaning(m, f_forall(x, phi), w), meaning(m, phi, w)));
    CHECK(subset(meaning(m, phi, w), meaning(m, f_exists(x, phi), w)));
    // theta & phi <= theta & exists x (theta & phi); theta & phi <= phi <= theta -> phi
    FormulaPtr tp = f_and(theta, phi);
    CHECK(subset(meaning(m, tp, w), meaning(m, f_and(theta, f_exists(x, tp)), w)));
    CHECK(subset(meaning(m, tp, w), meaning(m, phi, w)));
    CHECK(subset(meaning(m, phi, w), meaning(m, f_implies(theta, phi), w)));
    // theta -> forall x (theta -> phi) <= theta -> phi
    CHECK(subset(meaning(m, f_implies(theta, f_forall(x, f_implies(theta, phi))), w),
                 meaning(m, f_implies(theta, phi), w)));
  }
}

TEST_CASE("check_equivalent returns the least counterexample") {
  Ctx c;
  FiniteModel m = two_elem(c);
  EquivResult eq = check_equivalent(m, c("p(x)"), c("q(x)"));
  REQUIRE(!eq.equivalent);
  // p = {0}, q = {0,1}: they first differ at x=1
  CHECK(eq.counterexample.values == std::vector<int>{1});
  CHECK(check_equivalent(m, c("p(x)"), c("p(x)")).equivalent);
  // joint window covers both sides
  EquivResult eq2 = check_equivalent(m, c("p(x)"), c("p(x) & r(x,y)"));
  REQUIRE(!eq2.equivalent);
  CHECK(eq2.counterexample.window.size() == 2);
}

TEST_CASE("locality: satisfaction ignores non-free window variables") {
  Ctx c;
  GenConfig cfg;
  cfg.pool = c.sig;
  Rng rng(909);
  for (int i = 0; i < 80; ++i) {
    FiniteModel m = gen_model(cfg, rng);
    FormulaPtr f = gen_formula(cfg, rng);
    Window w = make_window(free_vars(f));
    VarId extra{cfg.max_vars + 1};
    std::vector<int> row(w.size(), 0);
    for (;;) {
      Assignment a{w, row};
      bool base = satisfies(m, f, a);
      for (int b = 0; b < m.domain_size; ++b)
        CHECK(satisfies(m, f, override_at(a, extra, b, m.domain_size)) == base);
      size_t k = row.size();
      while (k > 0 && ++row[k - 1] == m.domain_size) row[--k] = 0;
      if (k == 0) break;
    }
  }
}

TEST_CASE("window coherence: meaning over a larger window is the cylinder extension") {
  Ctx c;
  GenConfig cfg;
  cfg.pool = c.sig;
  cfg.max_vars = 2;
  Rng rng(11);
  for (int i = 0; i < 60; ++i) {
    FiniteModel m = gen_model(cfg, rng);
    FormulaPtr f = gen_formula(cfg, rng);
    Window w = make_window(free_vars(f));
    Window big = window_union(w, {VarId{3}, VarId{4}});
    MeaningSet small = meaning(m, f, w);
    MeaningSet large = meaning(m, f, big);
    // every row of the large meaning restricted to w is in the small one, and
    // every small row extends to all combinations of the extra variables
    size_t expect = small.rows.size();
    for (VarId v : big)
      if (!window_contains(w, v)) expect *= (size_t)m.domain_size;
    CHECK(large.rows.size() == expect);
    for (const auto& row : large.rows) {
      std::vector<int> restricted;
      for (size_t k = 0; k < big.size(); ++k)
        if (window_contains(w, big[k])) restricted.push_back(row[k]);
      CHECK(small.rows.count(restricted) == 1);
    }
  }
}

TEST_CASE("override_at") {
  Ctx c;
  VarId x = c.vars.intern("x"), y = c.vars.intern("y");
  Assignment a{make_window({x, y}), {0, 1}};
  Assignment b = override_at(a, x, 1, 2);
  CHECK(b.value_of(x) == 1);
  CHECK(b.value_of(y) == 1);
  CHECK(override_at(a, x, 0, 2).values == a.values);
  Assignment only_y{{y}, {1}};
  Assignment ext = override_at(only_y, x, 0, 2);
  CHECK(ext.has(x));
  CHECK(ext.value_of(y) == 1);
  CHECK_THROWS(override_at(a, x, 5, 2));
}

TEST_CASE("model JSON round trip and validation") {
  Ctx c;
  FiniteModel m = two_elem(c);
  FiniteModel back = model_from_json_text(model_to_json_text(m));
  CHECK(back.domain_size == m.domain_size);
  CHECK(back.interp == m.interp);
  CHECK_THROWS(model_from_json_text(R"({"domain": 0, "predicates": {}})"));
  CHECK_THROWS(model_from_json_text(
      R"({"domain": 2, "predicates": {"p": {"arity": 1, "tuples": [[5]]}}})"));
  CHECK_THROWS(model_from_json_text(
      R"({"domain": 2, "predicates": {"p": {"arity": 2, "tuples": [[0]]}}})"));
}
