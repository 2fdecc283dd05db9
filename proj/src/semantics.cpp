#include "folnd/semantics.hpp"

#include <algorithm>

namespace folnd {

namespace {

// Core-only evaluation: True, False, Pred, Eq, Not, And, Exists.
bool eval_core(const FiniteModel& m, const FormulaPtr& f, std::map<int, int>& env) {
  switch (f->kind) {
    case Kind::True: return true;
    case Kind::False: return false;
    case Kind::Pred: {
      std::vector<int> tuple;
      tuple.reserve(f->args.size());
      for (VarId v : f->args) {
        auto it = env.find(v.index);
        if (it == env.end())
          throw std::runtime_error("unassigned variable v" + std::to_string(v.index));
        tuple.push_back(it->second);
      }
      return m.holds(f->pred, tuple);
    }
    case Kind::Eq: {
      auto l = env.find(f->lhs.index), r = env.find(f->rhs.index);
      if (l == env.end() || r == env.end()) throw std::runtime_error("unassigned variable in =");
      return l->second == r->second;
    }
    case Kind::Not:
      return !eval_core(m, f->a, env);
    case Kind::And:
      return eval_core(m, f->a, env) && eval_core(m, f->b, env);
    case Kind::Exists: {
      auto it = env.find(f->var.index);
      std::optional<int> saved;
      if (it != env.end()) saved = it->second;
      bool found = false;
      for (int b = 0; b < m.domain_size && !found; ++b) {
        env[f->var.index] = b;
        found = eval_core(m, f->a, env);
      }
      if (saved) env[f->var.index] = *saved; else env.erase(f->var.index);
      return found;
    }
    default:
      throw std::runtime_error("eval_core: non-core kind");
  }
}

}  // namespace

bool satisfies(const FiniteModel& m, const FormulaPtr& f, const Assignment& a) {
  std::map<int, int> env;
  for (size_t i = 0; i < a.window.size(); ++i) env[a.window[i].index] = a.values[i];
  return eval_core(m, desugar(f), env);
}

MeaningSet meaning(const FiniteModel& m, const FormulaPtr& f, const Window& w) {
  for (VarId v : free_vars(f))
    if (!window_contains(w, v))
      throw std::runtime_error("window does not cover the free variables");
  MeaningSet out;
  out.window = w;
  FormulaPtr core = desugar(f);
  std::vector<int> row(w.size(), 0);
  for (;;) {
    std::map<int, int> env;
    for (size_t i = 0; i < w.size(); ++i) env[w[i].index] = row[i];
    if (eval_core(m, core, env)) out.rows.insert(row);
    size_t i = row.size();
    while (i > 0 && ++row[i - 1] == m.domain_size) row[--i] = 0;
    if (i == 0) break;  // covers the empty window: one assignment, one pass
  }
  return out;
}

MeaningSet complement(const FiniteModel& m, const MeaningSet& s) {
  MeaningSet out;
  out.window = s.window;
  std::vector<int> row(s.window.size(), 0);
  for (;;) {
    if (!s.rows.count(row)) out.rows.insert(row);
    size_t i = row.size();
    while (i > 0 && ++row[i - 1] == m.domain_size) row[--i] = 0;
    if (i == 0) break;
  }
  return out;
}

MeaningSet intersect(const MeaningSet& a, const MeaningSet& b) {
  if (a.window != b.window) throw std::runtime_error("intersect: window mismatch");
  MeaningSet out;
  out.window = a.window;
  std::set_intersection(a.rows.begin(), a.rows.end(), b.rows.begin(), b.rows.end(),
                        std::inserter(out.rows, out.rows.begin()));
  return out;
}

MeaningSet unite(const MeaningSet& a, const MeaningSet& b) {
  if (a.window != b.window) throw std::runtime_error("unite: window mismatch");
  MeaningSet out;
  out.window = a.window;
  std::set_union(a.rows.begin(), a.rows.end(), b.rows.begin(), b.rows.end(),
                 std::inserter(out.rows, out.rows.begin()));
  return out;
}

MeaningSet cylindrify(const FiniteModel& m, const MeaningSet& s, VarId x) {
  auto it = std::lower_bound(s.window.begin(), s.window.end(), x);
  if (it == s.window.end() || *it != x) throw std::runtime_error("cylindrify: x not in window");
  size_t pos = it - s.window.begin();
  MeaningSet out;
  out.window = s.window;
  for (std::vector<int> row : s.rows) {
    for (int b = 0; b < m.domain_size; ++b) {
      row[pos] = b;
      out.rows.insert(row);
    }
  }
  return out;
}

bool valid(const FiniteModel& m, const FormulaPtr& f) {
  Window w = make_window(free_vars(f));
  MeaningSet s = meaning(m, f, w);
  size_t total = 1;
  for (size_t i = 0; i < w.size(); ++i) total *= m.domain_size;
  return s.rows.size() == total;
}

EquivResult check_equivalent(const FiniteModel& m, const FormulaPtr& f, const FormulaPtr& g) {
  Window w = window_union(make_window(free_vars(f)), make_window(free_vars(g)));
  MeaningSet sf = meaning(m, f, w);
  MeaningSet sg = meaning(m, g, w);
  EquivResult res;
  if (sf.rows == sg.rows) return res;
  res.equivalent = false;
  std::vector<std::vector<int>> diff;
  std::set_symmetric_difference(sf.rows.begin(), sf.rows.end(), sg.rows.begin(), sg.rows.end(),
                                std::back_inserter(diff));
  res.counterexample.window = w;
  res.counterexample.values = diff.front();
  return res;
}

}  // namespace folnd
