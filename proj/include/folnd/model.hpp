#pragma once

#include <optional>
#include <set>
#include <vector>

#include "folnd/formula.hpp"

namespace folnd {

// Finite model: elements are 0 .. domain_size-1, each predicate a tuple set.
struct FiniteModel {
  int domain_size = 1;
  std::map<std::string, std::set<std::vector<int>>> interp;
  Signature sig;

  bool holds(const std::string& pred, const std::vector<int>& tuple) const;
};

// Sorted duplicate-free list of variables.
using Window = std::vector<VarId>;

Window make_window(const std::set<VarId>& vars);
Window window_union(const Window& a, const Window& b);
bool window_contains(const Window& w, VarId v);

// Finite-support variable assignment over a window.
struct Assignment {
  Window window;
  std::vector<int> values;  // aligned with window

  int value_of(VarId v) const;  // throws if v not in the window
  bool has(VarId v) const { return window_contains(window, v); }
};

// Agrees with a everywhere except at x, which becomes b. If x is not in the
// window it is added. Throws if b is outside the domain.
Assignment override_at(const Assignment& a, VarId x, int b, int domain_size);

// Set of assignments over a shared window.
struct MeaningSet {
  Window window;
  std::set<std::vector<int>> rows;
};

// Model file IO: {"domain": n, "predicates": {"p": {"arity": k, "tuples": [...]}}}
FiniteModel load_model(const std::string& path);
FiniteModel model_from_json_text(const std::string& text);
std::string model_to_json_text(const FiniteModel& m);
void save_model(const FiniteModel& m, const std::string& path);

}  // namespace folnd
