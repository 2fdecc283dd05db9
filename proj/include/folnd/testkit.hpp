#pragma once

#include <cstdint>
#include <functional>
#include <optional>

#include "folnd/identities.hpp"

namespace folnd {

// SplitMix64: tiny, deterministic across platforms, splittable.
struct Rng {
  uint64_t state = 0;

  explicit Rng(uint64_t seed = 0) : state(seed) {}
  uint64_t next();
  uint64_t below(uint64_t n);  // uniform in [0, n)
  bool coin() { return (next() & 1) != 0; }
  Rng split();
};

enum class GenBias { Unconditioned, SatisfyNonDep, SatisfyValidity };

struct GenConfig {
  uint64_t seed = 0;
  int max_domain = 3;
  int max_vars = 3;
  int max_depth = 3;
  Signature pool;  // predicate pool
  GenBias bias = GenBias::Unconditioned;
};

Signature default_pool();  // two unary + one binary predicate

FiniteModel gen_model(const GenConfig& cfg, Rng& rng);
FormulaPtr gen_formula(const GenConfig& cfg, Rng& rng);
// Depth-bounded guard from the designated guard predicate family.
FormulaPtr gen_guard(const GenConfig& cfg, Rng& rng, VarId x);

// A conditioned instance of an identity: slots plus a companion model on which
// the identity's side conditions verify.
struct ConditionedInstance {
  FiniteModel model;
  IdentitySlots slots;
};

// Retries (cap 200) until the side conditions of the named identity verify on
// a companion model. nullopt reports exhaustion; callers count, not fail.
std::optional<ConditionedInstance> gen_conditioned_instance(const GenConfig& cfg, Rng& rng,
                                                            const std::string& identity);

// One model + formula bundle for shrinking.
struct Instance {
  FiniteModel model;
  FormulaPtr formula;
};

// Strictly smaller well-formed candidates: domain shrunk, tuples removed,
// subformulas promoted.
std::vector<Instance> shrink(const Instance& inst);

// Repeatedly replaces inst by its first still-failing shrink candidate.
Instance shrink_to_minimal(const Instance& inst, const std::function<bool(const Instance&)>& fails);

}  // namespace folnd
