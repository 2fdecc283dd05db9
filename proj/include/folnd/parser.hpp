#pragma once

#include <stdexcept>

#include "folnd/formula.hpp"

namespace folnd {

// Bidirectional name <-> VarId table, shared across all parses of a session so
// that "x" denotes the same variable in every formula. Names of the shape
// v<digits> always denote the variable with that index.
class VarTable {
 public:
  VarId intern(const std::string& name);
  std::string name_of(VarId v) const;
  bool known(const std::string& name) const { return by_name_.count(name) != 0; }

 private:
  std::map<std::string, int> by_name_;
  std::map<int, std::string> by_index_;
  int next_ = 1;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, size_t offset, int line, int col);
  size_t offset;  // 1-based character offset
  int line, col;  // 1-based
};

// Parses the concrete grammar. All predicates must be declared in sig.
FormulaPtr parse(const std::string& text, const Signature& sig, VarTable& vars);

// Like parse, but adds undeclared predicates to sig with their observed arity.
FormulaPtr parse_infer(const std::string& text, Signature& sig, VarTable& vars);

// Boolean template: connectives over holes written _1, _2, ...
FormulaPtr parse_boolean_template(const std::string& text);

std::string print(const FormulaPtr& f, const VarTable& vars);

}  // namespace folnd
