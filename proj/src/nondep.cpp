#include "folnd/nondep.hpp"

namespace folnd {

NonDepVerdict check_nondep(const FiniteModel& m, const FormulaPtr& phi, VarId x,
                           const FormulaPtr& theta) {
  std::set<VarId> vars = free_vars(phi);
  for (VarId v : free_vars(theta)) vars.insert(v);
  vars.insert(x);
  Window w = make_window(vars);
  FormulaPtr phi_c = desugar(phi), theta_c = desugar(theta);

  NonDepVerdict verdict;
  std::vector<int> row(w.size(), 0);
  for (;;) {
    Assignment a{w, row};
    if (satisfies(m, theta_c, a)) {
      bool phi_a = satisfies(m, phi_c, a);
      for (int b = 0; b < m.domain_size; ++b) {
        Assignment ab = override_at(a, x, b, m.domain_size);
        if (satisfies(m, theta_c, ab) && satisfies(m, phi_c, ab) != phi_a) {
          verdict.holds = false;
          verdict.cex_assignment = a;
          verdict.cex_b = b;
          return verdict;
        }
      }
    }
    size_t i = row.size();
    while (i > 0 && ++row[i - 1] == m.domain_size) row[--i] = 0;
    if (i == 0) break;
  }
  return verdict;
}

bool check_nondep_plain_equiv(const FiniteModel& m, const FormulaPtr& phi, VarId x) {
  return valid(m, f_iff(f_exists(x, phi), f_forall(x, phi)));
}

bool check_nondep_subst(const FiniteModel& m, const FormulaPtr& phi, VarId x,
                        const FormulaPtr& theta) {
  VarId y = fresh_var(std::vector<FormulaPtr>{phi, theta});
  VarId z{y.index + 1};
  FormulaPtr phi_y = substitute(phi, x, y), phi_z = substitute(phi, x, z);
  FormulaPtr th_y = substitute(theta, x, y), th_z = substitute(theta, x, z);
  return valid(m, f_implies(f_and(th_y, th_z), f_iff(phi_y, phi_z)));
}

}  // namespace folnd
