#pragma once

#include "drlab/model.hpp"
#include "drlab/quadrature.hpp"

namespace drlab {

// Squared L2 budgets: e for g(0,.), e_prime for g(1,.), f for m.
struct ErrorBudget {
  double e = 0.0;
  double e_prime = 0.0;
  double f = 0.0;
};

// Per-component perturbation sign patterns. The default is a +/-1
// checkerboard on a 2^6 dyadic grid (orthogonal to constants) applied to all
// three components with the same sign, which makes the doubly robust
// product-bias term visible in rate experiments.
struct DirectionSet {
  Evaluable g0;
  Evaluable g1;
  Evaluable m;

  static DirectionSet default_for(int dim);
};

struct ValidityReport {
  double dist_g0_sq = 0.0;
  double dist_g1_sq = 0.0;
  double dist_m_sq = 0.0;
  bool range_ok = false;
  bool member = false;
};

// ||f - g||_{P_X, r} under uniform P_X; r = infinity gives the grid supremum.
double lp_distance(const Evaluable& f, const Evaluable& g, double r, const Quadrature& quad);

// Returns (m_hat, g_hat) with each squared L2 distance from the truth equal
// to its budget (to quadrature exactness). The perturbation of each component
// is amplitude * direction(x) with the amplitude solved from the direction's
// L2 norm. Throws BudgetInfeasible naming the component whose amplitude would
// leave [c, 1-c].
NuisancePair synthesize_estimates(const NuisancePair& truth, const ErrorBudget& budget,
                                  const DirectionSet& dirs, const Quadrature& quad);

// Membership of `candidate` in the constraint set around `center`: the three
// squared L2 distances are within the budgets and 0 <= m, g <= 1 on the grid.
// With `sup_norm` the squared grid suprema replace the squared L2 distances
// (the stronger-norm variant of the constraint set).
ValidityReport verify_membership(const NuisancePair& candidate, const NuisancePair& center,
                                 const ErrorBudget& budget, const Quadrature& quad,
                                 bool sup_norm = false);

}  // namespace drlab
