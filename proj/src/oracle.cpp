#include "drlab/oracle.hpp"

#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "drlab/errors.hpp"

namespace drlab {

DirectionSet DirectionSet::default_for(int dim) {
  DirectionSet d;
  d.g0 = checkerboard(dim, 1 << 6);
  d.g1 = d.g0;
  d.m = d.g0;
  return d;
}

double lp_distance(const Evaluable& f, const Evaluable& g, double r, const Quadrature& quad) {
  if (std::isinf(r)) {
    return quad.sup_abs([&](const Point& x) { return f(x) - g(x); });
  }
  if (r < 1.0) throw std::invalid_argument("lp_distance: order must be >= 1 or infinity");
  const double ir = quad.integrate(
      [&](const Point& x) { return std::pow(std::abs(f(x) - g(x)), r); });
  return std::pow(ir, 1.0 / r);
}

namespace {

// amplitude solved from ||a * dir||_2 = sqrt(budget)
double solve_amplitude(double budget_sq, const Evaluable& dir, const Quadrature& quad,
                       const char* component) {
  if (budget_sq < 0.0) throw std::invalid_argument("synthesize_estimates: negative budget");
  if (budget_sq == 0.0) return 0.0;
  const double norm_sq = quad.integrate([&](const Point& x) {
    const double v = dir(x);
    return v * v;
  });
  if (norm_sq <= 0.0) {
    std::ostringstream os;
    os << "synthesize_estimates: direction for " << component << " has zero L2 norm";
    throw std::invalid_argument(os.str());
  }
  return std::sqrt(budget_sq / norm_sq);
}

Evaluable perturb(const Evaluable& base, const Evaluable& dir, double amplitude) {
  if (amplitude == 0.0) return base;
  Evaluable e;
  e.fn = [b = base.fn, d = dir.fn, amplitude](const Point& x) { return b(x) + amplitude * d(x); };
  e.breaks = merge_breaks({&base, &dir});
  return e;
}

void check_estimate_range(const Evaluable& est, const Quadrature& quad, double c,
                          const char* component) {
  quad.for_each_cell([&](const Point& x, double) {
    const double v = est(x);
    if (v < c - 1e-12 || v > 1.0 - c + 1e-12) {
      std::ostringstream os;
      os << "synthesize_estimates: " << component << " = " << v << " at x = (" << x[0] << ", "
         << x[1] << ", " << x[2] << ") leaves [c, 1-c] = [" << c << ", " << 1.0 - c << "]";
      throw BudgetInfeasible(os.str());
    }
  });
}

}  // namespace

NuisancePair synthesize_estimates(const NuisancePair& truth, const ErrorBudget& budget,
                                  const DirectionSet& dirs, const Quadrature& quad) {
  const double a0 = solve_amplitude(budget.e, dirs.g0, quad, "g(0,.)");
  const double a1 = solve_amplitude(budget.e_prime, dirs.g1, quad, "g(1,.)");
  const double am = solve_amplitude(budget.f, dirs.m, quad, "m");

  NuisancePair hat = truth;
  hat.rep = Representation::analytic;
  hat.g0 = perturb(truth.g0, dirs.g0, a0);
  hat.g1 = perturb(truth.g1, dirs.g1, a1);
  hat.m = perturb(truth.m, dirs.m, am);

  const Quadrature fine = quad.refined_with({&hat.m, &hat.g0, &hat.g1});
  check_estimate_range(hat.m, fine, truth.c, "m");
  check_estimate_range(hat.g0, fine, truth.c, "g(0,.)");
  check_estimate_range(hat.g1, fine, truth.c, "g(1,.)");
  return hat;
}

ValidityReport verify_membership(const NuisancePair& candidate, const NuisancePair& center,
                                 const ErrorBudget& budget, const Quadrature& quad,
                                 bool sup_norm) {
  const Quadrature fine = quad.refined_with(
      {&candidate.m, &candidate.g0, &candidate.g1, &center.m, &center.g0, &center.g1});
  const double r = sup_norm ? std::numeric_limits<double>::infinity() : 2.0;

  ValidityReport rep;
  const double d0 = lp_distance(candidate.g0, center.g0, r, fine);
  const double d1 = lp_distance(candidate.g1, center.g1, r, fine);
  const double dm = lp_distance(candidate.m, center.m, r, fine);
  rep.dist_g0_sq = d0 * d0;
  rep.dist_g1_sq = d1 * d1;
  rep.dist_m_sq = dm * dm;

  bool range_ok = true;
  fine.for_each_cell([&](const Point& x, double) {
    const double vals[3] = {candidate.m(x), candidate.g0(x), candidate.g1(x)};
    for (double v : vals) {
      if (v < -1e-12 || v > 1.0 + 1e-12) range_ok = false;
    }
  });
  rep.range_ok = range_ok;
  rep.member = range_ok && rep.dist_g0_sq <= budget.e + 1e-15 &&
               rep.dist_g1_sq <= budget.e_prime + 1e-15 && rep.dist_m_sq <= budget.f + 1e-15;
  return rep;
}

}  // namespace drlab
