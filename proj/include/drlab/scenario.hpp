#pragma once

#include <cstdint>
#include <string>

#include "drlab/evaluable.hpp"

namespace drlab {

// Named function factory for configs and experiment drivers. Specs look like
// "name:arg1,arg2,...":
//   constant:v
//   ramp:lo,hi                    lo + (hi-lo) x1, analytic
//   sin:base,amp,freq,phase       base + amp sin(2 pi freq x1 + phase)
//   pcsin:cells,base,amp,freq,phase   piecewise-constant sample of sin:*
//   pcramp:cells,lo,hi            piecewise-constant sample of ramp:*
//   twolevel:v_left,v_right       v_left on x1 < 1/2, v_right otherwise
//   pcrand:cells,lo,hi,seed       piecewise-constant, cells iid uniform
//   checker:cells                 +/-1 checkerboard on all axes
Evaluable make_function(const std::string& spec, int dim);

// Budget laws "c" (constant) or "c*n^p".
struct BudgetLaw {
  double coef = 0.0;
  double power = 0.0;
  double at(std::uint64_t n) const;
};

BudgetLaw parse_budget_law(const std::string& spec);

}  // namespace drlab
