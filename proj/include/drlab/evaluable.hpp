#pragma once

#include <array>
#include <functional>
#include <utility>
#include <vector>

#include "drlab/point.hpp"

namespace drlab {

// A real-valued function on [0,1]^K. `breaks` lists known discontinuity or
// kink positions per axis; quadratures that absorb these hints integrate
// piecewise-constant and piecewise-linear realizations exactly.
struct Evaluable {
  std::function<double(const Point&)> fn;
  std::array<std::vector<double>, kMaxDim> breaks{};

  double operator()(const Point& p) const { return fn(p); }
  explicit operator bool() const { return static_cast<bool>(fn); }
};

Evaluable constant_fn(double v);
Evaluable analytic(std::function<double(const Point&)> f);

// Piecewise constant along axis 0 with `cells` equal cells; constant in the
// remaining coordinates.
Evaluable piecewise_constant(int cells, std::vector<double> values);
Evaluable piecewise_constant_profile(int cells, const std::function<double(double)>& profile);

// Continuous piecewise-linear interpolant of (knots, values) along axis 0.
// Knots must be strictly increasing, spanning [0,1].
Evaluable piecewise_linear(std::vector<double> knots, std::vector<double> values);

// +/-1 pattern on the dyadic tensor grid with `cells` cells per axis, sign
// given by the parity of the cell index sum. Mean zero, unit absolute value.
Evaluable checkerboard(int dim, int cells);

Evaluable scale(const Evaluable& f, double a);
Evaluable add(const Evaluable& f, const Evaluable& g);

// Merge the break hints of several evaluables into per-axis sorted lists.
std::array<std::vector<double>, kMaxDim> merge_breaks(
    std::initializer_list<const Evaluable*> fns);

}  // namespace drlab
