#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "drlab/evaluable.hpp"
#include "drlab/point.hpp"

namespace drlab {

// Midpoint tensor rule on a per-axis breakpoint grid. The default grid is
// uniform dyadic; callers inject additional cuts (function break hints,
// partition boundaries, box edges) so that integrals of piecewise-constant
// and piecewise-linear integrands are exact.
class Quadrature {
 public:
  static Quadrature uniform(int dim, int cells_per_axis);

  // 2^10 cells per axis for K=1, 2^5 for K=2, 2^4 for K=3.
  static Quadrature default_for(int dim);

  int dim() const { return dim_; }

  void add_breaks(int axis, std::span<const double> cuts);
  void absorb(const Evaluable& e);
  Quadrature refined_with(std::initializer_list<const Evaluable*> fns) const;

  std::size_t cell_count() const;
  const std::vector<double>& edges(int axis) const {
    return edges_[static_cast<std::size_t>(axis)];
  }

  void for_each_cell(const std::function<void(const Point&, double)>& visit) const;

  // Midpoints and cell corners; used by the sup/extremum probes.
  void for_each_probe(const std::function<void(const Point&)>& visit) const;

  double integrate(const std::function<double(const Point&)>& f) const;
  double integrate_box(const std::function<double(const Point&)>& f, const Box& box) const;

  double sup_abs(const std::function<double(const Point&)>& f) const;
  double max_value(const std::function<double(const Point&)>& f) const;
  double min_value(const std::function<double(const Point&)>& f) const;
  double measure_where(const std::function<bool(const Point&)>& pred) const;

 private:
  int dim_ = 1;
  std::array<std::vector<double>, kMaxDim> edges_;

  static void for_each_cell_axes(const std::array<std::vector<double>, kMaxDim>& edges,
                                 int dim,
                                 const std::function<void(const Point&, double)>& visit);
};

}  // namespace drlab
