#pragma once

#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "drlab/evaluable.hpp"
#include "drlab/point.hpp"
#include "drlab/quadrature.hpp"

namespace drlab {

// Finite union of disjoint axis-aligned boxes.
struct RectCollection {
  std::vector<Box> boxes;

  double measure() const;
  static RectCollection unit(int dim);
};

// ||w||_inf over the grid, then w * 1{w > ||w||_inf / 2}.
Evaluable truncate_weight(const Evaluable& w, const Quadrature& quad);

// Splits S into (S1, S2) with mu(S1) = mu(S)/2 exactly and
// integral_{S1} w within tol of half the integral over S. The cut slides a
// half-measure window along the last axis of every box; the first window
// position meeting the tolerance is accepted, so a constant weight yields the
// leftmost split deterministically. Bisection is capped at 200 iterations.
std::pair<RectCollection, RectCollection> split_half(const RectCollection& s,
                                                     const Evaluable& w, double tol,
                                                     const Quadrature& quad);

// M = 2^levels collections of equal measure, each carrying an equal share of
// integral w * w_trunc. If P[w > ||w||_inf / 2] = 0 on the grid the build
// operates on -w instead.
class Partition {
 public:
  struct Interval {
    double lo;
    double hi;
    int cell;
  };

  int dim() const { return dim_; }
  int levels() const { return levels_; }
  int size() const { return static_cast<int>(cells_.size()); }  // M
  const std::vector<RectCollection>& cells() const { return cells_; }
  const RectCollection& cell(int j) const { return cells_[static_cast<std::size_t>(j)]; }

  const Evaluable& weight() const { return weight_; }
  const Evaluable& trunc_weight() const { return trunc_; }
  bool negated() const { return negated_; }
  double balance_residual() const { return balance_residual_; }

  // Index of the cell containing x. A point exactly on a shared boundary is
  // assigned to the lowest-index adjacent cell.
  int cell_of(const Point& x) const;

  // Last-axis cuts, for quadrature refinement.
  std::vector<double> last_axis_cuts() const;

  friend Partition build_partition(const Evaluable&, int, double, const Quadrature&);
  friend Partition dyadic_partition(int dim, int levels);
  friend Partition reorder_cells(const Partition&, const std::vector<int>&);

 private:
  int dim_ = 1;
  int levels_ = 0;
  std::vector<RectCollection> cells_;
  std::vector<Interval> index_;  // sorted by lo
  Evaluable weight_;
  Evaluable trunc_;
  bool negated_ = false;
  double balance_residual_ = 0.0;

  void build_index();
};

Partition build_partition(const Evaluable& w, int levels, double tol, const Quadrature& quad);

// Plain dyadic partition of [0,1]^K into 2^levels last-axis slabs.
Partition dyadic_partition(int dim, int levels);

// Same cells under a new ordering: new cell j is old cell order[j].
Partition reorder_cells(const Partition& p, const std::vector<int>& order);

struct RademacherAssignment {
  std::vector<int> signs;  // length M/2, entries +/-1
  std::uint64_t seed = 0;
};

RademacherAssignment sample_assignment(int M, std::uint64_t seed, std::uint64_t stream = 0);

// Delta(lambda, x) = sum_j lambda_j (1{x in B_2j} - 1{x in B_2j-1}) with the
// main-text sign order; always +/-1.
int bump(const RademacherAssignment& assignment, const Partition& partition, const Point& x);

}  // namespace drlab
