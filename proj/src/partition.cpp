#include "drlab/partition.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include "drlab/errors.hpp"
#include "drlab/rng.hpp"

namespace drlab {

double RectCollection::measure() const {
  double m = 0.0;
  for (const Box& b : boxes) m += b.volume();
  return m;
}

RectCollection RectCollection::unit(int dim) {
  return RectCollection{{Box::unit(dim)}};
}

Evaluable truncate_weight(const Evaluable& w, const Quadrature& quad) {
  const Quadrature fine = quad.refined_with({&w});
  const double sup = fine.sup_abs(w.fn);
  if (sup <= 0.0) throw std::invalid_argument("truncate_weight: ||w||_inf is zero");
  const double thr = 0.5 * sup;
  Evaluable e;
  e.fn = [f = w.fn, thr](const Point& x) {
    const double v = f(x);
    return v > thr ? v : 0.0;
  };
  e.breaks = w.breaks;
  if (fine.dim() == 1) {
    // The truncation indicator jumps where w crosses the threshold; register
    // those points so box integrals of the truncated weight stay exact.
    // Between registered breaks w is monotone for the grid-exact inputs, so
    // endpoint signs bracket every crossing.
    const std::vector<double>& edges = fine.edges(0);
    std::vector<double> cuts;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
      double a = edges[i];
      double b = edges[i + 1];
      double fa = w(point1(a)) - thr;
      double fb = w(point1(b)) - thr;
      if (fa == 0.0 || fb == 0.0 || (fa < 0.0) == (fb < 0.0)) continue;
      for (int it = 0; it < 80 && b - a > 1e-15; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = w(point1(mid)) - thr;
        if ((fm < 0.0) == (fa < 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      cuts.push_back(0.5 * (a + b));
    }
    auto& dst = e.breaks[0];
    dst.insert(dst.end(), cuts.begin(), cuts.end());
    std::sort(dst.begin(), dst.end());
    dst.erase(std::unique(dst.begin(), dst.end(),
                          [](double p, double q) { return std::abs(p - q) < 1e-15; }),
              dst.end());
  }
  return e;
}

namespace {

// Middle window of half measure at slide position alpha in [0,1].
Box window_box(const Box& b, double alpha) {
  Box out = b;
  const int last = b.dim - 1;
  const double a = b.lo[static_cast<std::size_t>(last)];
  const double len = b.hi[static_cast<std::size_t>(last)] - a;
  out.lo[static_cast<std::size_t>(last)] = a + 0.5 * alpha * len;
  out.hi[static_cast<std::size_t>(last)] = a + 0.5 * (alpha + 1.0) * len;
  return out;
}

double window_integral(const RectCollection& s, const Evaluable& w, double alpha,
                       const Quadrature& quad) {
  double acc = 0.0;
  for (const Box& b : s.boxes) acc += quad.integrate_box(w.fn, window_box(b, alpha));
  return acc;
}

RectCollection window_collection(const RectCollection& s, double alpha) {
  RectCollection out;
  for (const Box& b : s.boxes) out.boxes.push_back(window_box(b, alpha));
  return out;
}

RectCollection complement_collection(const RectCollection& s, double alpha) {
  RectCollection out;
  for (const Box& b : s.boxes) {
    const Box win = window_box(b, alpha);
    const int last = b.dim - 1;
    Box left = b;
    left.hi[static_cast<std::size_t>(last)] = win.lo[static_cast<std::size_t>(last)];
    Box right = b;
    right.lo[static_cast<std::size_t>(last)] = win.hi[static_cast<std::size_t>(last)];
    if (!left.empty()) out.boxes.push_back(left);
    if (!right.empty()) out.boxes.push_back(right);
  }
  return out;
}

}  // namespace

std::pair<RectCollection, RectCollection> split_half(const RectCollection& s,
                                                     const Evaluable& w, double tol,
                                                     const Quadrature& quad) {
  if (s.boxes.empty()) throw std::invalid_argument("split_half: empty collection");
  double total = 0.0;
  for (const Box& b : s.boxes) total += quad.integrate_box(w.fn, b);
  if (total <= 0.0) {
    throw std::invalid_argument("split_half: integral of w over the collection is not positive");
  }
  const double target = 0.5 * total;

  const auto accept = [&](double alpha) {
    return std::pair{window_collection(s, alpha), complement_collection(s, alpha)};
  };

  double lo = 0.0;
  double hi = 1.0;
  double flo = window_integral(s, w, lo, quad) - target;
  if (std::abs(flo) <= tol) return accept(lo);
  double fhi = window_integral(s, w, hi, quad) - target;
  if (std::abs(fhi) <= tol) return accept(hi);

  // psi(0) + psi(1) = total, so psi - target changes sign over [0,1].
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = window_integral(s, w, mid, quad) - target;
    if (std::abs(fmid) <= tol) return accept(mid);
    if ((flo <= 0.0) == (fmid <= 0.0)) {
      lo = mid;
      flo = fmid;
    } else {
      hi = mid;
      fhi = fmid;
    }
  }
  std::ostringstream os;
  os << "split_half: bisection did not reach tolerance " << tol << " within 200 iterations";
  throw Nonconvergence(os.str());
}

void Partition::build_index() {
  index_.clear();
  const int last = dim_ - 1;
  for (int j = 0; j < size(); ++j) {
    for (const Box& b : cells_[static_cast<std::size_t>(j)].boxes) {
      index_.push_back(Interval{b.lo[static_cast<std::size_t>(last)],
                                b.hi[static_cast<std::size_t>(last)], j});
    }
  }
  std::sort(index_.begin(), index_.end(),
            [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
}

int Partition::cell_of(const Point& x) const {
  const double t = x[dim_ - 1];
  auto it = std::upper_bound(index_.begin(), index_.end(), t,
                             [](double v, const Interval& iv) { return v < iv.lo; });
  std::size_t i = it == index_.begin() ? 0 : static_cast<std::size_t>(it - index_.begin()) - 1;
  if (i >= index_.size()) i = index_.size() - 1;
  // On a shared boundary take the lowest-index adjacent cell.
  if (t == index_[i].lo && i > 0 && index_[i - 1].hi == t) {
    return std::min(index_[i - 1].cell, index_[i].cell);
  }
  return index_[i].cell;
}

std::vector<double> Partition::last_axis_cuts() const {
  std::vector<double> cuts;
  cuts.reserve(index_.size() * 2);
  for (const Interval& iv : index_) {
    cuts.push_back(iv.lo);
    cuts.push_back(iv.hi);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

Partition build_partition(const Evaluable& w, int levels, double tol, const Quadrature& quad) {
  if (levels < 1) throw std::invalid_argument("build_partition: levels must be >= 1");
  const Quadrature coarse = quad.refined_with({&w});
  const double sup = coarse.sup_abs(w.fn);
  if (sup <= 0.0) throw std::invalid_argument("build_partition: ||w||_inf is zero");

  bool negated = false;
  Evaluable w_eff = w;
  if (coarse.measure_where([&](const Point& x) { return w(x) > 0.5 * sup; }) <= 0.0) {
    negated = true;
    w_eff = scale(w, -1.0);
  }
  Evaluable trunc = truncate_weight(w_eff, coarse);
  const Quadrature fine = coarse.refined_with({&trunc});

  // Balance target: w_eff * trunc = trunc^2 pointwise.
  Evaluable target;
  target.fn = [t = trunc.fn](const Point& x) {
    const double v = t(x);
    return v * v;
  };
  target.breaks = trunc.breaks;

  std::vector<RectCollection> leaves{RectCollection::unit(fine.dim())};
  for (int level = 0; level < levels; ++level) {
    std::vector<RectCollection> next;
    next.reserve(leaves.size() * 2);
    for (const RectCollection& s : leaves) {
      auto [s1, s2] = split_half(s, target, tol, fine);
      next.push_back(std::move(s1));
      next.push_back(std::move(s2));
    }
    leaves = std::move(next);
  }

  Partition p;
  p.dim_ = fine.dim();
  p.levels_ = levels;
  p.cells_ = std::move(leaves);
  p.weight_ = w_eff;
  p.trunc_ = trunc;
  p.negated_ = negated;
  p.build_index();

  // Record the worst per-cell deviation of the balanced integral.
  std::vector<double> cell_ints;
  cell_ints.reserve(p.cells_.size());
  double total = 0.0;
  for (const RectCollection& cell : p.cells_) {
    double v = 0.0;
    for (const Box& b : cell.boxes) v += fine.integrate_box(target.fn, b);
    cell_ints.push_back(v);
    total += v;
  }
  const double mean = total / p.size();
  double worst = 0.0;
  for (double v : cell_ints) worst = std::max(worst, std::abs(v - mean));
  p.balance_residual_ = worst;
  return p;
}

Partition dyadic_partition(int dim, int levels) {
  if (levels < 1) throw std::invalid_argument("dyadic_partition: levels must be >= 1");
  const int m = 1 << levels;
  Partition p;
  p.dim_ = dim;
  p.levels_ = levels;
  p.cells_.reserve(static_cast<std::size_t>(m));
  const int last = dim - 1;
  for (int j = 0; j < m; ++j) {
    Box b = Box::unit(dim);
    b.lo[static_cast<std::size_t>(last)] = static_cast<double>(j) / m;
    b.hi[static_cast<std::size_t>(last)] = static_cast<double>(j + 1) / m;
    p.cells_.push_back(RectCollection{{b}});
  }
  p.build_index();
  return p;
}

Partition reorder_cells(const Partition& p, const std::vector<int>& order) {
  if (order.size() != static_cast<std::size_t>(p.size())) {
    throw std::invalid_argument("reorder_cells: order must be a permutation of the cells");
  }
  Partition out;
  out.dim_ = p.dim_;
  out.levels_ = p.levels_;
  out.weight_ = p.weight_;
  out.trunc_ = p.trunc_;
  out.negated_ = p.negated_;
  out.balance_residual_ = p.balance_residual_;
  out.cells_.reserve(order.size());
  for (int idx : order) out.cells_.push_back(p.cell(idx));
  out.build_index();
  return out;
}

RademacherAssignment sample_assignment(int M, std::uint64_t seed, std::uint64_t stream) {
  if (M < 2 || (M % 2) != 0) {
    throw std::invalid_argument("sample_assignment: M must be even and >= 2");
  }
  CounterRng rng(seed, stream);
  RademacherAssignment a;
  a.seed = seed;
  a.signs.resize(static_cast<std::size_t>(M / 2));
  for (int& s : a.signs) s = rng.next_sign();
  return a;
}

int bump(const RademacherAssignment& assignment, const Partition& partition, const Point& x) {
  const int cell = partition.cell_of(x);
  const std::size_t pair = static_cast<std::size_t>(cell / 2);
  if (pair >= assignment.signs.size()) {
    throw std::invalid_argument("bump: assignment shorter than M/2");
  }
  // 0-based cell c corresponds to B_{c+1}: odd c is B_{2j}, even c is B_{2j-1}.
  return (cell % 2 == 1) ? assignment.signs[pair] : -assignment.signs[pair];
}

}  // namespace drlab
