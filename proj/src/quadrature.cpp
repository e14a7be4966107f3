#include "drlab/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace drlab {

namespace {

void insert_sorted_unique(std::vector<double>& edges, std::span<const double> cuts) {
  bool dirty = false;
  for (double c : cuts) {
    if (c <= 0.0 || c >= 1.0) continue;
    edges.push_back(c);
    dirty = true;
  }
  if (!dirty) return;
  std::sort(edges.begin(), edges.end());
  edges.erase(std::unique(edges.begin(), edges.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-15; }),
              edges.end());
}

std::vector<double> clip_edges(const std::vector<double>& edges, double lo, double hi) {
  std::vector<double> out;
  out.push_back(lo);
  for (double e : edges) {
    if (e > lo + 1e-15 && e < hi - 1e-15) out.push_back(e);
  }
  out.push_back(hi);
  return out;
}

}  // namespace

Quadrature Quadrature::uniform(int dim, int cells_per_axis) {
  if (dim < 1 || dim > kMaxDim) throw std::invalid_argument("quadrature: dim must be 1..3");
  if (cells_per_axis < 1) throw std::invalid_argument("quadrature: resolution must be positive");
  Quadrature q;
  q.dim_ = dim;
  for (int a = 0; a < dim; ++a) {
    auto& e = q.edges_[static_cast<std::size_t>(a)];
    e.resize(static_cast<std::size_t>(cells_per_axis) + 1);
    for (int i = 0; i <= cells_per_axis; ++i) {
      e[static_cast<std::size_t>(i)] = static_cast<double>(i) / cells_per_axis;
    }
  }
  return q;
}

Quadrature Quadrature::default_for(int dim) {
  switch (dim) {
    case 1: return uniform(1, 1 << 10);
    case 2: return uniform(2, 1 << 5);
    case 3: return uniform(3, 1 << 4);
    default: throw std::invalid_argument("quadrature: dim must be 1..3");
  }
}

void Quadrature::add_breaks(int axis, std::span<const double> cuts) {
  if (axis < 0 || axis >= dim_) throw std::invalid_argument("quadrature: axis out of range");
  insert_sorted_unique(edges_[static_cast<std::size_t>(axis)], cuts);
}

void Quadrature::absorb(const Evaluable& e) {
  for (int a = 0; a < dim_; ++a) {
    const auto& cuts = e.breaks[static_cast<std::size_t>(a)];
    if (!cuts.empty()) add_breaks(a, cuts);
  }
}

Quadrature Quadrature::refined_with(std::initializer_list<const Evaluable*> fns) const {
  Quadrature q = *this;
  for (const Evaluable* f : fns) q.absorb(*f);
  return q;
}

std::size_t Quadrature::cell_count() const {
  std::size_t n = 1;
  for (int a = 0; a < dim_; ++a) n *= edges_[static_cast<std::size_t>(a)].size() - 1;
  return n;
}

void Quadrature::for_each_cell_axes(const std::array<std::vector<double>, kMaxDim>& edges,
                                    int dim,
                                    const std::function<void(const Point&, double)>& visit) {
  const auto& e0 = edges[0];
  Point p;
  for (std::size_t i = 0; i + 1 < e0.size(); ++i) {
    const double w0 = e0[i + 1] - e0[i];
    p[0] = 0.5 * (e0[i] + e0[i + 1]);
    if (dim == 1) {
      visit(p, w0);
      continue;
    }
    const auto& e1 = edges[1];
    for (std::size_t j = 0; j + 1 < e1.size(); ++j) {
      const double w1 = w0 * (e1[j + 1] - e1[j]);
      p[1] = 0.5 * (e1[j] + e1[j + 1]);
      if (dim == 2) {
        visit(p, w1);
        continue;
      }
      const auto& e2 = edges[2];
      for (std::size_t k = 0; k + 1 < e2.size(); ++k) {
        p[2] = 0.5 * (e2[k] + e2[k + 1]);
        visit(p, w1 * (e2[k + 1] - e2[k]));
      }
    }
  }
}

void Quadrature::for_each_cell(const std::function<void(const Point&, double)>& visit) const {
  for_each_cell_axes(edges_, dim_, visit);
}

double Quadrature::integrate(const std::function<double(const Point&)>& f) const {
  double acc = 0.0;
  double comp = 0.0;  // Kahan compensation
  for_each_cell([&](const Point& p, double vol) {
    const double term = f(p) * vol - comp;
    const double next = acc + term;
    comp = (next - acc) - term;
    acc = next;
  });
  return acc;
}

namespace {

// visit(lo, hi) over the tensor cells of per-axis edge lists
template <typename Visit>
void for_each_cell_bounds(const std::array<std::vector<double>, kMaxDim>& edges, int dim,
                          Visit&& visit) {
  const auto& e0 = edges[0];
  std::array<double, kMaxDim> lo{};
  std::array<double, kMaxDim> hi{};
  for (std::size_t i = 0; i + 1 < e0.size(); ++i) {
    lo[0] = e0[i];
    hi[0] = e0[i + 1];
    if (dim == 1) {
      visit(lo, hi);
      continue;
    }
    const auto& e1 = edges[1];
    for (std::size_t j = 0; j + 1 < e1.size(); ++j) {
      lo[1] = e1[j];
      hi[1] = e1[j + 1];
      if (dim == 2) {
        visit(lo, hi);
        continue;
      }
      const auto& e2 = edges[2];
      for (std::size_t k = 0; k + 1 < e2.size(); ++k) {
        lo[2] = e2[k];
        hi[2] = e2[k + 1];
        visit(lo, hi);
      }
    }
  }
}

}  // namespace

double Quadrature::integrate_box(const std::function<double(const Point&)>& f,
                                 const Box& box) const {
  if (box.empty()) return 0.0;
  std::array<std::vector<double>, kMaxDim> clipped{};
  for (int a = 0; a < dim_; ++a) {
    clipped[static_cast<std::size_t>(a)] =
        clip_edges(edges_[static_cast<std::size_t>(a)],
                   box.lo[static_cast<std::size_t>(a)], box.hi[static_cast<std::size_t>(a)]);
  }
  // Tensor 2-point Gauss per sub-cell: exact through cubics along each axis,
  // so quadratic targets like w * w_trunc of a piecewise-linear w integrate
  // exactly once their kinks are in the grid.
  constexpr double kHalfGauss = 0.28867513459481288225;  // 1/(2 sqrt 3)
  double acc = 0.0;
  double comp = 0.0;
  const auto accumulate = [&](double term) {
    term -= comp;
    const double next = acc + term;
    comp = (next - acc) - term;
    acc = next;
  };
  const int dim = dim_;
  for_each_cell_bounds(clipped, dim, [&](const std::array<double, kMaxDim>& lo,
                                         const std::array<double, kMaxDim>& hi) {
    double vol = 1.0;
    for (int a = 0; a < dim; ++a) vol *= hi[static_cast<std::size_t>(a)] - lo[static_cast<std::size_t>(a)];
    const int combos = 1 << dim;
    const double share = vol / combos;
    for (int c = 0; c < combos; ++c) {
      Point p;
      for (int a = 0; a < dim; ++a) {
        const double mid = 0.5 * (lo[static_cast<std::size_t>(a)] + hi[static_cast<std::size_t>(a)]);
        const double off =
            (hi[static_cast<std::size_t>(a)] - lo[static_cast<std::size_t>(a)]) * kHalfGauss;
        p[a] = mid + ((c >> a) & 1 ? off : -off);
      }
      accumulate(f(p) * share);
    }
  });
  return acc;
}

void Quadrature::for_each_probe(const std::function<void(const Point&)>& visit) const {
  // midpoints plus cell corners, so extrema of piecewise-linear functions
  // (attained at their kinks) are probed exactly
  for_each_cell([&](const Point& p, double) { visit(p); });
  for_each_cell_bounds(edges_, dim_, [&](const std::array<double, kMaxDim>& lo,
                                         const std::array<double, kMaxDim>& hi) {
    const int combos = 1 << dim_;
    for (int c = 0; c < combos; ++c) {
      Point p;
      for (int a = 0; a < dim_; ++a) {
        p[a] = (c >> a) & 1 ? hi[static_cast<std::size_t>(a)] : lo[static_cast<std::size_t>(a)];
      }
      visit(p);
    }
  });
}

double Quadrature::sup_abs(const std::function<double(const Point&)>& f) const {
  double s = 0.0;
  for_each_probe([&](const Point& p) { s = std::max(s, std::abs(f(p))); });
  return s;
}

double Quadrature::max_value(const std::function<double(const Point&)>& f) const {
  double s = -std::numeric_limits<double>::infinity();
  for_each_probe([&](const Point& p) { s = std::max(s, f(p)); });
  return s;
}

double Quadrature::min_value(const std::function<double(const Point&)>& f) const {
  double s = std::numeric_limits<double>::infinity();
  for_each_probe([&](const Point& p) { s = std::min(s, f(p)); });
  return s;
}

double Quadrature::measure_where(const std::function<bool(const Point&)>& pred) const {
  double m = 0.0;
  for_each_cell([&](const Point& p, double vol) {
    if (pred(p)) m += vol;
  });
  return m;
}

}  // namespace drlab
