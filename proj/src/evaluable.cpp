#include "drlab/evaluable.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace drlab {

namespace {

std::vector<double> grid_cuts(int cells) {
  std::vector<double> cuts;
  cuts.reserve(static_cast<std::size_t>(cells) + 1);
  for (int i = 0; i <= cells; ++i) {
    cuts.push_back(static_cast<double>(i) / cells);
  }
  return cuts;
}

int cell_index(double x, int cells) {
  int i = static_cast<int>(x * cells);
  return std::clamp(i, 0, cells - 1);
}

}  // namespace

Evaluable constant_fn(double v) {
  return Evaluable{[v](const Point&) { return v; }, {}};
}

Evaluable analytic(std::function<double(const Point&)> f) {
  return Evaluable{std::move(f), {}};
}

Evaluable piecewise_constant(int cells, std::vector<double> values) {
  if (cells < 1 || values.size() != static_cast<std::size_t>(cells)) {
    throw std::invalid_argument("piecewise_constant: values must have one entry per cell");
  }
  Evaluable e;
  e.fn = [cells, vals = std::move(values)](const Point& p) {
    return vals[static_cast<std::size_t>(cell_index(p[0], cells))];
  };
  e.breaks[0] = grid_cuts(cells);
  return e;
}

Evaluable piecewise_constant_profile(int cells, const std::function<double(double)>& profile) {
  std::vector<double> vals(static_cast<std::size_t>(cells));
  for (int i = 0; i < cells; ++i) {
    vals[static_cast<std::size_t>(i)] = profile((i + 0.5) / cells);
  }
  return piecewise_constant(cells, std::move(vals));
}

Evaluable piecewise_linear(std::vector<double> knots, std::vector<double> values) {
  if (knots.size() != values.size() || knots.size() < 2) {
    throw std::invalid_argument("piecewise_linear: need matching knots/values, at least two");
  }
  if (knots.front() != 0.0 || knots.back() != 1.0) {
    throw std::invalid_argument("piecewise_linear: knots must span [0,1]");
  }
  Evaluable e;
  e.breaks[0] = knots;
  e.fn = [ks = std::move(knots), vs = std::move(values)](const Point& p) {
    const double x = p[0];
    auto it = std::upper_bound(ks.begin(), ks.end(), x);
    std::size_t hi = std::min(static_cast<std::size_t>(it - ks.begin()), ks.size() - 1);
    if (hi == 0) hi = 1;
    const std::size_t lo = hi - 1;
    const double t = (x - ks[lo]) / (ks[hi] - ks[lo]);
    return vs[lo] + t * (vs[hi] - vs[lo]);
  };
  return e;
}

Evaluable checkerboard(int dim, int cells) {
  Evaluable e;
  e.fn = [dim, cells](const Point& p) {
    int parity = 0;
    for (int a = 0; a < dim; ++a) parity += cell_index(p[a], cells);
    return (parity & 1) ? -1.0 : 1.0;
  };
  for (int a = 0; a < dim; ++a) {
    e.breaks[static_cast<std::size_t>(a)] = grid_cuts(cells);
  }
  return e;
}

Evaluable scale(const Evaluable& f, double a) {
  Evaluable e;
  e.fn = [g = f.fn, a](const Point& p) { return a * g(p); };
  e.breaks = f.breaks;
  return e;
}

Evaluable add(const Evaluable& f, const Evaluable& g) {
  Evaluable e;
  e.fn = [a = f.fn, b = g.fn](const Point& p) { return a(p) + b(p); };
  e.breaks = merge_breaks({&f, &g});
  return e;
}

std::array<std::vector<double>, kMaxDim> merge_breaks(
    std::initializer_list<const Evaluable*> fns) {
  std::array<std::vector<double>, kMaxDim> out{};
  for (std::size_t axis = 0; axis < kMaxDim; ++axis) {
    std::vector<double>& dst = out[axis];
    for (const Evaluable* f : fns) {
      const auto& src = f->breaks[axis];
      dst.insert(dst.end(), src.begin(), src.end());
    }
    std::sort(dst.begin(), dst.end());
    dst.erase(std::unique(dst.begin(), dst.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-15; }),
              dst.end());
  }
  return out;
}

}  // namespace drlab
