#include "drlab/model.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include "drlab/errors.hpp"
#include "drlab/rng.hpp"

namespace drlab {

namespace {

double checked_prob(double p, const char* what, const Point& x) {
  if (!(p >= 0.0 && p <= 1.0)) {
    std::ostringstream os;
    os << what << " = " << p << " outside [0,1] at x = (" << x[0] << ", " << x[1] << ", "
       << x[2] << ")";
    throw ConstructionInvalid(os.str());
  }
  return p;
}

}  // namespace

Dataset sample_dataset(const NuisancePair& pair, std::size_t n, std::uint64_t seed,
                       std::uint64_t stream) {
  if (n < 1) throw std::invalid_argument("sample_dataset: n must be >= 1");
  const CounterRng rng(seed, stream);
  const std::uint64_t slots = static_cast<std::uint64_t>(pair.dim) + 2;

  Dataset out;
  out.seed = seed;
  out.rows.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t base = static_cast<std::uint64_t>(i) * slots;
    DataRow& row = out.rows[i];
    for (int a = 0; a < pair.dim; ++a) {
      row.x[a] = rng.unit_at(base + static_cast<std::uint64_t>(a));
    }
    const double pm = checked_prob(pair.m(row.x), "m(x)", row.x);
    row.d = rng.unit_at(base + static_cast<std::uint64_t>(pair.dim)) < pm ? 1 : 0;
    const double pg = checked_prob(pair.g(row.d, row.x), "g(d,x)", row.x);
    row.y = rng.unit_at(base + static_cast<std::uint64_t>(pair.dim) + 1) < pg ? 1 : 0;
  }
  return out;
}

double density(const NuisancePair& pair, const Point& x, int d, int y) {
  const double m = pair.m(x);
  const double g = pair.g(d, x);
  const double pd = d ? m : 1.0 - m;
  const double py = y ? g : 1.0 - g;
  return pd * py;
}

double true_wate(const NuisancePair& pair, const Evaluable& w, const Quadrature& quad) {
  if (quad.cell_count() == 0) throw std::invalid_argument("true_wate: empty quadrature");
  return quad.integrate(
      [&](const Point& x) { return w(x) * (pair.g1(x) - pair.g0(x)); });
}

double true_att(const NuisancePair& pair, const Quadrature& quad) {
  const double denom = quad.integrate([&](const Point& x) { return pair.m(x); });
  if (denom < 1e-12) {
    throw DegeneratePropensity("true_att: E[m(X)] below 1e-12");
  }
  const double num =
      quad.integrate([&](const Point& x) { return (pair.g1(x) - pair.g0(x)) * pair.m(x); });
  return num / denom;
}

double true_functional(const NuisancePair& pair, const FunctionalSpec& spec,
                       const Quadrature& quad) {
  return spec.kind == FunctionalKind::wate ? true_wate(pair, spec.w, quad)
                                           : true_att(pair, quad);
}

void validate_range(const NuisancePair& pair, const Quadrature& quad, bool bounded) {
  const double lo = bounded ? pair.c : 0.0;
  const double hi = bounded ? 1.0 - pair.c : 1.0;
  quad.for_each_cell([&](const Point& x, double) {
    const double vals[3] = {pair.m(x), pair.g0(x), pair.g1(x)};
    static const char* names[3] = {"m", "g(0,.)", "g(1,.)"};
    for (int i = 0; i < 3; ++i) {
      if (vals[i] < lo - 1e-12 || vals[i] > hi + 1e-12) {
        std::ostringstream os;
        os << names[i] << " = " << vals[i] << " outside [" << lo << ", " << hi << "] at x = ("
           << x[0] << ", " << x[1] << ", " << x[2] << ")";
        throw ConstructionInvalid(os.str());
      }
    }
  });
}

}  // namespace drlab
