#pragma once

#include <cstdint>
#include <vector>

#include "drlab/evaluable.hpp"
#include "drlab/quadrature.hpp"

namespace drlab {

enum class Representation { analytic, piecewise };

// Propensity m and outcome regression g(d, .) on [0,1]^K, with the overlap
// constant c of the model they belong to. Values are immutable; instances are
// safe to share across threads.
struct NuisancePair {
  int dim = 1;
  double c = 0.1;
  Representation rep = Representation::analytic;
  Evaluable m;
  Evaluable g0;
  Evaluable g1;

  double g(int d, const Point& x) const { return d ? g1(x) : g0(x); }
};

struct DataRow {
  Point x;
  std::uint8_t d = 0;
  std::uint8_t y = 0;
};

struct Dataset {
  std::vector<DataRow> rows;
  std::uint64_t seed = 0;
};

enum class FunctionalKind { wate, att };

struct FunctionalSpec {
  FunctionalKind kind = FunctionalKind::wate;
  Evaluable w;  // present iff kind == wate
};

// X ~ Uniform[0,1]^K, D|X ~ Bernoulli(m(X)), Y|D,X ~ Bernoulli(g(D,X)).
// Draws are addressed by (seed, stream, row, slot) counters, so the same
// arguments reproduce the same dataset bit for bit.
Dataset sample_dataset(const NuisancePair& pair, std::size_t n, std::uint64_t seed,
                       std::uint64_t stream = 0);

// Joint density of (X, D, Y) against Lebesgue x counting measure:
// m(x)^d (1-m(x))^(1-d) g(d,x)^y (1-g(d,x))^(1-y).
double density(const NuisancePair& pair, const Point& x, int d, int y);

// E[w(X) (g(1,X) - g(0,X))].
double true_wate(const NuisancePair& pair, const Evaluable& w, const Quadrature& quad);

// E[(g(1,X) - g(0,X)) m(X)] / E[m(X)].
double true_att(const NuisancePair& pair, const Quadrature& quad);

double true_functional(const NuisancePair& pair, const FunctionalSpec& spec,
                       const Quadrature& quad);

// Throws ConstructionInvalid if m or g leaves [0,1] on the grid; when
// `bounded`, additionally requires values in [c, 1-c].
void validate_range(const NuisancePair& pair, const Quadrature& quad, bool bounded = false);

}  // namespace drlab
