#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "drlab/evaluable.hpp"
#include "drlab/quadrature.hpp"
#include "drlab/rng.hpp"
#include "drlab/summation.hpp"

using namespace drlab;

TEST_CASE("counter rng is pure in (seed, stream, counter)") {
  CounterRng a(42, 7);
  CounterRng b(42, 7);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());
  CHECK(a.unit_at(12) == b.unit_at(12));
  CHECK(CounterRng(42, 7).u64_at(3) != CounterRng(42, 8).u64_at(3));
  CHECK(CounterRng(42, 7).u64_at(3) != CounterRng(43, 7).u64_at(3));
}

TEST_CASE("counter rng units live in [0,1) and look uniform") {
  CounterRng rng(123, 0);
  double sum = 0.0;
  const int n = 100000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.next_unit();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::abs(sum / n - 0.5) < 0.005);  // ~5 sigma band
}

TEST_CASE("piecewise constant evaluation and breaks") {
  Evaluable f = piecewise_constant(4, {1.0, 2.0, 3.0, 4.0});
  CHECK(f(point1(0.1)) == 1.0);
  CHECK(f(point1(0.26)) == 2.0);
  CHECK(f(point1(0.99)) == 4.0);
  CHECK(f.breaks[0].size() == 5);
}

TEST_CASE("piecewise linear interpolation") {
  Evaluable f = piecewise_linear({0.0, 0.5, 1.0}, {0.0, 1.0, 0.0});
  CHECK(f(point1(0.25)) == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(f(point1(0.5)) == doctest::Approx(1.0));
  CHECK(f(point1(1.0)) == doctest::Approx(0.0));
}

TEST_CASE("quadrature integrates piecewise-constant functions exactly") {
  Quadrature q = Quadrature::uniform(1, 1 << 10);
  Evaluable f = piecewise_constant(64, std::vector<double>(64, 2.5));
  CHECK(q.integrate(f.fn) == doctest::Approx(2.5).epsilon(1e-14));

  // linear function: midpoint rule is exact per cell
  CHECK(q.integrate([](const Point& x) { return x[0]; }) == doctest::Approx(0.5).epsilon(1e-13));
}

TEST_CASE("quadrature break injection makes non-dyadic piecewise functions exact") {
  Quadrature q = Quadrature::uniform(1, 8);
  const double cut = 0.3137513;
  Evaluable f = analytic([cut](const Point& x) { return x[0] < cut ? 1.0 : 3.0; });
  f.breaks[0] = {cut};
  Quadrature fine = q.refined_with({&f});
  CHECK(fine.integrate(f.fn) == doctest::Approx(cut + 3.0 * (1.0 - cut)).epsilon(1e-14));
}

TEST_CASE("integrate_box clips exactly") {
  Quadrature q = Quadrature::uniform(1, 16);
  Box b = Box::unit(1);
  b.lo[0] = 0.25;
  b.hi[0] = 0.75;
  CHECK(q.integrate_box([](const Point&) { return 1.0; }, b) == doctest::Approx(0.5).epsilon(1e-14));
  Box odd = Box::unit(1);
  odd.lo[0] = 0.1234567;
  odd.hi[0] = 0.7654321;
  CHECK(q.integrate_box([](const Point&) { return 2.0; }, odd) ==
        doctest::Approx(2.0 * (0.7654321 - 0.1234567)).epsilon(1e-13));
}

TEST_CASE("2d quadrature tensor rule") {
  Quadrature q = Quadrature::uniform(2, 32);
  CHECK(q.integrate([](const Point& x) { return x[0] * x[1]; }) ==
        doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("checkerboard has mean zero and unit square") {
  Quadrature q = Quadrature::uniform(1, 1 << 10);
  Evaluable cb = checkerboard(1, 64);
  CHECK(std::abs(q.integrate(cb.fn)) < 1e-14);
  CHECK(q.integrate([&](const Point& x) { return cb(x) * cb(x); }) ==
        doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("pairwise sum matches naive on benign input") {
  std::vector<double> xs(1000);
  for (std::size_t i = 0; i < xs.size(); ++i) xs[i] = 1.0 / (1.0 + static_cast<double>(i));
  double naive = 0.0;
  for (double x : xs) naive += x;
  CHECK(pairwise_sum(xs) == doctest::Approx(naive).epsilon(1e-12));
}
