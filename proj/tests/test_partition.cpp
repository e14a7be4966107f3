#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "drlab/errors.hpp"
#include "drlab/partition.hpp"
#include "drlab/rng.hpp"

using namespace drlab;

namespace {

// Closed-form integral of a piecewise-linear interpolant over [a, b];
// independent oracle for the split/balance checks.
double pl_integral(const std::vector<double>& ks, const std::vector<double>& vs, double a,
                   double b) {
  double acc = 0.0;
  const auto value = [&](double x) {
    std::size_t hi = 1;
    while (hi + 1 < ks.size() && ks[hi] < x) ++hi;
    const double t = (x - ks[hi - 1]) / (ks[hi] - ks[hi - 1]);
    return vs[hi - 1] + t * (vs[hi] - vs[hi - 1]);
  };
  for (std::size_t i = 0; i + 1 < ks.size(); ++i) {
    const double lo = std::max(a, ks[i]);
    const double hi = std::min(b, ks[i + 1]);
    if (hi <= lo) continue;
    acc += 0.5 * (value(lo) + value(hi)) * (hi - lo);
  }
  return acc;
}

double collection_pl_integral(const RectCollection& s, const std::vector<double>& ks,
                              const std::vector<double>& vs) {
  double acc = 0.0;
  for (const Box& b : s.boxes) acc += pl_integral(ks, vs, b.lo[0], b.hi[0]);
  return acc;
}

// Exact integral over [a, b] of w(x)^2 1{w(x) > thr} for piecewise-linear w
// (the partition's balance target).
double pl_trunc_sq_integral(const std::vector<double>& ks, const std::vector<double>& vs,
                            double thr, double a, double b) {
  const auto cubic = [](double v0, double v1, double len) {
    // integral of (v0 + (v1 - v0) t / len)^2 over [0, len]
    return len * (v0 * v0 + v0 * (v1 - v0) + (v1 - v0) * (v1 - v0) / 3.0);
  };
  double acc = 0.0;
  for (std::size_t i = 0; i + 1 < ks.size(); ++i) {
    double lo = std::max(a, ks[i]);
    double hi = std::min(b, ks[i + 1]);
    if (hi <= lo) continue;
    const double slope = (vs[i + 1] - vs[i]) / (ks[i + 1] - ks[i]);
    const auto w_at = [&](double x) { return vs[i] + slope * (x - ks[i]); };
    // at most one crossing of the threshold inside a linear piece
    double wlo = w_at(lo);
    double whi = w_at(hi);
    if (wlo <= thr && whi <= thr) continue;
    if (wlo > thr && whi > thr) {
      acc += cubic(wlo, whi, hi - lo);
      continue;
    }
    const double xc = ks[i] + (thr - vs[i]) / slope;
    if (wlo > thr) {
      acc += cubic(wlo, thr, xc - lo);
    } else {
      acc += cubic(thr, whi, hi - xc);
    }
  }
  return acc;
}

}  // namespace

TEST_CASE("truncate_weight") {
  const Quadrature q = Quadrature::default_for(1);
  const Evaluable one = constant_fn(1.0);
  CHECK(truncate_weight(one, q)(point1(0.3)) == 1.0);

  const Evaluable ramp = analytic([](const Point& x) { return x[0]; });
  const Evaluable t = truncate_weight(ramp, q);
  CHECK(t(point1(0.4)) == 0.0);  // threshold ~0.5
  CHECK(t(point1(0.8)) == doctest::Approx(0.8));
  CounterRng rng(1, 0);
  for (int i = 0; i < 1000; ++i) {
    const Point x = point1(rng.next_unit());
    CHECK(t(x) <= ramp(x) + 1e-15);
    const double v = t(x);
    CHECK((v == 0.0 || v > 0.5 * 0.9989));  // in {0} U (sup/2, sup]
  }
}

TEST_CASE("split_half: constant weight accepts alpha = 0, left half first") {
  const Quadrature q = Quadrature::default_for(1);
  auto [s1, s2] = split_half(RectCollection::unit(1), constant_fn(1.0), 1e-12, q);
  REQUIRE(s1.boxes.size() == 1);
  CHECK(s1.boxes[0].lo[0] == doctest::Approx(0.0));
  CHECK(s1.boxes[0].hi[0] == doctest::Approx(0.5));
  CHECK(s1.measure() == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(s2.measure() == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("split_half: w(x) = x solves alpha = 1/2, window [0.25, 0.75]") {
  const Quadrature q = Quadrature::default_for(1);
  const Evaluable w = analytic([](const Point& x) { return x[0]; });
  auto [s1, s2] = split_half(RectCollection::unit(1), w, 1e-12, q);
  REQUIRE(s1.boxes.size() == 1);
  CHECK(s1.boxes[0].lo[0] == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(s1.boxes[0].hi[0] == doctest::Approx(0.75).epsilon(1e-9));
  double i1 = 0.0;
  for (const Box& b : s1.boxes) i1 += q.integrate_box(w.fn, b);
  CHECK(i1 == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("split_half: zero weight is a precondition error") {
  const Quadrature q = Quadrature::default_for(1);
  CHECK_THROWS_AS(split_half(RectCollection::unit(1), constant_fn(0.0), 1e-12, q),
                  std::invalid_argument);
}

TEST_CASE("build_partition: uniform weight gives dyadic intervals") {
  const Quadrature q = Quadrature::default_for(1);
  const Partition p = build_partition(constant_fn(1.0), 2, 1e-12, q);
  REQUIRE(p.size() == 4);
  for (int j = 0; j < 4; ++j) {
    CHECK(p.cell(j).measure() == doctest::Approx(0.25).epsilon(1e-14));
  }
  // left-to-right leaf order
  CHECK(p.cell_of(point1(0.1)) == 0);
  CHECK(p.cell_of(point1(0.3)) == 1);
  CHECK(p.cell_of(point1(0.6)) == 2);
  CHECK(p.cell_of(point1(0.9)) == 3);
}

TEST_CASE("build_partition: one level of w(x) = x matches the split example") {
  const Quadrature q = Quadrature::default_for(1);
  const Evaluable w = analytic([](const Point& x) { return x[0]; });
  // balance weight is trunc(w)^2 = x^2 1{x > 1/2}; psi equation solved by bisection
  const Partition p = build_partition(w, 1, 1e-13, q);
  REQUIRE(p.size() == 2);
  CHECK(p.cell(0).measure() == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(p.balance_residual() < 1e-9);
}

TEST_CASE("build_partition balances integral w * w_trunc across cells (m=4)") {
  // closed-form piecewise-quadratic oracle for the balanced integral
  Quadrature q = Quadrature::default_for(1);
  CounterRng rng(2025, 0);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> ks{0.0, 0.21, 0.43, 0.68, 0.85, 1.0};
    std::vector<double> vs;
    for (std::size_t i = 0; i < ks.size(); ++i) vs.push_back(0.2 + 1.8 * rng.next_unit());
    Evaluable w = piecewise_linear(ks, vs);
    const Partition p = build_partition(w, 4, 1e-13, q);
    REQUIRE(p.size() == 16);
    CHECK(p.balance_residual() <= 1e-9);

    double sup = 0.0;
    for (double v : vs) sup = std::max(sup, std::abs(v));
    const double thr = 0.5 * sup;
    const double total = pl_trunc_sq_integral(ks, vs, thr, 0.0, 1.0);
    for (int j = 0; j < p.size(); ++j) {
      CHECK(p.cell(j).measure() == doctest::Approx(1.0 / 16).epsilon(1e-12));
      double cell_int = 0.0;
      for (const Box& b : p.cell(j).boxes) {
        cell_int += pl_trunc_sq_integral(ks, vs, thr, b.lo[0], b.hi[0]);
      }
      CHECK(std::abs(cell_int - total / 16.0) <= 1e-9);
    }
  }
}

TEST_CASE("property: random piecewise-linear weights split into exact halves") {
  // both halves have measure 1/2 +- 1e-9 and carry half the weighted integral,
  // checked with the closed-form piecewise-linear oracle
  const Quadrature q = Quadrature::default_for(1);
  CounterRng rng(99, 0);
  for (int trial = 0; trial < 50; ++trial) {
    const int segments = 3 + static_cast<int>(rng.next_unit() * 5);
    std::vector<double> ks{0.0};
    for (int i = 1; i < segments; ++i) {
      ks.push_back(ks.back() + rng.next_unit());
    }
    ks.push_back(ks.back() + 0.3 + rng.next_unit());
    for (double& k : ks) k /= ks.back();
    ks.back() = 1.0;
    std::vector<double> vs;
    for (std::size_t i = 0; i < ks.size(); ++i) vs.push_back(2.0 * rng.next_unit());
    if (pl_integral(ks, vs, 0.0, 1.0) <= 1e-6) continue;

    Evaluable w = piecewise_linear(ks, vs);
    Quadrature fine = q.refined_with({&w});
    auto [s1, s2] = split_half(RectCollection::unit(1), w, 1e-12, fine);

    CHECK(std::abs(s1.measure() - 0.5) <= 1e-9);
    CHECK(std::abs(s2.measure() - 0.5) <= 1e-9);
    const double total = pl_integral(ks, vs, 0.0, 1.0);
    CHECK(std::abs(collection_pl_integral(s1, ks, vs) - 0.5 * total) <= 1e-9);
    CHECK(std::abs(collection_pl_integral(s2, ks, vs) - 0.5 * total) <= 1e-9);
  }
}

TEST_CASE("build_partition flips sign when w is mostly negative") {
  const Quadrature q = Quadrature::default_for(1);
  const Evaluable w = analytic([](const Point& x) { return -1.0 - x[0]; });
  const Partition p = build_partition(w, 2, 1e-12, q);
  CHECK(p.negated());
  CHECK(p.size() == 4);
  for (int j = 0; j < 4; ++j) {
    CHECK(p.cell(j).measure() == doctest::Approx(0.25).epsilon(1e-12));
  }
}

TEST_CASE("split_half in K = 2 cuts the last axis only") {
  const Quadrature q = Quadrature::uniform(2, 32);
  const Evaluable w = analytic([](const Point& x) { return 0.5 + x[0] * x[1]; });
  auto [s1, s2] = split_half(RectCollection::unit(2), w, 1e-10, q);
  CHECK(std::abs(s1.measure() - 0.5) < 1e-12);
  for (const Box& b : s1.boxes) {
    CHECK(b.lo[0] == 0.0);
    CHECK(b.hi[0] == 1.0);
  }
  CHECK(s2.measure() == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("bump sign bookkeeping for M = 4, lambda = (+1, -1)") {
  const Quadrature q = Quadrature::default_for(1);
  const Partition p = build_partition(constant_fn(1.0), 2, 1e-12, q);
  RademacherAssignment asg;
  asg.signs = {+1, -1};
  CHECK(bump(asg, p, point1(0.1)) == -1);   // B1
  CHECK(bump(asg, p, point1(0.3)) == +1);   // B2
  CHECK(bump(asg, p, point1(0.6)) == +1);   // B3: -lambda_2 = +1
  CHECK(bump(asg, p, point1(0.9)) == -1);   // B4: +lambda_2 = -1
}

TEST_CASE("bump: averaging the two signs is exactly zero, square is one") {
  const Quadrature q = Quadrature::default_for(1);
  const Evaluable w = analytic([](const Point& x) { return 0.3 + x[0]; });
  const Partition p = build_partition(w, 3, 1e-12, q);
  CounterRng rng(11, 0);
  for (int i = 0; i < 10000; ++i) {
    const Point x = point1(rng.next_unit());
    const int cell = p.cell_of(x);
    const std::size_t pair = static_cast<std::size_t>(cell / 2);
    int sum = 0;
    for (int s : {-1, +1}) {
      RademacherAssignment asg;
      asg.signs.assign(static_cast<std::size_t>(p.size() / 2), +1);
      asg.signs[pair] = s;
      const int d = bump(asg, p, x);
      CHECK(d * d == 1);
      sum += d;
    }
    CHECK(sum == 0);
  }
}

TEST_CASE("boundary points go to the lowest-index adjacent cell") {
  const Partition p = dyadic_partition(1, 2);
  CHECK(p.cell_of(point1(0.5)) == 1);
  CHECK(p.cell_of(point1(0.25)) == 0);
  CHECK(p.cell_of(point1(1.0)) == 3);
  CHECK(p.cell_of(point1(0.0)) == 0);
}

TEST_CASE("sample_assignment is deterministic and +/-1 valued") {
  const RademacherAssignment a = sample_assignment(64, 5, 3);
  const RademacherAssignment b = sample_assignment(64, 5, 3);
  REQUIRE(a.signs.size() == 32);
  CHECK(a.signs == b.signs);
  for (int s : a.signs) CHECK((s == 1 || s == -1));
}
