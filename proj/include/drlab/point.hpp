#pragma once

#include <array>

namespace drlab {

inline constexpr int kMaxDim = 3;

// Point in [0,1]^K for K <= kMaxDim. Coordinates beyond the active dimension
// stay zero and are ignored by every consumer.
struct Point {
  std::array<double, kMaxDim> v{};

  double operator[](int i) const { return v[static_cast<std::size_t>(i)]; }
  double& operator[](int i) { return v[static_cast<std::size_t>(i)]; }
};

inline Point point1(double x) { return Point{{x, 0.0, 0.0}}; }
inline Point point2(double x, double y) { return Point{{x, y, 0.0}}; }

// Axis-aligned box inside [0,1]^K.
struct Box {
  std::array<double, kMaxDim> lo{};
  std::array<double, kMaxDim> hi{};
  int dim = 1;

  static Box unit(int k) {
    Box b;
    b.dim = k;
    for (int a = 0; a < k; ++a) {
      b.lo[static_cast<std::size_t>(a)] = 0.0;
      b.hi[static_cast<std::size_t>(a)] = 1.0;
    }
    return b;
  }

  double volume() const {
    double v = 1.0;
    for (int a = 0; a < dim; ++a) {
      v *= hi[static_cast<std::size_t>(a)] - lo[static_cast<std::size_t>(a)];
    }
    return v;
  }

  bool empty() const {
    for (int a = 0; a < dim; ++a) {
      if (hi[static_cast<std::size_t>(a)] <= lo[static_cast<std::size_t>(a)]) return true;
    }
    return false;
  }
};

}  // namespace drlab
