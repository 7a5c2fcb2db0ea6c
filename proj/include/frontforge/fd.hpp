#pragma once

// Central finite-difference stencils: 4th order for derivative orders 1-2,
// 2nd order for order 3.

#include <array>
#include <cmath>
#include <functional>
#include <stdexcept>

namespace frontforge::geom {

struct Stencil {
  int radius;
  std::array<double, 5> w;  // weights for offsets -radius..radius (radius <= 2)
};

// weights are per 1/h^order
inline Stencil fd_stencil(int order) {
  switch (order) {
    case 0: return {0, {1, 0, 0, 0, 0}};
    case 1: return {2, {1.0 / 12, -8.0 / 12, 0, 8.0 / 12, -1.0 / 12}};
    case 2: return {2, {-1.0 / 12, 16.0 / 12, -30.0 / 12, 16.0 / 12, -1.0 / 12}};
    case 3: return {2, {-0.5, 1.0, 0, -1.0, 0.5}};
    default: throw std::invalid_argument("fd_stencil: order must be 0..3");
  }
}

// d^order/dx^order of f at 0, sampling f(k*h)
inline double fd_derivative(const std::function<double(int)>& sample_at, int order, double h) {
  const Stencil s = fd_stencil(order);
  double acc = 0;
  for (int k = -s.radius; k <= s.radius; ++k) {
    const double w = s.w[k + s.radius];
    if (w != 0) acc += w * sample_at(k);
  }
  return acc / std::pow(h, order);
}

// same, sampling a callable of a real offset
inline double fd_derivative_of(const std::function<double(double)>& f, double x0, int order,
                               double h) {
  return fd_derivative([&](int k) { return f(x0 + k * h); }, order, h);
}

}  // namespace frontforge::geom
