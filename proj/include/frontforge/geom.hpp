#pragma once

// 3-vector kernel plus the few small dense solves the pipeline needs.

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

namespace frontforge::geom {

struct Vec3 {
  double x = 0, y = 0, z = 0;

  Vec3() = default;
  Vec3(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}

  Vec3 operator+(const Vec3& o) const { return {x + o.x, y + o.y, z + o.z}; }
  Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
  Vec3 operator-() const { return {-x, -y, -z}; }
  Vec3 operator*(double s) const { return {x * s, y * s, z * s}; }
  Vec3 operator/(double s) const { return {x / s, y / s, z / s}; }
  Vec3& operator+=(const Vec3& o) { x += o.x; y += o.y; z += o.z; return *this; }
  Vec3& operator-=(const Vec3& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
  Vec3& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }
};

inline Vec3 operator*(double s, const Vec3& a) { return a * s; }

inline double dot(const Vec3& a, const Vec3& b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

inline Vec3 normalized(const Vec3& a) { return a / norm(a); }

// det with a, b, c as columns
inline double det3(const Vec3& a, const Vec3& b, const Vec3& c) { return dot(a, cross(b, c)); }

inline double max_abs(const Vec3& a) {
  return std::max({std::abs(a.x), std::abs(a.y), std::abs(a.z)});
}

struct UV {
  double u = 0, v = 0;

  UV() = default;
  UV(double u_, double v_) : u(u_), v(v_) {}

  UV operator+(const UV& o) const { return {u + o.u, v + o.v}; }
  UV operator-(const UV& o) const { return {u - o.u, v - o.v}; }
  UV operator-() const { return {-u, -v}; }
  UV operator*(double s) const { return {u * s, v * s}; }
};

inline UV operator*(double s, const UV& a) { return a * s; }
inline double dot(const UV& a, const UV& b) { return a.u * b.u + a.v * b.v; }
inline double norm(const UV& a) { return std::sqrt(dot(a, a)); }
inline UV normalized(const UV& a) { return a * (1.0 / norm(a)); }
inline double det2(const UV& a, const UV& b) { return a.u * b.v - a.v * b.u; }
// quarter turn, counterclockwise
inline UV rot90(const UV& a) { return {-a.v, a.u}; }

// Eigenpair of the symmetric matrix [[a,b],[b,c]] for the smaller eigenvalue.
struct SymEig2 {
  double lambda_min = 0, lambda_max = 0;
  UV kernel_dir;  // unit eigenvector for lambda_min
};

inline SymEig2 sym_eig2(double a, double b, double c) {
  SymEig2 r;
  const double tr = a + c;
  const double disc = std::sqrt((a - c) * (a - c) + 4 * b * b);
  r.lambda_min = 0.5 * (tr - disc);
  r.lambda_max = 0.5 * (tr + disc);
  UV e1{b, r.lambda_min - a}, e2{r.lambda_min - c, b};
  UV e = norm(e1) >= norm(e2) ? e1 : e2;
  const double n = norm(e);
  r.kernel_dir = n > 0 ? e * (1.0 / n) : UV{0, 1};
  return r;
}

// Singular values of the 3x2 matrix [p q] and the right singular vector for
// the smaller one (the near-null direction in the domain).
struct Svd32 {
  double sigma1 = 0, sigma2 = 0;
  UV null_dir;
};

inline Svd32 svd32(const Vec3& p, const Vec3& q) {
  const SymEig2 e = sym_eig2(dot(p, p), dot(p, q), dot(q, q));
  Svd32 r;
  r.sigma1 = std::sqrt(std::max(0.0, e.lambda_max));
  r.sigma2 = std::sqrt(std::max(0.0, e.lambda_min));
  r.null_dir = e.kernel_dir;
  return r;
}

// Least-squares polynomial fit y ~ sum c_k x^k, returning the coefficients.
inline std::vector<double> polyfit(const std::vector<double>& x, const std::vector<double>& y,
                                   int degree) {
  if (x.size() != y.size() || static_cast<int>(x.size()) < degree + 1)
    throw std::invalid_argument("polyfit: not enough samples");
  Eigen::MatrixXd A(x.size(), degree + 1);
  Eigen::VectorXd b(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    double p = 1;
    for (int k = 0; k <= degree; ++k) {
      A(i, k) = p;
      p *= x[i];
    }
    b(i) = y[i];
  }
  Eigen::VectorXd c = A.householderQr().solve(b);
  return {c.data(), c.data() + c.size()};
}

}  // namespace frontforge::geom
