#pragma once

#include <array>
#include <cmath>
#include <cstddef>

// Small fixed-size math types used by the element kernels: 3-vectors and
// symmetric 2x2 metrics templated on the scalar, plus a forward-mode dual
// number carrying N derivative lanes.

namespace pwf {

template <int N>
struct Dual {
  double v = 0.0;
  std::array<double, N> d{};

  Dual() = default;
  Dual(double value) : v(value) {}
  static Dual seeded(double value, int lane) {
    Dual x(value);
    x.d[lane] = 1.0;
    return x;
  }

  Dual operator-() const {
    Dual r;
    r.v = -v;
    for (int i = 0; i < N; ++i) r.d[i] = -d[i];
    return r;
  }
  Dual& operator+=(const Dual& o) {
    v += o.v;
    for (int i = 0; i < N; ++i) d[i] += o.d[i];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    v -= o.v;
    for (int i = 0; i < N; ++i) d[i] -= o.d[i];
    return *this;
  }
  Dual& operator*=(const Dual& o) { return *this = *this * o; }

  friend Dual operator+(Dual a, const Dual& b) { return a += b; }
  friend Dual operator-(Dual a, const Dual& b) { return a -= b; }
  friend Dual operator*(const Dual& a, const Dual& b) {
    Dual r;
    r.v = a.v * b.v;
    for (int i = 0; i < N; ++i) r.d[i] = a.d[i] * b.v + a.v * b.d[i];
    return r;
  }
  friend Dual operator*(double a, const Dual& b) {
    Dual r;
    r.v = a * b.v;
    for (int i = 0; i < N; ++i) r.d[i] = a * b.d[i];
    return r;
  }
  friend Dual operator*(const Dual& a, double b) { return b * a; }
  friend Dual operator/(const Dual& a, const Dual& b) {
    Dual r;
    const double inv = 1.0 / b.v;
    r.v = a.v * inv;
    for (int i = 0; i < N; ++i) r.d[i] = (a.d[i] - r.v * b.d[i]) * inv;
    return r;
  }
  friend Dual operator/(const Dual& a, double b) { return a * (1.0 / b); }
};

template <int N>
inline Dual<N> sqrt(const Dual<N>& a) {
  Dual<N> r;
  r.v = std::sqrt(a.v);
  const double s = 0.5 / r.v;
  for (int i = 0; i < N; ++i) r.d[i] = s * a.d[i];
  return r;
}

// a^q for a > 0; chain rule through the real exponent.
template <int N>
inline Dual<N> pow(const Dual<N>& a, double q) {
  Dual<N> r;
  r.v = std::pow(a.v, q);
  const double s = q * std::pow(a.v, q - 1.0);
  for (int i = 0; i < N; ++i) r.d[i] = s * a.d[i];
  return r;
}

inline double value(double x) { return x; }
template <int N>
inline double value(const Dual<N>& x) {
  return x.v;
}

using std::pow;
using std::sqrt;

template <class T>
struct Vec3 {
  T x{}, y{}, z{};

  Vec3() = default;
  Vec3(T a, T b, T c) : x(a), y(b), z(c) {}

  T& operator[](int i) { return i == 0 ? x : (i == 1 ? y : z); }
  const T& operator[](int i) const { return i == 0 ? x : (i == 1 ? y : z); }

  Vec3 operator-() const { return {-x, -y, -z}; }
  friend Vec3 operator+(const Vec3& a, const Vec3& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
  friend Vec3 operator-(const Vec3& a, const Vec3& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
  template <class S>
  friend Vec3 operator*(const S& s, const Vec3& a) {
    return {s * a.x, s * a.y, s * a.z};
  }
  friend Vec3 operator*(const Vec3& a, double s) { return {a.x * s, a.y * s, a.z * s}; }
  friend Vec3 operator/(const Vec3& a, double s) { return {a.x / s, a.y / s, a.z / s}; }
  Vec3& operator+=(const Vec3& o) {
    x += o.x;
    y += o.y;
    z += o.z;
    return *this;
  }
  Vec3& operator-=(const Vec3& o) {
    x -= o.x;
    y -= o.y;
    z -= o.z;
    return *this;
  }
};

using Vec3d = Vec3<double>;

template <class T>
inline T dot(const Vec3<T>& a, const Vec3<T>& b) {
  return a.x * b.x + a.y * b.y + a.z * b.z;
}

template <class T>
inline Vec3<T> cross(const Vec3<T>& a, const Vec3<T>& b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

template <class T>
inline T norm2(const Vec3<T>& a) {
  return dot(a, a);
}

template <class T>
inline T norm(const Vec3<T>& a) {
  return sqrt(norm2(a));
}

template <class T>
inline Vec3<T> to_vec(const Vec3d& a) {
  return {T(a.x), T(a.y), T(a.z)};
}

// Symmetric 2x2 metric.
template <class T>
struct Met2 {
  T a11{}, a12{}, a22{};
  T det() const { return a11 * a22 - a12 * a12; }
  Met2 inverse() const {
    const T idet = T(1.0) / det();
    return {a22 * idet, -a12 * idet, a11 * idet};
  }
};

using Met2d = Met2<double>;

}  // namespace pwf
