#pragma once

#include <array>
#include <cmath>
#include <complex>

namespace harmsurf {

/// Small fixed-size 3-vector over a real or complex scalar.
template <typename T>
struct Vec3T {
  std::array<T, 3> e{};

  constexpr Vec3T() = default;
  constexpr Vec3T(T x, T y, T z) : e{x, y, z} {}

  constexpr T& operator[](std::size_t i) { return e[i]; }
  constexpr const T& operator[](std::size_t i) const { return e[i]; }

  Vec3T& operator+=(const Vec3T& o) {
    for (int i = 0; i < 3; ++i) e[i] += o.e[i];
    return *this;
  }
  Vec3T& operator-=(const Vec3T& o) {
    for (int i = 0; i < 3; ++i) e[i] -= o.e[i];
    return *this;
  }
  Vec3T& operator*=(T s) {
    for (auto& x : e) x *= s;
    return *this;
  }

  friend Vec3T operator+(Vec3T a, const Vec3T& b) { return a += b; }
  friend Vec3T operator-(Vec3T a, const Vec3T& b) { return a -= b; }
  friend Vec3T operator*(Vec3T a, T s) { return a *= s; }
  friend Vec3T operator*(T s, Vec3T a) { return a *= s; }
  friend Vec3T operator/(Vec3T a, T s) { return a *= (T(1) / s); }
  friend Vec3T operator-(Vec3T a) { return a *= T(-1); }
  friend bool operator==(const Vec3T&, const Vec3T&) = default;
};

using Vec3 = Vec3T<double>;
using CVec3 = Vec3T<std::complex<double>>;

/// Euclidean inner product on reals, complex-bilinear (no conjugation) on complex.
template <typename T>
T dot(const Vec3T<T>& a, const Vec3T<T>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

inline std::complex<double> dot(const CVec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

template <typename T>
Vec3T<T> cross(const Vec3T<T>& a, const Vec3T<T>& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

inline double norm(const Vec3& a) { return std::hypot(a[0], a[1], a[2]); }
inline double norm2(const Vec3& a) { return dot(a, a); }
inline Vec3 normalized(const Vec3& a) { return a / norm(a); }

inline Vec3 real(const CVec3& a) { return {a[0].real(), a[1].real(), a[2].real()}; }
inline Vec3 imag(const CVec3& a) { return {a[0].imag(), a[1].imag(), a[2].imag()}; }

inline double max_abs_diff(const Vec3& a, const Vec3& b) {
  return std::fmax(std::fabs(a[0] - b[0]), std::fmax(std::fabs(a[1] - b[1]), std::fabs(a[2] - b[2])));
}

}  // namespace harmsurf
