#pragma once

/**
 * @file jet.hpp
 * @brief Truncated Taylor jets of holomorphic functions of one complex variable.
 *
 * A `Jet<Order>` carries f(z0), f'(z0), ..., f^(Order)(z0). Internally the
 * normalized Taylor coefficients c_k = f^(k)(z0)/k! are stored, which turns
 * multiplication into a Cauchy product and makes the elementary functions
 * simple linear recurrences. Derivatives are exact up to roundoff; nothing
 * is finite-differenced.
 */

#include <array>
#include <cmath>
#include <complex>
#include <cstddef>

#include "errors.hpp"

namespace harmsurf {

using complex = std::complex<double>;

/// Moduli below this are treated as zero by jet division.
inline constexpr double kDivisionFloor = 1e-300;

template <std::size_t Order>
class Jet {
 public:
  static constexpr std::size_t order = Order;

  constexpr Jet() = default;

  static Jet constant(complex v) {
    Jet j;
    j.c_[0] = v;
    return j;
  }

  /// The identity function seeded at z.
  static Jet variable(complex z) {
    Jet j;
    j.c_[0] = z;
    if constexpr (Order >= 1) j.c_[1] = 1.0;
    return j;
  }

  /// Build from plain derivatives (f, f', f'', ...).
  static Jet from_derivatives(const std::array<complex, Order + 1>& d) {
    Jet j;
    double fact = 1.0;
    for (std::size_t k = 0; k <= Order; ++k) {
      if (k > 0) fact *= static_cast<double>(k);
      j.c_[k] = d[k] / fact;
    }
    return j;
  }

  complex coeff(std::size_t k) const { return c_[k]; }
  complex& coeff(std::size_t k) { return c_[k]; }

  /// k-th complex derivative.
  complex derivative(std::size_t k) const {
    double fact = 1.0;
    for (std::size_t i = 2; i <= k; ++i) fact *= static_cast<double>(i);
    return c_[k] * fact;
  }

  complex v() const { return c_[0]; }
  complex d1() const requires(Order >= 1) { return c_[1]; }
  complex d2() const requires(Order >= 2) { return 2.0 * c_[2]; }

  bool is_finite() const {
    for (const auto& c : c_) {
      if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    }
    return true;
  }

  Jet operator-() const {
    Jet r;
    for (std::size_t k = 0; k <= Order; ++k) r.c_[k] = -c_[k];
    return r;
  }

  Jet& operator+=(const Jet& o) {
    for (std::size_t k = 0; k <= Order; ++k) c_[k] += o.c_[k];
    return *this;
  }
  Jet& operator-=(const Jet& o) {
    for (std::size_t k = 0; k <= Order; ++k) c_[k] -= o.c_[k];
    return *this;
  }
  Jet& operator*=(complex s) {
    for (auto& c : c_) c *= s;
    return *this;
  }

  friend Jet operator+(Jet a, const Jet& b) { return a += b; }
  friend Jet operator-(Jet a, const Jet& b) { return a -= b; }
  friend Jet operator*(Jet a, complex s) { return a *= s; }
  friend Jet operator*(complex s, Jet a) { return a *= s; }
  friend Jet operator+(Jet a, complex s) {
    a.c_[0] += s;
    return a;
  }
  friend Jet operator+(complex s, Jet a) { return a + s; }
  friend Jet operator-(Jet a, complex s) {
    a.c_[0] -= s;
    return a;
  }
  friend Jet operator-(complex s, const Jet& a) { return (-a) + s; }

  friend Jet operator*(const Jet& a, const Jet& b) {
    Jet r;
    for (std::size_t k = 0; k <= Order; ++k) {
      complex s = 0.0;
      for (std::size_t j = 0; j <= k; ++j) s += a.c_[j] * b.c_[k - j];
      r.c_[k] = s;
    }
    return r;
  }

  /// Throws DivisionByZero when |b| underflows kDivisionFloor.
  friend Jet operator/(const Jet& a, const Jet& b) {
    if (std::abs(b.c_[0]) < kDivisionFloor) throw DivisionByZero("jet division");
    Jet q;
    for (std::size_t k = 0; k <= Order; ++k) {
      complex s = a.c_[k];
      for (std::size_t j = 1; j <= k; ++j) s -= b.c_[j] * q.c_[k - j];
      q.c_[k] = s / b.c_[0];
    }
    return q;
  }
  friend Jet operator/(const Jet& a, complex s) { return a / Jet::constant(s); }
  friend Jet operator/(complex s, const Jet& b) { return Jet::constant(s) / b; }

 private:
  std::array<complex, Order + 1> c_{};
};

using Jet2 = Jet<2>;

/// Jet of f' from a jet of f, one order lower.
template <std::size_t Order>
Jet<Order - 1> differentiate(const Jet<Order>& f) requires(Order >= 1) {
  Jet<Order - 1> r;
  for (std::size_t k = 0; k + 1 <= Order; ++k) {
    r.coeff(k) = static_cast<double>(k + 1) * f.coeff(k + 1);
  }
  return r;
}

template <std::size_t Order>
Jet<Order> pow(const Jet<Order>& base, unsigned exponent) {
  Jet<Order> result = Jet<Order>::constant(1.0);
  Jet<Order> b = base;
  while (exponent > 0) {
    if (exponent & 1u) result = result * b;
    exponent >>= 1u;
    if (exponent > 0) b = b * b;
  }
  return result;
}

template <std::size_t Order>
Jet<Order> exp(const Jet<Order>& u) {
  Jet<Order> e;
  e.coeff(0) = std::exp(u.coeff(0));
  for (std::size_t k = 1; k <= Order; ++k) {
    complex s = 0.0;
    for (std::size_t j = 1; j <= k; ++j) s += static_cast<double>(j) * u.coeff(j) * e.coeff(k - j);
    e.coeff(k) = s / static_cast<double>(k);
  }
  return e;
}

namespace detail {

// s' = u' c and c' = sign * u' s; sign = -1 for sin/cos, +1 for sinh/cosh.
template <std::size_t Order>
void sincos_pair(const Jet<Order>& u, complex s0, complex c0, double sign, Jet<Order>& s,
                 Jet<Order>& c) {
  s.coeff(0) = s0;
  c.coeff(0) = c0;
  for (std::size_t k = 1; k <= Order; ++k) {
    complex ss = 0.0, cs = 0.0;
    for (std::size_t j = 1; j <= k; ++j) {
      const complex ju = static_cast<double>(j) * u.coeff(j);
      ss += ju * c.coeff(k - j);
      cs += ju * s.coeff(k - j);
    }
    s.coeff(k) = ss / static_cast<double>(k);
    c.coeff(k) = sign * cs / static_cast<double>(k);
  }
}

}  // namespace detail

template <std::size_t Order>
Jet<Order> sin(const Jet<Order>& u) {
  Jet<Order> s, c;
  detail::sincos_pair(u, std::sin(u.coeff(0)), std::cos(u.coeff(0)), -1.0, s, c);
  return s;
}

template <std::size_t Order>
Jet<Order> cos(const Jet<Order>& u) {
  Jet<Order> s, c;
  detail::sincos_pair(u, std::sin(u.coeff(0)), std::cos(u.coeff(0)), -1.0, s, c);
  return c;
}

template <std::size_t Order>
Jet<Order> sinh(const Jet<Order>& u) {
  Jet<Order> s, c;
  detail::sincos_pair(u, std::sinh(u.coeff(0)), std::cosh(u.coeff(0)), 1.0, s, c);
  return s;
}

template <std::size_t Order>
Jet<Order> cosh(const Jet<Order>& u) {
  Jet<Order> s, c;
  detail::sincos_pair(u, std::sinh(u.coeff(0)), std::cosh(u.coeff(0)), 1.0, s, c);
  return c;
}

}  // namespace harmsurf
