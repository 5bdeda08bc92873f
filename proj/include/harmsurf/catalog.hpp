#pragma once

/**
 * @file catalog.hpp
 * @brief Built-in surfaces with known closed forms.
 *
 *   ex5_1  psi = z^2                     f = (2xy, x^2 - y^2, 2y)
 *   ex5_2  psi = i a e^{-iz}, a > 0      f = (a e^y cos x, a e^y sin x, 2y)
 *   ex5_3  P = a e^z, Q = e^z / a        helicoid
 *   ex5_4  P = a e^{iz}, Q = e^{iz} / a  catenoid-like
 *
 * For ex5_3 and ex5_4, a must avoid 0 and +-1.
 */

#include <array>
#include <cmath>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"
#include "expr.hpp"
#include "vec3.hpp"
#include "weierstrass.hpp"

namespace harmsurf {

struct ExampleSpec {
  std::string id;
  std::optional<double> a;
  std::string p_text, q_text, psi_text;  // psi_text set iff psi mode
  DomainGrid domain;
  std::function<Vec3(double, double)> closed_form;
  std::string notes;

  bool is_psi() const { return !psi_text.empty(); }

  IntegrandSpec integrand(double singular_tol = 1e-9) const {
    if (is_psi()) return IntegrandSpec::from_psi(parse(psi_text), singular_tol);
    return IntegrandSpec::from_pq(parse(p_text), parse(q_text), singular_tol);
  }

  /// Closed form translated so that it vanishes at the integration base.
  Vec3 anchored(double x, double y, complex base) const {
    return closed_form(x, y) - closed_form(base.real(), base.imag());
  }
};

inline const std::array<std::string_view, 4> kExampleIds = {"ex5_1", "ex5_2", "ex5_3", "ex5_4"};

namespace detail {

inline std::string literal(double v) { return "(" + format_real(std::fabs(v)) + ")"; }
inline std::string signed_literal(double v) {
  return v < 0 ? "(-" + format_real(-v) + ")" : literal(v);
}

}  // namespace detail

/// Throws InvalidParam for unknown ids or parameters outside the family.
inline ExampleSpec make_example(std::string_view id, std::optional<double> a = std::nullopt) {
  ExampleSpec ex;
  ex.id = std::string(id);
  if (id == "ex5_1") {
    if (a) throw InvalidParam("ex5_1 takes no parameter");
    ex.psi_text = "z^2";
    ex.domain = DomainGrid::make(0.5, 1.5, 0.5, 1.5, 33, 33);
    ex.closed_form = [](double x, double y) { return Vec3{2 * x * y, x * x - y * y, 2 * y}; };
    ex.notes = "not complete; f- = (0,0,-1); psi' vanishes at the origin";
    return ex;
  }
  if (id == "ex5_2") {
    const double av = a.value_or(1.0);
    if (!(av > 0.0) || !std::isfinite(av)) throw InvalidParam("ex5_2 requires a > 0");
    ex.a = av;
    ex.psi_text = "i*" + detail::literal(av) + "*exp(-i*z)";
    ex.domain = DomainGrid::make(-1, 1, -1, 1, 33, 33);
    ex.closed_form = [av](double x, double y) {
      return Vec3{av * std::exp(y) * std::cos(x), av * std::exp(y) * std::sin(x), 2 * y};
    };
    ex.notes = "complete rotational surface; f- = (0,0,-1)";
    return ex;
  }
  if (id == "ex5_3" || id == "ex5_4") {
    const double av = a.value_or(2.0);
    if (!std::isfinite(av) || av == 0.0 || std::fabs(av) == 1.0) {
      throw InvalidParam(std::string(id) + " requires a != 0, +-1");
    }
    ex.a = av;
    const std::string lit = detail::signed_literal(av);
    const std::string e = id == "ex5_3" ? "exp(z)" : "exp(i*z)";
    ex.p_text = lit + "*" + e;
    ex.q_text = e + "/" + lit;
    ex.domain = DomainGrid::make(-1, 1, -1, 1, 33, 33);
    const double c = 2.0 / (av * av - 1.0);
    if (id == "ex5_3") {
      ex.closed_form = [av, c](double x, double y) {
        return Vec3{-2 * av * c * std::sinh(x) * std::sin(y), 2 * av * c * std::sinh(x) * std::cos(y),
                    c * (av * av + 1) * y};
      };
      ex.notes = "helicoid; complete, delta >= 4a^2/(a^2-1)^2 attained on x = 0";
    } else {
      ex.closed_form = [av, c](double x, double y) {
        return Vec3{2 * av * c * std::cosh(y) * std::cos(x), 2 * av * c * std::cosh(y) * std::sin(x),
                    c * (av * av + 1) * y};
      };
      ex.notes = "catenoid-like, not minimal; complete, delta >= 4a^2/(a^2-1)^2 attained on y = 0";
    }
    return ex;
  }
  throw InvalidParam("unknown example id '" + std::string(id) + "' (expected ex5_1..ex5_4)");
}

/// Largest componentwise deviation of the sampled surface from the anchored closed form.
inline double closed_form_deviation(const ExampleSpec& ex, const SurfaceGrid& sg) {
  double worst = 0.0;
  for (const auto& s : sg.samples) {
    worst = std::max(worst, max_abs_diff(s.f, ex.anchored(s.z.real(), s.z.imag(), sg.grid.base)));
  }
  return worst;
}

}  // namespace harmsurf
