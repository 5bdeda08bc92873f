#pragma once

/**
 * @file weierstrass.hpp
 * @brief Synthesis of a non-conformal harmonic surface from holomorphic data.
 *
 * With P, Q the stereographic coordinates of the two slanted Gauss maps,
 *
 *     f_z = ( i(PQ-1)/(P-Q), (PQ+1)/(P-Q), -i(P+Q)/(P-Q) ),
 *     f   = 2 Re \int f_z dz,
 *
 * and the parametrization is adapted: <f_z, f_z> = -1. A single holomorphic
 * psi with psi' != 0 gives the constant-f- family through P = 2/psi', Q = 0,
 * i.e. f = (Im psi, Re psi, 2y).
 */

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <exception>
#include <optional>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <variant>
#include <vector>

#include "errors.hpp"
#include "expr.hpp"
#include "jet.hpp"
#include "quadrature.hpp"
#include "sample.hpp"
#include "vec3.hpp"

namespace harmsurf {

/// Axis-aligned parameter rectangle with an inclusive uniform node lattice.
struct DomainGrid {
  double x_min = -1, x_max = 1, y_min = -1, y_max = 1;
  int nx = 33, ny = 33;
  complex base = 0.0;

  /// Validating constructor; base defaults to the rectangle center.
  static DomainGrid make(double x_min, double x_max, double y_min, double y_max, int nx, int ny,
                         std::optional<complex> base = std::nullopt) {
    DomainGrid g{x_min, x_max, y_min, y_max, nx, ny,
                 base.value_or(complex(0.5 * (x_min + x_max), 0.5 * (y_min + y_max)))};
    g.validate();
    return g;
  }

  void validate() const {
    if (!(x_min < x_max) || !(y_min < y_max)) throw std::invalid_argument("empty domain rectangle");
    if (nx < 2 || ny < 2) throw std::invalid_argument("grid needs at least 2 nodes per axis");
    if (base.real() < x_min || base.real() > x_max || base.imag() < y_min || base.imag() > y_max) {
      throw std::invalid_argument("integration base point lies outside the domain");
    }
  }

  double hx() const { return (x_max - x_min) / (nx - 1); }
  double hy() const { return (y_max - y_min) / (ny - 1); }
  double x(int j) const { return j == nx - 1 ? x_max : x_min + j * hx(); }
  double y(int k) const { return k == ny - 1 ? y_max : y_min + k * hy(); }
  complex node(int j, int k) const { return {x(j), y(k)}; }
  std::size_t size() const { return static_cast<std::size_t>(nx) * ny; }
  /// Row-major: x varies fastest.
  std::size_t index(int j, int k) const { return static_cast<std::size_t>(k) * nx + j; }
};

struct PQMode {
  Expr p, q;
};
struct PsiMode {
  Expr psi;
};
/// g, h supplied as black-box sphere-valued maps. Not implemented.
struct GhNumericMode {};

struct IntegrandSpec {
  std::variant<PQMode, PsiMode, GhNumericMode> mode;
  double singular_tol = 1e-9;

  static IntegrandSpec from_pq(Expr p, Expr q, double tol = 1e-9) {
    return {PQMode{std::move(p), std::move(q)}, tol};
  }
  static IntegrandSpec from_psi(Expr psi, double tol = 1e-9) { return {PsiMode{std::move(psi)}, tol}; }

  bool is_pq() const { return std::holds_alternative<PQMode>(mode); }
  bool is_psi() const { return std::holds_alternative<PsiMode>(mode); }
};

/// The three components of f_z as jets; derivative() is f_zz.
struct FzJet {
  std::array<Jet2, 3> c;

  CVec3 value() const { return {c[0].v(), c[1].v(), c[2].v()}; }
  CVec3 derivative() const { return {c[0].d1(), c[1].d1(), c[2].d1()}; }
};

inline FzJet fz_from_pq(const Jet2& p, const Jet2& q, double tol, complex z = 0.0) {
  if (std::abs(p.v() - q.v()) <= tol) throw SingularPoint(SingularKind::PEqualsQ, z);
  const complex I(0.0, 1.0);
  const Jet2 pq = p * q;
  const Jet2 inv = 1.0 / (p - q);
  FzJet out;
  out.c[0] = I * ((pq - 1.0) * inv);
  out.c[1] = (pq + 1.0) * inv;
  out.c[2] = -I * ((p + q) * inv);
  return out;
}

struct HolomorphicData {
  Jet2 p, q;
};

/// P = 2/psi' as a second-order jet; needs psi to third order.
inline Jet2 p_from_psi(const Jet<3>& psi, double tol, complex z = 0.0) {
  const Jet2 dpsi = differentiate(psi);
  if (std::abs(dpsi.v()) <= tol) throw SingularPoint(SingularKind::PsiPrimeZero, z);
  return 2.0 / dpsi;
}

inline FzJet fz_from_psi(const Jet<3>& psi, double tol, complex z = 0.0) {
  return fz_from_pq(p_from_psi(psi, tol, z), Jet2::constant(0.0), tol, z);
}

/// P and Q jets at z with every integrand guard applied.
inline HolomorphicData holomorphic_data(const IntegrandSpec& spec, complex z) {
  try {
    if (const auto* m = std::get_if<PQMode>(&spec.mode)) {
      HolomorphicData d{eval_jet<2>(*m->p, z), eval_jet<2>(*m->q, z)};
      if (std::abs(d.p.v() - d.q.v()) <= spec.singular_tol) {
        throw SingularPoint(SingularKind::PEqualsQ, z);
      }
      if (std::abs(std::conj(d.p.v()) * d.q.v() + 1.0) <= spec.singular_tol) {
        throw SingularPoint(SingularKind::PQAntipodal, z);
      }
      return d;
    }
    if (const auto* m = std::get_if<PsiMode>(&spec.mode)) {
      return {p_from_psi(eval_jet<3>(*m->psi, z), spec.singular_tol, z), Jet2::constant(0.0)};
    }
  } catch (const DivisionByZero&) {
    throw SingularPoint(SingularKind::Pole, z);
  }
  throw Unsupported("GH-numeric integrand mode is not supported; supply P, Q or psi expressions");
}

inline FzJet integrand(const IntegrandSpec& spec, complex z) {
  const HolomorphicData d = holomorphic_data(spec, z);
  return fz_from_pq(d.p, d.q, spec.singular_tol, z);
}

/// Composite Gauss–Legendre approximation of \int f_z dz along [a, b].
inline CVec3 integrate_segment(const IntegrandSpec& spec, complex a, complex b,
                               const GaussLegendreRule& rule, int panels) {
  CVec3 total;
  if (a == b || panels <= 0) return total;
  const complex step = (b - a) / static_cast<double>(panels);
  const complex half = 0.5 * step;
  for (int p = 0; p < panels; ++p) {
    const complex mid = a + (p + 0.5) * step;
    CVec3 panel;
    for (int k = 0; k < rule.order(); ++k) {
      const CVec3 v = integrand(spec, mid + rule.nodes[k] * half).value();
      panel += v * complex(rule.weights[k]);
    }
    total += panel * half;
  }
  return total;
}

inline CVec3 integrate_segment(const IntegrandSpec& spec, complex a, complex b, int order, int panels) {
  if (order < 4 || order > 32) throw std::invalid_argument("quadrature order must be in [4, 32]");
  if (panels < 1) throw std::invalid_argument("panel count must be at least 1");
  return integrate_segment(spec, a, b, gauss_legendre(order), panels);
}

enum class PathOrder { HorizontalFirst, VerticalFirst };

/// \int_base^target f_z dz along a two-segment axis-aligned path.
inline CVec3 integrate_path(const IntegrandSpec& spec, complex base, complex target,
                            const QuadratureParams& quad, const GaussLegendreRule& rule,
                            PathOrder order = PathOrder::HorizontalFirst) {
  const complex corner = order == PathOrder::HorizontalFirst ? complex(target.real(), base.imag())
                                                             : complex(base.real(), target.imag());
  const int p1 = quad.panels_for(std::abs(corner - base));
  const int p2 = quad.panels_for(std::abs(target - corner));
  return integrate_segment(spec, base, corner, rule, p1) + integrate_segment(spec, corner, target, rule, p2);
}

inline Vec3 position_from_integral(const CVec3& integral) { return 2.0 * real(integral); }

/// Sampled surface over a DomainGrid, row-major.
struct SurfaceGrid {
  DomainGrid grid;
  std::vector<SurfaceSample> samples;

  SurfaceSample& at(int j, int k) { return samples[grid.index(j, k)]; }
  const SurfaceSample& at(int j, int k) const { return samples[grid.index(j, k)]; }
};

/// Local data at z: f_z, f_zz, first derivatives and the P, Q jets. f is left zero.
inline SurfaceSample local_sample(const IntegrandSpec& spec, complex z) {
  const HolomorphicData d = holomorphic_data(spec, z);
  const FzJet fz = fz_from_pq(d.p, d.q, spec.singular_tol, z);
  SurfaceSample s;
  s.z = z;
  s.p = d.p;
  s.q = d.q;
  s.fz = fz.value();
  s.fzz = fz.derivative();
  s.f_x = 2.0 * real(s.fz);
  s.f_y = -2.0 * imag(s.fz);
  return s;
}

/// Samples positions and first derivatives at every grid node. Each node is
/// integrated independently from grid.base, so the output does not depend
/// on `threads`.
inline SurfaceGrid sample_surface(const IntegrandSpec& spec, const DomainGrid& grid,
                                  const QuadratureParams& quad = {}, unsigned threads = 1) {
  grid.validate();
  quad.validate();
  if (std::holds_alternative<GhNumericMode>(spec.mode)) {
    throw Unsupported("GH-numeric integrand mode is not supported; supply P, Q or psi expressions");
  }
  const GaussLegendreRule rule = gauss_legendre(quad.order);
  SurfaceGrid out{grid, std::vector<SurfaceSample>(grid.size())};

  auto sample_row = [&](int k) {
    for (int j = 0; j < grid.nx; ++j) {
      const complex z = grid.node(j, k);
      try {
        SurfaceSample s = local_sample(spec, z);
        s.f = position_from_integral(integrate_path(spec, grid.base, z, quad, rule));
        out.at(j, k) = s;
      } catch (const SingularPoint& e) {
        throw e.at_node(j, k);
      }
    }
  };

  threads = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(grid.ny)));
  if (threads == 1) {
    for (int k = 0; k < grid.ny; ++k) sample_row(k);
    return out;
  }

  // Worker w takes rows w, w + threads, ...; its first failure is its
  // lowest-index failure, so the smallest across workers is the one a
  // serial run would have reported.
  std::vector<std::exception_ptr> errors(threads);
  std::vector<int> error_row(threads, grid.ny);
  {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) {
      pool.emplace_back([&, w] {
        for (int k = static_cast<int>(w); k < grid.ny; k += static_cast<int>(threads)) {
          try {
            sample_row(k);
          } catch (...) {
            errors[w] = std::current_exception();
            error_row[w] = k;
            return;
          }
        }
      });
    }
  }
  const auto first = std::min_element(error_row.begin(), error_row.end());
  if (*first < grid.ny) std::rethrow_exception(errors[first - error_row.begin()]);
  return out;
}

}  // namespace harmsurf
