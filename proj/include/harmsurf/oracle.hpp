#pragma once

/**
 * @file oracle.hpp
 * @brief Independent checks of the synthesis pipeline.
 *
 * Surface oracles only read sampled positions and take difference
 * quotients; none of them touches the jet derivatives that produced the
 * analytic frame. Each returns a ResidualReport that records the stencil
 * step it used.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "errors.hpp"
#include "expr.hpp"
#include "geometry.hpp"
#include "quadrature.hpp"
#include "residual.hpp"
#include "vec3.hpp"
#include "weierstrass.hpp"

namespace harmsurf {

struct VerifyOptions {
  double harmonic_tol = 1e-5;
  double cr_tol = 1e-6;
  double cr_step = 1e-5;
  double path_tol = 1e-9;
  double shape_fd_tol = 1e-4;
  double transform_tol = 1e-8;
};

inline double max_component(const Vec3& v) {
  return std::max({std::fabs(v[0]), std::fabs(v[1]), std::fabs(v[2])});
}

/// Five-point Laplacian of sampled positions at interior nodes.
///
/// max_abs is the raw discrete Laplacian. Pass/fail uses max_rel: the
/// Richardson combination (4 L_h - L_2h)/3 of the stencil at steps h and 2h,
/// multiplied by h^2 and divided by max(1, max |f|), which is O(h^6) for a
/// harmonic map and O(h^2) otherwise.
inline ResidualReport check_harmonicity(const DomainGrid& grid, std::span<const Vec3> positions,
                                        double tol = 1e-5) {
  if (grid.nx < 5 || grid.ny < 5) throw GridTooSmall("harmonicity check needs at least a 5x5 grid");
  if (positions.size() != grid.size()) throw std::invalid_argument("position count does not match grid");
  const double hx = grid.hx(), hy = grid.hy();
  const double h = std::max(hx, hy);
  double fmax = 1.0;
  for (const Vec3& p : positions) fmax = std::max(fmax, max_component(p));

  auto at = [&](int j, int k) -> const Vec3& { return positions[grid.index(j, k)]; };
  ResidualAccumulator acc("harmonicity", tol, ResidualPolicy::Relative);
  acc.set_step(h);
  for (int k = 2; k + 2 < grid.ny; ++k) {
    for (int j = 2; j + 2 < grid.nx; ++j) {
      const Vec3& c = at(j, k);
      const Vec3 lap_h = (at(j + 1, k) + at(j - 1, k) - 2.0 * c) / (hx * hx) +
                         (at(j, k + 1) + at(j, k - 1) - 2.0 * c) / (hy * hy);
      const Vec3 lap_2h = (at(j + 2, k) + at(j - 2, k) - 2.0 * c) / (4.0 * hx * hx) +
                          (at(j, k + 2) + at(j, k - 2) - 2.0 * c) / (4.0 * hy * hy);
      const Vec3 extrapolated = (4.0 * lap_h - lap_2h) / 3.0;
      acc.record(grid.node(j, k), max_component(lap_h), h * h * max_component(extrapolated) / fmax);
    }
  }
  return acc.finish();
}

inline ResidualReport check_harmonicity(const SurfaceGrid& sg, double tol = 1e-5) {
  std::vector<Vec3> positions;
  positions.reserve(sg.samples.size());
  for (const auto& s : sg.samples) positions.push_back(s.f);
  return check_harmonicity(sg.grid, positions, tol);
}

/// Real-step against imaginary-step central difference quotients.
inline ResidualReport check_cauchy_riemann(const std::function<complex(complex)>& fn,
                                           std::span<const complex> points, double h = 1e-5,
                                           double tol = 1e-6, std::string name = "cauchy_riemann") {
  // Relative to max(|f'|, 1): absolute for small derivatives.
  ResidualAccumulator acc(std::move(name), tol, ResidualPolicy::Relative, 1.0);
  acc.set_step(h);
  const complex ih(0.0, h);
  for (const complex z : points) {
    const complex d_real = (fn(z + h) - fn(z - h)) / (2.0 * h);
    const complex d_imag = (fn(z + ih) - fn(z - ih)) / (2.0 * ih);
    acc.add(z, std::abs(d_real - d_imag), std::abs(d_real));
  }
  return acc.finish();
}

inline ResidualReport check_cauchy_riemann(const Expr& e, std::span<const complex> points,
                                           double h = 1e-5, double tol = 1e-6,
                                           std::string name = "cauchy_riemann") {
  return check_cauchy_riemann([&e](complex z) { return eval_value(*e, z); }, points, h, tol,
                              std::move(name));
}

/// Horizontal-first against vertical-first integration from `base`.
inline ResidualReport check_path_independence(const IntegrandSpec& spec, complex base,
                                              std::span<const complex> targets,
                                              const QuadratureParams& quad = {}, double tol = 1e-9) {
  quad.validate();
  const GaussLegendreRule rule = gauss_legendre(quad.order);
  ResidualAccumulator acc("path_independence", tol, ResidualPolicy::Absolute);
  for (const complex t : targets) {
    const CVec3 a = integrate_path(spec, base, t, quad, rule, PathOrder::HorizontalFirst);
    const CVec3 b = integrate_path(spec, base, t, quad, rule, PathOrder::VerticalFirst);
    double err = 0.0, mag = 0.0;
    for (int i = 0; i < 3; ++i) {
      err = std::max(err, std::abs(a[i] - b[i]));
      mag = std::max(mag, std::abs(a[i]));
    }
    acc.add(t, err, mag);
  }
  return acc.finish();
}

/// K from a finite-difference shape operator, compared with the closed form
/// stored in each sample.
///
/// Tangents come from fourth-order central differences of positions; the
/// normal is their normalized cross product, and its own fourth-order
/// differences give the shape operator. Needs nodes four steps from the
/// boundary, so at least a 9x9 grid.
inline ResidualReport check_shape_operator_fd(const SurfaceGrid& sg, double tol = 1e-4) {
  const DomainGrid& grid = sg.grid;
  if (grid.nx < 9 || grid.ny < 9) throw GridTooSmall("shape operator check needs at least a 9x9 grid");
  const double hx = grid.hx(), hy = grid.hy();
  auto f = [&](int j, int k) -> const Vec3& { return sg.at(j, k).f; };
  auto d4 = [](const Vec3& m2, const Vec3& m1, const Vec3& p1, const Vec3& p2, double h) {
    return (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
  };
  auto fx = [&](int j, int k) { return d4(f(j - 2, k), f(j - 1, k), f(j + 1, k), f(j + 2, k), hx); };
  auto fy = [&](int j, int k) { return d4(f(j, k - 2), f(j, k - 1), f(j, k + 1), f(j, k + 2), hy); };

  std::vector<Vec3> normals(grid.size());
  for (int k = 2; k + 2 < grid.ny; ++k) {
    for (int j = 2; j + 2 < grid.nx; ++j) normals[grid.index(j, k)] = normalized(cross(fx(j, k), fy(j, k)));
  }
  auto n = [&](int j, int k) -> const Vec3& { return normals[grid.index(j, k)]; };

  // Relative to max(|K|, 1): absolute where the surface is gently curved.
  ResidualAccumulator acc("shape_operator_fd", tol, ResidualPolicy::Relative, 1.0);
  acc.set_step(std::max(hx, hy));
  for (int k = 4; k + 4 < grid.ny; ++k) {
    for (int j = 4; j + 4 < grid.nx; ++j) {
      const Vec3 tx = fx(j, k), ty = fy(j, k);
      const Vec3 nx = d4(n(j - 2, k), n(j - 1, k), n(j + 1, k), n(j + 2, k), hx);
      const Vec3 ny = d4(n(j, k - 2), n(j, k - 1), n(j, k + 1), n(j, k + 2), hy);
      const double L = -dot(nx, tx);
      const double M = -0.5 * (dot(nx, ty) + dot(ny, tx));
      const double Nn = -dot(ny, ty);
      const double E = dot(tx, tx), F = dot(tx, ty), G = dot(ty, ty);
      const double K_fd = (L * Nn - M * M) / (E * G - F * F);
      acc.compare(grid.node(j, k), K_fd, sg.at(j, k).K);
    }
  }
  return acc.finish();
}

/// Recomputes f+ and f- from each sample's frame and checks the relations
/// that rebuild f_x, f_y from them, plus f+ = Pi^-1(P), f- = Pi^-1(Q).
inline ResidualReport check_transform_consistency(const SurfaceGrid& sg, const IntegrandSpec& spec,
                                                  double tol = 1e-8) {
  ResidualAccumulator acc("transform_consistency", tol, ResidualPolicy::Relative);
  for (const SurfaceSample& s : sg.samples) {
    const auto [fp, fm] = plus_minus_transform(s);
    const double ny_ = norm(s.f_y), nx_ = norm(s.f_x);
    const Vec3 diff = fp - fm;
    const double d = norm(diff);
    const double scale = 4.0 / (d * d);
    // f_y = 4/|f+ - f-|^2 (f+ - f-)
    acc.add(s.z, norm(s.f_y - scale * diff), ny_);
    // f_x = 4/|f+ - f-|^2 (f+ x f-)
    acc.add(s.z, norm(s.f_x - scale * cross(fp, fm)), nx_);
    // |f_y| = 2 cosh(phi) = 2/sin(theta) = 4/|f+ - f-|
    acc.add(s.z, std::fabs(ny_ - 2.0 * std::cosh(s.phi)), ny_);
    acc.add(s.z, std::fabs(ny_ - 2.0 / s.sin_theta), ny_);
    acc.add(s.z, std::fabs(ny_ - 4.0 / d), ny_);
    // |f_x| = |f_y| cos(theta) = 2|f+ + f-|/|f+ - f-|
    acc.add(s.z, std::fabs(nx_ - ny_ * s.cos_theta), nx_);
    acc.add(s.z, std::fabs(nx_ - 2.0 * norm(fp + fm) / d), nx_);

    complex P, Q;
    if (const auto* m = std::get_if<PQMode>(&spec.mode)) {
      P = eval_value(*m->p, s.z);
      Q = eval_value(*m->q, s.z);
    } else if (const auto* m = std::get_if<PsiMode>(&spec.mode)) {
      P = 2.0 / eval_jet<1>(*m->psi, s.z).d1();
      Q = 0.0;
    } else {
      throw Unsupported("GH-numeric integrand mode is not supported");
    }
    acc.add(s.z, max_abs_diff(fp, stereographic_inverse(P)), 1.0);
    acc.add(s.z, max_abs_diff(fm, stereographic_inverse(Q)), 1.0);
  }
  return acc.finish();
}

/// Up to `per_axis`^2 evenly spread grid nodes, corners included.
inline std::vector<complex> spread_targets(const DomainGrid& grid, int per_axis = 5) {
  std::vector<complex> out;
  const int cx = std::min(per_axis, grid.nx), cy = std::min(per_axis, grid.ny);
  for (int b = 0; b < cy; ++b) {
    const int k = cy == 1 ? 0 : b * (grid.ny - 1) / (cy - 1);
    for (int a = 0; a < cx; ++a) {
      const int j = cx == 1 ? 0 : a * (grid.nx - 1) / (cx - 1);
      out.push_back(grid.node(j, k));
    }
  }
  return out;
}

/// Runs all five oracles on a sampled grid with completed geometry.
inline std::vector<ResidualReport> run_oracles(const SurfaceGrid& sg, const IntegrandSpec& spec,
                                               const QuadratureParams& quad = {},
                                               const VerifyOptions& opt = {}) {
  std::vector<ResidualReport> out;
  out.push_back(check_harmonicity(sg, opt.harmonic_tol));

  std::vector<complex> nodes;
  nodes.reserve(sg.samples.size());
  for (const auto& s : sg.samples) nodes.push_back(s.z);
  if (const auto* m = std::get_if<PQMode>(&spec.mode)) {
    ResidualReport rp = check_cauchy_riemann(m->p, nodes, opt.cr_step, opt.cr_tol, "cauchy_riemann_P");
    ResidualReport rq = check_cauchy_riemann(m->q, nodes, opt.cr_step, opt.cr_tol, "cauchy_riemann_Q");
    ResidualReport merged = rp.max_rel >= rq.max_rel ? rp : rq;
    merged.name = "cauchy_riemann";
    merged.max_abs = std::max(rp.max_abs, rq.max_abs);
    merged.points = rp.points + rq.points;
    merged.pass = rp.pass && rq.pass;
    out.push_back(merged);
  } else if (const auto* m = std::get_if<PsiMode>(&spec.mode)) {
    out.push_back(check_cauchy_riemann(m->psi, nodes, opt.cr_step, opt.cr_tol));
  }

  const std::vector<complex> targets = spread_targets(sg.grid);
  out.push_back(check_path_independence(spec, sg.grid.base, targets, quad, opt.path_tol));
  out.push_back(check_shape_operator_fd(sg, opt.shape_fd_tol));
  out.push_back(check_transform_consistency(sg, spec, opt.transform_tol));
  return out;
}

}  // namespace harmsurf
