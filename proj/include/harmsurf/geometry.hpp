#pragma once

/**
 * @file geometry.hpp
 * @brief Per-sample differential geometry of a harmonic surface in adapted
 * coordinates, and grid-level analysis.
 *
 * Two routes are kept side by side wherever possible: quantities derived from
 * the sampled frame (f_x, f_y, f_zz) and closed forms in the holomorphic data
 * P, Q. The analysis report records the residual between them.
 */

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "quadrature.hpp"
#include "residual.hpp"
#include "sample.hpp"
#include "vec3.hpp"
#include "weierstrass.hpp"

namespace harmsurf {

// ---------------------------------------------------------------------------
// Stereographic projection from the north pole (0, 0, 1).

inline Vec3 stereographic_inverse(complex w) {
  if (!std::isfinite(w.real()) || !std::isfinite(w.imag()) || std::abs(w) > 1e150) {
    throw Overflow("stereographic_inverse: |w| too large");
  }
  const double n2 = std::norm(w);
  return Vec3{2.0 * w.real(), 2.0 * w.imag(), n2 - 1.0} / (n2 + 1.0);
}

inline complex stereographic_forward(const Vec3& p) {
  if (norm(p - Vec3{0.0, 0.0, 1.0}) <= 1e-8) throw NorthPole();
  return complex(p[0], p[1]) / (1.0 - p[2]);
}

// ---------------------------------------------------------------------------
// Closed forms in P, Q.

/// |g - h|^2 and |g + h|^2 for g = Pi^-1(P), h = Pi^-1(Q).
struct SphereGaps {
  double minus2;
  double plus2;
};

inline SphereGaps sphere_gaps(complex P, complex Q) {
  const double pp = std::norm(P) + 1.0;
  const double qq = std::norm(Q) + 1.0;
  return {4.0 * std::norm(P - Q) / (pp * qq), 4.0 * std::norm(std::conj(P) * Q + 1.0) / (pp * qq)};
}

inline double delta_pointwise(complex P, complex Q) {
  return std::norm(std::conj(P) * Q + 1.0) / std::norm(P - Q);
}

/// Gaussian curvature from P, P', Q, Q'. Always <= 0.
inline double gauss_curvature_closed(const Jet2& p, const Jet2& q, double tol = 1e-9) {
  const complex P = p.v(), dP = p.d1(), Q = q.v(), dQ = q.d1();
  const complex A = std::conj(P) * Q + 1.0;
  if (std::abs(A) <= tol) throw SingularPoint(SingularKind::PQAntipodal, complex(NAN, NAN));
  const double pp = std::norm(P) + 1.0;
  const double qq = std::norm(Q) + 1.0;
  const double num = std::norm(P - Q) * std::norm(qq * A * dP + pp * (P * std::conj(Q) + 1.0) * dQ);
  const double nA = std::norm(A);
  return -num / (4.0 * nA * nA * pp * pp * qq * qq);
}

/// Upper bound |g-h|^2 / (16 |g+h|^2) * (|dg|^2 + |dh|^2) on |K|.
inline double curvature_bound(const Jet2& p, const Jet2& q) {
  const complex P = p.v(), Q = q.v();
  const double pp = std::norm(P) + 1.0;
  const double qq = std::norm(Q) + 1.0;
  const double dg2 = 8.0 * std::norm(p.d1()) / (pp * pp);
  const double dh2 = 8.0 * std::norm(q.d1()) / (qq * qq);
  const SphereGaps gaps = sphere_gaps(P, Q);
  return gaps.minus2 / (16.0 * gaps.plus2) * (dg2 + dh2);
}

/// Area density 8|g+h| / |g-h|^2 of the induced metric.
inline double area_element(const Jet2& p, const Jet2& q, double tol = 1e-9) {
  const complex P = p.v(), Q = q.v();
  if (std::abs(P - Q) <= tol) throw SingularPoint(SingularKind::PEqualsQ, complex(NAN, NAN));
  const SphereGaps gaps = sphere_gaps(P, Q);
  return 8.0 * std::sqrt(gaps.plus2) / gaps.minus2;
}

// ---------------------------------------------------------------------------
// Frame-based quantities.

inline constexpr double kDegenerateFrame = 1e-12;

/// Fills N, E, F, G, ell, m, theta, phi from f_x, f_y and f_zz.
inline void frame_and_forms(SurfaceSample& s) {
  const Vec3 n = cross(s.f_x, s.f_y);
  const double nn = norm(n);
  const double a = norm(s.f_x);
  const double b = norm(s.f_y);
  if (nn < kDegenerateFrame || !(a > 0.0) || !(b > a)) {
    throw DegenerateFrame("degenerate frame: |f_x x f_y| = " + std::to_string(nn));
  }
  s.N = n / nn;
  s.E = dot(s.f_x, s.f_x);
  s.F = dot(s.f_x, s.f_y);
  s.G = dot(s.f_y, s.f_y);
  const Vec3 f_xx = 2.0 * real(s.fzz);
  const Vec3 f_xy = -2.0 * imag(s.fzz);
  s.ell = dot(f_xx, s.N);
  s.m = dot(f_xy, s.N);
  // arccos(a/b), with sin computed in factored form to keep accuracy as a -> b.
  s.cos_theta = a / b;
  s.sin_theta = std::sqrt((b - a) * (b + a)) / b;
  s.theta = std::atan2(s.sin_theta, s.cos_theta);
  s.phi = std::atanh(s.cos_theta);
}

/// f^eps = eps sin(theta) f_y/|f_y| + cos(theta) N, returned as (f+, f-).
inline std::pair<Vec3, Vec3> plus_minus_transform(const SurfaceSample& s) {
  const Vec3 u = s.f_y / norm(s.f_y);
  return {s.sin_theta * u + s.cos_theta * s.N, -s.sin_theta * u + s.cos_theta * s.N};
}

/// K = -4 |<f_zz, N>|^2 / (|f_x|^2 |f_y|^2).
inline double gauss_curvature_numeric(const SurfaceSample& s) {
  const complex fzzN = dot(s.fzz, s.N);
  return -4.0 * std::norm(fzzN) / (s.E * s.G);
}

/// Gauss equation with <f_yy, N> = -ell.
inline double gauss_curvature_gauss_equation(const SurfaceSample& s) {
  return (s.ell * (-s.ell) - s.m * s.m) / (s.E * s.G - s.F * s.F);
}

inline double distortion_f(const Vec3& f_x, const Vec3& f_y) {
  const double c = norm(cross(f_x, f_y));
  if (c < kDegenerateFrame) throw DegenerateFrame("distortion_f: |f_x x f_y| vanishes");
  return (norm2(f_x) + norm2(f_y)) / (2.0 * c);
}

inline double distortion_f(const SurfaceSample& s) { return distortion_f(s.f_x, s.f_y); }

/// Distortion of the Gauss map from the Weingarten equations
/// N_x = -(l/E) f_x - (m/G) f_y, N_y = -(m/E) f_x + (l/G) f_y.
inline double distortion_N(const SurfaceSample& s, double regular_tol = 1e-12) {
  if (s.ell * s.ell + s.m * s.m <= regular_tol) {
    throw GaussMapDegenerate("Gauss map is not regular here (l^2 + m^2 <= " +
                             std::to_string(regular_tol) + ")");
  }
  const Vec3 N_x = -(s.ell / s.E) * s.f_x - (s.m / s.G) * s.f_y;
  const Vec3 N_y = -(s.m / s.E) * s.f_x + (s.ell / s.G) * s.f_y;
  return (norm2(N_x) + norm2(N_y)) / (2.0 * norm(cross(N_x, N_y)));
}

inline double area_element(const SurfaceSample& s, double tol = 1e-9) { return area_element(s.p, s.q, tol); }

struct GeometryOptions {
  double singular_tol = 1e-9;
  double gauss_map_tol = 1e-12;  // l^2 + m^2 threshold for D_N
  double identity_tol = 1e-8;    // pipeline identities
  double bilinear_tol = 1e-10;   // <f_z, f_z> = -1
  double unit_tol = 1e-10;       // unit vectors, angle identities
  double bound_slack = 1e-12;    // curvature bound
  double delta_threshold = 0.0;  // certificate requires delta_infimum > this
};

/// Fills every geometry field of a sampled point.
inline void complete_geometry(SurfaceSample& s, const GeometryOptions& opt = {}) {
  frame_and_forms(s);
  std::tie(s.f_plus, s.f_minus) = plus_minus_transform(s);
  try {
    s.K = gauss_curvature_closed(s.p, s.q, opt.singular_tol);
    s.area_density = area_element(s.p, s.q, opt.singular_tol);
  } catch (const SingularPoint& e) {
    throw SingularPoint(e.kind(), s.z);
  }
  s.K_numeric = gauss_curvature_numeric(s);
  s.K_gauss = gauss_curvature_gauss_equation(s);
  s.D_f = distortion_f(s);
  try {
    s.D_N = distortion_N(s, opt.gauss_map_tol);
  } catch (const GaussMapDegenerate&) {
    s.D_N.reset();
  }
  s.delta = delta_pointwise(s.p.v(), s.q.v());
}

inline void complete_geometry(SurfaceGrid& sg, const GeometryOptions& opt = {}) {
  for (int k = 0; k < sg.grid.ny; ++k) {
    for (int j = 0; j < sg.grid.nx; ++j) {
      try {
        complete_geometry(sg.at(j, k), opt);
      } catch (const SingularPoint& e) {
        throw e.at_node(j, k);
      }
    }
  }
}

// ---------------------------------------------------------------------------
// Grid-level statistics.

/// Grid minimum of |conj(P) Q + 1|^2 / |P - Q|^2, a grid-scale completeness
/// certificate only.
inline double delta_statistic(const IntegrandSpec& spec, const DomainGrid& grid) {
  grid.validate();
  double best = std::numeric_limits<double>::infinity();
  for (int k = 0; k < grid.ny; ++k) {
    for (int j = 0; j < grid.nx; ++j) {
      try {
        const HolomorphicData d = holomorphic_data(spec, grid.node(j, k));
        best = std::min(best, delta_pointwise(d.p.v(), d.q.v()));
      } catch (const SingularPoint& e) {
        throw e.at_node(j, k);
      }
    }
  }
  return best;
}

struct CurvatureIntegrals {
  double total_curvature = 0.0;  // \int |K| dV over the rectangle
  double ftc_criterion = 0.0;    // \int (|dg|^2 + |dh|^2) / |g + h| dx dy
};

/// Tensor Gauss–Legendre rule with one panel per grid cell in each direction.
inline CurvatureIntegrals curvature_integrals(const IntegrandSpec& spec, const DomainGrid& grid,
                                              const QuadratureParams& quad = {}) {
  grid.validate();
  quad.validate();
  const GaussLegendreRule rule = gauss_legendre(quad.order);
  const double hx = grid.hx(), hy = grid.hy();
  CurvatureIntegrals out;
  for (int cy = 0; cy + 1 < grid.ny; ++cy) {
    const double ymid = grid.y_min + (cy + 0.5) * hy;
    for (int cx = 0; cx + 1 < grid.nx; ++cx) {
      const double xmid = grid.x_min + (cx + 0.5) * hx;
      double cell_k = 0.0, cell_c = 0.0;
      for (int b = 0; b < rule.order(); ++b) {
        for (int a = 0; a < rule.order(); ++a) {
          const complex z(xmid + 0.5 * hx * rule.nodes[a], ymid + 0.5 * hy * rule.nodes[b]);
          const HolomorphicData d = holomorphic_data(spec, z);
          const double w = rule.weights[a] * rule.weights[b];
          const double K = gauss_curvature_closed(d.p, d.q, spec.singular_tol);
          cell_k += w * std::fabs(K) * area_element(d.p, d.q, spec.singular_tol);
          const double pp = std::norm(d.p.v()) + 1.0, qq = std::norm(d.q.v()) + 1.0;
          const double dg2 = 8.0 * std::norm(d.p.d1()) / (pp * pp);
          const double dh2 = 8.0 * std::norm(d.q.d1()) / (qq * qq);
          cell_c += w * (dg2 + dh2) / std::sqrt(sphere_gaps(d.p.v(), d.q.v()).plus2);
        }
      }
      out.total_curvature += cell_k * 0.25 * hx * hy;
      out.ftc_criterion += cell_c * 0.25 * hx * hy;
    }
  }
  return out;
}

inline double total_curvature_estimate(const IntegrandSpec& spec, const DomainGrid& grid,
                                       const QuadratureParams& quad = {}) {
  return curvature_integrals(spec, grid, quad).total_curvature;
}

struct AnalysisReport {
  int nx = 0, ny = 0;
  double K_min = 0, K_max = 0, K_mean = 0;
  double total_curvature = 0;
  double ftc_criterion = 0;
  double delta_infimum = 0;
  double D_f_min = 0, D_f_max = 0;
  double DN_Df_max_residual = 0;
  std::size_t gauss_map_degenerate_nodes = 0;
  std::vector<ResidualReport> residuals;
  bool complete_certificate_at_grid_scale = false;
  bool finite_total_curvature_hint = false;

  const ResidualReport* find(const std::string& name) const {
    for (const auto& r : residuals) {
      if (r.name == name) return &r;
    }
    return nullptr;
  }
  bool all_pass() const {
    return std::all_of(residuals.begin(), residuals.end(), [](const auto& r) { return r.pass; });
  }
};

/// Every per-node identity as a residual; `sg` must have complete geometry.
inline std::vector<ResidualReport> identity_residuals(const SurfaceGrid& sg, const GeometryOptions& opt = {}) {
  using P = ResidualPolicy;
  const double tol = opt.identity_tol;
  ResidualAccumulator g_minus_e("adapted_G_minus_E", tol, P::Absolute);
  ResidualAccumulator f_cross("adapted_F", tol, P::Absolute);
  ResidualAccumulator bilinear("fz_bilinear", opt.bilinear_tol, P::Absolute);
  ResidualAccumulator units("unit_vectors", opt.unit_tol, P::Absolute);
  ResidualAccumulator angles("frame_angles", opt.unit_tol, P::Absolute);
  ResidualAccumulator metric_fy("metric_fy", tol, P::Relative);
  ResidualAccumulator metric_fx("metric_fx", tol, P::Relative);
  ResidualAccumulator normal("normal_orientation", tol, P::Absolute);
  ResidualAccumulator plus("transform_plus", tol, P::Absolute);
  ResidualAccumulator minus("transform_minus", tol, P::Absolute);
  ResidualAccumulator sumdiff("transform_sum_diff", opt.unit_tol, P::Absolute);
  ResidualAccumulator eq2("eq_fy_from_transforms", tol, P::Relative);
  ResidualAccumulator eq4("eq_fx_from_transforms", tol, P::Relative);
  ResidualAccumulator gh_cross("cross_product_identity", opt.unit_tol, P::Absolute);
  // Floor 1e-4 makes a 1e-8 relative tolerance act as 1e-12 absolute near K = 0.
  ResidualAccumulator k_cn("curvature_closed_vs_numeric", tol, P::Relative, 1e-4);
  ResidualAccumulator k_ng("curvature_numeric_vs_gauss", tol, P::Relative, 1e-4);
  ResidualAccumulator k_cg("curvature_closed_vs_gauss", tol, P::Relative, 1e-4);
  ResidualAccumulator bound("curvature_bound", opt.bound_slack, P::Absolute);
  ResidualAccumulator area("area_element", tol, P::Relative);
  ResidualAccumulator dist("distortion_DN_Df", tol, P::Absolute);

  for (const SurfaceSample& s : sg.samples) {
    const complex z = s.z;
    const complex P = s.p.v(), Q = s.q.v();
    const SphereGaps gaps = sphere_gaps(P, Q);
    const Vec3 g = stereographic_inverse(P);
    const Vec3 h = stereographic_inverse(Q);

    g_minus_e.add(z, std::fabs(s.G - s.E - 4.0), 4.0);
    f_cross.add(z, std::fabs(s.F), std::sqrt(s.E * s.G));
    bilinear.add(z, std::abs(dot(s.fz, s.fz) + 1.0), 1.0);
    units.add(z,
              std::max({std::fabs(norm(s.N) - 1.0), std::fabs(norm(s.f_plus) - 1.0),
                        std::fabs(norm(s.f_minus) - 1.0)}),
              1.0);
    angles.add(z,
               std::max(std::fabs(s.cos_theta - std::tanh(s.phi)),
                        std::fabs(s.sin_theta - 1.0 / std::cosh(s.phi))),
               1.0);
    metric_fy.compare(z, s.G, 16.0 / gaps.minus2);
    metric_fx.compare(z, s.E, 4.0 * gaps.plus2 / gaps.minus2);
    normal.add(z, max_abs_diff(s.N, normalized(g + h)), 1.0);
    plus.add(z, max_abs_diff(s.f_plus, g), 1.0);
    minus.add(z, max_abs_diff(s.f_minus, h), 1.0);
    sumdiff.add(z,
                std::max(std::fabs(norm(s.f_plus + s.f_minus) - 2.0 * s.cos_theta),
                         std::fabs(norm(s.f_plus - s.f_minus) - 2.0 * s.sin_theta)),
                1.0);
    const Vec3 diff = s.f_plus - s.f_minus;
    const double scale = 4.0 / norm2(diff);
    eq2.add(z, norm(s.f_y - scale * diff), norm(s.f_y));
    eq4.add(z, norm(s.f_x - scale * cross(s.f_plus, s.f_minus)), norm(s.f_x));
    gh_cross.add(z, std::fabs(norm2(cross(g, h)) - 0.25 * norm2(g + h) * norm2(g - h)), 1.0);
    const double kmag = std::max({std::fabs(s.K), std::fabs(s.K_numeric), std::fabs(s.K_gauss)});
    k_cn.add(z, std::fabs(s.K - s.K_numeric), kmag);
    k_ng.add(z, std::fabs(s.K_numeric - s.K_gauss), kmag);
    k_cg.add(z, std::fabs(s.K - s.K_gauss), kmag);
    bound.add(z, std::max(0.0, std::fabs(s.K) - curvature_bound(s.p, s.q)), 1.0);
    area.compare(z, s.area_density, std::sqrt(s.E * s.G - s.F * s.F));
    if (s.D_N) dist.add(z, std::fabs(*s.D_N - s.D_f), s.D_f);
  }

  return {g_minus_e.finish(), f_cross.finish(), bilinear.finish(), units.finish(),
          angles.finish(),    metric_fy.finish(), metric_fx.finish(), normal.finish(),
          plus.finish(),      minus.finish(),    sumdiff.finish(),   eq2.finish(),
          eq4.finish(),       gh_cross.finish(), k_cn.finish(),      k_ng.finish(),
          k_cg.finish(),      bound.finish(),    area.finish(),      dist.finish()};
}

/// Statistics, curvature integrals and identity residuals for a sampled grid
/// whose geometry has been completed. Reductions run in row-major order.
inline AnalysisReport analyze(const SurfaceGrid& sg, const IntegrandSpec& spec,
                              const QuadratureParams& quad = {}, const GeometryOptions& opt = {}) {
  AnalysisReport r;
  r.nx = sg.grid.nx;
  r.ny = sg.grid.ny;
  r.K_min = std::numeric_limits<double>::infinity();
  r.K_max = -std::numeric_limits<double>::infinity();
  r.delta_infimum = std::numeric_limits<double>::infinity();
  r.D_f_min = std::numeric_limits<double>::infinity();
  double k_sum = 0.0;
  for (const SurfaceSample& s : sg.samples) {
    r.K_min = std::min(r.K_min, s.K);
    r.K_max = std::max(r.K_max, s.K);
    k_sum += s.K;
    r.delta_infimum = std::min(r.delta_infimum, s.delta);
    r.D_f_min = std::min(r.D_f_min, s.D_f);
    r.D_f_max = std::max(r.D_f_max, s.D_f);
    if (s.D_N) {
      r.DN_Df_max_residual = std::max(r.DN_Df_max_residual, std::fabs(*s.D_N - s.D_f));
    } else {
      ++r.gauss_map_degenerate_nodes;
    }
  }
  r.K_mean = k_sum / static_cast<double>(sg.samples.size());
  const CurvatureIntegrals integrals = curvature_integrals(spec, sg.grid, quad);
  r.total_curvature = integrals.total_curvature;
  r.ftc_criterion = integrals.ftc_criterion;
  r.residuals = identity_residuals(sg, opt);
  r.complete_certificate_at_grid_scale = r.delta_infimum > opt.delta_threshold;
  r.finite_total_curvature_hint = std::isfinite(r.ftc_criterion) && std::isfinite(r.total_curvature);
  return r;
}

}  // namespace harmsurf
