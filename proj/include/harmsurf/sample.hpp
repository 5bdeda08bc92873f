#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <vector>

#include "jet.hpp"
#include "vec3.hpp"

namespace harmsurf {

/// Everything known about the surface at one parameter point.
///
/// The sampler fills z, f, f_x, f_y, fz, fzz, p and q; `complete_geometry`
/// fills the rest.
struct SurfaceSample {
  complex z;
  Vec3 f;
  Vec3 f_x, f_y;
  CVec3 fz;   // f_z
  CVec3 fzz;  // f_zz
  Jet2 p, q;  // stereographic coordinates of f+ and f- (psi mode: P = 2/psi', Q = 0)

  Vec3 N;
  double E = 0, F = 0, G = 0;
  double ell = 0, m = 0;  // <f_xx, N>, <f_xy, N>
  double theta = 0, phi = 0;
  double cos_theta = 0, sin_theta = 0;

  double K = 0;          // closed form in P, Q
  double K_numeric = 0;  // from <f_zz, N>
  double K_gauss = 0;    // Gauss equation (ell*(-ell) - m^2)/(EG - F^2)
  double D_f = 0;
  std::optional<double> D_N;  // empty where the Gauss map is degenerate
  Vec3 f_plus, f_minus;
  double area_density = 0;
  double delta = 0;  // |conj(P) Q + 1|^2 / |P - Q|^2
};

}  // namespace harmsurf
