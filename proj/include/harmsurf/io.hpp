#pragma once

/**
 * @file io.hpp
 * @brief OBJ mesh, CSV grid dump and JSON report serialization.
 *
 * All writers are deterministic: fixed row-major ordering and 17 significant
 * digits for every real.
 */

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "errors.hpp"
#include "geometry.hpp"
#include "residual.hpp"
#include "weierstrass.hpp"

namespace harmsurf {

namespace detail {

inline void put_real(std::ostream& os, double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  os << buf;
}

}  // namespace detail

/// `v` lines row-major, one `vn` per vertex from the unit normal, then
/// triangles. Each cell splits along the diagonal through its (j, k) corner
/// when j + k is even and along the other diagonal otherwise.
inline void write_obj(std::ostream& os, const SurfaceGrid& sg) {
  os << "# harmsurf " << sg.grid.nx << "x" << sg.grid.ny << "\n";
  for (const auto& s : sg.samples) {
    os << "v ";
    detail::put_real(os, s.f[0]);
    os << ' ';
    detail::put_real(os, s.f[1]);
    os << ' ';
    detail::put_real(os, s.f[2]);
    os << '\n';
  }
  for (const auto& s : sg.samples) {
    os << "vn ";
    detail::put_real(os, s.N[0]);
    os << ' ';
    detail::put_real(os, s.N[1]);
    os << ' ';
    detail::put_real(os, s.N[2]);
    os << '\n';
  }
  const auto& g = sg.grid;
  auto tri = [&os](std::size_t a, std::size_t b, std::size_t c) {
    os << "f " << a << "//" << a << ' ' << b << "//" << b << ' ' << c << "//" << c << '\n';
  };
  for (int k = 0; k + 1 < g.ny; ++k) {
    for (int j = 0; j + 1 < g.nx; ++j) {
      const std::size_t v00 = g.index(j, k) + 1, v10 = g.index(j + 1, k) + 1;
      const std::size_t v01 = g.index(j, k + 1) + 1, v11 = g.index(j + 1, k + 1) + 1;
      if ((j + k) % 2 == 0) {
        tri(v00, v10, v11);
        tri(v00, v11, v01);
      } else {
        tri(v00, v10, v01);
        tri(v10, v11, v01);
      }
    }
  }
}

inline void write_csv(std::ostream& os, const SurfaceGrid& sg) {
  os << "x,y,f1,f2,f3,K,D_f,theta,delta_pointwise\n";
  for (const auto& s : sg.samples) {
    const double row[] = {s.z.real(), s.z.imag(), s.f[0], s.f[1], s.f[2], s.K, s.D_f, s.theta, s.delta};
    for (std::size_t i = 0; i < std::size(row); ++i) {
      if (i) os << ',';
      detail::put_real(os, row[i]);
    }
    os << '\n';
  }
}

/// Writes through a sibling temporary file and renames on success, so a
/// failed run never leaves a partial file at `path`.
inline void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open '" + tmp.string() + "' for writing");
    out << content;
    out.flush();
    if (!out) throw Error("write to '" + tmp.string() + "' failed");
  }
  std::filesystem::rename(tmp, path);
}

/// Echo of the run configuration for the report's `input` block.
struct RunInput {
  std::string mode;  // "pq" or "psi"
  std::string p, q, psi;
  DomainGrid grid;
  QuadratureParams quad;
  std::map<std::string, double> tolerances;
};

inline nlohmann::json to_json(const ResidualReport& r) {
  nlohmann::json j;
  j["name"] = r.name;
  j["max_abs"] = r.max_abs;
  j["max_rel"] = r.max_rel;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  j["argmax"] = {r.argmax_node.real(), r.argmax_node.imag()};
  j["policy"] = to_string(r.policy);
  j["points"] = r.points;
  if (r.step) j["step"] = *r.step;
  return j;
}

inline nlohmann::json input_json(const RunInput& in) {
  nlohmann::json j;
  j["mode"] = in.mode;
  j["p"] = in.p.empty() ? nlohmann::json(nullptr) : nlohmann::json(in.p);
  j["q"] = in.q.empty() ? nlohmann::json(nullptr) : nlohmann::json(in.q);
  j["psi"] = in.psi.empty() ? nlohmann::json(nullptr) : nlohmann::json(in.psi);
  j["domain"] = {in.grid.x_min, in.grid.x_max, in.grid.y_min, in.grid.y_max};
  j["res"] = {in.grid.nx, in.grid.ny};
  j["base"] = {in.grid.base.real(), in.grid.base.imag()};
  j["quad"] = {{"order", in.quad.order}, {"panel_length", in.quad.panel_length}};
  j["tolerances"] = nlohmann::json::object();
  for (const auto& [k, v] : in.tolerances) j["tolerances"][k] = v;
  return j;
}

/// The full report. `oracles` may be empty (synth/analyze without verify).
inline nlohmann::json report_json(const RunInput& in, const AnalysisReport& a,
                                  const std::vector<ResidualReport>& oracles = {}) {
  nlohmann::json j;
  j["input"] = input_json(in);
  j["geometry"] = {
      {"K_min", a.K_min},
      {"K_max", a.K_max},
      {"K_mean", a.K_mean},
      {"total_curvature", a.total_curvature},
      {"ftc_criterion_integral", a.ftc_criterion},
      {"delta_infimum", a.delta_infimum},
      {"D_f_min", a.D_f_min},
      {"D_f_max", a.D_f_max},
      {"DN_Df_max_residual", a.DN_Df_max_residual},
  };
  nlohmann::json res = nlohmann::json::array();
  for (const auto& r : a.residuals) res.push_back(to_json(r));
  for (const auto& r : oracles) res.push_back(to_json(r));
  j["residuals"] = res;
  j["flags"] = {
      {"complete_certificate_at_grid_scale", a.complete_certificate_at_grid_scale},
      {"finite_total_curvature_hint", a.finite_total_curvature_hint},
      {"gauss_map_degenerate_nodes", a.gauss_map_degenerate_nodes},
  };
  return j;
}

/// Report for a run that stopped at a singular point.
inline nlohmann::json singular_report_json(const RunInput& in, const SingularPoint& e) {
  nlohmann::json j;
  j["input"] = input_json(in);
  nlohmann::json err = {{"kind", to_string(e.kind())},
                        {"z", {e.z().real(), e.z().imag()}},
                        {"message", e.what()}};
  if (e.node()) err["node"] = {e.node()->first, e.node()->second};
  j["error"] = err;
  return j;
}

}  // namespace harmsurf
