#pragma once

// Command-line frontend. Kept in a header so tests can drive it in-process.
//
// Exit codes: 0 ok, 1 usage error, 2 singular input, 3 verification failure.

#include <charconv>
#include <cstdio>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "CLI11.hpp"
#include "harmsurf/harmsurf.hpp"

namespace harmsurf::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kSingular = 2, kVerifyFailed = 3 };

class UsageError : public Error {
 public:
  using Error::Error;
};

inline std::vector<double> parse_list(std::string_view text, std::size_t expected, const char* flag) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string_view::npos) comma = text.size();
    std::string_view item = text.substr(pos, comma - pos);
    while (!item.empty() && item.front() == ' ') item.remove_prefix(1);
    while (!item.empty() && item.back() == ' ') item.remove_suffix(1);
    if (!item.empty() && item.front() == '+') item.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc() || ptr != item.data() + item.size() || !std::isfinite(v)) {
      throw UsageError(std::string(flag) + ": cannot parse '" + std::string(item) + "' as a number");
    }
    out.push_back(v);
    pos = comma + 1;
  }
  if (out.size() != expected) {
    throw UsageError(std::string(flag) + ": expected " + std::to_string(expected) +
                     " comma-separated values, got " + std::to_string(out.size()));
  }
  return out;
}

struct Options {
  std::string p, q, psi;
  std::string domain = "-1,1,-1,1";
  std::string res = "33,33";
  std::string base;
  int quad_order = 16;
  double quad_panel = 0.25;
  std::string out, report, csv;
  unsigned threads = 1;

  double tol_singular = 1e-9;
  double tol_verify = 1e-8;
  double tol_bilinear = 1e-10;
  double tol_unit = 1e-10;
  double tol_bound = 1e-12;
  double tol_gauss_map = 1e-12;
  double tol_harmonic = 1e-5;
  double tol_cr = 1e-6;
  double tol_path = 1e-9;
  double tol_shape_fd = 1e-4;
  double tol_closed_form = 1e-8;
  double delta = 0.0;

  // example subcommand
  std::string example_id;
  std::optional<double> a;
  bool domain_given = false, res_given = false;

  bool inject_nonharmonic = false;  // test hook for the verify controls

  GeometryOptions geometry() const {
    GeometryOptions g;
    g.singular_tol = tol_singular;
    g.gauss_map_tol = tol_gauss_map;
    g.identity_tol = tol_verify;
    g.bilinear_tol = tol_bilinear;
    g.unit_tol = tol_unit;
    g.bound_slack = tol_bound;
    g.delta_threshold = delta;
    return g;
  }

  VerifyOptions verify() const {
    VerifyOptions v;
    v.harmonic_tol = tol_harmonic;
    v.cr_tol = tol_cr;
    v.path_tol = tol_path;
    v.shape_fd_tol = tol_shape_fd;
    v.transform_tol = tol_verify;
    return v;
  }

  QuadratureParams quad() const { return {quad_order, quad_panel}; }

  std::map<std::string, double> tolerance_map() const {
    return {{"singular", tol_singular},   {"verify", tol_verify},     {"bilinear", tol_bilinear},
            {"unit", tol_unit},           {"bound", tol_bound},       {"gauss_map", tol_gauss_map},
            {"harmonic", tol_harmonic},   {"cr", tol_cr},             {"path", tol_path},
            {"shape_fd", tol_shape_fd},   {"closed_form", tol_closed_form}, {"delta", delta}};
  }
};

inline void add_common(CLI::App& cmd, Options& o, bool with_expressions) {
  if (with_expressions) {
    cmd.add_option("--p", o.p, "P(z), stereographic coordinate of f+");
    cmd.add_option("--q", o.q, "Q(z), stereographic coordinate of f-");
    cmd.add_option("--psi", o.psi, "psi(z) for the constant-f- family");
  }
  cmd.add_option("--domain", o.domain, "xmin,xmax,ymin,ymax")->each([&o](const std::string&) {
    o.domain_given = true;
  });
  cmd.add_option("--res", o.res, "nx,ny grid nodes")->each([&o](const std::string&) { o.res_given = true; });
  cmd.add_option("--base", o.base, "re,im integration base point (default: domain center)");
  cmd.add_option("--quad-order", o.quad_order, "Gauss-Legendre order (4..32)");
  cmd.add_option("--quad-panel", o.quad_panel, "maximum quadrature panel length");
  cmd.add_option("--out", o.out, "OBJ mesh output");
  cmd.add_option("--report", o.report, "JSON report output");
  cmd.add_option("--csv", o.csv, "CSV grid dump output");
  cmd.add_option("--threads", o.threads, "sampler threads");
  cmd.add_option("--tol-singular", o.tol_singular, "guard tolerance for |P-Q|, |conj(P)Q+1|, |psi'|");
  cmd.add_option("--tol-verify", o.tol_verify, "tolerance of pipeline identities");
  cmd.add_option("--tol-bilinear", o.tol_bilinear, "tolerance of <f_z,f_z> = -1");
  cmd.add_option("--tol-unit", o.tol_unit, "tolerance of unit-vector and angle identities");
  cmd.add_option("--tol-bound", o.tol_bound, "slack of the curvature bound");
  cmd.add_option("--tol-gauss-map", o.tol_gauss_map, "l^2 + m^2 regularity threshold");
  cmd.add_option("--tol-harmonic", o.tol_harmonic, "harmonicity oracle tolerance");
  cmd.add_option("--tol-cr", o.tol_cr, "Cauchy-Riemann oracle tolerance");
  cmd.add_option("--tol-path", o.tol_path, "path-independence oracle tolerance");
  cmd.add_option("--tol-shape-fd", o.tol_shape_fd, "finite-difference curvature oracle tolerance");
  cmd.add_option("--tol-closed-form", o.tol_closed_form, "closed-form deviation tolerance (example)");
  cmd.add_option("--delta", o.delta, "completeness certificate threshold on delta_infimum");
  cmd.add_flag("--inject-nonharmonic", o.inject_nonharmonic)->group("");
}

struct Run {
  IntegrandSpec spec;
  RunInput input;
  SurfaceGrid surface;
  AnalysisReport analysis;
};

inline DomainGrid grid_from(const Options& o, std::optional<DomainGrid> preset = std::nullopt) {
  DomainGrid g = preset.value_or(DomainGrid{});
  if (!preset || o.domain_given) {
    const auto d = parse_list(o.domain, 4, "--domain");
    g.x_min = d[0];
    g.x_max = d[1];
    g.y_min = d[2];
    g.y_max = d[3];
  }
  if (!preset || o.res_given) {
    const auto r = parse_list(o.res, 2, "--res");
    if (r[0] != std::floor(r[0]) || r[1] != std::floor(r[1]) || r[0] < 2 || r[1] < 2 || r[0] > 1e5 ||
        r[1] > 1e5) {
      throw UsageError("--res: expected two integers >= 2");
    }
    g.nx = static_cast<int>(r[0]);
    g.ny = static_cast<int>(r[1]);
  }
  if (!o.base.empty()) {
    const auto b = parse_list(o.base, 2, "--base");
    g.base = {b[0], b[1]};
  } else {
    g.base = {0.5 * (g.x_min + g.x_max), 0.5 * (g.y_min + g.y_max)};
  }
  try {
    g.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return g;
}

inline IntegrandSpec spec_from(const Options& o, RunInput& in) {
  const bool pq = !o.p.empty() || !o.q.empty();
  if (pq && !o.psi.empty()) throw UsageError("give either --p/--q or --psi, not both");
  if (pq && (o.p.empty() || o.q.empty())) throw UsageError("--p and --q must be given together");
  if (!pq && o.psi.empty()) throw UsageError("missing integrand: give --p and --q, or --psi");
  if (pq) {
    in.mode = "pq";
    in.p = o.p;
    in.q = o.q;
    return IntegrandSpec::from_pq(parse(o.p), parse(o.q), o.tol_singular);
  }
  in.mode = "psi";
  in.psi = o.psi;
  return IntegrandSpec::from_psi(parse(o.psi), o.tol_singular);
}

inline Run execute(const Options& o, IntegrandSpec spec, RunInput input) {
  try {
    o.quad().validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  input.quad = o.quad();
  input.tolerances = o.tolerance_map();
  Run run{std::move(spec), std::move(input), {}, {}};
  run.surface = sample_surface(run.spec, run.input.grid, run.input.quad, std::max(1u, o.threads));
  complete_geometry(run.surface, o.geometry());
  run.analysis = analyze(run.surface, run.spec, run.input.quad, o.geometry());
  return run;
}

inline std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

inline void write_outputs(const Options& o, const Run& run, const nlohmann::json& report,
                          std::ostream& out) {
  if (!o.out.empty()) {
    std::ostringstream obj;
    write_obj(obj, run.surface);
    write_file_atomic(o.out, obj.str());
  }
  if (!o.csv.empty()) {
    std::ostringstream csv;
    write_csv(csv, run.surface);
    write_file_atomic(o.csv, csv.str());
  }
  if (!o.report.empty()) {
    write_file_atomic(o.report, dump(report));
  } else {
    out << dump(report);
  }
}

inline void print_residual(std::ostream& os, const ResidualReport& r) {
  char buf[256];
  std::snprintf(buf, sizeof buf, "%s %-32s max_abs=%.3e max_rel=%.3e tol=%.1e (%s)", r.pass ? "PASS" : "FAIL",
                r.name.c_str(), r.max_abs, r.max_rel, r.tolerance, to_string(r.policy));
  os << buf;
  if (r.step) {
    std::snprintf(buf, sizeof buf, " h=%.3e", *r.step);
    os << buf;
  }
  os << '\n';
}

inline std::vector<ResidualReport> oracles_for(const Options& o, const Run& run) {
  if (!o.inject_nonharmonic) return run_oracles(run.surface, run.spec, run.input.quad, o.verify());
  SurfaceGrid perturbed = run.surface;
  for (auto& s : perturbed.samples) s.f[0] += s.z.real() * s.z.real();
  return run_oracles(perturbed, run.spec, run.input.quad, o.verify());
}

inline int cmd_synth(const Options& o, std::ostream& out) {
  RunInput in;
  in.grid = grid_from(o);
  IntegrandSpec spec = spec_from(o, in);
  const Run run = execute(o, std::move(spec), std::move(in));
  Options with_obj = o;
  if (with_obj.out.empty()) with_obj.out = "surface.obj";
  std::ostringstream sink;
  write_outputs(with_obj, run, report_json(run.input, run.analysis), sink);
  out << "wrote " << with_obj.out << " (" << run.surface.samples.size() << " vertices, "
      << 2 * (run.input.grid.nx - 1) * (run.input.grid.ny - 1) << " triangles)\n";
  return kOk;
}

inline int cmd_analyze(const Options& o, std::ostream& out) {
  RunInput in;
  in.grid = grid_from(o);
  IntegrandSpec spec = spec_from(o, in);
  const Run run = execute(o, std::move(spec), std::move(in));
  write_outputs(o, run, report_json(run.input, run.analysis), out);
  return kOk;
}

inline int cmd_verify(const Options& o, std::ostream& out) {
  RunInput in;
  in.grid = grid_from(o);
  IntegrandSpec spec = spec_from(o, in);
  const Run run = execute(o, std::move(spec), std::move(in));
  const auto oracles = oracles_for(o, run);
  bool ok = true;
  for (const auto& r : oracles) {
    print_residual(out, r);
    ok = ok && r.pass;
  }
  if (!o.out.empty() || !o.csv.empty() || !o.report.empty()) {
    std::ostringstream sink;
    write_outputs(o, run, report_json(run.input, run.analysis, oracles), sink);
  }
  return ok ? kOk : kVerifyFailed;
}

inline int cmd_example(const Options& o, std::ostream& out) {
  ExampleSpec ex = make_example(o.example_id, o.a);
  RunInput in;
  in.grid = grid_from(o, ex.domain);
  if (ex.is_psi()) {
    in.mode = "psi";
    in.psi = ex.psi_text;
  } else {
    in.mode = "pq";
    in.p = ex.p_text;
    in.q = ex.q_text;
  }
  const Run run = execute(o, ex.integrand(o.tol_singular), std::move(in));
  const auto oracles = oracles_for(o, run);
  const double deviation = closed_form_deviation(ex, run.surface);

  nlohmann::json report = report_json(run.input, run.analysis, oracles);
  report["example"] = {{"id", ex.id},
                       {"a", ex.a ? nlohmann::json(*ex.a) : nlohmann::json(nullptr)},
                       {"notes", ex.notes},
                       {"closed_form_max_deviation", deviation},
                       {"closed_form_tolerance", o.tol_closed_form},
                       {"closed_form_pass", deviation < o.tol_closed_form}};

  bool ok = deviation < o.tol_closed_form;
  for (const auto& r : run.analysis.residuals) {
    print_residual(out, r);
    ok = ok && r.pass;
  }
  for (const auto& r : oracles) {
    print_residual(out, r);
    ok = ok && r.pass;
  }
  char buf[160];
  std::snprintf(buf, sizeof buf, "%s %-32s max_abs=%.3e tol=%.1e\n", deviation < o.tol_closed_form ? "PASS" : "FAIL",
                "closed_form_deviation", deviation, o.tol_closed_form);
  out << buf;
  std::snprintf(buf, sizeof buf, "delta_infimum=%.17g total_curvature=%.17g\n", run.analysis.delta_infimum,
                run.analysis.total_curvature);
  out << buf;
  std::ostringstream sink;
  write_outputs(o, run, report, sink);
  return ok ? kOk : kVerifyFailed;
}

/// Entry point. `args` excludes the program name.
inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout,
               std::ostream& err = std::cerr) {
  CLI::App app{"Synthesize and analyze non-conformal harmonic surfaces from holomorphic data"};
  app.name("harmsurf");
  app.require_subcommand(1);
  Options o;

  CLI::App* synth = app.add_subcommand("synth", "sample the surface and write an OBJ mesh");
  add_common(*synth, o, true);
  CLI::App* analyze_cmd = app.add_subcommand("analyze", "emit the JSON analysis report");
  add_common(*analyze_cmd, o, true);
  CLI::App* verify = app.add_subcommand("verify", "run the independent oracles");
  add_common(*verify, o, true);
  CLI::App* example = app.add_subcommand("example", "run a catalog surface against its closed form");
  add_common(*example, o, false);
  example->add_option("id", o.example_id, "ex5_1 | ex5_2 | ex5_3 | ex5_4")->required();
  example->add_option("--a", o.a, "family parameter");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }

  RunInput echo;
  try {
    if (synth->parsed()) return cmd_synth(o, out);
    if (analyze_cmd->parsed()) return cmd_analyze(o, out);
    if (verify->parsed()) return cmd_verify(o, out);
    if (example->parsed()) return cmd_example(o, out);
  } catch (const SingularPoint& e) {
    err << "error: " << e.what() << "\n";
    if (!o.report.empty()) {
      try {
        echo.grid = grid_from(o);
        spec_from(o, echo);
      } catch (const Error&) {
      }
      echo.quad = o.quad();
      echo.tolerances = o.tolerance_map();
      write_file_atomic(o.report, dump(singular_report_json(echo, e)));
    }
    return kSingular;
  } catch (const DivisionByZero& e) {
    err << "error: " << e.what() << "\n";
    return kSingular;
  } catch (const Overflow& e) {
    err << "error: " << e.what() << "\n";
    return kSingular;
  } catch (const DegenerateFrame& e) {
    err << "error: " << e.what() << "\n";
    return kSingular;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace harmsurf::cli
