#pragma once

// Fixture pool shared by the unit and acceptance suites: the four catalog
// surfaces at several parameters, randomized safe (P, Q) pairs and a planar
// control.

#include <cmath>
#include <complex>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "harmsurf/harmsurf.hpp"

namespace harmsurf::testing {

struct Fixture {
  std::string name;
  IntegrandSpec spec;
  DomainGrid grid;
  bool planar = false;
};

inline std::string complex_literal(std::complex<double> c) {
  char buf[96];
  std::snprintf(buf, sizeof buf, "(%.6f + %.6f*i)", c.real(), c.imag());
  return buf;
}

inline std::vector<Fixture> catalog_fixtures(int res = 33) {
  struct Entry {
    const char* id;
    std::optional<double> a;
  };
  const Entry entries[] = {{"ex5_1", std::nullopt}, {"ex5_2", 1.0}, {"ex5_2", 2.0}, {"ex5_3", 2.0},
                           {"ex5_3", 3.0},          {"ex5_4", 2.0}, {"ex5_4", 3.0}};
  std::vector<Fixture> out;
  for (const auto& e : entries) {
    ExampleSpec ex = make_example(e.id, e.a);
    DomainGrid g = ex.domain;
    g.nx = g.ny = res;
    std::string name = e.id;
    if (e.a) name += " a=" + std::to_string(static_cast<int>(*e.a));
    out.push_back({name, ex.integrand(), g});
  }
  return out;
}

/// Rejection-sampled (P, Q) pairs whose guards stay >= `guard` on a dense
/// sampling of the domain [-0.5, 0.5]^2.
inline std::vector<Fixture> random_pq_fixtures(int count, int res = 17, double guard = 0.3,
                                               unsigned long long seed = 20261015ULL) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::acos(-1.0));
  std::uniform_real_distribution<double> big(0.3, 3.0), small(0.2, 1.5);
  std::uniform_int_distribution<int> pick(0, 4);
  auto polar = [&](double r) { return std::polar(r, angle(rng)); };
  auto random_text = [&]() {
    const std::string A = complex_literal(polar(big(rng)));
    const std::string B = complex_literal(polar(small(rng)));
    switch (pick(rng)) {
      case 0: return A + "*exp(" + B + "*z)";
      case 1: return A + " + " + B + "*z";
      case 2: return A + " + " + B + "*z^2";
      case 3: return A + "*cosh(" + B + "*z)";
      default: return A + " + " + B + "*sin(z)";
    }
  };

  const DomainGrid grid = DomainGrid::make(-0.5, 0.5, -0.5, 0.5, res, res);
  std::vector<Fixture> out;
  while (static_cast<int>(out.size()) < count) {
    const std::string p = random_text();
    const std::string q = random_text();
    const Expr pe = parse(p), qe = parse(q);
    double worst = HUGE_VAL;
    const int dense = 65;
    for (int k = 0; k < dense; ++k) {
      for (int j = 0; j < dense; ++j) {
        const complex z(-0.5 + j / (dense - 1.0), -0.5 + k / (dense - 1.0));
        const complex P = eval_value(pe, z), Q = eval_value(qe, z);
        worst = std::min({worst, std::abs(P - Q), std::abs(std::conj(P) * Q + 1.0)});
      }
    }
    if (worst < guard) continue;
    out.push_back({"random[" + std::to_string(out.size()) + "] P=" + p + " Q=" + q,
                   IntegrandSpec::from_pq(pe, qe), grid});
  }
  return out;
}

inline Fixture planar_fixture(int res = 17) {
  return {"planar P=2 Q=0", IntegrandSpec::from_pq(parse("2"), parse("0")),
          DomainGrid::make(-1, 1, -1, 1, res, res), true};
}

inline std::vector<Fixture> all_fixtures() {
  std::vector<Fixture> out = catalog_fixtures();
  for (auto& f : random_pq_fixtures(10)) out.push_back(std::move(f));
  out.push_back(planar_fixture());
  return out;
}

/// Same surface and domain on a finer lattice, for the finite-difference
/// oracle whose error is set by the grid step.
inline Fixture refined(const Fixture& f, int res = 65) {
  Fixture out = f;
  out.grid.nx = out.grid.ny = res;
  return out;
}

/// Sampled grid with completed geometry.
inline SurfaceGrid build(const Fixture& f, const QuadratureParams& quad = {}) {
  SurfaceGrid sg = sample_surface(f.spec, f.grid, quad);
  complete_geometry(sg);
  return sg;
}

}  // namespace harmsurf::testing
