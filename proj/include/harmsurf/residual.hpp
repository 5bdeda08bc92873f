#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>

namespace harmsurf {

/// How a check decides pass/fail from its maxima.
enum class ResidualPolicy { Absolute, Relative, Either };

inline const char* to_string(ResidualPolicy p) {
  switch (p) {
    case ResidualPolicy::Absolute: return "absolute";
    case ResidualPolicy::Relative: return "relative";
    case ResidualPolicy::Either: return "either";
  }
  return "unknown";
}

/// Worst-case outcome of one verified identity or oracle over a set of points.
struct ResidualReport {
  std::string name;
  double max_abs = 0.0;
  double max_rel = 0.0;
  std::complex<double> argmax_node{};
  bool pass = true;
  double tolerance = 0.0;
  ResidualPolicy policy = ResidualPolicy::Absolute;
  std::optional<double> step;  // stencil step for finite-difference oracles
  std::size_t points = 0;
};

/// Streams per-point errors into a ResidualReport.
///
/// The relative error of a point is abs / max(|reference|, rel_floor); a
/// floor keeps values near zero from producing meaningless ratios.
class ResidualAccumulator {
 public:
  ResidualAccumulator(std::string name, double tolerance, ResidualPolicy policy,
                      double rel_floor = 1e-300)
      : rel_floor_(rel_floor) {
    report_.name = std::move(name);
    report_.tolerance = tolerance;
    report_.policy = policy;
  }

  void add(std::complex<double> z, double abs_err, double reference_magnitude) {
    if (!std::isfinite(abs_err)) abs_err = std::numeric_limits<double>::max();
    record(z, abs_err, abs_err / std::max(std::fabs(reference_magnitude), rel_floor_));
  }

  /// Record a point whose relative error is computed by the caller.
  void record(std::complex<double> z, double abs_err, double rel) {
    if (!std::isfinite(abs_err)) abs_err = std::numeric_limits<double>::max();
    if (!std::isfinite(rel)) rel = std::numeric_limits<double>::max();
    const double key = report_.policy == ResidualPolicy::Relative ? rel : abs_err;
    const double best = report_.policy == ResidualPolicy::Relative ? report_.max_rel : report_.max_abs;
    if (report_.points == 0 || key > best) report_.argmax_node = z;
    report_.max_abs = std::max(report_.max_abs, abs_err);
    report_.max_rel = std::max(report_.max_rel, rel);
    ++report_.points;
  }

  /// Compare a computed value with a reference value.
  void compare(std::complex<double> z, double computed, double reference) {
    add(z, std::fabs(computed - reference), reference);
  }

  void set_step(double h) { report_.step = h; }

  ResidualReport finish() const {
    ResidualReport r = report_;
    const bool abs_ok = r.max_abs <= r.tolerance;
    const bool rel_ok = r.max_rel <= r.tolerance;
    switch (r.policy) {
      case ResidualPolicy::Absolute: r.pass = abs_ok; break;
      case ResidualPolicy::Relative: r.pass = rel_ok; break;
      case ResidualPolicy::Either: r.pass = abs_ok || rel_ok; break;
    }
    return r;
  }

 private:
  ResidualReport report_;
  double rel_floor_;
};

}  // namespace harmsurf
