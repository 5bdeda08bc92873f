#pragma once

/**
 * @file errors.hpp
 * @brief Exception types shared by every harmsurf component.
 */

#include <complex>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace harmsurf {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SyntaxError : public Error {
 public:
  SyntaxError(std::size_t offset, std::vector<std::string> expected,
              const std::string& detail)
      : Error(compose(offset, expected, detail)),
        offset_(offset),
        expected_(std::move(expected)) {}

  std::size_t offset() const noexcept { return offset_; }
  const std::vector<std::string>& expected() const noexcept { return expected_; }

 private:
  static std::string compose(std::size_t offset,
                             const std::vector<std::string>& expected,
                             const std::string& detail) {
    std::string msg = "syntax error at byte " + std::to_string(offset) + ": " + detail;
    if (!expected.empty()) {
      msg += " (expected one of:";
      for (const auto& e : expected) msg += " " + e;
      msg += ")";
    }
    return msg;
  }

  std::size_t offset_;
  std::vector<std::string> expected_;
};

class UnknownFunction : public Error {
 public:
  UnknownFunction(std::string name, std::size_t offset)
      : Error("unknown identifier '" + name + "' at byte " + std::to_string(offset) +
              " (allowed: exp sin cos sinh cosh, literals i z)"),
        name_(std::move(name)),
        offset_(offset) {}

  const std::string& name() const noexcept { return name_; }
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::string name_;
  std::size_t offset_;
};

class DivisionByZero : public Error {
 public:
  explicit DivisionByZero(std::string subexpression)
      : Error("division by zero in '" + subexpression + "'"),
        subexpression_(std::move(subexpression)) {}

  const std::string& subexpression() const noexcept { return subexpression_; }

 private:
  std::string subexpression_;
};

class Overflow : public Error {
 public:
  using Error::Error;
};

enum class SingularKind { PEqualsQ, PQAntipodal, PsiPrimeZero, Pole };

inline const char* to_string(SingularKind kind) {
  switch (kind) {
    case SingularKind::PEqualsQ: return "PEqualsQ";
    case SingularKind::PQAntipodal: return "PQAntipodal";
    case SingularKind::PsiPrimeZero: return "PsiPrimeZero";
    case SingularKind::Pole: return "Pole";
  }
  return "unknown";
}

/// A guard of the integrand tripped at `z`. `node` is the grid index (j, k)
/// when the failure happened while sampling a grid.
class SingularPoint : public Error {
 public:
  SingularPoint(SingularKind kind, std::complex<double> z,
                std::optional<std::pair<int, int>> node = std::nullopt)
      : Error(compose(kind, z, node)), kind_(kind), z_(z), node_(node) {}

  SingularKind kind() const noexcept { return kind_; }
  std::complex<double> z() const noexcept { return z_; }
  const std::optional<std::pair<int, int>>& node() const noexcept { return node_; }

  SingularPoint at_node(int j, int k) const { return SingularPoint(kind_, z_, std::pair{j, k}); }

 private:
  static std::string compose(SingularKind kind, std::complex<double> z,
                             const std::optional<std::pair<int, int>>& node) {
    std::string msg = std::string("singular point (") + to_string(kind) + ") at z = " +
                      std::to_string(z.real()) + (z.imag() < 0 ? " - " : " + ") +
                      std::to_string(std::abs(z.imag())) + "i";
    if (node) {
      msg += " while sampling node (" + std::to_string(node->first) + ", " +
             std::to_string(node->second) + ")";
    }
    return msg;
  }

  SingularKind kind_;
  std::complex<double> z_;
  std::optional<std::pair<int, int>> node_;
};

class DegenerateFrame : public Error {
 public:
  using Error::Error;
};

class GaussMapDegenerate : public Error {
 public:
  using Error::Error;
};

class NorthPole : public Error {
 public:
  NorthPole() : Error("point is the north pole of S^2; stereographic projection undefined") {}
};

class InvalidParam : public Error {
 public:
  using Error::Error;
};

class GridTooSmall : public Error {
 public:
  using Error::Error;
};

class Unsupported : public Error {
 public:
  using Error::Error;
};

}  // namespace harmsurf
