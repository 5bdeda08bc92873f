#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "harmsurf/expr.hpp"
#include "harmsurf/jet.hpp"
#include "random_expr.hpp"

using namespace harmsurf;
using Catch::Approx;

namespace {

bool close(complex a, complex b, double tol) { return std::abs(a - b) <= tol; }

const complex I(0.0, 1.0);

}  // namespace

TEST_CASE("parse builds the expected trees", "[holo_expr][parse]") {
  SECTION("identity") {
    const Expr e = parse("z");
    CHECK(e->op() == Op::Var);
  }
  SECTION("2*exp(z)") {
    const Expr e = parse("2*exp(z)");
    const Expr want = expr::mul(expr::constant(2.0), expr::unary(Op::Exp, expr::var()));
    CHECK(structurally_equal(*e, *want));
  }
  SECTION("i*2*exp(-i*z), a rotational-surface psi with a = 2") {
    const Expr e = parse("i*2*exp(-i*z)");
    const Expr want =
        expr::mul(expr::mul(expr::constant(I), expr::constant(2.0)),
                  expr::unary(Op::Exp, expr::mul(expr::neg(expr::constant(I)), expr::var())));
    CHECK(structurally_equal(*e, *want));
  }
  SECTION("precedence and associativity") {
    CHECK(structurally_equal(*parse("z - 1 - 2"),
                             *expr::sub(expr::sub(expr::var(), expr::constant(1.0)), expr::constant(2.0))));
    CHECK(structurally_equal(*parse("-z^2"), *expr::neg(expr::pow(expr::var(), 2))));
    CHECK(structurally_equal(*parse(" 1 +\tz * 3 "),
                             *expr::add(expr::constant(1.0), expr::mul(expr::var(), expr::constant(3.0)))));
  }
  SECTION("number forms") {
    CHECK(parse("0.25")->constant() == complex(0.25));
    CHECK(parse(".5")->constant() == complex(0.5));
    CHECK(parse("1e-3")->constant() == complex(1e-3));
    CHECK(parse("2.5E+2")->constant() == complex(250.0));
  }
}

TEST_CASE("parse rejects what the grammar excludes", "[holo_expr][parse]") {
  SECTION("branch-cut functions are unknown") {
    try {
      parse("log(z)");
      FAIL("expected UnknownFunction");
    } catch (const UnknownFunction& e) {
      CHECK(e.name() == "log");
      CHECK(e.offset() == 0);
    }
    CHECK_THROWS_AS(parse("sqrt(z)"), UnknownFunction);
    CHECK_THROWS_AS(parse("2*x"), UnknownFunction);
  }
  SECTION("syntax errors carry offset and expected set") {
    try {
      parse("2*");
      FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
      CHECK(e.offset() == 2);
      CHECK_FALSE(e.expected().empty());
    }
    try {
      parse("(z + 1");
      FAIL("expected SyntaxError");
    } catch (const SyntaxError& e) {
      CHECK(e.offset() == 6);
      REQUIRE(e.expected().size() == 1);
      CHECK(e.expected()[0] == "')'");
    }
  }
  SECTION("implicit multiplication is not supported") {
    CHECK_THROWS_AS(parse("2z"), SyntaxError);
    CHECK_THROWS_AS(parse("2 exp(z)"), SyntaxError);
  }
  SECTION("power exponents are unsigned integers <= 64") {
    CHECK_NOTHROW(parse("z^64"));
    CHECK_THROWS_AS(parse("z^65"), SyntaxError);
    CHECK_THROWS_AS(parse("z^-1"), SyntaxError);
    CHECK_THROWS_AS(parse("z^1.5"), SyntaxError);
    CHECK_THROWS_AS(parse("z^2^2"), SyntaxError);
  }
  SECTION("misc") {
    CHECK_THROWS_AS(parse(""), SyntaxError);
    CHECK_THROWS_AS(parse("--z"), SyntaxError);
    CHECK_THROWS_AS(parse("exp z"), SyntaxError);
    CHECK_THROWS_AS(parse("z)"), SyntaxError);
  }
}

TEST_CASE("eval_jet examples", "[holo_expr][eval]") {
  SECTION("z^2 at 1+i") {
    const Jet2 j = eval_jet(parse("z^2"), complex(1, 1));
    CHECK(close(j.v(), complex(0, 2), 1e-15));
    CHECK(close(j.d1(), complex(2, 2), 1e-15));
    CHECK(close(j.d2(), complex(2, 0), 1e-15));
  }
  SECTION("exp at 0") {
    const Jet2 j = eval_jet(parse("exp(z)"), 0.0);
    CHECK(close(j.v(), 1.0, 1e-15));
    CHECK(close(j.d1(), 1.0, 1e-15));
    CHECK(close(j.d2(), 1.0, 1e-15));
  }
  SECTION("helicoid P = 2 e^z at 0") {
    const Jet2 j = eval_jet(parse("2*exp(z)"), 0.0);
    CHECK(close(j.v(), 2.0, 1e-15));
    CHECK(close(j.d1(), 2.0, 1e-15));
    CHECK(close(j.d2(), 2.0, 1e-15));
  }
  SECTION("pole reports the denominator") {
    try {
      eval_jet(parse("1/z"), 0.0);
      FAIL("expected DivisionByZero");
    } catch (const DivisionByZero& e) {
      CHECK(e.subexpression() == "z");
    }
    CHECK_THROWS_AS(eval_value(parse("1/(z - 1)"), 1.0), DivisionByZero);
    CHECK_THROWS_AS(eval_jet(parse("1/(z*1e-200*1e-200)"), 1.0), DivisionByZero);
  }
  SECTION("overflow is an error") {
    CHECK_THROWS_AS(eval_jet(parse("exp(exp(z))"), 10.0), Overflow);
    CHECK_THROWS_AS(eval_value(parse("exp(exp(z))"), 10.0), Overflow);
  }
  SECTION("third order through sin and division") {
    // d^3/dz^3 of sin(z)/(2 + z) at 0.3, reference by the Leibniz rule.
    const double z = 0.3;
    const Jet<3> j = eval_jet<3>(*parse("sin(z)/(2 + z)"), z);
    const double u[] = {std::sin(z), std::cos(z), -std::sin(z), -std::cos(z)};
    const double w[] = {1 / (2 + z), -1 / std::pow(2 + z, 2), 2 / std::pow(2 + z, 3), -6 / std::pow(2 + z, 4)};
    const double d3 = u[3] * w[0] + 3 * u[2] * w[1] + 3 * u[1] * w[2] + u[0] * w[3];
    CHECK(j.derivative(3).real() == Approx(d3).epsilon(1e-13));
  }
}

TEST_CASE("jet arithmetic obeys the product and quotient rules", "[holo_expr][jet]") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  auto rj = [&] {
    return Jet2::from_derivatives({complex(u(rng), u(rng)), complex(u(rng), u(rng)), complex(u(rng), u(rng))});
  };
  for (int trial = 0; trial < 200; ++trial) {
    const Jet2 a = rj(), b = rj();
    const Jet2 p = a * b;
    CHECK(close(p.d1(), a.d1() * b.v() + a.v() * b.d1(), 1e-12));
    CHECK(close(p.d2(), a.d2() * b.v() + 2.0 * a.d1() * b.d1() + a.v() * b.d2(), 1e-12));
    if (std::abs(b.v()) > 0.1) {
      const Jet2 q = a / b;
      CHECK(close(q.v() * b.v(), a.v(), 1e-12));
      CHECK(close(q.d1(), (a.d1() * b.v() - a.v() * b.d1()) / (b.v() * b.v()), 1e-9));
      const Jet2 back = q * b;
      CHECK(close(back.d2(), a.d2(), 1e-9));
    }
  }
  CHECK_THROWS_AS(Jet2::variable(1.0) / Jet2::constant(0.0), DivisionByZero);
}

TEST_CASE("jet derivatives match a symbolic reference", "[holo_expr][property]") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const Expr e = testing::random_expr(rng, 3);
    const Expr de = testing::derivative(e);
    const complex z(coord(rng), coord(rng));
    Jet2 j, dj;
    try {
      j = eval_jet(e, z);
      dj = eval_jet(de, z);
    } catch (const Error&) {
      continue;
    }
    const double scale = std::max({1.0, std::abs(j.v()), std::abs(j.d1()), std::abs(j.d2())});
    if (scale > 1e6) continue;
    INFO(print(e) << " at " << z);
    CHECK(std::abs(j.d1() - dj.v()) <= 1e-11 * scale);
    CHECK(std::abs(j.d2() - dj.d1()) <= 1e-11 * scale);
    ++checked;
  }
  CHECK(checked > 200);
}

TEST_CASE("jets satisfy Cauchy-Riemann against difference quotients", "[holo_expr][property]") {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  const double h = 1e-5;
  const complex ih(0.0, h);
  int checked = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const Expr e = testing::random_expr(rng, 3);
    const complex z(coord(rng), coord(rng));
    try {
      const Jet2 j = eval_jet(e, z);
      const double scale = std::max({1.0, std::abs(j.v()), std::abs(j.d1()), std::abs(j.d2())});
      if (scale > 100.0) continue;
      const complex real_step = (eval_value(e, z + h) - eval_value(e, z - h)) / (2.0 * h);
      const complex imag_step = (eval_value(e, z + ih) - eval_value(e, z - ih)) / (2.0 * ih);
      INFO(print(e) << " at " << z);
      CHECK(std::abs(real_step - j.d1()) < 1e-6);
      CHECK(std::abs(imag_step - j.d1()) < 1e-6);
      ++checked;
    } catch (const Error&) {
      continue;
    }
  }
  CHECK(checked > 150);
}

TEST_CASE("print then parse reproduces the tree", "[holo_expr][property]") {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 500; ++trial) {
    const Expr e = testing::random_expr(rng, 4);
    const std::string text = print(e);
    INFO(text);
    CHECK(structurally_equal(*parse(text), *e));
  }
  CHECK(structurally_equal(*parse(print(parse("i*2*exp(-i*z)"))), *parse("i*2*exp(-i*z)")));
}

TEST_CASE("elementary function jets", "[holo_expr][jet]") {
  const complex z(0.4, -0.7);
  const Jet2 x = Jet2::variable(z);
  CHECK(close(sin(x).d1(), std::cos(z), 1e-14));
  CHECK(close(sin(x).d2(), -std::sin(z), 1e-14));
  CHECK(close(cos(x).d1(), -std::sin(z), 1e-14));
  CHECK(close(cos(x).d2(), -std::cos(z), 1e-14));
  CHECK(close(sinh(x).d2(), std::sinh(z), 1e-14));
  CHECK(close(cosh(x).d1(), std::sinh(z), 1e-14));
  CHECK(close(pow(x, 5).d2(), 20.0 * std::pow(z, 3), 1e-13));
  CHECK(close(pow(x, 0).v(), 1.0, 0.0));
  const Jet<3> y = Jet<3>::variable(z);
  CHECK(close(differentiate(exp(2.0 * y)).d2(), 8.0 * std::exp(2.0 * z), 1e-13));
}
