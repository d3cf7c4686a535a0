#include "spirallab/expr.hpp"

#include <cmath>
#include <complex>
#include <random>

#include "doctest.h"

using namespace spirallab;
using namespace spirallab::expr;

namespace {

PointCn point1(Complex z) {
  PointCn p(1);
  p[0] = z;
  return p;
}

PointCn point2(Complex a, Complex b) {
  PointCn p(2);
  p[0] = a;
  p[1] = b;
  return p;
}

// Random polynomial in z_1..z_n and their conjugates of total degree <= deg.
ScalarExpr random_poly(int n, int deg, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coeff(-1.0, 1.0);
  std::uniform_int_distribution<int> expo(0, deg);
  NodePtr sum = constant({0, 0});
  for (int term = 0; term < 6; ++term) {
    NodePtr mono = constant({coeff(rng), coeff(rng)});
    int budget = deg;
    for (int j = 0; j < n && budget > 0; ++j) {
      int a = expo(rng) % (budget + 1);
      budget -= a;
      int b = expo(rng) % (budget + 1);
      budget -= b;
      if (a > 0) mono = mul(mono, pow_int(variable(j), a));
      if (b > 0) mono = mul(mono, pow_int(conj_of(variable(j)), b));
    }
    sum = add(sum, mono);
  }
  return ScalarExpr(sum, n);
}

}  // namespace

TEST_CASE("eval of the closed grammar") {
  auto sq = ScalarExpr::parse("z1*conj(z1)", 1);
  CHECK(sq.eval(point1({3, 4})).real() == doctest::Approx(25.0));
  CHECK(sq.eval(point1({3, 4})).imag() == doctest::Approx(0.0));

  auto decay = ScalarExpr::parse("exp(-abs(z1))", 1);
  CHECK(decay.eval(point1({1, 0})).real() == doctest::Approx(std::exp(-1.0)));

  auto lin = ScalarExpr::parse("-2*z1", 1);
  Complex v = lin.eval(point1({1, 1}));
  CHECK(v.real() == doctest::Approx(-2.0));
  CHECK(v.imag() == doctest::Approx(-2.0));
}

TEST_CASE("eval raises on undefined arithmetic") {
  auto lg = ScalarExpr::parse("log(z1)", 1);
  CHECK_THROWS_AS(lg.eval(point1({0, 0})), DomainError);
  auto inv = ScalarExpr::parse("1/z1", 1);
  CHECK_THROWS_AS(inv.eval(point1({0, 0})), DomainError);
  CHECK(inv.eval(point1({2, 0})).real() == doctest::Approx(0.5));
}

TEST_CASE("literal and operator parsing") {
  auto e = ScalarExpr::parse("1+2i", 1);
  CHECK(e.eval(point1({0, 0})) == Complex(1, 2));
  auto f = ScalarExpr::parse("z1^3 - pow(z1,2)", 1);
  CHECK(f.eval(point1({2, 0})).real() == doctest::Approx(4.0));
  auto g = ScalarExpr::parse("im(z1) + re(z1)", 1);
  CHECK(g.eval(point1({3, 4})).real() == doctest::Approx(7.0));
  CHECK_THROWS_AS(ScalarExpr::parse("z3", 2), ParseError);
  CHECK_THROWS_AS(ScalarExpr::parse("sin(z1)", 1), ParseError);
}

TEST_CASE("holomorphic flag is a tree scan") {
  CHECK(ScalarExpr::parse("exp(z1)+z2^3", 2).is_holomorphic());
  CHECK_FALSE(ScalarExpr::parse("conj(z1)", 1).is_holomorphic());
  CHECK_FALSE(ScalarExpr::parse("abs(z1)", 1).is_holomorphic());
  CHECK_FALSE(ScalarExpr::parse("re(z1)", 1).is_holomorphic());
  CHECK_FALSE(ScalarExpr::parse("im(z2)", 2).is_holomorphic());
}

TEST_CASE("wirtinger gradient on product, abs and log") {
  auto modsq = ScalarExpr::parse("z1*conj(z1)", 1);
  auto g = wirtinger_grad(modsq, point1({2, 0}));
  CHECK(g.method == DerivMethod::Exact);
  CHECK(std::abs(g.dz[0] - Complex(2, 0)) < 1e-14);
  CHECK(std::abs(g.dzbar[0] - Complex(2, 0)) < 1e-14);

  // d|z|/dz = conj(z)/(2|z|), hand computation.
  auto mod = ScalarExpr::parse("abs(z1)", 1);
  auto gm = wirtinger_grad(mod, point1({1, 0}));
  CHECK(std::abs(gm.dz[0] - Complex(0.5, 0)) < 1e-14);

  // d log|z|/dz = 1/(2z) evaluated at 0.5.
  auto lgm = ScalarExpr::parse("log(abs(z2))", 2);
  auto gl = wirtinger_grad(lgm, point2({7, 3}, {0.5, 0}));
  CHECK(std::abs(gl.dz[1] - Complex(1.0, 0)) < 1e-13);
  CHECK(std::abs(gl.dz[0]) == 0.0);
}

TEST_CASE("gradient raises at declared singular points") {
  auto mod = ScalarExpr::parse("abs(z1)", 1);
  CHECK_THROWS_AS(wirtinger_grad(mod, point1({0, 0})), SingularPointError);
  CHECK_THROWS_AS(wirtinger_grad(mod, point1({1e-12, 0})), SingularPointError);
  auto lg = ScalarExpr::parse("log(abs(z1))", 1);
  CHECK_THROWS_AS(real_hessian(lg, point1({0, 0})), SingularPointError);
}

TEST_CASE("holomorphic expressions have exactly zero dzbar") {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(-1, 1);
  auto e = ScalarExpr::parse("exp(z1)*z2 - z1^4 + (3+2i)*z2^2", 2);
  REQUIRE(e.is_holomorphic());
  for (int k = 0; k < 25; ++k) {
    PointCn p = point2({u(rng), u(rng)}, {u(rng), u(rng)});
    auto g = wirtinger_grad(e, p);
    CHECK(g.method == DerivMethod::Exact);
    CHECK(std::abs(g.dzbar[0]) == 0.0);
    CHECK(std::abs(g.dzbar[1]) == 0.0);
  }
}

TEST_CASE("real hessian closed forms") {
  auto modsq = ScalarExpr::parse("z1*conj(z1)", 1);
  auto h = real_hessian(modsq, point1({0.3, -0.8}));
  CHECK(h.method == DerivMethod::Exact);
  CHECK((h.matrix - 2.0 * Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-14);

  // |z1|^2 |z2|^2 at (1, 0): diag(0, 0, 2, 2) from the symbolic Hessian of
  // (x1^2+y1^2)(x2^2+y2^2).
  auto prod = ScalarExpr::parse("z1*conj(z1)*z2*conj(z2)", 2);
  auto h2 = real_hessian(prod, point2({1, 0}, {0, 0}));
  Eigen::MatrixXd want = Eigen::MatrixXd::Zero(4, 4);
  want(2, 2) = 2.0;
  want(3, 3) = 2.0;
  CHECK((h2.matrix - want).norm() < 1e-14);

  auto c = ScalarExpr::parse("3+4i", 2);
  auto h3 = real_hessian(c, point2({1, 1}, {2, 2}));
  CHECK(h3.matrix.norm() == 0.0);
}

TEST_CASE("exact hessian matches second central differences on random polynomials") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.5, 0.5);
  for (int trial = 0; trial < 20; ++trial) {
    ScalarExpr e = random_poly(2, 4, rng);
    PointCn p = point2({u(rng), u(rng)}, {u(rng), u(rng)});
    // The Hessian of a complex-valued polynomial is complex; test on |e|^2
    // which is real-valued.
    ScalarExpr realized(mul(e.root(), conj_of(e.root())), 2);
    auto exact = real_hessian(realized, p);
    auto fd = real_hessian_fd(realized, p);
    REQUIRE(fd.fd_step > 0);
    CHECK((exact.matrix - fd.matrix).cwiseAbs().maxCoeff() < 100.0 * fd.fd_step);
  }
}

TEST_CASE("eval is deterministic") {
  auto e = ScalarExpr::parse("exp(z1)*log(abs(z2)+1)/(z1-4)", 2);
  PointCn p = point2({0.123456789, -0.987654321}, {1.5, 2.5});
  Complex a = e.eval(p);
  Complex b = e.eval(p);
  CHECK(std::memcmp(&a, &b, sizeof(Complex)) == 0);
}

TEST_CASE("substitution and variable shifts") {
  auto e = ScalarExpr::parse("z1*z2", 2);
  std::vector<ScalarExpr> repl;
  repl.push_back(ScalarExpr::parse("z1+1", 1));
  repl.push_back(ScalarExpr::parse("2*z1", 1));
  auto s = e.substitute(repl, 1);
  CHECK(s.eval(point1({3, 0})).real() == doctest::Approx(24.0));

  auto shifted = ScalarExpr::parse("z1^2", 1).shift_vars(1, 2);
  CHECK(shifted.eval(point2({5, 0}, {3, 0})).real() == doctest::Approx(9.0));
}

TEST_CASE("map expressions evaluate and differentiate") {
  auto m = MapExpr::parse({"-2*z1", "-3*z2+z1*z2"}, 2);
  PointCn p = point2({1, 0}, {0.5, 0});
  PointCn v = m.eval(p);
  CHECK(std::abs(v[0] - Complex(-2, 0)) < 1e-15);
  CHECK(std::abs(v[1] - Complex(-1.0, 0)) < 1e-15);

  Eigen::MatrixXcd J = m.jacobian(point2({0, 0}, {0, 0}));
  CHECK(std::abs(J(0, 0) - Complex(-2, 0)) < 1e-14);
  CHECK(std::abs(J(1, 1) - Complex(-3, 0)) < 1e-14);
  CHECK(std::abs(J(0, 1)) == 0.0);
  CHECK(std::abs(J(1, 0)) == 0.0);

  auto id = MapExpr::identity(3);
  PointCn q(3);
  q << Complex(1, 2), Complex(3, 4), Complex(5, 6);
  CHECK((id.eval(q) - q).norm() == 0.0);
}
