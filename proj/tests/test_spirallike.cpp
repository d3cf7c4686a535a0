#include "spirallab/spirallike.hpp"

#include <cmath>
#include <random>

#include "doctest.h"

using namespace spirallab;
using namespace spirallab::spirallike;
using spirallab::expr::ScalarExpr;

namespace {

PointCn point2(Complex a, Complex b) {
  PointCn p(2);
  p << a, b;
  return p;
}

fields::VectorFieldSpec hartogs_field() {
  return fields::VectorFieldSpec::parse({"-2*z1", "-3*z2+z1*z2"}, "hartogs");
}

fields::VectorFieldSpec radial_field(int n) {
  std::vector<std::string> comps;
  for (int j = 1; j <= n; ++j) comps.push_back("-z" + std::to_string(j));
  return fields::VectorFieldSpec::parse(comps, "radial");
}

domains::DomainSpec hartogs_domain() {
  auto r1 = ScalarExpr::parse("abs(z1)-5", 2);
  auto r2 = ScalarExpr::parse("abs(z2)-exp(-abs(z1))", 2);
  return domains::DomainSpec({r1, r2}, 2, 6.2,
                             domains::SingularPredicate::parse("abs(z1)>=1e-3"), "hartogs");
}

// Defining function of the smooth hartogs sheet |z2| < e^{-|z1|} in the form
// log|z2| + |z1| < 0.
domains::DomainSpec hartogs_sheet_function() {
  auto r = ScalarExpr::parse("log(abs(z2))+abs(z1)", 2);
  return domains::DomainSpec({r}, 2, 6.2, domains::SingularPredicate::parse("abs(z1)>=1e-3"),
                             "hartogs-sheet", 0.0, /*origin_containing=*/false);
}

}  // namespace

TEST_CASE("re_vtilde closed forms") {
  auto ball = domains::ball(2);
  auto radial = radial_field(2);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.7, 0.7);
  for (int k = 0; k < 20; ++k) {
    PointCn z = point2({u(rng), u(rng)}, {u(rng), u(rng)});
    double got = re_vtilde(radial, ball.sheets()[0], z);
    CHECK(got == doctest::Approx(-z.squaredNorm()).epsilon(1e-12));
  }

  // Hand Wirtinger computation: (-2 z1)(zbar1 / 2|z1|) + (-3+z1) z2 (1/(2 z2))
  // = -|z1| - 3/2 + z1/2, so -1 - 3/2 + 1/2 = -2 at z = (1, 0.1).
  auto sheet = ScalarExpr::parse("log(abs(z2))+abs(z1)", 2);
  double v = re_vtilde(hartogs_field(), sheet, point2({1, 0}, {0.1, 0}));
  CHECK(v == doctest::Approx(-2.0).epsilon(1e-12));

  // Rotation preserves |z|^2.
  auto rotation = fields::VectorFieldSpec::parse({"i*z1", "i*z2"});
  PointCn z = point2({0.3, 0.4}, {-0.2, 0.6});
  CHECK(re_vtilde(rotation, ball.sheets()[0], z) == doctest::Approx(0.0));
}

TEST_CASE("re_vtilde is additive in the field") {
  auto ball = domains::ball(2);
  auto v1 = radial_field(2);
  auto v2 = fields::VectorFieldSpec::parse({"i*z1+z2^2", "i*z2"});
  auto sum = fields::VectorFieldSpec::parse({"-z1+i*z1+z2^2", "-z2+i*z2"});
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-0.8, 0.8);
  for (int k = 0; k < 20; ++k) {
    PointCn z = point2({u(rng), u(rng)}, {u(rng), u(rng)});
    const auto& r = ball.sheets()[0];
    CHECK(std::abs(re_vtilde(sum, r, z) - re_vtilde(v1, r, z) - re_vtilde(v2, r, z)) <= 1e-12);
  }
}

TEST_CASE("criterion sweep on the ball") {
  auto ball = domains::ball(2);
  std::mt19937_64 rng(11);
  std::normal_distribution<double> g(0, 1);
  std::uniform_real_distribution<double> radius(0.1, 1.2);
  std::vector<PointCn> cloud;
  for (int k = 0; k < 1000; ++k) {
    PointCn z(2);
    z << Complex(g(rng), g(rng)), Complex(g(rng), g(rng));
    z *= radius(rng) / z.norm();
    cloud.push_back(z);
  }
  // Pin the extremal radius so the max is exactly -0.01.
  PointCn inner(2);
  inner << Complex(0.1, 0), Complex(0, 0);
  cloud.push_back(inner);

  auto report = criterion_sweep(radial_field(2), ball, cloud);
  CHECK(report.holds);
  CHECK(report.max_value == doctest::Approx(-0.01).epsilon(1e-10));
  CHECK(report.tested == 1001);

  auto rotation = fields::VectorFieldSpec::parse({"i*z1", "i*z2"});
  auto rot = criterion_sweep(rotation, ball, cloud);
  CHECK_FALSE(rot.holds);
  CHECK(rot.max_value == doctest::Approx(0.0));
}

TEST_CASE("criterion sweep on the hartogs sheet function") {
  auto sheet = hartogs_sheet_function();
  auto dom = hartogs_domain();
  auto bc = domains::sample_boundary(dom, 400, 23);
  std::vector<PointCn> cloud = bc.points;
  for (const auto& p : bc.points) cloud.push_back(0.5 * p);

  auto report = criterion_sweep(hartogs_field(), sheet, cloud);
  CHECK(report.holds);
  // Hand bound: value = -|z1| + Re(z1)/2 - 3/2 <= -3/2.
  CHECK(report.max_value <= -1.5 + 1e-6);
  double hand = -std::numeric_limits<double>::infinity();
  for (const auto& z : cloud) {
    if (std::abs(z[0]) < 1e-3) continue;
    hand = std::max(hand, -std::abs(z[0]) + z[0].real() / 2 - 1.5);
  }
  CHECK(report.max_value == doctest::Approx(hand).epsilon(1e-10));
}

TEST_CASE("strict spirallikeness of the ball under the radial field") {
  auto ball = domains::ball(2);
  auto cloud = domains::sample_boundary(ball, 50, 2);
  auto report = check_strict_spirallike(radial_field(2), ball, cloud, {0.01, 0.1, 1, 5}, 1e-9);
  CHECK(report.verdict == SpirallikeVerdict::EvidenceStrict);
  CHECK(report.worst_margin > 0);
  CHECK(report.decay_ok);
  CHECK(report.outside == 0);
}

TEST_CASE("expanding flow is caught at the first grid time") {
  auto ball = domains::ball(2);
  auto cloud = domains::sample_boundary(ball, 20, 2);
  auto expanding = fields::VectorFieldSpec::parse({"z1", "z2"});
  auto report = check_strict_spirallike(expanding, ball, cloud, {0.01, 0.1, 1}, 1e-9);
  CHECK(report.verdict == SpirallikeVerdict::CounterexampleFound);
  REQUIRE(report.counterexample.has_value());
  CHECK(report.counterexample->t == doctest::Approx(0.01));
  CHECK(report.counterexample->r_value >= -ball.boundary_tol());
}

TEST_CASE("strict spirallikeness of the hartogs domain") {
  auto dom = hartogs_domain();
  auto cloud = domains::sample_boundary(dom, 100, 7);
  auto report = check_strict_spirallike(hartogs_field(), dom, cloud, {0.01, 0.1, 1, 5}, 1e-9);
  CHECK(report.verdict == SpirallikeVerdict::EvidenceStrict);
  CHECK(report.worst_margin > 0);
  CHECK(report.decay_horizon == doctest::Approx(12.5));
}

TEST_CASE("time-shifted clouds keep passing") {
  auto ball = domains::ball(2);
  auto field = radial_field(2);
  auto cloud = domains::sample_boundary(ball, 30, 4);
  domains::BoundaryCloud shifted = cloud;
  for (auto& p : shifted.points) p = fields::flow_to(field, p, 0.05, 1e-10);
  auto report = check_strict_spirallike(field, ball, shifted, {0.01, 0.1, 1}, 1e-9);
  CHECK(report.verdict == SpirallikeVerdict::EvidenceStrict);
}

TEST_CASE("r decreases along trajectories where the criterion is negative") {
  auto dom = hartogs_domain();
  auto field = hartogs_field();
  auto cloud = domains::sample_boundary(dom, 10, 9);
  std::vector<double> grid;
  for (int k = 1; k <= 30; ++k) grid.push_back(0.05 * k);
  for (const auto& z : cloud.points) {
    auto states = fields::flow_through(field, z, grid, 1e-10);
    double prev = dom.r(z);
    for (const auto& x : states) {
      double cur = dom.r(x);
      CHECK(cur < prev);
      prev = cur;
    }
  }
}

TEST_CASE("product field structure") {
  auto base = radial_field(1);
  auto prod = product_field(base);
  CHECK(prod.dim() == 2);
  auto A = fields::linearize(prod);
  CHECK((A + Eigen::MatrixXcd::Identity(2, 2)).norm() < 1e-14);

  auto hart = hartogs_field();
  auto hp = product_field(hart);
  CHECK(hp.dim() == 3);
  auto B = fields::linearize(hp);
  Eigen::MatrixXcd want = Eigen::MatrixXcd::Zero(3, 3);
  want(0, 0) = Complex(-1, 0);
  want(1, 1) = Complex(-2, 0);
  want(2, 2) = Complex(-3, 0);
  CHECK((B - want).norm() < 1e-14);
}

TEST_CASE("product field composes the closed flow") {
  auto flow = [](double t, const PointCn& z) {
    PointCn w(2);
    w[0] = z[0] * std::exp(-2.0 * t);
    w[1] = z[1] * std::exp(-3.0 * t) * std::exp((z[0] / 2.0) * (1.0 - std::exp(-2.0 * t)));
    return w;
  };
  fields::VectorFieldSpec base(expr::MapExpr::parse({"-2*z1", "-3*z2+z1*z2"}, 2), "hartogs", flow);
  auto prod = product_field(base);
  REQUIRE(prod.has_closed_flow());

  PointCn z(3);
  z << Complex(0.5, 0.5), Complex(1, 0), Complex(0.2, 0);
  PointCn got = prod.closed_flow(0.7, z);
  CHECK(std::abs(got[0] - std::exp(-0.7) * z[0]) < 1e-15);
  PointCn tail = flow(0.7, z.tail(2));
  CHECK(std::abs(got[1] - tail[0]) < 1e-15);
  CHECK(std::abs(got[2] - tail[1]) < 1e-15);

  // And the integrated flow of the product field agrees.
  PointCn num = fields::flow_to(prod, z, 0.7, 1e-10);
  CHECK((num - got).norm() < 1e-7);
}
