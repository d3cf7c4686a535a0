#include "spirallab/operators.hpp"

#include <cmath>
#include <random>

#include "doctest.h"

using namespace spirallab;
using namespace spirallab::operators;

namespace {

PointCn cpoint(Complex a) {
  PointCn p(1);
  p << a;
  return p;
}

PointCn cpoint2(Complex a, Complex b) {
  PointCn p(2);
  p << a, b;
  return p;
}

// 20 seeded samples of {|z| <= rho} plus the four axis extremes.
hull::SampleCloud disc_samples(double rho, int count, std::uint64_t seed) {
  hull::SampleCloud K;
  K.label = "disc";
  K.seed = seed;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0), ang(0.0, 2 * M_PI);
  for (int k = 0; k < count; ++k) {
    double r = rho * std::sqrt(u(rng));
    double t = ang(rng);
    K.points.push_back(cpoint({r * std::cos(t), r * std::sin(t)}));
  }
  K.points.push_back(cpoint({rho, 0}));
  K.points.push_back(cpoint({-rho, 0}));
  K.points.push_back(cpoint({0, rho}));
  K.points.push_back(cpoint({0, -rho}));
  return K;
}

}  // namespace

TEST_CASE("poincare distance closed values") {
  CHECK(poincare_distance({0, 0}, {0, 0}) == 0.0);
  CHECK(poincare_distance({0, 0}, {0.5, 0}) == doctest::Approx(std::atanh(0.5)));
  CHECK(poincare_distance({0, 0}, {0.5, 0}) == doctest::Approx(0.549306).epsilon(1e-5));
  CHECK_THROWS_AS(poincare_distance({1.0, 0}, {0, 0}), OutsideDisc);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-0.65, 0.65);
  for (int k = 0; k < 50; ++k) {
    Complex a{u(rng), u(rng)}, b{u(rng), u(rng)}, c{u(rng), u(rng)};
    CHECK(poincare_distance(a, b) == doctest::Approx(poincare_distance(b, a)));
    CHECK(poincare_distance(a, c) <= poincare_distance(a, b) + poincare_distance(b, c) + 1e-10);
  }
}

TEST_CASE("automorphism validation") {
  CHECK_NOTHROW(hyperbolic_disc_automorphism(0.5));
  CHECK_NOTHROW(rotation_disc_automorphism(1.0));
  auto bad = expr::MapExpr::parse({"z1+1"}, 1);
  auto bad_inv = expr::MapExpr::parse({"z1-1"}, 1);
  CHECK_THROWS_AS(make_automorphism(bad, bad, domains::ball(1)), InverseMismatch);
  // Round trip fine but the image leaves the disc.
  CHECK_THROWS_AS(make_automorphism(bad, bad_inv, domains::ball(1)), spirallab::Error);
}

TEST_CASE("caratheodory lower bound on the disc") {
  auto disc = domains::ball(1);
  auto family = default_caratheodory_family(disc, 24, 5);
  PointCn z = cpoint({0, 0}), w = cpoint({0.5, 0});
  auto result = caratheodory_lb(disc, z, w, family);
  CHECK(result.is_lower_bound);
  // The identity member is extremal; normalization costs at most ~1e-6.
  CHECK(result.lower_bound >= std::atanh(0.5) - 1e-5);
  CHECK(result.lower_bound <= std::atanh(0.5) + 1e-12);

  auto same = caratheodory_lb(disc, w, w, family);
  CHECK(same.lower_bound == 0.0);
}

TEST_CASE("caratheodory on the bidisc via coordinate projections") {
  using spirallab::expr::ScalarExpr;
  auto r1 = ScalarExpr::parse("z1*conj(z1)-1", 2);
  auto r2 = ScalarExpr::parse("z2*conj(z2)-1", 2);
  domains::DomainSpec bidisc({r1, r2}, 2, 1.5, {}, "bidisc");
  std::vector<ScalarExpr> projections{ScalarExpr::parse("z1", 2), ScalarExpr::parse("z2", 2)};
  auto result = caratheodory_lb(bidisc, cpoint2({0, 0}, {0, 0}), cpoint2({0.5, 0}, {0, 0}),
                                projections);
  CHECK(result.lower_bound == doctest::Approx(std::atanh(0.5)).epsilon(1e-5));
  CHECK(result.best_index == 0);
}

TEST_CASE("schwarz-pick: the bound never exceeds the poincare distance on the disc") {
  auto disc = domains::ball(1);
  auto family = default_caratheodory_family(disc, 40, 11);
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-0.6, 0.6);
  for (int k = 0; k < 10; ++k) {
    Complex a{u(rng), u(rng)}, b{u(rng), u(rng)};
    auto result = caratheodory_lb(disc, cpoint(a), cpoint(b), family);
    CHECK(result.lower_bound <= poincare_distance(a, b) + 1e-10);
  }
}

TEST_CASE("compact divergence of the hyperbolic automorphism") {
  auto tau = hyperbolic_disc_automorphism(0.5);
  auto H = disc_samples(0.9, 20, 101);
  auto K = domains::ball(1, 0.9);
  auto result = compact_divergence_check(tau, H, K, 12);
  REQUIRE(result.observed);

  // Mobius oracle in artanh coordinates: tanh(0.549306 j - 1.472219) > 0.9
  // first at j = 6.
  double step = std::atanh(0.5), start = std::atanh(0.9);
  int oracle = 1;
  while (std::tanh(step * oracle - start) <= 0.9) ++oracle;
  CHECK(oracle == 6);
  CHECK(result.j0 == 6);

  auto identity = make_automorphism(expr::MapExpr::identity(1), expr::MapExpr::identity(1),
                                    domains::ball(1));
  CHECK_FALSE(compact_divergence_check(identity, H, K, 12).observed);

  auto rot = rotation_disc_automorphism(M_PI / 3);
  CHECK_FALSE(compact_divergence_check(rot, H, K, 12).observed);
}

TEST_CASE("compact divergence is monotone under shrinking the compact") {
  auto tau = hyperbolic_disc_automorphism(0.5);
  auto big = compact_divergence_check(tau, disc_samples(0.9, 20, 101), domains::ball(1, 0.9), 16);
  auto small =
      compact_divergence_check(tau, disc_samples(0.7, 20, 101), domains::ball(1, 0.7), 16);
  REQUIRE(big.observed);
  REQUIRE(small.observed);
  CHECK(small.j0 <= big.j0);
}

TEST_CASE("fixed point search") {
  std::vector<PointCn> starts{cpoint({0.3, 0.2}), cpoint({-0.5, 0.1}), cpoint({0.1, -0.6})};

  auto rot = rotation_disc_automorphism(0.7);
  auto found = fixed_point_search(rot, domains::ball(1), starts);
  REQUIRE(found.found);
  CHECK(found.point.norm() < 1e-8);

  auto tau = hyperbolic_disc_automorphism(0.5);
  auto none = fixed_point_search(tau, domains::ball(1), starts);
  CHECK_FALSE(none.found);

  auto identity = make_automorphism(expr::MapExpr::identity(1), expr::MapExpr::identity(1),
                                    domains::ball(1));
  auto any = fixed_point_search(identity, domains::ball(1), starts);
  REQUIRE(any.found);
  CHECK((any.point - starts[0]).norm() == 0.0);
}

TEST_CASE("generalized translation on the hyperbolic automorphism") {
  auto tau = hyperbolic_disc_automorphism(0.5);
  auto K = disc_samples(0.3, 30, 7);
  hull::HullProbeConfig cfg;
  cfg.degree_cap = 10;
  cfg.budget = 1200;
  auto report = generalized_translation_check(tau, K, 10, cfg);
  REQUIRE(report.found);
  CHECK(report.j >= 1);
  CHECK(report.disjoint_distance > 1e-6);
  CHECK(report.cluster_gap > 1e-6);
  CHECK(report.midpoints_separated == report.midpoints_tested);
  CHECK(report.hull_approximation_flag);
  for (const auto& c : report.certificates) CHECK(c.verdict == hull::HullVerdict::Separated);
}

TEST_CASE("generalized translation fails for rotations and empty budgets") {
  auto rot = rotation_disc_automorphism(M_PI / 5);
  hull::SampleCloud annulus;
  annulus.label = "annulus";
  for (int k = 0; k < 48; ++k) {
    double t = 2 * M_PI * k / 48;
    annulus.points.push_back(cpoint({0.6 * std::cos(t), 0.6 * std::sin(t)}));
    annulus.points.push_back(cpoint({0.8 * std::cos(t), 0.8 * std::sin(t)}));
  }
  hull::HullProbeConfig cfg;
  cfg.degree_cap = 6;
  cfg.budget = 400;
  auto report = generalized_translation_check(rot, annulus, 8, cfg);
  CHECK_FALSE(report.found);

  auto tau = hyperbolic_disc_automorphism(0.5);
  auto none = generalized_translation_check(tau, disc_samples(0.3, 20, 7), 0, cfg);
  CHECK_FALSE(none.found);
}

TEST_CASE("transitivity witness for g = h is immediate") {
  auto tau = hyperbolic_disc_automorphism(0.5);
  auto K = disc_samples(0.3, 40, 15);
  auto g = expr::MapExpr::parse({"z1"}, 1);
  auto witness = transitivity_witness(tau, g, g, K, 1e-3, 6);
  REQUIRE(witness.found);
  CHECK(witness.n == 0);
  CHECK(witness.residual_g <= 1e-3);
  CHECK(witness.residual_h <= 1e-3);
}

TEST_CASE("transitivity witness approximates (z, z^2) across an orbit gap") {
  auto tau = hyperbolic_disc_automorphism(0.5);
  auto K = disc_samples(0.3, 46, 21);
  auto g = expr::MapExpr::parse({"z1"}, 1);
  auto h = expr::MapExpr::parse({"z1^2"}, 1);
  auto witness = transitivity_witness(tau, g, h, K, 1e-3, 20);
  REQUIRE(witness.found);
  // The first disjoint iterate is j0 = 2, but degree 20 cannot meet 1e-3
  // across that gap (L-inf floor ~ 5e-3); the scan settles at n = 3.
  CHECK(witness.n == 3);
  CHECK(witness.reverified);
  CHECK(witness.residual_g <= 1e-3);
  CHECK(witness.residual_h <= 1e-3);

  // Independent spot re-verification of the stored witness.
  for (const auto& p : K.points) {
    CHECK(std::abs(witness.eval(p)[0] - p[0]) <= 1e-3);
    PointCn moved = tau.iterate(p, witness.n);
    CHECK(std::abs(witness.eval(moved)[0] - p[0] * p[0]) <= 1e-3);
  }
}

TEST_CASE("transitivity witness reports rotation failures") {
  auto rot = rotation_disc_automorphism(M_PI / 5);
  auto K = disc_samples(0.3, 20, 33);
  auto g = expr::MapExpr::parse({"z1"}, 1);
  auto h = expr::MapExpr::parse({"z1^2"}, 1);
  auto witness = transitivity_witness(rot, g, h, K, 1e-3, 12);
  CHECK_FALSE(witness.found);
  CHECK(witness.failure.find("j_max") != std::string::npos);
}
