#include "spirallab/domains.hpp"

#include <cmath>
#include <random>

#include "doctest.h"

using namespace spirallab;
using namespace spirallab::domains;
using spirallab::expr::ScalarExpr;

namespace {

PointCn point2(Complex a, Complex b) {
  PointCn p(2);
  p << a, b;
  return p;
}

PointCn point1(Complex a) {
  PointCn p(1);
  p << a;
  return p;
}

DomainSpec ovoid() {
  auto r = ScalarExpr::parse("z1*conj(z1)+z2*conj(z2)+z1*conj(z1)*z2*conj(z2)-1", 2);
  return DomainSpec({r}, 2, 1.1, {}, "ovoid");
}

DomainSpec hartogs(double radius = 5.0) {
  auto r1 = ScalarExpr::parse("abs(z1)-" + std::to_string(radius), 2);
  auto r2 = ScalarExpr::parse("abs(z2)-exp(-abs(z1))", 2);
  return DomainSpec({r1, r2}, 2, radius + 1.2, SingularPredicate::parse("abs(z1)>=1e-3"),
                    "hartogs");
}

// Real-valued quadratic in the 2n real coordinates with random symmetric
// coefficient matrix; its exact real Hessian is Q + Q^T.
ScalarExpr random_quadratic(int n, std::mt19937_64& rng) {
  using namespace spirallab::expr;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<NodePtr> coords;
  for (int j = 0; j < n; ++j) {
    coords.push_back(re_of(variable(j)));
    coords.push_back(im_of(variable(j)));
  }
  NodePtr sum = constant({u(rng), 0});
  for (int a = 0; a < 2 * n; ++a) {
    sum = add(sum, mul(constant({u(rng), 0}), coords[a]));
    for (int b = 0; b < 2 * n; ++b)
      sum = add(sum, mul(constant({u(rng), 0}), mul(coords[a], coords[b])));
  }
  return ScalarExpr(sum, n);
}

}  // namespace

TEST_CASE("membership classification") {
  auto b = ball(2);
  auto m0 = membership(b, point2({0, 0}, {0, 0}));
  CHECK(m0.region == Region::Interior);
  CHECK(m0.margin == doctest::Approx(1.0));

  auto mb = membership(ovoid(), point2({1, 0}, {0, 0}));
  CHECK(mb.region == Region::Boundary);

  auto mh = membership(hartogs(), point2({0, 0}, {0.5, 0}));
  CHECK(mh.region == Region::Interior);
  CHECK(mh.margin == doctest::Approx(0.5));

  auto far = membership(b, point2({9, 0}, {0, 0}));
  CHECK(far.region == Region::Exterior);
}

TEST_CASE("domain construction validates the origin") {
  auto pos = ScalarExpr::parse("z1*conj(z1)+1", 1);
  CHECK_THROWS_AS(DomainSpec({pos}, 1, 2.0), spirallab::Error);
  CHECK_NOTHROW(DomainSpec({pos}, 1, 2.0, {}, "empty", 0.0, /*origin_containing=*/false));
}

TEST_CASE("boundary sampling lands on the boundary") {
  auto b = ball(2);
  auto cloud = sample_boundary(b, 4, 9);
  REQUIRE(cloud.points.size() == 4);
  for (const auto& p : cloud.points) {
    CHECK(std::abs(p.norm() - 1.0) < 2 * b.boundary_tol());
  }

  auto oc = sample_boundary(ovoid(), 1000, 12);
  for (const auto& p : oc.points) CHECK(std::abs(ovoid().r(p)) <= ovoid().boundary_tol());
}

TEST_CASE("boundary sampling is reproducible and rejects empty domains") {
  auto a = sample_boundary(ovoid(), 32, 77);
  auto b = sample_boundary(ovoid(), 32, 77);
  REQUIRE(a.points.size() == b.points.size());
  for (size_t k = 0; k < a.points.size(); ++k) CHECK((a.points[k] - b.points[k]).norm() == 0.0);

  auto c = sample_boundary(ovoid(), 32, 78);
  bool any_differ = false;
  for (size_t k = 0; k < c.points.size(); ++k)
    if ((a.points[k] - c.points[k]).norm() > 0) any_differ = true;
  CHECK(any_differ);

  auto one = ScalarExpr::parse("1", 1);
  DomainSpec empty({one}, 1, 2.0, {}, "empty", 0.0, false);
  CHECK_THROWS_AS(sample_boundary(empty, 3, 1), SamplingExhausted);
}

TEST_CASE("hartogs sampling respects the singular predicate and sheet margins") {
  auto h = hartogs();
  auto cloud = sample_boundary(h, 200, 5);
  for (size_t k = 0; k < cloud.points.size(); ++k) {
    const auto& p = cloud.points[k];
    CHECK(std::abs(p[0]) >= 1e-3);
    CHECK(std::abs(h.r(p)) <= h.boundary_tol());
    CHECK(cloud.sheet[k] == h.active_sheet_index(p));
  }
}

TEST_CASE("levi form closed values") {
  auto b = ball(2);
  auto cloud = sample_boundary(b, 8, 21);
  for (const auto& p : cloud.points) CHECK(levi_form_min(b, p) == doctest::Approx(1.0));

  // In C^1 the check reports the full complex Hessian: d^2|z|/dz dzbar = 1/(4|z|).
  auto disc = DomainSpec({ScalarExpr::parse("abs(z1)-0.8", 1)}, 1, 1.1, {}, "disc");
  CHECK(levi_form_min(disc, point1({0.8, 0})) == doctest::Approx(1.0 / (4 * 0.8)));
  CHECK(levi_form_min(disc, point1({0, -0.8})) == doctest::Approx(1.0 / (4 * 0.8)));

  auto oc = sample_boundary(ovoid(), 500, 3);
  double min_levi = 1e300;
  for (const auto& p : oc.points) min_levi = std::min(min_levi, levi_form_min(ovoid(), p));
  CHECK(min_levi > 0.0);
}

TEST_CASE("levi form raises on degenerate gradients") {
  // r = (|z1|^2 - 1)^2 - 1 has vanishing gradient on |z1| = 1.
  auto flat = DomainSpec({ScalarExpr::parse("pow(z1*conj(z1)-1,2)-1", 1)}, 1, 2.0, {}, "flat",
                         0.0, /*origin_containing=*/false);
  CHECK_THROWS_AS(levi_form_min(flat, point1({1.0, 0})), DegenerateGradient);
}

TEST_CASE("strong convexity: ball, ovoid, hartogs") {
  auto b = ball(2);
  auto bc = sample_boundary(b, 64, 2);
  auto br = strong_convexity_check(b, bc);
  CHECK(br.strongly_convex_evidence);
  CHECK(br.c_min == doctest::Approx(2.0).epsilon(1e-10));

  auto ov = ovoid();
  auto ocloud = sample_boundary(ov, 300, 6);
  auto orep = strong_convexity_check(ov, ocloud);
  CHECK(orep.strongly_convex_evidence);
  CHECK(orep.c_min > 0.0);

  auto h = hartogs();
  auto hc = sample_boundary(h, 300, 8);
  auto hrep = strong_convexity_check(h, hc);
  CHECK_FALSE(hrep.strongly_convex_evidence);
  CHECK(hrep.c_min < 0.0);
}

TEST_CASE("c_min is invariant under unitary coordinate changes") {
  using namespace spirallab::expr;
  auto ov = ovoid();
  auto cloud = sample_boundary(ov, 60, 14);

  // Random unitary from the QR factorization of a complex Gaussian matrix.
  std::mt19937_64 rng(19);
  std::normal_distribution<double> g(0, 1);
  Eigen::MatrixXcd G(2, 2);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) G(a, b) = Complex(g(rng), g(rng));
  Eigen::MatrixXcd U = Eigen::HouseholderQR<Eigen::MatrixXcd>(G).householderQ();

  // r_U(z) = r(Uz); the transformed cloud is U^{-1} p.
  std::vector<ScalarExpr> rows;
  for (int a = 0; a < 2; ++a) {
    NodePtr row = constant({0, 0});
    for (int b = 0; b < 2; ++b) row = add(row, mul(constant(U(a, b)), variable(b)));
    rows.emplace_back(row, 2);
  }
  std::vector<ScalarExpr> subs = {ov.sheets()[0].substitute(rows, 2)};
  DomainSpec transformed(subs, 2, ov.bounding_radius(), {}, "ovoid-U");

  BoundaryCloud mapped;
  mapped.seed = cloud.seed;
  mapped.requested = cloud.requested;
  Eigen::MatrixXcd Uinv = U.adjoint();
  for (size_t k = 0; k < cloud.points.size(); ++k) {
    mapped.points.push_back(Uinv * cloud.points[k]);
    mapped.sheet.push_back(0);
  }

  auto a = strong_convexity_check(ov, cloud);
  auto bb = strong_convexity_check(transformed, mapped);
  CHECK(std::abs(a.c_min - bb.c_min) < 1e-8);
}

TEST_CASE("gradient points outward on boundary clouds") {
  auto ov = ovoid();
  auto cloud = sample_boundary(ov, 100, 31);
  const double eps = 10 * ov.boundary_tol();
  for (const auto& p : cloud.points) {
    Eigen::VectorXd grad = ov.gradient(p);
    grad /= grad.norm();
    PointCn step(2);
    step << Complex(grad[0], grad[1]), Complex(grad[2], grad[3]);
    CHECK(membership(ov, p + eps * step).region == Region::Exterior);
    CHECK(membership(ov, p - eps * step).region == Region::Interior);
  }
}

TEST_CASE("pushforward hessian: identity and linear scaling") {
  auto b1 = ball(1);
  auto id = expr::MapExpr::identity(1);
  PointCn x = point1({0.3, 0.4});
  Eigen::MatrixXd via_chain = pushforward_hessian(b1, id, id, x);
  Eigen::MatrixXd direct = expr::real_hessian(b1.sheets()[0], x).matrix;
  CHECK((via_chain - direct).norm() < 1e-12);

  auto fwd = expr::MapExpr::parse({"2*z1"}, 1);
  auto inv = expr::MapExpr::parse({"z1/2"}, 1);
  Eigen::MatrixXd half = pushforward_hessian(b1, fwd, inv, point1({0.6, 0}));
  CHECK((half - 0.5 * Eigen::MatrixXd::Identity(2, 2)).norm() < 1e-12);
}

TEST_CASE("pushforward hessian matches direct differentiation of the composition") {
  using namespace spirallab::expr;
  std::mt19937_64 rng(47);
  std::uniform_real_distribution<double> u(-0.4, 0.4);
  const int n = 2;
  for (int trial = 0; trial < 20; ++trial) {
    ScalarExpr quad = random_quadratic(n, rng);
    DomainSpec dom({quad}, n, 50.0, {}, "quad", 0.0, false);

    // Random invertible complex affine map A w + c and its inverse.
    Eigen::MatrixXcd A = Eigen::MatrixXcd::Identity(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) A(a, b) += Complex(0.3 * u(rng), 0.3 * u(rng));
    Eigen::VectorXcd c(n);
    for (int a = 0; a < n; ++a) c[a] = Complex(u(rng), u(rng));
    Eigen::MatrixXcd Ainv = A.inverse();

    auto linear_map = [&](const Eigen::MatrixXcd& M, const Eigen::VectorXcd& shift) {
      std::vector<ScalarExpr> comps;
      for (int a = 0; a < n; ++a) {
        NodePtr row = constant(shift[a]);
        for (int b = 0; b < n; ++b) row = add(row, mul(constant(M(a, b)), variable(b)));
        comps.emplace_back(row, n);
      }
      return MapExpr(comps, n);
    };
    MapExpr inv_map = linear_map(A, c);                 // inv(w) = A w + c
    MapExpr fwd_map = linear_map(Ainv, -(Ainv * c));    // fwd = inverse affine

    PointCn x(n);
    for (int a = 0; a < n; ++a) x[a] = Complex(u(rng), u(rng));

    Eigen::MatrixXd via_chain = pushforward_hessian(dom, fwd_map, inv_map, x);
    ScalarExpr composed = quad.substitute(inv_map.components(), n);
    Eigen::MatrixXd direct = real_hessian(composed, x).matrix;
    CHECK((via_chain - direct).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("pushforward hessian rejects mismatched inverses") {
  auto b1 = ball(1);
  auto fwd = expr::MapExpr::parse({"2*z1"}, 1);
  auto not_inv = expr::MapExpr::parse({"z1"}, 1);
  CHECK_THROWS_AS(pushforward_hessian(b1, fwd, not_inv, point1({0.5, 0})), InverseMismatch);
}

TEST_CASE("transversality of fields against boundaries") {
  auto b = ball(2);
  auto radial = fields::VectorFieldSpec::parse({"-z1", "-z2"});
  auto cloud = sample_boundary(b, 32, 4);
  for (const auto& p : cloud.points) CHECK(transversality_check(radial, b, p));

  auto disc = ball(1);
  auto rotation = fields::VectorFieldSpec::parse({"i*z1"});
  auto dc = sample_boundary(disc, 16, 4);
  for (const auto& p : dc.points) CHECK_FALSE(transversality_check(rotation, disc, p));

  auto h = hartogs();
  auto hf = fields::VectorFieldSpec::parse({"-2*z1", "-3*z2+z1*z2"});
  auto hc = sample_boundary(h, 200, 13);
  for (const auto& p : hc.points) CHECK(transversality_check(hf, h, p));
}

TEST_CASE("norm ball has euclidean margins") {
  auto nb = norm_ball(2, 1.5);
  PointCn p = point2({1, 0}, {0, 0});
  CHECK(nb.r(p) == doctest::Approx(-0.5));
  CHECK(nb.gradient(p).norm() == doctest::Approx(1.0));
}

TEST_CASE("inflate shifts the defining functions") {
  auto h = hartogs();
  auto fat = inflate(h, 0.3);
  PointCn p = point2({2, 0}, {0, 0});
  CHECK(fat.r(p) == doctest::Approx(h.r(p) - 0.3));
}
