#include "spirallab/operators.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/LU>
#include <Eigen/QR>

namespace spirallab {
namespace operators {

double poincare_distance(Complex a, Complex b) {
  if (std::abs(a) >= 1.0 || std::abs(b) >= 1.0)
    throw OutsideDisc("poincare_distance requires both points in the open unit disc");
  Complex m = (a - b) / (1.0 - std::conj(a) * b);
  return std::atanh(std::abs(m));
}

PointCn AutomorphismSpec::iterate(const PointCn& z, int times) const {
  PointCn x = z;
  for (int k = 0; k < times; ++k) x = forward.eval(x);
  return x;
}

AutomorphismSpec make_automorphism(expr::MapExpr fwd, expr::MapExpr inv,
                                   domains::DomainSpec domain) {
  AutomorphismSpec tau{std::move(fwd), std::move(inv), std::move(domain)};
  auto cloud = domains::sample_boundary(tau.domain, 24, 515);
  std::vector<PointCn> test;
  test.push_back(PointCn::Zero(tau.domain.dim()));
  for (const auto& p : cloud.points) test.push_back(0.9 * p);
  for (const auto& z : test) {
    double round = (tau.inverse.eval(tau.forward.eval(z)) - z).norm();
    if (round > 1e-8)
      throw InverseMismatch("automorphism round trip misses by " + std::to_string(round));
    if (membership(tau.domain, tau.forward.eval(z)).region == domains::Region::Exterior)
      throw Error("forward map sends a test point outside the domain");
  }
  return tau;
}

AutomorphismSpec hyperbolic_disc_automorphism(double c) {
  std::ostringstream fwd, inv;
  fwd.precision(17);
  inv.precision(17);
  fwd << "(z1+" << c << ")/(1+" << c << "*z1)";
  inv << "(z1-" << c << ")/(1-" << c << "*z1)";
  return make_automorphism(expr::MapExpr::parse({fwd.str()}, 1),
                           expr::MapExpr::parse({inv.str()}, 1), domains::ball(1));
}

AutomorphismSpec rotation_disc_automorphism(double theta) {
  Complex u = std::polar(1.0, theta);
  std::ostringstream fwd, inv;
  fwd.precision(17);
  inv.precision(17);
  fwd << "(" << u.real() << "+" << u.imag() << "i)*z1";
  inv << "(" << u.real() << "-" << u.imag() << "i)*z1";
  return make_automorphism(expr::MapExpr::parse({fwd.str()}, 1),
                           expr::MapExpr::parse({inv.str()}, 1), domains::ball(1));
}

CaratheodoryResult caratheodory_lb(const domains::DomainSpec& d, const PointCn& z,
                                   const PointCn& w, const std::vector<expr::ScalarExpr>& family,
                                   int budget) {
  if (membership(d, z).region != domains::Region::Interior ||
      membership(d, w).region != domains::Region::Interior)
    throw Error("caratheodory_lb requires interior points");

  auto cloud = domains::sample_boundary(d, 128, 2718);
  CaratheodoryResult result;
  const int n_test = std::min<int>(budget, static_cast<int>(family.size()));
  for (int k = 0; k < n_test; ++k) {
    const auto& f = family[k];
    try {
      double max_mod = 0.0;
      for (const auto& p : cloud.points) max_mod = std::max(max_mod, std::abs(f.eval(p)));
      if (!(max_mod > 0)) continue;
      double norm = (1.0 + 1e-6) * max_mod;
      double rho = poincare_distance(f.eval(z) / norm, f.eval(w) / norm);
      result.family_tested += 1;
      if (rho > result.lower_bound) {
        result.lower_bound = rho;
        result.best_index = k;
      }
    } catch (const Error&) {
      // skip members that fail to evaluate; the result stays a lower bound
    }
  }
  return result;
}

std::vector<expr::ScalarExpr> default_caratheodory_family(const domains::DomainSpec& d, int count,
                                                          std::uint64_t seed) {
  using namespace expr;
  std::vector<ScalarExpr> family;
  const int n = d.dim();
  for (int j = 0; j < n; ++j) family.emplace_back(variable(j), n, "z" + std::to_string(j + 1));

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0, 1);
  while (static_cast<int>(family.size()) < count) {
    NodePtr sum = constant({0, 0});
    for (int j = 0; j < n; ++j) {
      NodePtr zj = variable(j);
      NodePtr power = zj;
      for (int deg = 1; deg <= 4; ++deg) {
        sum = add(sum, mul(constant({0.5 * g(rng), 0.5 * g(rng)}), power));
        power = mul(power, zj);
      }
    }
    family.emplace_back(sum, n);
  }
  return family;
}

DivergenceResult compact_divergence_check(const AutomorphismSpec& tau, const hull::SampleCloud& H,
                                          const domains::DomainSpec& K, int j_max) {
  if (H.points.empty()) throw Error("compact_divergence_check: empty cloud");
  DivergenceResult result;
  result.j_max = j_max;
  result.disjoint_per_j.resize(std::max(j_max, 0));

  std::vector<PointCn> current = H.points;
  for (int j = 1; j <= j_max; ++j) {
    for (auto& p : current) p = tau.forward.eval(p);
    bool disjoint = true;
    for (const auto& p : current)
      if (membership(K, p).region != domains::Region::Exterior) {
        disjoint = false;
        break;
      }
    result.disjoint_per_j[j - 1] = disjoint;
  }

  int j0 = 0;
  for (int j = j_max; j >= 1; --j) {
    if (!result.disjoint_per_j[j - 1]) break;
    j0 = j;
  }
  result.observed = j0 >= 1;
  result.j0 = j0;
  return result;
}

FixedPointResult fixed_point_search(const AutomorphismSpec& tau, const domains::DomainSpec& d,
                                    const std::vector<PointCn>& starts, int iter_cap) {
  FixedPointResult result;
  const int n = d.dim();
  Eigen::MatrixXcd I = Eigen::MatrixXcd::Identity(n, n);
  for (const auto& start : starts) {
    PointCn x = start;
    for (int iter = 0; iter < iter_cap; ++iter) {
      PointCn residual;
      try {
        residual = tau.forward.eval(x) - x;
      } catch (const Error&) {
        break;
      }
      if (residual.norm() <= 1e-9) {
        if (membership(d, x).region == domains::Region::Interior) {
          result.found = true;
          result.point = x;
          result.residual = residual.norm();
          return result;
        }
        break;
      }
      Eigen::MatrixXcd J;
      try {
        J = tau.forward.jacobian(x) - I;
      } catch (const Error&) {
        break;
      }
      Eigen::FullPivLU<Eigen::MatrixXcd> lu(J);
      if (!lu.isInvertible()) break;
      x -= lu.solve(residual);
      if (x.norm() > 10.0 * d.bounding_radius()) break;
    }
  }
  return result;
}

namespace {

PointCn centroid_of(const std::vector<PointCn>& pts) {
  PointCn c = PointCn::Zero(pts.front().size());
  for (const auto& p : pts) c += p;
  return c / static_cast<double>(pts.size());
}

double radius_about(const std::vector<PointCn>& pts, const PointCn& c) {
  double r = 0.0;
  for (const auto& p : pts) r = std::max(r, (p - c).norm());
  return r;
}

}  // namespace

GeneralizedTranslationReport generalized_translation_check(const AutomorphismSpec& tau,
                                                           const hull::SampleCloud& K, int j_max,
                                                           const hull::HullProbeConfig& hull_cfg) {
  if (K.points.empty()) throw Error("generalized_translation_check: empty cloud");
  GeneralizedTranslationReport report;

  PointCn c0 = centroid_of(K.points);
  double r0 = radius_about(K.points, c0);

  std::vector<PointCn> moved = K.points;
  for (int j = 1; j <= j_max; ++j) {
    for (auto& p : moved) p = tau.forward.eval(p);

    double min_dist = std::numeric_limits<double>::infinity();
    for (const auto& p : moved)
      for (const auto& q : K.points) min_dist = std::min(min_dist, (p - q).norm());
    if (!(min_dist > 1e-6)) continue;
    if (report.first_disjoint_j == 0) report.first_disjoint_j = j;

    PointCn cj = centroid_of(moved);
    double rj = radius_about(moved, cj);
    double gap = (cj - c0).norm() - r0 - rj;
    if (!(gap > 1e-6)) continue;

    // Midpoints of the separating segment that clear both cluster balls.
    std::vector<PointCn> midpoints;
    for (double frac : {0.3, 0.4, 0.5, 0.6, 0.7}) {
      PointCn m = c0 + frac * (cj - c0);
      if ((m - c0).norm() > 1.05 * r0 + 1e-9 && (m - cj).norm() > 1.05 * rj + 1e-9)
        midpoints.push_back(m);
    }
    if (midpoints.empty()) continue;

    hull::SampleCloud unions;
    unions.label = K.label + "+tau^j";
    unions.points = K.points;
    unions.points.insert(unions.points.end(), moved.begin(), moved.end());

    auto certs = hull::hull_membership_grid(unions, midpoints, hull_cfg);
    int separated = 0;
    for (const auto& c : certs)
      if (c.verdict == hull::HullVerdict::Separated && c.verify(unions)) ++separated;

    report.j = j;
    report.disjoint_distance = min_dist;
    report.cluster_gap = gap;
    report.midpoints_tested = static_cast<int>(midpoints.size());
    report.midpoints_separated = separated;
    report.certificates = certs;
    report.union_convexity_evidence = separated == static_cast<int>(midpoints.size());
    report.found = report.union_convexity_evidence;
    if (report.found) return report;
  }
  return report;
}

PointCn TransitivityWitness::eval(const PointCn& z) const {
  PointCn out(static_cast<int>(F.size()));
  for (size_t k = 0; k < F.size(); ++k) out[static_cast<int>(k)] = F[k].eval(z);
  return out;
}

namespace {

// Ridge least squares fit of one output component over prescribed rows.
Eigen::VectorXcd ridge_fit(const Eigen::MatrixXcd& A, const Eigen::VectorXcd& y, double lambda) {
  const int m = static_cast<int>(A.cols());
  Eigen::MatrixXcd M(A.rows() + m, m);
  M.topRows(A.rows()) = A;
  M.bottomRows(m) = std::sqrt(lambda) * Eigen::MatrixXcd::Identity(m, m);
  Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(A.rows() + m);
  rhs.head(A.rows()) = y;
  return M.colPivHouseholderQr().solve(rhs);
}

void enumerate_basis(int dim, int remaining, std::vector<int>& current,
                     std::vector<std::vector<int>>& out) {
  if (static_cast<int>(current.size()) == dim) {
    out.push_back(current);
    return;
  }
  for (int e = 0; e <= remaining; ++e) {
    current.push_back(e);
    enumerate_basis(dim, remaining - e, current, out);
    current.pop_back();
  }
}

}  // namespace

TransitivityWitness transitivity_witness(const AutomorphismSpec& tau, const expr::MapExpr& g,
                                         const expr::MapExpr& h, const hull::SampleCloud& K,
                                         double eps, int degree_cap, int j_max) {
  TransitivityWitness witness;
  if (K.points.empty()) throw Error("transitivity_witness: empty cloud");
  if (g.dim_out() != h.dim_out()) throw Error("transitivity_witness: g and h disagree in arity");
  const int n = K.dim();
  const int m_out = g.dim_out();

  double k_radius = 0.0;
  for (const auto& p : K.points) k_radius = std::max(k_radius, p.norm());

  std::vector<int> candidates;
  // n = 0 works exactly when g and h already agree on K.
  double gh_gap = 0.0;
  for (const auto& p : K.points) gh_gap = std::max(gh_gap, (g.eval(p) - h.eval(p)).norm());
  if (gh_gap <= eps) candidates.push_back(0);

  auto region = domains::ball(n, std::max(k_radius, 1e-6));
  auto divergence = compact_divergence_check(tau, K, region, j_max);
  if (divergence.observed)
    for (int extra = 0; extra < 3; ++extra) candidates.push_back(divergence.j0 + extra);

  if (candidates.empty()) {
    witness.failure = "no iterate moves K off itself within j_max";
    return witness;
  }

  std::vector<std::vector<int>> basis;
  {
    std::vector<int> current;
    enumerate_basis(n, degree_cap, current, basis);
  }
  const int m = static_cast<int>(basis.size());

  for (int cand : candidates) {
    std::vector<PointCn> shifted;
    shifted.reserve(K.points.size());
    for (const auto& p : K.points) shifted.push_back(tau.iterate(p, cand));

    // Affine coordinates centered between the two clusters keep the
    // Vandermonde columns balanced.
    PointCn mid = 0.5 * (centroid_of(K.points) + centroid_of(shifted));
    double scale = 1e-12;
    for (const auto& p : K.points)
      for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(p[j] - mid[j]));
    for (const auto& p : shifted)
      for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(p[j] - mid[j]));

    auto mono = [&](const PointCn& w, const std::vector<int>& expo) {
      Complex v{1, 0};
      for (int j = 0; j < n; ++j) {
        Complex base = (w[j] - mid[j]) / scale;
        for (int e = 0; e < expo[j]; ++e) v *= base;
      }
      return v;
    };

    const int rows = static_cast<int>(K.points.size());
    Eigen::MatrixXcd A(2 * rows, m);
    for (int i = 0; i < rows; ++i)
      for (int k = 0; k < m; ++k) {
        A(i, k) = mono(K.points[i], basis[k]);
        A(rows + i, k) = mono(shifted[i], basis[k]);
      }

    // The default regularizer comes first; the smaller one is tried only
    // when the verification gate rejects the fit.
    for (double lambda : {1e-10, 1e-12}) {
      std::vector<hull::Polynomial> fit(m_out);
      for (int c = 0; c < m_out; ++c) {
        Eigen::VectorXcd y(2 * rows);
        for (int i = 0; i < rows; ++i) {
          y[i] = g.component(c).eval(K.points[i]);
          y[rows + i] = h.component(c).eval(K.points[i]);
        }
        Eigen::VectorXcd coeff = ridge_fit(A, y, lambda);
        fit[c].dim = n;
        fit[c].scale = scale;
        fit[c].shift = mid;
        fit[c].exponents = basis;
        fit[c].coefficients = coeff;
      }

      // Independent re-verification from the stored coefficients.
      double res_g = 0.0, res_h = 0.0;
      for (int i = 0; i < rows; ++i) {
        PointCn fg(m_out), fh(m_out);
        for (int c = 0; c < m_out; ++c) {
          fg[c] = fit[c].eval(K.points[i]);
          fh[c] = fit[c].eval(shifted[i]);
        }
        res_g = std::max(res_g, (fg - g.eval(K.points[i])).norm());
        res_h = std::max(res_h, (fh - h.eval(K.points[i])).norm());
      }

      if (res_g <= eps && res_h <= eps) {
        witness.found = true;
        witness.n = cand;
        witness.F = std::move(fit);
        witness.residual_g = res_g;
        witness.residual_h = res_h;
        witness.reverified = true;
        return witness;
      }
    }
  }
  witness.failure = "fit residual exceeds eps at the degree cap";
  return witness;
}

}  // namespace operators
}  // namespace spirallab
