#include "spirallab/loewner.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/LU>
#include <Eigen/SVD>
#include <unsupported/Eigen/MatrixFunctions>

namespace spirallab {
namespace loewner {

namespace {

std::vector<PointCn> validation_points(const domains::DomainSpec& D, std::uint64_t seed) {
  std::vector<PointCn> pts;
  pts.push_back(PointCn::Zero(D.dim()));
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> g(0, 1);
  for (int k = 0; k < 8; ++k) {
    PointCn z(D.dim());
    for (int j = 0; j < D.dim(); ++j) z[j] = Complex(g(rng), g(rng));
    z *= 0.4 * D.bounding_radius() / std::max(z.norm(), 1e-12);
    pts.push_back(z);
  }
  return pts;
}

}  // namespace

LoewnerChainSpec make_chain(expr::MapExpr f, expr::MapExpr f_inv, expr::MapExpr psi,
                            expr::MapExpr psi_inv, fields::VectorFieldSpec V,
                            domains::DomainSpec D) {
  LoewnerChainSpec spec{std::move(f), std::move(f_inv), std::move(psi), std::move(psi_inv),
                        std::move(V), std::move(D)};
  PointCn origin = PointCn::Zero(spec.D.dim());
  if (spec.f.eval(origin).norm() > 1e-12) throw Error("base map must fix the origin");
  if (spec.psi.eval(origin).norm() > 1e-12) throw Error("conjugating map must fix the origin");
  for (const auto& z : validation_points(spec.D, 2024)) {
    double err = (spec.psi_inv.eval(spec.psi.eval(z)) - z).norm();
    if (err > 1e-8)
      throw InverseMismatch("psi_inv(psi(z)) misses z by " + std::to_string(err));
  }
  return spec;
}

LoewnerChainSpec identity_chain(fields::VectorFieldSpec V, domains::DomainSpec D) {
  int n = D.dim();
  return make_chain(expr::MapExpr::identity(n), expr::MapExpr::identity(n),
                    expr::MapExpr::identity(n), expr::MapExpr::identity(n), std::move(V),
                    std::move(D));
}

PointCn chain_map(const LoewnerChainSpec& spec, double t, const PointCn& z, double tol) {
  PointCn w = spec.psi.eval(spec.f.eval(z));
  PointCn x = fields::flow_to(spec.V, w, -t, tol);
  return spec.psi_inv.eval(x);
}

PointCn invert_base(const LoewnerChainSpec& spec, const PointCn& w, double tol) {
  if (!spec.f_inv.empty()) return spec.f_inv.eval(w);

  // Newton on f; the forward-flow preimage (= w for normalized maps) seeds it.
  PointCn x = w;
  double best = std::numeric_limits<double>::infinity();
  for (int iter = 0; iter < 40; ++iter) {
    PointCn residual = spec.f.eval(x) - w;
    double err = residual.norm();
    if (err <= tol * (1.0 + w.norm())) return x;
    if (err > 1e3 * best)
      throw BaseMapInversionFailure("newton iteration diverged inverting the base map");
    best = std::min(best, err);
    Eigen::MatrixXcd J = spec.f.jacobian(x);
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(J);
    if (!lu.isInvertible())
      throw BaseMapInversionFailure("singular Jacobian while inverting the base map");
    x -= lu.solve(residual);
  }
  throw BaseMapInversionFailure("newton iteration stalled inverting the base map");
}

InclusionReport check_inclusion(const LoewnerChainSpec& spec, double s, double t,
                                const std::vector<PointCn>& cloud, double tol) {
  if (s < 0 || t < s) throw Error("check_inclusion requires 0 <= s <= t");
  InclusionReport report;
  report.s = s;
  report.t = t;
  if (s == t) {
    report.not_applicable = true;
    return report;
  }
  report.min_margin = std::numeric_limits<double>::infinity();
  for (const auto& z : cloud) {
    PointCn w = spec.psi.eval(spec.f.eval(z));
    PointCn moved = fields::flow_to(spec.V, w, t - s, tol);
    PointCn zp = invert_base(spec, spec.psi_inv.eval(moved), tol);
    auto m = membership(spec.D, zp);
    if (m.region == domains::Region::Interior) {
      report.inside += 1;
      if (m.margin < report.min_margin) {
        report.min_margin = m.margin;
        report.worst_point = z;
      }
    } else {
      report.outside += 1;
      report.min_margin = std::min(report.min_margin, 0.0);
      report.worst_point = z;
    }
  }
  report.all_inside = report.outside == 0 && report.inside > 0;
  return report;
}

FilteringWindow filtering_window(const LoewnerChainSpec& spec, double s,
                                 const domains::DomainSpec& U, const std::vector<PointCn>& cloud,
                                 double tol) {
  if (cloud.empty()) throw Error("filtering_window: empty cloud");

  // Composite defining function of Psi(U): G(x) = r_U(psi_inv(x)).
  std::vector<expr::ScalarExpr> G;
  for (const auto& sheet : U.sheets())
    G.push_back(sheet.substitute(spec.psi_inv.components(), U.dim()));

  std::vector<PointCn> transported;
  transported.reserve(cloud.size());
  for (const auto& z : cloud)
    transported.push_back(fields::flow_to(spec.V, spec.psi.eval(spec.f.eval(z)), -s, tol));

  FilteringWindow window;
  double min_margin = std::numeric_limits<double>::infinity();
  double max_grad = 0.0;
  for (const auto& a : transported) {
    auto m = membership(U, spec.psi_inv.eval(a));
    if (m.region != domains::Region::Interior)
      throw EmptyWindow("transported closure is not interior to the neighborhood");
    min_margin = std::min(min_margin, m.margin);

    int sheet = U.active_sheet_index(spec.psi_inv.eval(a));
    if (sheet < 0) throw EmptyWindow("neighborhood sheet is ambiguous at a transported point");
    max_grad = std::max(max_grad, expr::real_gradient(G[sheet], a).norm());

    window.R = std::max(window.R, spec.V.eval(a).norm());
  }
  if (!(max_grad > 0)) throw EmptyWindow("degenerate neighborhood gradient");
  window.r_s = min_margin / max_grad;
  if (!(window.r_s > 0)) throw EmptyWindow("no clearance inside the neighborhood");
  if (!(window.R > 0)) throw Error("field vanishes on the transported cloud");
  window.t0 = (1.0 - 1e-3) * window.r_s / (2.0 * window.R);

  // Geometric grid {t0 2^-k} resolves the small-t end of the window.
  for (int k = 7; k >= 0; --k)
    window.verified_ts.push_back(s + window.t0 * std::pow(2.0, -k));
  window.all_verified = true;
  for (const auto& z : cloud) {
    PointCn w = spec.psi.eval(spec.f.eval(z));
    std::vector<double> times;
    for (double tau : window.verified_ts) times.push_back(-tau);
    auto states = fields::flow_through(spec.V, w, times, tol);
    for (const auto& x : states) {
      if (membership(U, spec.psi_inv.eval(x)).region != domains::Region::Interior) {
        window.all_verified = false;
        break;
      }
    }
    if (!window.all_verified) break;
  }
  return window;
}

NormalizationReport check_normalization(const LoewnerChainSpec& spec, double t) {
  const int n = spec.D.dim();
  PointCn origin = PointCn::Zero(n);
  if ((spec.f.jacobian(origin) - Eigen::MatrixXcd::Identity(n, n)).norm() > 1e-6)
    throw Error("check_normalization requires df(0) = I");
  if ((spec.psi.jacobian(origin) - Eigen::MatrixXcd::Identity(n, n)).norm() > 1e-6)
    throw Error("check_normalization requires Dpsi(0) = I");

  NormalizationReport report;
  const double h = 1e-4;
  const double tol = 1e-12;
  report.J_num.resize(n, n);
  for (int k = 0; k < n; ++k) {
    PointCn ep = origin, em = origin;
    ep[k] = Complex(h, 0);
    em[k] = Complex(-h, 0);
    PointCn fp = chain_map(spec, t, ep, tol);
    PointCn fm = chain_map(spec, t, em, tol);
    report.J_num.col(k) = (fp - fm) / (2 * h);
  }
  Eigen::MatrixXcd A = fields::linearize(spec.V);
  report.J_ref = (-t * A).exp();
  report.err = (report.J_num - report.J_ref).norm();
  report.pass = report.err <= 1e-5 * report.J_ref.norm();
  return report;
}

RangeHit range_exhaustion_time(const LoewnerChainSpec& spec, const PointCn& w, double t_cap,
                               int grid_steps, double tol) {
  if (!(t_cap > 0)) throw Error("range_exhaustion_time requires t_cap > 0");
  RangeHit hit;

  // Image-cloud fallback for non-invertible base maps.
  std::vector<PointCn> image;
  auto image_cloud = [&]() -> const std::vector<PointCn>& {
    if (image.empty()) {
      auto bc = domains::sample_boundary(spec.D, 64, 4242);
      for (double shrink : {0.0, 0.25, 0.5, 0.75, 0.9})
        for (const auto& p : bc.points) image.push_back(spec.f.eval((1.0 - shrink) * p));
      image.push_back(spec.f.eval(PointCn::Zero(spec.D.dim())));
    }
    return image;
  };

  PointCn state = spec.psi.eval(w);
  double t = 0.0;
  const double dt = t_cap / grid_steps;
  for (int k = 0; k <= grid_steps; ++k) {
    PointCn x = spec.psi_inv.eval(state);
    bool inside = false;
    try {
      PointCn z = invert_base(spec, x, tol);
      inside = membership(spec.D, z).region == domains::Region::Interior;
      hit.via_pullback = true;
    } catch (const BaseMapInversionFailure&) {
      double dmin = std::numeric_limits<double>::infinity();
      for (const auto& y : image_cloud()) dmin = std::min(dmin, (x - y).norm());
      inside = dmin < 0.05 * spec.D.bounding_radius();
      hit.via_pullback = false;
    }
    if (inside) {
      hit.reached = true;
      hit.t_hit = t;
      return hit;
    }
    if (k < grid_steps) {
      state = fields::flow_to(spec.V, state, dt, tol);
      t += dt;
    }
  }
  return hit;
}

LdBound ld_bound_constant(const LoewnerChainSpec& spec, const std::vector<PointCn>& K, double T,
                          std::uint64_t seed, int checks, double tol) {
  if (K.empty()) throw Error("ld_bound_constant: empty cloud");
  if (T < 0) throw Error("ld_bound_constant: T must be >= 0");
  const int n = spec.D.dim();

  std::vector<double> tgrid;
  if (T == 0.0) {
    tgrid.push_back(0.0);
  } else {
    for (int j = 0; j <= 8; ++j) tgrid.push_back(T * j / 8.0);
  }

  double sup = 0.0;
  for (double t : tgrid) {
    for (const auto& xi : K) {
      const double h = 1e-5 * (1.0 + xi.norm());
      Eigen::MatrixXcd J(n, n);
      for (int k = 0; k < n; ++k) {
        PointCn ep = xi, em = xi;
        ep[k] += Complex(h, 0);
        em[k] -= Complex(h, 0);
        J.col(k) = (chain_map(spec, t, ep, tol) - chain_map(spec, t, em, tol)) / (2 * h);
      }
      Eigen::JacobiSVD<Eigen::MatrixXcd> svd(J);
      sup = std::max(sup, svd.singularValues()[0]);
    }
  }

  LdBound bound;
  bound.kappa = 1.1 * sup;

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> ut(0.0, T);
  std::uniform_int_distribution<size_t> upick(0, K.size() - 1);
  for (int c = 0; c < checks; ++c) {
    double s = T > 0 ? ut(rng) : 0.0;
    double t = T > 0 ? ut(rng) : 0.0;
    if (std::abs(t - s) < 1e-9) continue;
    const PointCn& z = K[upick(rng)];
    double diff = (chain_map(spec, s, z, tol) - chain_map(spec, t, z, tol)).norm();
    bound.max_ratio = std::max(bound.max_ratio, diff / (bound.kappa * std::abs(t - s)));
    bound.checked += 1;
  }
  bound.verified = bound.max_ratio <= 1.0;
  return bound;
}

}  // namespace loewner
}  // namespace spirallab
