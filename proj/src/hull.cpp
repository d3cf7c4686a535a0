#include "spirallab/hull.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/QR>

namespace spirallab {
namespace hull {

Complex Polynomial::eval(const PointCn& z) const {
  if (z.size() != dim) throw Error("polynomial evaluated at wrong dimension");
  Complex sum{0, 0};
  for (size_t k = 0; k < exponents.size(); ++k) {
    Complex term = coefficients[static_cast<int>(k)];
    for (int j = 0; j < dim; ++j) {
      Complex base = (shift.size() > 0 ? z[j] - shift[j] : z[j]) / scale;
      for (int e = 0; e < exponents[k][j]; ++e) term *= base;
    }
    sum += term;
  }
  return sum;
}

int Polynomial::degree() const {
  int deg = 0;
  for (size_t k = 0; k < exponents.size(); ++k) {
    if (std::abs(coefficients[static_cast<int>(k)]) == 0.0) continue;
    int total = 0;
    for (int e : exponents[k]) total += e;
    deg = std::max(deg, total);
  }
  return deg;
}

const char* to_string(HullVerdict v) {
  return v == HullVerdict::Separated ? "Separated" : "Inconclusive";
}

bool HullCertificate::verify(const SampleCloud& K) const {
  if (verdict != HullVerdict::Separated) return false;
  double max_on_k = 0.0;
  for (const auto& w : K.points) max_on_k = std::max(max_on_k, std::abs(witness.eval(w)));
  if (max_on_k == 0.0) return false;
  return std::abs(witness.eval(query)) >= (1.0 + gap) * max_on_k;
}

namespace {

void enumerate_exponents(int dim, int cap, std::vector<int>& current,
                         std::vector<std::vector<int>>& out, int remaining) {
  if (static_cast<int>(current.size()) == dim) {
    out.push_back(current);
    return;
  }
  for (int e = 0; e <= remaining; ++e) {
    current.push_back(e);
    enumerate_exponents(dim, cap, current, out, remaining - e);
    current.pop_back();
  }
}

std::vector<std::vector<int>> monomial_basis(int dim, int cap) {
  std::vector<std::vector<int>> out;
  std::vector<int> current;
  enumerate_exponents(dim, cap, current, out, cap);
  return out;
}

int total_degree(const std::vector<int>& expo) {
  int d = 0;
  for (int e : expo) d += e;
  return d;
}

struct Probe {
  const SampleCloud& K;
  const PointCn& z0;
  const HullProbeConfig& cfg;
  int n;
  double scale;
  std::vector<std::vector<int>> basis;
  Eigen::MatrixXcd A;   // monomial values over K (|K| x m)
  Eigen::VectorXcd b;   // monomial values at z0
  int evaluations = 0;

  Eigen::VectorXcd best_c;
  double best_ratio = 0.0;

  Probe(const SampleCloud& k, const PointCn& q, const HullProbeConfig& c)
      : K(k), z0(q), cfg(c), n(k.dim()) {
    scale = 0.0;
    for (const auto& w : K.points)
      for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(w[j]));
    for (int j = 0; j < n; ++j) scale = std::max(scale, std::abs(z0[j]));
    if (scale == 0.0) scale = 1.0;

    basis = monomial_basis(n, cfg.degree_cap);
    const int m = static_cast<int>(basis.size());
    const int rows = static_cast<int>(K.points.size());
    A.resize(rows, m);
    b.resize(m);
    for (int k2 = 0; k2 < m; ++k2) {
      for (int i = 0; i < rows; ++i) A(i, k2) = monomial_value(K.points[i], basis[k2]);
      b[k2] = monomial_value(z0, basis[k2]);
    }
  }

  Complex monomial_value(const PointCn& w, const std::vector<int>& expo) const {
    Complex v{1, 0};
    for (int j = 0; j < n; ++j) {
      Complex base = w[j] / scale;
      for (int e = 0; e < expo[j]; ++e) v *= base;
    }
    return v;
  }

  // Objective |p(z0)| / max_K |p|; records the best candidate.
  double consider(const Eigen::VectorXcd& c) {
    ++evaluations;
    double max_on_k = (A * c).cwiseAbs().maxCoeff();
    if (!(max_on_k > 0) || !std::isfinite(max_on_k)) return 0.0;
    double at_query = std::abs((b.transpose() * c).value());
    double ratio = at_query / max_on_k;
    if (std::isfinite(ratio) && ratio > best_ratio) {
      best_ratio = ratio;
      best_c = c;
    }
    return ratio;
  }

  bool budget_left() const { return evaluations < cfg.budget; }

  // Ridge least squares, weighted by w, constrained to p(z0) = 1 (which
  // fixes the scale/phase gauge of the separation problem).
  Eigen::VectorXcd constrained_lsq(const std::vector<int>& columns,
                                   const Eigen::VectorXd& weights) const {
    const int m = static_cast<int>(columns.size());
    const int rows = static_cast<int>(K.points.size());
    Eigen::VectorXcd bsub(m);
    for (int k2 = 0; k2 < m; ++k2) bsub[k2] = b[columns[k2]];
    double bn = bsub.squaredNorm();
    if (bn == 0.0) return Eigen::VectorXcd::Zero(m);
    Eigen::VectorXcd c0 = bsub.conjugate() / bn;

    if (m == 1) return expand(columns, c0);

    Eigen::MatrixXcd V(m, 1);
    V.col(0) = bsub.conjugate();
    Eigen::HouseholderQR<Eigen::MatrixXcd> qr(V);
    Eigen::MatrixXcd N = Eigen::MatrixXcd(qr.householderQ()).rightCols(m - 1);

    const double lambda = 1e-10;
    Eigen::MatrixXcd M(rows + m, m);
    for (int k2 = 0; k2 < m; ++k2)
      for (int i = 0; i < rows; ++i) M(i, k2) = weights[i] * A(i, columns[k2]);
    M.bottomRows(m) = std::sqrt(lambda) * Eigen::MatrixXcd::Identity(m, m);

    Eigen::VectorXcd rhs = -(M * c0);
    Eigen::MatrixXcd MN = M * N;
    Eigen::VectorXcd u = MN.colPivHouseholderQr().solve(rhs);
    return expand(columns, c0 + N * u);
  }

  Eigen::VectorXcd expand(const std::vector<int>& columns, const Eigen::VectorXcd& sub) const {
    Eigen::VectorXcd full = Eigen::VectorXcd::Zero(basis.size());
    for (size_t k2 = 0; k2 < columns.size(); ++k2) full[columns[k2]] = sub[static_cast<int>(k2)];
    return full;
  }
};

}  // namespace

HullCertificate hull_probe(const SampleCloud& K, const PointCn& z0, const HullProbeConfig& cfg) {
  if (cfg.degree_cap < 1) throw Error("hull_probe: degree cap must be >= 1");
  if (K.points.empty()) throw Error("hull_probe: empty sample cloud");

  HullCertificate cert;
  cert.query = z0;
  cert.degree_cap = cfg.degree_cap;

  Probe probe(K, z0, cfg);
  const int m = static_cast<int>(probe.basis.size());
  const int rows = static_cast<int>(K.points.size());

  // Monomial seeds.
  for (int k = 0; k < m && probe.budget_left(); ++k) {
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(m);
    c[k] = 1.0;
    probe.consider(c);
  }

  // Affine seeds centered at the cloud centroid.
  PointCn centroid = PointCn::Zero(probe.n);
  for (const auto& w : K.points) centroid += w;
  centroid /= static_cast<double>(rows);
  for (int j = 0; j < probe.n && probe.budget_left(); ++j) {
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(m);
    for (int k = 0; k < m; ++k) {
      if (total_degree(probe.basis[k]) == 0) c[k] = -centroid[j] / probe.scale;
      if (total_degree(probe.basis[k]) == 1 && probe.basis[k][j] == 1) c[k] = 1.0;
    }
    probe.consider(c);
  }

  // Gauge-constrained ridge least squares per degree, then Lawson
  // reweighting toward the minimax witness.
  for (int d = 1; d <= cfg.degree_cap && probe.budget_left(); ++d) {
    std::vector<int> columns;
    for (int k = 0; k < m; ++k)
      if (total_degree(probe.basis[k]) <= d) columns.push_back(k);

    Eigen::VectorXd weights = Eigen::VectorXd::Ones(rows);
    for (int iter = 0; iter < 8 && probe.budget_left(); ++iter) {
      Eigen::VectorXcd c = probe.constrained_lsq(columns, weights);
      if (c.norm() == 0.0) break;
      probe.consider(c);
      Eigen::VectorXd mags = (probe.A * c).cwiseAbs();
      double top = mags.maxCoeff();
      if (!(top > 0)) break;
      for (int i = 0; i < rows; ++i) weights[i] = std::max(weights[i] * mags[i] / top, 1e-8);
      weights /= weights.maxCoeff();
    }
  }

  // Seeded random polish around the incumbent.
  if (probe.best_ratio > 0 && probe.budget_left()) {
    std::mt19937_64 rng(cfg.seed);
    std::normal_distribution<double> g(0, 1);
    double sigma = 0.3;
    Eigen::VectorXcd center = probe.best_c / std::max(probe.best_c.norm(), 1e-300);
    while (probe.budget_left()) {
      Eigen::VectorXcd c = center;
      for (int k = 0; k < m; ++k) c[k] += sigma * Complex(g(rng), g(rng));
      double before = probe.best_ratio;
      probe.consider(c);
      if (probe.best_ratio > before) {
        center = probe.best_c / std::max(probe.best_c.norm(), 1e-300);
      } else {
        sigma *= 0.97;
        if (sigma < 1e-4) break;
      }
    }
  }

  if (probe.best_ratio >= 1.0 + cfg.min_gap) {
    double max_on_k = (probe.A * probe.best_c).cwiseAbs().maxCoeff();
    Polynomial witness;
    witness.dim = probe.n;
    witness.scale = probe.scale;
    witness.exponents = probe.basis;
    witness.coefficients = probe.best_c / max_on_k;

    cert.witness = witness;
    // Recompute the gap from the stored witness itself so that verify()
    // reproduces it bit for bit.
    double max_stored = 0.0;
    for (const auto& w : K.points) max_stored = std::max(max_stored, std::abs(witness.eval(w)));
    double at_query = std::abs(witness.eval(z0));
    if (max_stored > 0 && at_query >= (1.0 + cfg.min_gap) * max_stored) {
      cert.verdict = HullVerdict::Separated;
      cert.gap = at_query / max_stored - 1.0;
      if (!cert.verify(K)) {
        cert.verdict = HullVerdict::Inconclusive;  // paranoid; should not happen
        cert.gap = 0.0;
      }
    }
  }
  return cert;
}

std::vector<HullCertificate> hull_membership_grid(const SampleCloud& K,
                                                  const std::vector<PointCn>& grid,
                                                  const HullProbeConfig& cfg) {
  std::vector<HullCertificate> out;
  out.reserve(grid.size());
  for (const auto& z0 : grid) out.push_back(hull_probe(K, z0, cfg));
  return out;
}

RungeBasisReport runge_basis_check(const fields::VectorFieldSpec& V, const domains::DomainSpec& d,
                                   std::vector<double> tgrid, const domains::BoundaryCloud& cloud,
                                   const domains::DomainSpec& U, double tol,
                                   double boundary_resolution) {
  if (cloud.points.empty()) throw Error("runge_basis_check: empty cloud");
  for (double t : tgrid)
    if (!(t > 0)) throw Error("runge_basis_check: grid times must be positive");
  std::sort(tgrid.begin(), tgrid.end());

  RungeBasisReport report;
  report.jacobian_bound = fields::jacobian_sup_bound(V, cloud.points);

  auto forward_inside = [&](double t) {
    for (const auto& z : cloud.points) {
      try {
        PointCn x = fields::flow_to(V, z, t, tol);
        if (membership(d, x).region != domains::Region::Interior) return false;
      } catch (const Error&) {
        return false;
      }
    }
    return true;
  };
  auto backward_in_U = [&](double t) {
    for (const auto& z : cloud.points) {
      try {
        PointCn x = fields::flow_to(V, z, -t, tol);
        if (membership(U, x).region != domains::Region::Interior) return false;
      } catch (const Error&) {
        return false;
      }
    }
    return true;
  };

  report.clause_a_all = true;
  for (double t : tgrid) {
    RungeBasisEntry entry;
    entry.t = t;
    entry.forward_inside = forward_inside(t);
    entry.backward_in_U = backward_in_U(t);
    report.clause_a_all = report.clause_a_all && entry.forward_inside;
    report.entries.push_back(entry);
  }

  const double window_cap = std::log(1.5) / report.jacobian_bound;
  report.t_prime = (1.0 - 1e-3) * std::min(window_cap, tgrid.back());

  report.clause_b_within_window = true;
  for (const auto& entry : report.entries)
    if (entry.t < report.t_prime && !entry.backward_in_U) report.clause_b_within_window = false;

  // Bisect the clause-(b) validity boundary when the grid brackets it.
  for (size_t k = 0; k + 1 < report.entries.size(); ++k) {
    if (report.entries[k].backward_in_U && !report.entries[k + 1].backward_in_U) {
      double lo = report.entries[k].t, hi = report.entries[k + 1].t;
      while (hi - lo > boundary_resolution) {
        double mid = 0.5 * (lo + hi);
        (backward_in_U(mid) ? lo : hi) = mid;
      }
      report.b_boundary = 0.5 * (lo + hi);
      report.b_boundary_found = true;
      break;
    }
  }
  return report;
}

}  // namespace hull
}  // namespace spirallab
