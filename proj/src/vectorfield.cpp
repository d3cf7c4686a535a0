#include "spirallab/vectorfield.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace spirallab {
namespace fields {

VectorFieldSpec::VectorFieldSpec(expr::MapExpr components, std::string name,
                                 FlowHandle closed_flow)
    : components_(std::move(components)), name_(std::move(name)), closed_flow_(std::move(closed_flow)) {
  if (components_.dim_out() != components_.dim_in())
    throw Error("vector field must have one component per coordinate");
  for (const auto& c : components_.components())
    if (!c.is_holomorphic())
      throw Error("vector field component is not holomorphic: " + c.to_string());
  PointCn origin = PointCn::Zero(dim());
  double at0 = components_.eval(origin).norm();
  if (at0 > 1e-12)
    throw Error("vector field does not vanish at the origin (|V(0)| = " + std::to_string(at0) + ")");
}

VectorFieldSpec VectorFieldSpec::parse(const std::vector<std::string>& component_texts,
                                       std::string name) {
  return VectorFieldSpec(expr::MapExpr::parse(component_texts, static_cast<int>(component_texts.size())),
                         std::move(name));
}

PointCn VectorFieldSpec::closed_flow(double t, const PointCn& z) const {
  if (!closed_flow_) throw Error("vector field has no closed-form flow handle");
  return closed_flow_(t, z);
}

const char* to_string(TrajectoryStatus s) {
  switch (s) {
    case TrajectoryStatus::Completed: return "completed";
    case TrajectoryStatus::Diverged: return "diverged";
    case TrajectoryStatus::Singular: return "singular";
  }
  return "?";
}

PointCn FlowTrajectory::sample(double t) const {
  if (times.empty()) throw Error("empty trajectory");
  const bool forward = times.back() >= times.front();
  const double lo = forward ? times.front() : times.back();
  const double hi = forward ? times.back() : times.front();
  if (t < lo - 1e-12 || t > hi + 1e-12) throw Error("sample time outside trajectory range");
  if (times.size() == 1) return points.front();

  size_t k = 0;
  if (forward) {
    while (k + 2 < times.size() && times[k + 1] <= t) ++k;
  } else {
    while (k + 2 < times.size() && times[k + 1] >= t) ++k;
  }
  const double h = times[k + 1] - times[k];
  if (h == 0.0) return points[k];
  const double s = (t - times[k]) / h;
  const double s2 = s * s, s3 = s2 * s;
  const double h00 = 2 * s3 - 3 * s2 + 1;
  const double h10 = s3 - 2 * s2 + s;
  const double h01 = -2 * s3 + 3 * s2;
  const double h11 = s3 - s2;
  return h00 * points[k] + (h10 * h) * derivatives[k] + h01 * points[k + 1] +
         (h11 * h) * derivatives[k + 1];
}

namespace {

// Dormand-Prince 5(4) tableau.
constexpr double kA21 = 1.0 / 5;
constexpr double kA31 = 3.0 / 40, kA32 = 9.0 / 40;
constexpr double kA41 = 44.0 / 45, kA42 = -56.0 / 15, kA43 = 32.0 / 9;
constexpr double kA51 = 19372.0 / 6561, kA52 = -25360.0 / 2187, kA53 = 64448.0 / 6561,
                 kA54 = -212.0 / 729;
constexpr double kA61 = 9017.0 / 3168, kA62 = -355.0 / 33, kA63 = 46732.0 / 5247,
                 kA64 = 49.0 / 176, kA65 = -5103.0 / 18656;
constexpr double kB1 = 35.0 / 384, kB3 = 500.0 / 1113, kB4 = 125.0 / 192, kB5 = -2187.0 / 6784,
                 kB6 = 11.0 / 84;
// b5 - b4 error weights (k7 = f at the new point, FSAL).
constexpr double kE1 = 71.0 / 57600, kE3 = -71.0 / 16695, kE4 = 71.0 / 1920,
                 kE5 = -17253.0 / 339200, kE6 = 22.0 / 525, kE7 = -1.0 / 40;

}  // namespace

FlowTrajectory integrate(const VectorFieldSpec& V, const PointCn& z0, double t_end, double tol,
                         const IntegrateOptions& opt) {
  if (!(tol > 0)) throw Error("integration tolerance must be positive");
  if (z0.size() != V.dim()) throw Error("initial point dimension mismatch");

  FlowTrajectory traj;
  traj.times.push_back(0.0);
  traj.points.push_back(z0);

  auto push_deriv = [&](const PointCn& y) { traj.derivatives.push_back(V.eval(y)); };

  try {
    push_deriv(z0);
  } catch (const Error&) {
    traj.status = TrajectoryStatus::Singular;
    traj.derivatives.push_back(PointCn::Zero(V.dim()));
    return traj;
  }

  if (t_end == 0.0) return traj;

  const double dir = t_end > 0 ? 1.0 : -1.0;
  double t = 0.0;
  PointCn y = z0;
  PointCn k1 = traj.derivatives.front();

  double h = 0.01 * (1.0 + y.norm()) / (1.0 + k1.norm());
  h = std::min(h, std::abs(t_end)) * dir;

  const int n = V.dim();
  PointCn k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), y5(n), err(n);

  const double time_eps = 1e-14 * std::max(1.0, std::abs(t_end));
  while (dir * (t_end - t) > time_eps) {
    bool final_step = false;
    if (dir * (t + h) >= dir * t_end) {
      h = t_end - t;
      final_step = true;
    }
    if (!final_step && std::abs(h) < 1e-14 * std::max(1.0, std::abs(t)))
      throw StepUnderflow("step size underflow at t = " + std::to_string(t));
    if (traj.steps + traj.rejected_steps > opt.max_steps)
      throw StepUnderflow("step budget exhausted at t = " + std::to_string(t));

    bool singular = false;
    try {
      k2 = V.eval(y + h * (kA21 * k1));
      k3 = V.eval(y + h * (kA31 * k1 + kA32 * k2));
      k4 = V.eval(y + h * (kA41 * k1 + kA42 * k2 + kA43 * k3));
      k5 = V.eval(y + h * (kA51 * k1 + kA52 * k2 + kA53 * k3 + kA54 * k4));
      k6 = V.eval(y + h * (kA61 * k1 + kA62 * k2 + kA63 * k3 + kA64 * k4 + kA65 * k5));
      y5 = y + h * (kB1 * k1 + kB3 * k3 + kB4 * k4 + kB5 * k5 + kB6 * k6);
      k7 = V.eval(y5);
    } catch (const Error&) {
      singular = true;
    }
    if (singular || !y5.allFinite()) {
      traj.status = TrajectoryStatus::Singular;
      return traj;
    }

    err = h * (kE1 * k1 + kE3 * k3 + kE4 * k4 + kE5 * k5 + kE6 * k6 + kE7 * k7);
    // The controller over-satisfies the per-step bound by a fixed factor so
    // that round trips (forward then reverse) stay within ~10 tol globally.
    const double tol_eff = tol / 64.0;
    double ratio = 0.0;
    for (int j = 0; j < n; ++j)
      ratio = std::max(ratio, std::abs(err[j]) / (tol_eff * (1.0 + std::abs(y5[j]))));

    if (ratio <= 1.0) {
      t = final_step ? t_end : t + h;
      y = y5;
      k1 = k7;  // FSAL
      traj.times.push_back(t);
      traj.points.push_back(y);
      traj.derivatives.push_back(k1);
      traj.steps += 1;
      traj.max_local_error = std::max(traj.max_local_error, err.norm());
      if (y.norm() > opt.escape_radius) {
        traj.status = TrajectoryStatus::Diverged;
        return traj;
      }
    } else {
      traj.rejected_steps += 1;
    }

    double scale = 0.9 * std::pow(std::max(ratio, 1e-10), -0.2);
    h *= std::clamp(scale, 0.2, 5.0);
  }

  traj.times.back() = t_end;  // absorb sub-eps remainders
  traj.status = TrajectoryStatus::Completed;
  return traj;
}

PointCn flow_to(const VectorFieldSpec& V, const PointCn& z0, double t, double tol,
                const IntegrateOptions& opt) {
  FlowTrajectory traj = integrate(V, z0, t, tol, opt);
  if (traj.status != TrajectoryStatus::Completed)
    throw DivergedBeforeT("flow " + std::string(to_string(traj.status)) + " before t = " +
                          std::to_string(t) + " (reached " + std::to_string(traj.end_time()) + ")");
  return traj.end();
}

std::vector<PointCn> flow_through(const VectorFieldSpec& V, const PointCn& z0,
                                  const std::vector<double>& times, double tol,
                                  const IntegrateOptions& opt) {
  std::vector<PointCn> out;
  out.reserve(times.size());
  PointCn y = z0;
  double t = 0.0;
  for (double target : times) {
    if (target != t) y = flow_to(V, y, target - t, tol, opt);
    t = target;
    out.push_back(y);
  }
  return out;
}

Eigen::MatrixXcd linearize(const VectorFieldSpec& V) {
  return V.jacobian(PointCn::Zero(V.dim()));
}

StabilityVerdict classify_stability(const VectorFieldSpec& V,
                                    const std::optional<StabilitySampling>& sampling) {
  StabilityVerdict verdict;
  Eigen::MatrixXcd A = linearize(V);
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> solver(A, /*computeEigenvectors=*/false);
  if (solver.info() != Eigen::Success) throw EigensolverFailure("eigensolver did not converge");
  verdict.eigenvalues = solver.eigenvalues();

  constexpr double kThreshold = -1e-9;
  verdict.hyperbolic_stable = true;
  for (int j = 0; j < verdict.eigenvalues.size(); ++j) {
    if (verdict.eigenvalues[j].real() >= kThreshold) {
      verdict.hyperbolic_stable = false;
      verdict.reason = "eigenvalue real part >= -1e-9";
      break;
    }
  }

  if (sampling) {
    TrajectoryEvidence ev;
    ev.samples = sampling->samples;
    ev.ball_radius = sampling->ball_radius;
    ev.horizon = sampling->horizon;
    ev.eps = sampling->eps;
    ev.seed = sampling->seed;
    std::mt19937_64 rng(sampling->seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    const int n = V.dim();
    for (int s = 0; s < sampling->samples; ++s) {
      PointCn z(n);
      for (int j = 0; j < n; ++j) z[j] = Complex(gauss(rng), gauss(rng));
      double nz = z.norm();
      if (nz > 0) z *= sampling->ball_radius * std::pow(unif(rng), 1.0 / (2 * n)) / nz;
      try {
        PointCn endpoint = flow_to(V, z, sampling->horizon, sampling->tol);
        if (endpoint.norm() < sampling->eps) ev.reached += 1;
      } catch (const Error&) {
        // counted as not reached
      }
    }
    ev.all_reached = (ev.reached == ev.samples);
    verdict.evidence = ev;
  }
  return verdict;
}

double jacobian_sup_bound(const VectorFieldSpec& V, const std::vector<PointCn>& cloud) {
  if (cloud.empty()) throw Error("jacobian_sup_bound requires a nonempty cloud");
  double bound = 0.0;
  for (const auto& z : cloud) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(V.jacobian(z));
    bound = std::max(bound, svd.singularValues()[0]);
  }
  return bound;
}

LipschitzReport lipschitz_estimate_check(const VectorFieldSpec& V, const PointCn& w,
                                         const PointCn& z, double t, double B, double tol) {
  if (!(t > 0)) throw Error("lipschitz_estimate_check requires t > 0");
  LipschitzReport report;
  report.t = t;
  report.bound = B;
  PointCn back = flow_to(V, w, -t, tol);
  PointCn fwd = flow_to(V, z, t, tol);
  report.lhs = (back - z).norm();
  report.rhs = std::exp(B * t) * (w - fwd).norm();
  report.holds = report.lhs <= report.rhs * (1.0 + 1e-6);
  return report;
}

}  // namespace fields
}  // namespace spirallab
