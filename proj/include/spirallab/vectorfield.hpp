#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "spirallab/expr.hpp"

namespace spirallab {
namespace fields {

// Closed-form flow X(t, z), defined for all real t.
using FlowHandle = std::function<PointCn(double, const PointCn&)>;

// Holomorphic vector field V on C^n with V(0) = 0, one component expression
// per coordinate. Components must pass the holomorphic tree scan.
class VectorFieldSpec {
 public:
  VectorFieldSpec() = default;
  explicit VectorFieldSpec(expr::MapExpr components, std::string name = {},
                           FlowHandle closed_flow = nullptr);

  static VectorFieldSpec parse(const std::vector<std::string>& component_texts,
                               std::string name = {});

  int dim() const { return components_.dim_in(); }
  const expr::MapExpr& components() const { return components_; }
  const std::string& name() const { return name_; }

  PointCn eval(const PointCn& z) const { return components_.eval(z); }
  Eigen::MatrixXcd jacobian(const PointCn& z) const { return components_.jacobian(z); }

  bool has_closed_flow() const { return static_cast<bool>(closed_flow_); }
  PointCn closed_flow(double t, const PointCn& z) const;

 private:
  expr::MapExpr components_;
  std::string name_;
  FlowHandle closed_flow_;
};

enum class TrajectoryStatus { Completed, Diverged, Singular };

const char* to_string(TrajectoryStatus s);

// Time-stamped solution of dX/dt = V(X), X(0) = z0, recorded at accepted
// integrator steps. Times are strictly monotone in the integration
// direction and start at (0, z0).
struct FlowTrajectory {
  std::vector<double> times;
  std::vector<PointCn> points;
  std::vector<PointCn> derivatives;  // V at each node, kept for dense output
  long steps = 0;
  long rejected_steps = 0;
  double max_local_error = 0.0;
  TrajectoryStatus status = TrajectoryStatus::Completed;

  const PointCn& end() const { return points.back(); }
  double end_time() const { return times.back(); }

  // Cubic Hermite interpolation between accepted steps.
  PointCn sample(double t) const;
};

struct IntegrateOptions {
  double escape_radius = 1e6;
  long max_steps = 2000000;
};

// Adaptive embedded Runge-Kutta 5(4) (Dormand-Prince) over the 2n real
// coordinates; local error per step bounded by tol * (1 + |y|). Negative
// t_end integrates the reverse flow X_{-|t|}. Throws StepUnderflow when the
// controller cannot meet tol.
FlowTrajectory integrate(const VectorFieldSpec& V, const PointCn& z0, double t_end, double tol,
                         const IntegrateOptions& opt = {});

// Endpoint of integrate(); throws DivergedBeforeT unless the trajectory
// completed.
PointCn flow_to(const VectorFieldSpec& V, const PointCn& z0, double t, double tol,
                const IntegrateOptions& opt = {});

// Integrates through the given times (any signs, processed in the given
// order from 0) and returns the exact-time states, one per entry.
std::vector<PointCn> flow_through(const VectorFieldSpec& V, const PointCn& z0,
                                  const std::vector<double>& times, double tol,
                                  const IntegrateOptions& opt = {});

// DV(0) evaluated by exact Wirtinger differentiation.
Eigen::MatrixXcd linearize(const VectorFieldSpec& V);

struct TrajectoryEvidence {
  int samples = 0;
  double ball_radius = 0.0;
  double horizon = 0.0;
  double eps = 0.0;
  std::uint64_t seed = 0;
  int reached = 0;
  bool all_reached = false;
};

struct StabilityVerdict {
  bool hyperbolic_stable = false;
  std::string reason;  // populated when not hyperbolic stable
  Eigen::VectorXcd eigenvalues;
  std::optional<TrajectoryEvidence> evidence;

  // The spectral test is local; global asymptotic stability is not decidable
  // numerically, and every verdict says so.
  static constexpr const char* kScopeNote =
      "local spectral test at the origin plus optional sampled trajectories; "
      "global asymptotic stability is not certified";
};

struct StabilitySampling {
  int samples = 100;
  double ball_radius = 1.0;
  double horizon = 20.0;
  double eps = 1e-6;
  double tol = 1e-9;
  std::uint64_t seed = 1;
};

// HyperbolicStable iff every eigenvalue of DV(0) has real part < -1e-9.
StabilityVerdict classify_stability(const VectorFieldSpec& V,
                                    const std::optional<StabilitySampling>& sampling = std::nullopt);

// max over the cloud of the spectral norm of the complex Jacobian DV(z).
double jacobian_sup_bound(const VectorFieldSpec& V, const std::vector<PointCn>& cloud);

struct LipschitzReport {
  double lhs = 0.0;  // |X_{-t}(w) - z|
  double rhs = 0.0;  // e^{B t} |w - X_t(z)|
  double bound = 0.0;
  double t = 0.0;
  bool holds = false;
};

// Checks |X_{-t}(w) - z| <= e^{Bt} |w - X_t(z)| (1 + 1e-6), the flow
// Lipschitz estimate with rate B.
LipschitzReport lipschitz_estimate_check(const VectorFieldSpec& V, const PointCn& w,
                                         const PointCn& z, double t, double B,
                                         double tol = 1e-10);

}  // namespace fields
}  // namespace spirallab
