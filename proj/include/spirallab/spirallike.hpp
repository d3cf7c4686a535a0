#pragma once

#include <optional>
#include <vector>

#include "spirallab/domains.hpp"
#include "spirallab/vectorfield.hpp"

namespace spirallab {
namespace spirallike {

// Re sum_j V_j(z) * (dr/dz_j)(z): the real part of the field applied to r
// through the Wirtinger derivative. Negative values mean r decreases along
// the flow (half the time-derivative of r(X(t,z)) at t = 0).
double re_vtilde(const fields::VectorFieldSpec& V, const expr::ScalarExpr& r, const PointCn& z);

struct CriterionReport {
  double max_value = 0.0;
  PointCn argmax;
  bool holds = false;  // max over the cloud < -1e-9
  int tested = 0;
  int skipped = 0;  // corner or singular-set points
};

// Sweeps the differential criterion Re(V~(r)) < 0 over a cloud using the
// active defining sheet at each point.
CriterionReport criterion_sweep(const fields::VectorFieldSpec& V, const domains::DomainSpec& d,
                                const std::vector<PointCn>& region_cloud);

enum class SpirallikeVerdict { EvidenceStrict, EvidenceNonStrict, CounterexampleFound };

const char* to_string(SpirallikeVerdict v);

struct SpirallikeCounterexample {
  PointCn start;
  double t = 0.0;
  PointCn flowed;
  double r_value = 0.0;
};

struct SpirallikeReport {
  SpirallikeVerdict verdict = SpirallikeVerdict::EvidenceNonStrict;
  std::vector<double> tgrid;
  std::uint64_t cloud_seed = 0;
  std::size_t cloud_size = 0;
  // min over all samples of -r(X(t,z)); positive when everything stays inside.
  double worst_margin = 0.0;
  int passes = 0;
  int margin_failures = 0;
  int outside = 0;
  int inconclusive = 0;
  std::optional<SpirallikeCounterexample> counterexample;
  bool decay_ok = false;
  double decay_horizon = 0.0;
  double decay_eps = 0.0;
  double worst_end_norm = 0.0;
};

struct StrictSpirallikeOptions {
  double eps_origin = 1e-6;
  double decay_horizon = 0.0;  // 0: 25 / |max Re eigenvalue of DV(0)|
  // Interior classification must hold with margin >= margin_scale*(1+|r(z)|).
  double margin_scale = 1e-6;
};

// Integrates every cloud point through the time grid and tests strict
// membership plus the decay clause |X(T, z)| < eps_origin. Integrator
// failures surface as inconclusive entries, never as passes.
SpirallikeReport check_strict_spirallike(const fields::VectorFieldSpec& V,
                                         const domains::DomainSpec& d,
                                         const domains::BoundaryCloud& cloud,
                                         std::vector<double> tgrid, double tol,
                                         const StrictSpirallikeOptions& opt = {});

// The field (-z0, V) on C^{n+1}; its flow is (e^{-t} z0, X(t, x)). The
// closed-form handle is composed when V carries one.
fields::VectorFieldSpec product_field(const fields::VectorFieldSpec& V);

}  // namespace spirallike
}  // namespace spirallab
