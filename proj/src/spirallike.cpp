#include "spirallab/spirallike.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace spirallab {
namespace spirallike {

double re_vtilde(const fields::VectorFieldSpec& V, const expr::ScalarExpr& r, const PointCn& z) {
  expr::WirtingerGrad g = expr::wirtinger_grad(r, z);
  PointCn v = V.eval(z);
  Complex sum{0, 0};
  for (int j = 0; j < V.dim(); ++j) sum += v[j] * g.dz[j];
  return sum.real();
}

CriterionReport criterion_sweep(const fields::VectorFieldSpec& V, const domains::DomainSpec& d,
                                const std::vector<PointCn>& region_cloud) {
  CriterionReport report;
  report.max_value = -std::numeric_limits<double>::infinity();
  for (const auto& z : region_cloud) {
    if (!d.singular().admits(z)) {
      report.skipped += 1;
      continue;
    }
    double value;
    try {
      value = re_vtilde(V, d.active_sheet(z), z);
    } catch (const SingularPointError&) {
      report.skipped += 1;
      continue;
    }
    if (value > report.max_value) {
      report.max_value = value;
      report.argmax = z;
    }
    report.tested += 1;
  }
  report.holds = report.tested > 0 && report.max_value < -1e-9;
  return report;
}

const char* to_string(SpirallikeVerdict v) {
  switch (v) {
    case SpirallikeVerdict::EvidenceStrict: return "EvidenceStrict";
    case SpirallikeVerdict::EvidenceNonStrict: return "EvidenceNonStrict";
    case SpirallikeVerdict::CounterexampleFound: return "CounterexampleFound";
  }
  return "?";
}

SpirallikeReport check_strict_spirallike(const fields::VectorFieldSpec& V,
                                         const domains::DomainSpec& d,
                                         const domains::BoundaryCloud& cloud,
                                         std::vector<double> tgrid, double tol,
                                         const StrictSpirallikeOptions& opt) {
  for (double t : tgrid)
    if (!(t > 0)) throw Error("check_strict_spirallike: grid times must be positive");
  std::sort(tgrid.begin(), tgrid.end());

  SpirallikeReport report;
  report.tgrid = tgrid;
  report.cloud_seed = cloud.seed;
  report.cloud_size = cloud.points.size();
  report.worst_margin = std::numeric_limits<double>::infinity();
  report.decay_eps = opt.eps_origin;

  double horizon = opt.decay_horizon;
  if (horizon <= 0) {
    auto verdict = fields::classify_stability(V);
    double max_re = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < verdict.eigenvalues.size(); ++j)
      max_re = std::max(max_re, verdict.eigenvalues[j].real());
    horizon = max_re < -1e-9 ? 25.0 / std::abs(max_re)
                             : (tgrid.empty() ? 25.0 : 5.0 * tgrid.back());
  }
  report.decay_horizon = horizon;

  std::vector<double> times = tgrid;
  if (times.empty() || horizon > times.back()) times.push_back(horizon);

  bool decay_ok = true;
  for (const auto& z : cloud.points) {
    double base = 1.0 + std::abs(d.r(z));
    std::vector<PointCn> states;
    try {
      states = fields::flow_through(V, z, times, tol);
    } catch (const Error&) {
      report.inconclusive += 1;
      continue;
    }
    for (size_t k = 0; k < tgrid.size(); ++k) {
      const PointCn& x = states[k];
      double rv;
      try {
        rv = d.r(x);
      } catch (const Error&) {
        report.inconclusive += 1;
        continue;
      }
      report.worst_margin = std::min(report.worst_margin, -rv);
      if (rv >= -d.boundary_tol()) {
        report.outside += 1;
        if (!report.counterexample)
          report.counterexample = SpirallikeCounterexample{z, tgrid[k], x, rv};
      } else if (-rv < opt.margin_scale * base) {
        report.margin_failures += 1;
      } else {
        report.passes += 1;
      }
    }
    double end_norm = states.back().norm();
    report.worst_end_norm = std::max(report.worst_end_norm, end_norm);
    if (end_norm >= opt.eps_origin) decay_ok = false;
  }
  report.decay_ok = decay_ok;

  if (report.outside > 0) {
    report.verdict = SpirallikeVerdict::CounterexampleFound;
  } else if (report.margin_failures == 0 && report.inconclusive == 0 && decay_ok &&
             report.passes > 0) {
    report.verdict = SpirallikeVerdict::EvidenceStrict;
  } else {
    report.verdict = SpirallikeVerdict::EvidenceNonStrict;
  }
  return report;
}

fields::VectorFieldSpec product_field(const fields::VectorFieldSpec& V) {
  const int n = V.dim();
  std::vector<expr::ScalarExpr> comps;
  comps.reserve(n + 1);
  comps.emplace_back(expr::neg(expr::variable(0)), n + 1, "-z1");
  for (const auto& c : V.components().components())
    comps.push_back(c.shift_vars(1, n + 1));

  fields::FlowHandle flow;
  if (V.has_closed_flow()) {
    fields::VectorFieldSpec base = V;  // copy captured by the handle
    flow = [base](double t, const PointCn& z) {
      PointCn tail = z.tail(z.size() - 1);
      PointCn out(z.size());
      out[0] = std::exp(-t) * z[0];
      out.tail(z.size() - 1) = base.closed_flow(t, tail);
      return out;
    };
  }
  return fields::VectorFieldSpec(expr::MapExpr(std::move(comps), n + 1),
                                 V.name().empty() ? "product" : "product(" + V.name() + ")",
                                 std::move(flow));
}

}  // namespace spirallike
}  // namespace spirallab
