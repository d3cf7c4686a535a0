#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "spirallab/domains.hpp"
#include "spirallab/vectorfield.hpp"

namespace spirallab {
namespace hull {

// Finite sample of a compact K in C^n. Hull verdicts always refer to the
// hull of the sampled set, which underestimates the hull of the true
// compact.
struct SampleCloud {
  std::vector<PointCn> points;
  std::string label;
  std::uint64_t seed = 0;

  int dim() const { return points.empty() ? 0 : static_cast<int>(points.front().size()); }
};

// Polynomial in the affine coordinates (z - shift)/scale, stored as
// monomial exponents plus complex coefficients. Serializable and
// re-evaluable on its own, so certificates are self-checking. An empty
// shift means zero.
struct Polynomial {
  int dim = 0;
  double scale = 1.0;
  Eigen::VectorXcd shift;  // optional center; empty = origin
  std::vector<std::vector<int>> exponents;
  Eigen::VectorXcd coefficients;

  Complex eval(const PointCn& z) const;
  int degree() const;
};

enum class HullVerdict { Separated, Inconclusive };

const char* to_string(HullVerdict v);

struct HullCertificate {
  HullVerdict verdict = HullVerdict::Inconclusive;
  PointCn query;
  int degree_cap = 0;
  // Populated when Separated: |witness(query)| >= (1 + gap) max_K |witness|
  // with gap >= the configured minimum.
  Polynomial witness;
  double gap = 0.0;

  // Re-evaluates the stored witness against the cloud; certificates are
  // sound only if this passes independently of the search.
  bool verify(const SampleCloud& K) const;
};

struct HullProbeConfig {
  int degree_cap = 8;
  int budget = 2000;  // candidate objective evaluations
  std::uint64_t seed = 0;
  double min_gap = 1e-6;
};

// Searches polynomials of total degree <= degree_cap for a witness
// maximizing |p(z0)| subject to max_K |p| <= 1. Separated is sound (the
// certificate re-verifies); Inconclusive proves nothing.
HullCertificate hull_probe(const SampleCloud& K, const PointCn& z0, const HullProbeConfig& cfg);

std::vector<HullCertificate> hull_membership_grid(const SampleCloud& K,
                                                  const std::vector<PointCn>& grid,
                                                  const HullProbeConfig& cfg);

struct RungeBasisEntry {
  double t = 0.0;
  bool forward_inside = false;  // clause (a): X_t(cloud) in D
  bool backward_in_U = false;   // clause (b): X_{-t}(cloud) in U
};

struct RungeBasisReport {
  std::vector<RungeBasisEntry> entries;
  double jacobian_bound = 0.0;  // B over the cloud
  double t_prime = 0.0;         // < min{(1/B) ln(3/2), max grid t}
  bool clause_a_all = false;
  bool clause_b_within_window = false;  // clause (b) holds on grid times below t_prime
  double b_boundary = 0.0;              // bisected sup{t : clause (b) holds}
  bool b_boundary_found = false;
};

// Checks the two numerically accessible clauses of the Runge-neighborhood
// family {X_{-t}(D)}: (a) the closure flows into D forward in time, and
// (b) small reverse times keep the closure inside the given neighborhood U,
// with the admissible window bounded through the Jacobian sup bound B.
RungeBasisReport runge_basis_check(const fields::VectorFieldSpec& V, const domains::DomainSpec& d,
                                   std::vector<double> tgrid, const domains::BoundaryCloud& cloud,
                                   const domains::DomainSpec& U, double tol = 1e-9,
                                   double boundary_resolution = 1e-3);

}  // namespace hull
}  // namespace spirallab
