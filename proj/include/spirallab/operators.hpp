#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "spirallab/domains.hpp"
#include "spirallab/hull.hpp"

namespace spirallab {
namespace operators {

// Poincare distance in the unit disc: artanh |(a-b)/(1 - conj(a) b)|.
double poincare_distance(Complex a, Complex b);

// Holomorphic automorphism of a domain, with explicit inverse. Construction
// validates the round trip on a test cloud and that forward images stay in
// the domain.
struct AutomorphismSpec {
  expr::MapExpr forward;
  expr::MapExpr inverse;
  domains::DomainSpec domain;

  PointCn iterate(const PointCn& z, int times) const;
};

AutomorphismSpec make_automorphism(expr::MapExpr forward, expr::MapExpr inverse,
                                   domains::DomainSpec domain);

// The standard hyperbolic disc automorphism z -> (z + c)/(1 + c z), c real.
AutomorphismSpec hyperbolic_disc_automorphism(double c = 0.5);
AutomorphismSpec rotation_disc_automorphism(double theta);

struct CaratheodoryResult {
  double lower_bound = 0.0;
  // The supremum over O(Omega, D) is not finitely searchable; this is a
  // lower bound by construction and is labeled as such.
  bool is_lower_bound = true;
  int family_tested = 0;
  int best_index = -1;
};

// max over the (normalized) family of rho(f(z), f(w)). Members are divided
// by (1 + 1e-6) * max |f| over a boundary cloud so they map into the disc.
CaratheodoryResult caratheodory_lb(const domains::DomainSpec& d, const PointCn& z,
                                   const PointCn& w, const std::vector<expr::ScalarExpr>& family,
                                   int budget = 256);

// Coordinate projections plus seeded random polynomial maps of degree <= 4.
std::vector<expr::ScalarExpr> default_caratheodory_family(const domains::DomainSpec& d, int count,
                                                          std::uint64_t seed);

struct DivergenceResult {
  bool observed = false;
  int j0 = 0;
  int j_max = 0;
  std::vector<bool> disjoint_per_j;  // index j-1
};

// Smallest j0 <= j_max with tau^j(H) disjoint from the compact {r_K <= 0}
// for every j in [j0, j_max].
DivergenceResult compact_divergence_check(const AutomorphismSpec& tau,
                                          const hull::SampleCloud& H,
                                          const domains::DomainSpec& K, int j_max);

struct FixedPointResult {
  bool found = false;
  PointCn point;
  double residual = 0.0;
};

// Newton search for tau(p) = p from the given starts; interior solutions
// only. NoneFound is evidence, not proof.
FixedPointResult fixed_point_search(const AutomorphismSpec& tau, const domains::DomainSpec& d,
                                    const std::vector<PointCn>& starts, int iter_cap = 50);

struct GeneralizedTranslationReport {
  bool found = false;
  int j = 0;
  double disjoint_distance = 0.0;  // min pairwise distance between K and tau^j(K)
  double cluster_gap = 0.0;        // centroid distance minus both cluster radii
  int midpoints_tested = 0;
  int midpoints_separated = 0;
  bool union_convexity_evidence = false;
  // O(X)-convexity is approximated by polynomial convexity of the sampled
  // union; exact for Runge ambients, an approximation otherwise.
  bool hull_approximation_flag = true;
  std::vector<hull::HullCertificate> certificates;
  int first_disjoint_j = 0;  // 0 when never disjoint
};

// Searches j <= j_max with (1) tau^j(K) disjoint from K and (2) separating
// hull certificates at the segment midpoints between the two clusters.
GeneralizedTranslationReport generalized_translation_check(const AutomorphismSpec& tau,
                                                           const hull::SampleCloud& K, int j_max,
                                                           const hull::HullProbeConfig& hull_cfg);

struct TransitivityWitness {
  bool found = false;
  int n = 0;
  std::vector<hull::Polynomial> F;  // one polynomial per output component
  double residual_g = 0.0;          // max |F - g| on K
  double residual_h = 0.0;          // max |F(tau^n) - h| on K
  bool reverified = false;
  std::string failure;

  PointCn eval(const PointCn& z) const;
};

// Birkhoff-transitivity witness: finds n (via the compact-divergence scan
// over the enclosing ball of K) and fits a polynomial map F of degree <=
// degree_cap with |F - g| <= eps on K and |F(tau^n) - h| <= eps on K by
// ridge-regularized two-set least squares on scaled coordinates.
TransitivityWitness transitivity_witness(const AutomorphismSpec& tau, const expr::MapExpr& g,
                                         const expr::MapExpr& h, const hull::SampleCloud& K,
                                         double eps, int degree_cap, int j_max = 64);

}  // namespace operators
}  // namespace spirallab
