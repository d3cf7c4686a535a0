#pragma once

#include <optional>
#include <vector>

#include "spirallab/domains.hpp"
#include "spirallab/vectorfield.hpp"

namespace spirallab {
namespace loewner {

// The chain f_t = Psi^{-1}(X_{-t}(Psi(f(z)))) built from a base map f with
// f(0) = 0, a conjugating automorphism Psi with Psi(0) = 0, the field V and
// the source domain D. f_inv may be empty; inversion then runs Newton on f
// seeded with the forward-flow preimage.
struct LoewnerChainSpec {
  expr::MapExpr f;
  expr::MapExpr f_inv;  // optional
  expr::MapExpr psi;
  expr::MapExpr psi_inv;
  fields::VectorFieldSpec V;
  domains::DomainSpec D;
};

// Validates f(0) = 0 and Psi(0) = 0 within 1e-12 and the Psi round trip
// within 1e-8 on sampled test points.
LoewnerChainSpec make_chain(expr::MapExpr f, expr::MapExpr f_inv, expr::MapExpr psi,
                            expr::MapExpr psi_inv, fields::VectorFieldSpec V,
                            domains::DomainSpec D);

// Identity f and Psi over the given domain/field.
LoewnerChainSpec identity_chain(fields::VectorFieldSpec V, domains::DomainSpec D);

// Evaluates the chain by reverse-flow integration at the given tolerance.
PointCn chain_map(const LoewnerChainSpec& spec, double t, const PointCn& z, double tol = 1e-9);

// Solves f(x) = w, preferring the explicit inverse.
PointCn invert_base(const LoewnerChainSpec& spec, const PointCn& w, double tol = 1e-10);

struct InclusionReport {
  bool not_applicable = false;  // s == t
  double s = 0.0, t = 0.0;
  int inside = 0, outside = 0;
  double min_margin = 0.0;
  bool all_inside = false;
  std::optional<PointCn> worst_point;
};

// Verifies closure inclusion f_s(D)-bar in f_t(D) on a cloud by mapping each
// z through z' = f^{-1}(Psi^{-1}(X_{t-s}(Psi(f(z))))) and requiring z' to be
// interior.
InclusionReport check_inclusion(const LoewnerChainSpec& spec, double s, double t,
                                const std::vector<PointCn>& cloud, double tol = 1e-9);

struct FilteringWindow {
  double r_s = 0.0;  // Euclidean clearance of X_{-s}(Psi(f(cloud))) inside Psi(U)
  double R = 0.0;    // max |V| over the transported cloud
  double t0 = 0.0;   // (1 - 1e-3) r_s / (2R)
  std::vector<double> verified_ts;
  bool all_verified = false;
};

// The filtering window of the chain at time s against the neighborhood U.
// Throws EmptyWindow when the transported closure has no clearance in U.
FilteringWindow filtering_window(const LoewnerChainSpec& spec, double s,
                                 const domains::DomainSpec& U, const std::vector<PointCn>& cloud,
                                 double tol = 1e-9);

struct NormalizationReport {
  Eigen::MatrixXcd J_num;
  Eigen::MatrixXcd J_ref;  // exp(-t DV(0))
  double err = 0.0;
  bool pass = false;  // err <= 1e-5 |J_ref|
};

// Compares the finite-difference Jacobian of the chain at 0 against
// exp(-t DV(0)). Requires df(0) = I and DPsi(0) = I.
NormalizationReport check_normalization(const LoewnerChainSpec& spec, double t);

struct RangeHit {
  bool reached = false;
  double t_hit = 0.0;
  bool via_pullback = true;  // false when image-cloud proximity decided
};

// Smallest grid time t in [0, t_cap] with Psi^{-1}(X_t(Psi(w))) in f(D).
RangeHit range_exhaustion_time(const LoewnerChainSpec& spec, const PointCn& w, double t_cap,
                               int grid_steps = 400, double tol = 1e-9);

struct LdBound {
  double kappa = 0.0;
  int checked = 0;
  double max_ratio = 0.0;  // max |f_s(z)-f_t(z)| / (kappa |t-s|) over the sweep
  bool verified = false;
};

// kappa = 1.1 * sup over a (t, xi) grid of the chain's Jacobian operator
// norm in z, checked a posteriori on random (s, t, z) triples.
LdBound ld_bound_constant(const LoewnerChainSpec& spec, const std::vector<PointCn>& K, double T,
                          std::uint64_t seed = 1, int checks = 100, double tol = 1e-9);

}  // namespace loewner
}  // namespace spirallab
