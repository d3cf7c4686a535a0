#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "spirallab/expr.hpp"
#include "spirallab/vectorfield.hpp"

namespace spirallab {
namespace domains {

// Coordinate predicate guarding declared singular sets, e.g. "abs(z1)>=1e-3".
// Conjunctions join with "&&". An empty predicate admits every point.
class SingularPredicate {
 public:
  SingularPredicate() = default;
  static SingularPredicate parse(const std::string& text);

  bool empty() const { return clauses_.empty(); }
  bool admits(const PointCn& p) const;
  std::string to_string() const;

 private:
  struct Clause {
    int coord = 0;  // zero-based
    double min_abs = 0.0;
  };
  std::vector<Clause> clauses_;
};

// Bounded domain {max_k r_k < 0} intersected with {|z| <= bounding_radius}.
// Multi-sheet domains (several inequalities) store one defining expression
// per sheet; curvature operations run on the sheet that uniquely attains the
// max with margin >= 1e-6.
class DomainSpec {
 public:
  DomainSpec() = default;
  DomainSpec(std::vector<expr::ScalarExpr> sheets, int dim, double bounding_radius,
             SingularPredicate singular = {}, std::string name = {},
             double boundary_tol = 0.0, bool origin_containing = true);

  int dim() const { return dim_; }
  double bounding_radius() const { return bounding_radius_; }
  double boundary_tol() const { return boundary_tol_; }
  bool origin_containing() const { return origin_containing_; }
  const std::string& name() const { return name_; }
  const SingularPredicate& singular() const { return singular_; }
  const std::vector<expr::ScalarExpr>& sheets() const { return sheets_; }

  // max over sheets; throws if any sheet evaluates with a non-negligible
  // imaginary part.
  double r(const PointCn& z) const;

  // Index of the unique maximizing sheet (margin >= 1e-6 against the second
  // largest); -1 near a corner where sheets meet.
  int active_sheet_index(const PointCn& z) const;

  // Active sheet expression; throws SingularPointError at corners.
  const expr::ScalarExpr& active_sheet(const PointCn& z) const;

  // Gradient of the active sheet in the 2n real coordinates.
  Eigen::VectorXd gradient(const PointCn& z) const;

 private:
  std::vector<expr::ScalarExpr> sheets_;
  int dim_ = 0;
  double bounding_radius_ = 0.0;
  double boundary_tol_ = 0.0;
  SingularPredicate singular_;
  std::string name_;
  bool origin_containing_ = true;
};

enum class Region { Interior, Boundary, Exterior };

const char* to_string(Region r);

struct Membership {
  Region region = Region::Exterior;
  double margin = 0.0;  // |r(z)|, or distance past the bounding box
};

// Classification by the sign of r(z) against the boundary tolerance. Points
// beyond the bounding radius are Exterior outright.
Membership membership(const DomainSpec& d, const PointCn& z);

// Boundary samples found by bisecting r along random rays from the origin
// anchor. Every member has |r| <= boundary_tol, a regular gradient
// (norm >= 1e-6), a unique active sheet, and admits the singular predicate.
struct BoundaryCloud {
  std::vector<PointCn> points;
  std::vector<int> sheet;  // active sheet per point
  std::uint64_t seed = 0;
  int requested = 0;
  long rejected = 0;
};

BoundaryCloud sample_boundary(const DomainSpec& d, int count, std::uint64_t seed);

// Minimum of the Levi form (complex Hessian restricted to the complex
// tangent space) over unit tangent vectors at a regular boundary point.
// In ambient dimension 1 the tangent space is trivial and the full complex
// Hessian value is returned (a plurisubharmonicity check).
double levi_form_min(const DomainSpec& d, const PointCn& p);

struct ConvexityReport {
  double c_min = 0.0;
  PointCn worst_point;
  bool strongly_convex_evidence = false;
  int tested = 0;
};

// c_min = min over the cloud of the smallest real-Hessian eigenvalue of the
// active defining sheet; StronglyConvexEvidence iff c_min > 0.
ConvexityReport strong_convexity_check(const DomainSpec& d, const BoundaryCloud& cloud);

// Hessian of r ∘ inv at x assembled by the chain rule
//   H(r∘inv)(x) = Dinv(x)^T Hr(inv(x)) Dinv(x) + sum_j dr/dx_j(inv(x)) H(inv^j)(x)
// over the 2n real coordinates. Throws InverseMismatch unless
// fwd(inv(x)) == x within 1e-8.
Eigen::MatrixXd pushforward_hessian(const DomainSpec& d, const expr::MapExpr& fwd,
                                    const expr::MapExpr& inv, const PointCn& x);

// True iff V(p) has a nonzero component along the boundary normal:
// |<grad r(p), V(p)>| > 1e-8 |grad r(p)| |V(p)|.
bool transversality_check(const fields::VectorFieldSpec& V, const DomainSpec& d, const PointCn& p);

// Real 2n x 2n Jacobian of a holomorphic map at x.
Eigen::MatrixXd real_jacobian(const expr::MapExpr& map, const PointCn& x);

// Factories used across the toolkit and in tests.
DomainSpec ball(int n, double rho = 1.0);       // sum |z_j|^2 - rho^2
DomainSpec norm_ball(int n, double rho);        // |z| - rho (Euclidean margins)
DomainSpec inflate(const DomainSpec& d, double margin);  // sheets r_k - margin

}  // namespace domains
}  // namespace spirallab
