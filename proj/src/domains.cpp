#include "spirallab/domains.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace spirallab {
namespace domains {

// ---------------------------------------------------------------------------
// SingularPredicate
// ---------------------------------------------------------------------------

SingularPredicate SingularPredicate::parse(const std::string& text) {
  SingularPredicate pred;
  size_t pos = 0;
  while (pos < text.size()) {
    size_t next = text.find("&&", pos);
    std::string clause = text.substr(pos, next == std::string::npos ? next : next - pos);
    pos = next == std::string::npos ? text.size() : next + 2;

    // Expected form: abs(zK) >= VALUE
    auto strip = [](std::string s) {
      s.erase(std::remove_if(s.begin(), s.end(), [](unsigned char c) { return std::isspace(c); }),
              s.end());
      return s;
    };
    clause = strip(clause);
    if (clause.empty()) continue;
    if (clause.rfind("abs(z", 0) != 0) throw ParseError("singular predicate: expected abs(zK)>=v, got " + clause);
    size_t close = clause.find(')');
    size_t ge = clause.find(">=");
    if (close == std::string::npos || ge == std::string::npos || ge < close)
      throw ParseError("singular predicate: malformed clause " + clause);
    Clause c;
    c.coord = std::atoi(clause.substr(5, close - 5).c_str()) - 1;
    c.min_abs = std::atof(clause.substr(ge + 2).c_str());
    if (c.coord < 0) throw ParseError("singular predicate: bad coordinate in " + clause);
    pred.clauses_.push_back(c);
  }
  return pred;
}

bool SingularPredicate::admits(const PointCn& p) const {
  for (const auto& c : clauses_) {
    if (c.coord >= p.size()) return false;
    if (std::abs(p[c.coord]) < c.min_abs) return false;
  }
  return true;
}

std::string SingularPredicate::to_string() const {
  std::ostringstream os;
  for (size_t k = 0; k < clauses_.size(); ++k) {
    if (k) os << " && ";
    os << "abs(z" << clauses_[k].coord + 1 << ")>=" << clauses_[k].min_abs;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// DomainSpec
// ---------------------------------------------------------------------------

DomainSpec::DomainSpec(std::vector<expr::ScalarExpr> sheets, int dim, double bounding_radius,
                       SingularPredicate singular, std::string name, double boundary_tol,
                       bool origin_containing)
    : sheets_(std::move(sheets)),
      dim_(dim),
      bounding_radius_(bounding_radius),
      boundary_tol_(boundary_tol > 0 ? boundary_tol : 1e-9 * (1.0 + bounding_radius)),
      singular_(std::move(singular)),
      name_(std::move(name)),
      origin_containing_(origin_containing) {
  if (sheets_.empty()) throw Error("domain needs at least one defining expression");
  if (!(bounding_radius_ > 0)) throw Error("bounding radius must be positive");
  for (const auto& s : sheets_)
    if (s.num_vars() != dim_) throw Error("defining expression has wrong variable count");
  if (origin_containing_) {
    double r0 = r(PointCn::Zero(dim_));
    if (!(r0 < 0))
      throw Error("domain declared origin-containing but r(0) = " + std::to_string(r0));
  }
}

double DomainSpec::r(const PointCn& z) const {
  double value = -std::numeric_limits<double>::infinity();
  for (const auto& s : sheets_) {
    Complex v = s.eval(z);
    if (std::abs(v.imag()) > 1e-10 * (1.0 + std::abs(v.real())))
      throw Error("defining expression is not real-valued at the queried point");
    value = std::max(value, v.real());
  }
  return value;
}

int DomainSpec::active_sheet_index(const PointCn& z) const {
  if (sheets_.size() == 1) return 0;
  double best = -std::numeric_limits<double>::infinity();
  double second = best;
  int arg = -1;
  for (size_t k = 0; k < sheets_.size(); ++k) {
    double v = sheets_[k].eval(z).real();
    if (v > best) {
      second = best;
      best = v;
      arg = static_cast<int>(k);
    } else {
      second = std::max(second, v);
    }
  }
  if (best - second < 1e-6) return -1;
  return arg;
}

const expr::ScalarExpr& DomainSpec::active_sheet(const PointCn& z) const {
  int k = active_sheet_index(z);
  if (k < 0)
    throw SingularPointError("no unique defining sheet at the queried point (corner set)");
  return sheets_[k];
}

Eigen::VectorXd DomainSpec::gradient(const PointCn& z) const {
  return expr::real_gradient(active_sheet(z), z);
}

const char* to_string(Region r) {
  switch (r) {
    case Region::Interior: return "interior";
    case Region::Boundary: return "boundary";
    case Region::Exterior: return "exterior";
  }
  return "?";
}

Membership membership(const DomainSpec& d, const PointCn& z) {
  if (z.size() != d.dim()) throw Error("membership: dimension mismatch");
  double nz = z.norm();
  if (nz > d.bounding_radius())
    return {Region::Exterior, nz - d.bounding_radius()};
  double value = d.r(z);
  if (std::abs(value) <= d.boundary_tol()) return {Region::Boundary, std::abs(value)};
  if (value < 0) return {Region::Interior, -value};
  return {Region::Exterior, value};
}

BoundaryCloud sample_boundary(const DomainSpec& d, int count, std::uint64_t seed) {
  if (count < 1) throw Error("sample_boundary: count must be >= 1");
  BoundaryCloud cloud;
  cloud.seed = seed;
  cloud.requested = count;

  const int n = d.dim();
  PointCn anchor = PointCn::Zero(n);
  double r_anchor;
  try {
    r_anchor = d.r(anchor);
  } catch (const Error&) {
    throw SamplingExhausted("anchor point is not evaluable");
  }
  if (!(r_anchor < -d.boundary_tol()))
    throw SamplingExhausted("origin anchor is not interior (r(0) = " + std::to_string(r_anchor) + ")");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  const long max_attempts = 1000 + 60L * count;
  long attempts = 0;

  while (static_cast<int>(cloud.points.size()) < count) {
    if (++attempts > max_attempts)
      throw SamplingExhausted("ray sampling failed after " + std::to_string(attempts) + " attempts");

    PointCn dir(n);
    for (int j = 0; j < n; ++j) dir[j] = Complex(gauss(rng), gauss(rng));
    double nd = dir.norm();
    if (nd == 0) continue;
    dir /= nd;

    double lo = 0.0, hi = d.bounding_radius();
    double r_hi;
    try {
      r_hi = d.r(hi * dir);
    } catch (const Error&) {
      cloud.rejected++;
      continue;
    }
    if (!(r_hi > 0)) {
      cloud.rejected++;  // ray leaves the box before exiting the domain
      continue;
    }

    // Bisection on the sign of r along the ray.
    PointCn p;
    bool found = false;
    for (int iter = 0; iter < 200; ++iter) {
      double mid = 0.5 * (lo + hi);
      p = mid * dir;
      double v;
      try {
        v = d.r(p);
      } catch (const Error&) {
        break;
      }
      if (std::abs(v) <= d.boundary_tol()) {
        found = true;
        break;
      }
      (v < 0 ? lo : hi) = mid;
      if (hi - lo < 1e-17 * d.bounding_radius()) break;
    }
    if (!found) {
      cloud.rejected++;
      continue;
    }

    if (!d.singular().admits(p)) {
      cloud.rejected++;
      continue;
    }
    int sheet = d.active_sheet_index(p);
    if (sheet < 0) {
      cloud.rejected++;
      continue;
    }
    try {
      if (expr::real_gradient(d.sheets()[sheet], p).norm() < 1e-6) {
        cloud.rejected++;
        continue;
      }
    } catch (const Error&) {
      cloud.rejected++;
      continue;
    }
    cloud.points.push_back(std::move(p));
    cloud.sheet.push_back(sheet);
  }
  return cloud;
}

namespace {

// Complex Hessian L[j][k] = d^2 r / dz_j dzbar_k assembled from the real
// Hessian by the standard change of variables.
Eigen::MatrixXcd complex_hessian(const Eigen::MatrixXd& H, int n) {
  Eigen::MatrixXcd L(n, n);
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k) {
      double re = 0.25 * (H(2 * j, 2 * k) + H(2 * j + 1, 2 * k + 1));
      double im = 0.25 * (H(2 * j, 2 * k + 1) - H(2 * j + 1, 2 * k));
      L(j, k) = Complex(re, im);
    }
  return L;
}

}  // namespace

double levi_form_min(const DomainSpec& d, const PointCn& p) {
  const int n = d.dim();
  const expr::ScalarExpr& sheet = d.active_sheet(p);

  expr::WirtingerGrad g = expr::wirtinger_grad(sheet, p);
  Eigen::VectorXd grad = expr::real_gradient(sheet, p);
  if (grad.norm() < 1e-6)
    throw DegenerateGradient("defining-function gradient too small: " + std::to_string(grad.norm()));

  Eigen::MatrixXd H = expr::real_hessian(sheet, p).matrix;
  Eigen::MatrixXcd L = complex_hessian(H, n);

  if (n == 1) return L(0, 0).real();

  // Complex tangent space {w : sum_j dr/dz_j w_j = 0} = orthogonal complement
  // of conj(grad_z r) in the Hermitian inner product.
  Eigen::VectorXcd v = g.dz.conjugate();
  Eigen::MatrixXcd M(n, 1);
  M.col(0) = v;
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(M);
  Eigen::MatrixXcd Q = qr.householderQ();
  Eigen::MatrixXcd T = Q.rightCols(n - 1);

  Eigen::MatrixXcd restricted = T.adjoint() * L * T;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(restricted);
  if (solver.info() != Eigen::Success) throw EigensolverFailure("Levi form eigensolver failed");
  return solver.eigenvalues().minCoeff();
}

ConvexityReport strong_convexity_check(const DomainSpec& d, const BoundaryCloud& cloud) {
  ConvexityReport report;
  report.c_min = std::numeric_limits<double>::infinity();
  for (size_t k = 0; k < cloud.points.size(); ++k) {
    const auto& p = cloud.points[k];
    const auto& sheet = d.sheets().at(cloud.sheet[k]);
    Eigen::MatrixXd H = expr::real_hessian(sheet, p).matrix;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(H);
    if (solver.info() != Eigen::Success) throw EigensolverFailure("Hessian eigensolver failed");
    double lambda = solver.eigenvalues().minCoeff();
    if (lambda < report.c_min) {
      report.c_min = lambda;
      report.worst_point = p;
    }
    report.tested += 1;
  }
  report.strongly_convex_evidence = report.tested > 0 && report.c_min > 0;
  return report;
}

Eigen::MatrixXd real_jacobian(const expr::MapExpr& map, const PointCn& x) {
  const int n_in = map.dim_in();
  const int n_out = map.dim_out();
  Eigen::MatrixXd D(2 * n_out, 2 * n_in);
  const Complex I(0, 1);
  for (int j = 0; j < n_out; ++j) {
    expr::WirtingerGrad g = expr::wirtinger_grad(map.component(j), x);
    for (int k = 0; k < n_in; ++k) {
      Complex dx = g.dz[k] + g.dzbar[k];            // d(g_j)/dx_k
      Complex dy = I * (g.dz[k] - g.dzbar[k]);      // d(g_j)/dy_k
      D(2 * j, 2 * k) = dx.real();
      D(2 * j, 2 * k + 1) = dy.real();
      D(2 * j + 1, 2 * k) = dx.imag();
      D(2 * j + 1, 2 * k + 1) = dy.imag();
    }
  }
  return D;
}

Eigen::MatrixXd pushforward_hessian(const DomainSpec& d, const expr::MapExpr& fwd,
                                    const expr::MapExpr& inv, const PointCn& x) {
  PointCn y = inv.eval(x);
  double roundtrip = (fwd.eval(y) - x).norm();
  if (roundtrip > 1e-8)
    throw InverseMismatch("fwd(inv(x)) misses x by " + std::to_string(roundtrip));

  const int n = d.dim();
  const expr::ScalarExpr& sheet = d.active_sheet(y);
  Eigen::MatrixXd Hr = expr::real_hessian(sheet, y).matrix;
  Eigen::VectorXd grad = expr::real_gradient(sheet, y);
  Eigen::MatrixXd Dinv = real_jacobian(inv, x);

  Eigen::MatrixXd result = Dinv.transpose() * Hr * Dinv;
  for (int j = 0; j < n; ++j) {
    expr::ScalarExpr re_j(expr::re_of(inv.component(j).root()), inv.dim_in());
    expr::ScalarExpr im_j(expr::im_of(inv.component(j).root()), inv.dim_in());
    result += grad[2 * j] * expr::real_hessian(re_j, x).matrix;
    result += grad[2 * j + 1] * expr::real_hessian(im_j, x).matrix;
  }
  return result;
}

bool transversality_check(const fields::VectorFieldSpec& V, const DomainSpec& d, const PointCn& p) {
  Eigen::VectorXd grad = d.gradient(p);
  double ng = grad.norm();
  if (ng < 1e-6) throw DegenerateGradient("boundary normal undefined: |grad r| < 1e-6");
  PointCn v = V.eval(p);
  double nv = v.norm();
  if (nv == 0) return false;
  double inner = 0.0;
  for (int j = 0; j < d.dim(); ++j)
    inner += grad[2 * j] * v[j].real() + grad[2 * j + 1] * v[j].imag();
  return std::abs(inner) > 1e-8 * ng * nv;
}

DomainSpec ball(int n, double rho) {
  using namespace expr;
  NodePtr sum = constant({0, 0});
  for (int j = 0; j < n; ++j) sum = add(sum, mul(variable(j), conj_of(variable(j))));
  NodePtr r = sub(sum, constant({rho * rho, 0}));
  std::ostringstream name;
  name << "ball(" << n << (rho == 1.0 ? "" : "," + std::to_string(rho)) << ")";
  return DomainSpec({ScalarExpr(r, n)}, n, 1.2 * rho + 0.1, {}, name.str());
}

DomainSpec norm_ball(int n, double rho) {
  using namespace expr;
  NodePtr sum = constant({0, 0});
  for (int j = 0; j < n; ++j) sum = add(sum, mul(variable(j), conj_of(variable(j))));
  // |z| = exp(log(|z|^2)/2); margins of this defining function are Euclidean.
  // The log makes r singular at the origin itself, so the entry skips the
  // origin-containing validation (the ball still contains 0 as a set).
  NodePtr r = sub(exp_of(div(log_of(sum), constant({2, 0}))), constant({rho, 0}));
  return DomainSpec({ScalarExpr(r, n)}, n, 1.2 * rho + 0.1, {},
                    "norm_ball(" + std::to_string(n) + ")", 0.0, /*origin_containing=*/false);
}

DomainSpec inflate(const DomainSpec& d, double margin) {
  using namespace expr;
  std::vector<ScalarExpr> sheets;
  sheets.reserve(d.sheets().size());
  for (const auto& s : d.sheets())
    sheets.emplace_back(sub(s.root(), constant({margin, 0})), d.dim());
  return DomainSpec(std::move(sheets), d.dim(), d.bounding_radius() * (1.0 + margin) + margin + 1.0,
                    d.singular(), d.name() + "+inflate", 0.0, d.origin_containing());
}

}  // namespace domains
}  // namespace spirallab
