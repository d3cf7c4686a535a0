#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "spirallab/errors.hpp"

namespace spirallab {

using Complex = std::complex<double>;

// A point of C^n. The 2n real coordinates are (Re z1, Im z1, ..., Re zn, Im zn).
using PointCn = Eigen::VectorXcd;

namespace expr {

enum class Op {
  Const,
  Var,
  Add,
  Sub,
  Mul,
  Div,
  Neg,
  Pow,   // integer exponent
  Exp,
  Log,
  Abs,
  Re,
  Im,
  Conj,
};

struct Node;
using NodePtr = std::shared_ptr<const Node>;

// Immutable expression tree node. Trees are shared freely across threads;
// nothing mutates a node after construction.
struct Node {
  Op op = Op::Const;
  Complex value{0.0, 0.0};  // Op::Const
  int index = -1;           // Op::Var, zero-based
  int exponent = 0;         // Op::Pow
  NodePtr a;
  NodePtr b;
};

enum class DerivMethod { Exact, CentralDifference };

struct WirtingerGrad {
  Eigen::VectorXcd dz;
  Eigen::VectorXcd dzbar;
  DerivMethod method = DerivMethod::Exact;
  double fd_step = 0.0;  // 0 when exact
};

struct HessianResult {
  // 2n x 2n symmetric matrix in coordinates (x1, y1, ..., xn, yn).
  Eigen::MatrixXd matrix;
  DerivMethod method = DerivMethod::Exact;
  double fd_step = 0.0;
};

// Scalar function of z in C^n built from the closed grammar
//   variables z1..zn, complex literals, + - * /, integer pow,
//   exp, log, abs, re, im, conj.
// The grammar is closed under Wirtinger differentiation, so first and second
// derivatives are evaluated exactly away from the zeros of abs/log arguments.
class ScalarExpr {
 public:
  ScalarExpr() = default;
  ScalarExpr(NodePtr root, int num_vars, std::string source = {});

  // Text syntax: z1..zn, conj(e), abs(e), re(e), im(e), exp(e), log(e),
  // pow(e,k), e^k, literals like 2, 0.5, 2i, 1+2i.
  static ScalarExpr parse(const std::string& text, int num_vars);

  bool empty() const { return root_ == nullptr; }
  int num_vars() const { return num_vars_; }
  const NodePtr& root() const { return root_; }
  const std::string& source() const { return source_; }
  std::string to_string() const;

  // True when the tree contains no conj/abs/re/im node.
  bool is_holomorphic() const;

  Complex eval(const PointCn& p) const;

  // Symbolic Wirtinger derivatives d/dz_j and d/dzbar_j (cached per tree).
  ScalarExpr dz(int j) const;
  ScalarExpr dzbar(int j) const;

  // Minimum modulus over all abs/log arguments and division denominators
  // at p; +inf when the tree has none. Points with a gap below the guard
  // distance are treated as singular for differentiation.
  double singular_gap(const PointCn& p) const;

  // Replaces z_j by repl[j] (repl.size() == num_vars); the result has
  // new_num_vars variables.
  ScalarExpr substitute(const std::vector<ScalarExpr>& repl, int new_num_vars) const;

  // Renames z_j to z_{j+offset} in an ambient space of new_num_vars variables.
  ScalarExpr shift_vars(int offset, int new_num_vars) const;

 private:
  struct Cache;

  NodePtr root_;
  int num_vars_ = 0;
  std::string source_;
  std::shared_ptr<Cache> cache_;
};

// Guard distance for the singular sets of abs/log arguments.
inline constexpr double kSingularGuard = 1e-9;

// Exact Wirtinger gradient; falls back to central differences with
// h = 1e-6 * (1 + |p|) if the exact path hits undefined arithmetic away
// from the declared singular set. Throws SingularPointError within the
// guard distance of an abs/log zero.
WirtingerGrad wirtinger_grad(const ScalarExpr& e, const PointCn& p);

// Central-difference gradient (verification path).
WirtingerGrad wirtinger_grad_fd(const ScalarExpr& e, const PointCn& p);

// Real 2n x 2n Hessian in coordinates (x1, y1, ..., xn, yn), symmetrized.
HessianResult real_hessian(const ScalarExpr& e, const PointCn& p);

// Second central differences of eval (verification path).
HessianResult real_hessian_fd(const ScalarExpr& e, const PointCn& p);

// Gradient of a real-valued expression in the 2n real coordinates.
Eigen::VectorXd real_gradient(const ScalarExpr& e, const PointCn& p);

// Tree builders used by the catalog and by tests.
NodePtr constant(Complex c);
NodePtr variable(int j);
NodePtr add(NodePtr a, NodePtr b);
NodePtr sub(NodePtr a, NodePtr b);
NodePtr mul(NodePtr a, NodePtr b);
NodePtr div(NodePtr a, NodePtr b);
NodePtr neg(NodePtr a);
NodePtr pow_int(NodePtr a, int k);
NodePtr exp_of(NodePtr a);
NodePtr log_of(NodePtr a);
NodePtr abs_of(NodePtr a);
NodePtr re_of(NodePtr a);
NodePtr im_of(NodePtr a);
NodePtr conj_of(NodePtr a);

// Holomorphic map C^n -> C^m as a list of component expressions.
class MapExpr {
 public:
  MapExpr() = default;
  MapExpr(std::vector<ScalarExpr> components, int dim_in);

  static MapExpr parse(const std::vector<std::string>& texts, int dim_in);
  static MapExpr identity(int n);

  int dim_in() const { return dim_in_; }
  int dim_out() const { return static_cast<int>(components_.size()); }
  bool empty() const { return components_.empty(); }
  const std::vector<ScalarExpr>& components() const { return components_; }
  const ScalarExpr& component(int j) const { return components_.at(j); }

  PointCn eval(const PointCn& p) const;

  // Complex Jacobian d(map_j)/d(z_k) at p; exact Wirtinger evaluation.
  Eigen::MatrixXcd jacobian(const PointCn& p) const;

  std::vector<std::string> sources() const;

 private:
  std::vector<ScalarExpr> components_;
  int dim_in_ = 0;
};

}  // namespace expr
}  // namespace spirallab
