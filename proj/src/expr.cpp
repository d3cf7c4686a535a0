#include "spirallab/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>

namespace spirallab {
namespace expr {

namespace {

NodePtr make(Op op, NodePtr a = nullptr, NodePtr b = nullptr) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

bool is_const(const NodePtr& n, Complex c) {
  return n->op == Op::Const && n->value == c;
}

}  // namespace

NodePtr constant(Complex c) {
  auto n = std::make_shared<Node>();
  n->op = Op::Const;
  n->value = c;
  return n;
}

NodePtr variable(int j) {
  auto n = std::make_shared<Node>();
  n->op = Op::Var;
  n->index = j;
  return n;
}

// The builders fold literal zeros and ones so derivative trees stay small.
// User expressions are never rewritten beyond this.
NodePtr add(NodePtr a, NodePtr b) {
  if (is_const(a, {0, 0})) return b;
  if (is_const(b, {0, 0})) return a;
  if (a->op == Op::Const && b->op == Op::Const) return constant(a->value + b->value);
  return make(Op::Add, std::move(a), std::move(b));
}

NodePtr sub(NodePtr a, NodePtr b) {
  if (is_const(b, {0, 0})) return a;
  if (a->op == Op::Const && b->op == Op::Const) return constant(a->value - b->value);
  if (is_const(a, {0, 0})) return neg(std::move(b));
  return make(Op::Sub, std::move(a), std::move(b));
}

NodePtr mul(NodePtr a, NodePtr b) {
  if (is_const(a, {0, 0}) || is_const(b, {0, 0})) return constant({0, 0});
  if (is_const(a, {1, 0})) return b;
  if (is_const(b, {1, 0})) return a;
  if (a->op == Op::Const && b->op == Op::Const) return constant(a->value * b->value);
  return make(Op::Mul, std::move(a), std::move(b));
}

NodePtr div(NodePtr a, NodePtr b) {
  if (is_const(a, {0, 0})) return constant({0, 0});
  if (is_const(b, {1, 0})) return a;
  return make(Op::Div, std::move(a), std::move(b));
}

NodePtr neg(NodePtr a) {
  if (a->op == Op::Const) return constant(-a->value);
  return make(Op::Neg, std::move(a));
}

NodePtr pow_int(NodePtr a, int k) {
  if (k == 0) return constant({1, 0});
  if (k == 1) return a;
  auto n = std::make_shared<Node>();
  n->op = Op::Pow;
  n->exponent = k;
  n->a = std::move(a);
  return n;
}

NodePtr exp_of(NodePtr a) { return make(Op::Exp, std::move(a)); }
NodePtr log_of(NodePtr a) { return make(Op::Log, std::move(a)); }
NodePtr abs_of(NodePtr a) { return make(Op::Abs, std::move(a)); }
NodePtr re_of(NodePtr a) { return make(Op::Re, std::move(a)); }
NodePtr im_of(NodePtr a) { return make(Op::Im, std::move(a)); }

NodePtr conj_of(NodePtr a) {
  if (a->op == Op::Const) return constant(std::conj(a->value));
  return make(Op::Conj, std::move(a));
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

class Parser {
 public:
  Parser(const std::string& text, int num_vars) : text_(text), num_vars_(num_vars) {}

  NodePtr parse() {
    NodePtr e = parse_sum();
    skip_ws();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const {
    std::ostringstream os;
    os << "parse error at column " << pos_ + 1 << " in \"" << text_ << "\": " << msg;
    throw ParseError(os.str());
  }

  void skip_ws() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool eat(char c) {
    skip_ws();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos_ < text_.size() ? text_[pos_] : '\0';
  }

  NodePtr parse_sum() {
    NodePtr e = parse_term();
    for (;;) {
      if (eat('+')) {
        e = add(e, parse_term());
      } else if (eat('-')) {
        e = sub(e, parse_term());
      } else {
        return e;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr e = parse_power();
    for (;;) {
      if (eat('*')) {
        e = mul(e, parse_power());
      } else if (eat('/')) {
        e = div(e, parse_power());
      } else {
        return e;
      }
    }
  }

  NodePtr parse_power() {
    NodePtr e = parse_unary();
    if (eat('^')) {
      return pow_int(e, parse_int());
    }
    return e;
  }

  NodePtr parse_unary() {
    if (eat('-')) return neg(parse_unary());
    if (eat('+')) return parse_unary();
    return parse_primary();
  }

  int parse_int() {
    skip_ws();
    bool negative = eat('-');
    skip_ws();
    size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ == start) fail("expected integer exponent");
    int v = std::atoi(text_.substr(start, pos_ - start).c_str());
    return negative ? -v : v;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (eat('(')) {
      NodePtr e = parse_sum();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c))) return parse_ident();
    fail("unexpected character");
  }

  NodePtr parse_number() {
    const char* begin = text_.c_str() + pos_;
    char* end = nullptr;
    double v = std::strtod(begin, &end);
    if (end == begin) fail("malformed number");
    pos_ += static_cast<size_t>(end - begin);
    if (pos_ < text_.size() && text_[pos_] == 'i') {
      ++pos_;
      return constant({0.0, v});
    }
    return constant({v, 0.0});
  }

  NodePtr parse_ident() {
    size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    std::string name = text_.substr(start, pos_ - start);

    if (name == "i") return constant({0.0, 1.0});

    auto as_variable = [this](const std::string& s) -> NodePtr {
      if (s.size() < 2 || s[0] != 'z') return nullptr;
      for (size_t k = 1; k < s.size(); ++k)
        if (!std::isdigit(static_cast<unsigned char>(s[k]))) return nullptr;
      int idx = std::atoi(s.c_str() + 1);
      if (idx < 1 || idx > num_vars_) fail("variable index out of range: " + s);
      return variable(idx - 1);
    };

    if (NodePtr v = as_variable(name)) return v;
    // Shorthand like "iz1" for i*z1.
    if (name[0] == 'i') {
      if (NodePtr v = as_variable(name.substr(1)))
        return mul(constant({0.0, 1.0}), v);
    }

    if (!eat('(')) fail("unknown identifier: " + name);
    NodePtr arg = parse_sum();
    if (name == "pow") {
      if (!eat(',')) fail("pow(e,k) expects two arguments");
      int k = parse_int();
      if (!eat(')')) fail("expected ')'");
      return pow_int(arg, k);
    }
    if (!eat(')')) fail("expected ')'");
    if (name == "conj") return conj_of(arg);
    if (name == "abs") return abs_of(arg);
    if (name == "re") return re_of(arg);
    if (name == "im") return im_of(arg);
    if (name == "exp") return exp_of(arg);
    if (name == "log") return log_of(arg);
    fail("unknown function: " + name);
  }

  const std::string& text_;
  int num_vars_;
  size_t pos_ = 0;
};

}  // namespace

// ---------------------------------------------------------------------------
// ScalarExpr
// ---------------------------------------------------------------------------

struct ScalarExpr::Cache {
  std::mutex mu;
  std::map<int, NodePtr> dz;
  std::map<int, NodePtr> dzbar;
};

ScalarExpr::ScalarExpr(NodePtr root, int num_vars, std::string source)
    : root_(std::move(root)),
      num_vars_(num_vars),
      source_(std::move(source)),
      cache_(std::make_shared<Cache>()) {}

ScalarExpr ScalarExpr::parse(const std::string& text, int num_vars) {
  Parser p(text, num_vars);
  return ScalarExpr(p.parse(), num_vars, text);
}

namespace {

bool holomorphic_scan(const NodePtr& n) {
  if (!n) return true;
  switch (n->op) {
    case Op::Conj:
    case Op::Abs:
    case Op::Re:
    case Op::Im:
      return false;
    default:
      return holomorphic_scan(n->a) && holomorphic_scan(n->b);
  }
}

Complex pow_by_squaring(Complex base, int k) {
  if (k < 0) {
    if (std::abs(base) == 0.0) throw DomainError("0 raised to a negative power");
    return 1.0 / pow_by_squaring(base, -k);
  }
  Complex result{1.0, 0.0};
  while (k > 0) {
    if (k & 1) result *= base;
    base *= base;
    k >>= 1;
  }
  return result;
}

Complex eval_node(const Node& n, const PointCn& p) {
  switch (n.op) {
    case Op::Const:
      return n.value;
    case Op::Var:
      return p[n.index];
    case Op::Add:
      return eval_node(*n.a, p) + eval_node(*n.b, p);
    case Op::Sub:
      return eval_node(*n.a, p) - eval_node(*n.b, p);
    case Op::Mul:
      return eval_node(*n.a, p) * eval_node(*n.b, p);
    case Op::Div: {
      Complex den = eval_node(*n.b, p);
      if (std::abs(den) == 0.0) throw DomainError("division by zero");
      return eval_node(*n.a, p) / den;
    }
    case Op::Neg:
      return -eval_node(*n.a, p);
    case Op::Pow:
      return pow_by_squaring(eval_node(*n.a, p), n.exponent);
    case Op::Exp:
      return std::exp(eval_node(*n.a, p));
    case Op::Log: {
      Complex arg = eval_node(*n.a, p);
      if (std::abs(arg) == 0.0) throw DomainError("log of zero");
      return std::log(arg);
    }
    case Op::Abs:
      return Complex(std::abs(eval_node(*n.a, p)), 0.0);
    case Op::Re:
      return Complex(eval_node(*n.a, p).real(), 0.0);
    case Op::Im:
      return Complex(eval_node(*n.a, p).imag(), 0.0);
    case Op::Conj:
      return std::conj(eval_node(*n.a, p));
  }
  throw Error("corrupt expression node");
}

// Wirtinger differentiation. holo = true differentiates w.r.t. z_j,
// false w.r.t. conj(z_j). Every rule below stays inside the grammar.
NodePtr diff(const NodePtr& n, int j, bool holo);

NodePtr diff_conj_of(const NodePtr& inner, int j, bool holo) {
  // d/dz conj(u) = conj(du/dzbar); d/dzbar conj(u) = conj(du/dz).
  return conj_of(diff(inner, j, !holo));
}

NodePtr diff(const NodePtr& n, int j, bool holo) {
  switch (n->op) {
    case Op::Const:
      return constant({0, 0});
    case Op::Var:
      return (holo && n->index == j) ? constant({1, 0}) : constant({0, 0});
    case Op::Add:
      return add(diff(n->a, j, holo), diff(n->b, j, holo));
    case Op::Sub:
      return sub(diff(n->a, j, holo), diff(n->b, j, holo));
    case Op::Mul:
      return add(mul(diff(n->a, j, holo), n->b), mul(n->a, diff(n->b, j, holo)));
    case Op::Div:
      return sub(div(diff(n->a, j, holo), n->b),
                 div(mul(n->a, diff(n->b, j, holo)), mul(n->b, n->b)));
    case Op::Neg:
      return neg(diff(n->a, j, holo));
    case Op::Pow:
      return mul(mul(constant({static_cast<double>(n->exponent), 0}),
                     pow_int(n->a, n->exponent - 1)),
                 diff(n->a, j, holo));
    case Op::Exp:
      return mul(make(Op::Exp, n->a), diff(n->a, j, holo));
    case Op::Log:
      return div(diff(n->a, j, holo), n->a);
    case Op::Abs: {
      // |u| = sqrt(u conj(u)):
      //   d|u|/dz    = (conj(u) u_z    + u conj(u_zbar)) / (2|u|)
      //   d|u|/dzbar = (conj(u) u_zbar + u conj(u_z))    / (2|u|)
      NodePtr du = diff(n->a, j, holo);
      NodePtr du_other = diff(n->a, j, !holo);
      NodePtr num = add(mul(conj_of(n->a), du), mul(n->a, conj_of(du_other)));
      return div(num, mul(constant({2, 0}), abs_of(n->a)));
    }
    case Op::Re: {
      // re(u) = (u + conj(u))/2
      NodePtr du = diff(n->a, j, holo);
      NodePtr du_other = diff(n->a, j, !holo);
      return mul(constant({0.5, 0}), add(du, conj_of(du_other)));
    }
    case Op::Im: {
      // im(u) = (u - conj(u))/(2i)
      NodePtr du = diff(n->a, j, holo);
      NodePtr du_other = diff(n->a, j, !holo);
      return mul(constant({0, -0.5}), sub(du, conj_of(du_other)));
    }
    case Op::Conj:
      return diff_conj_of(n->a, j, holo);
  }
  throw Error("corrupt expression node");
}

void singular_gap_scan(const Node& n, const PointCn& p, double& gap) {
  if (n.op == Op::Abs || n.op == Op::Log) {
    gap = std::min(gap, std::abs(eval_node(*n.a, p)));
  } else if (n.op == Op::Div) {
    gap = std::min(gap, std::abs(eval_node(*n.b, p)));
  } else if (n.op == Op::Pow && n.exponent < 0) {
    gap = std::min(gap, std::abs(eval_node(*n.a, p)));
  }
  if (n.a) singular_gap_scan(*n.a, p, gap);
  if (n.b) singular_gap_scan(*n.b, p, gap);
}

void print_node(const Node& n, std::ostream& os) {
  auto paren = [&os](const Node& m) {
    os << '(';
    print_node(m, os);
    os << ')';
  };
  switch (n.op) {
    case Op::Const: {
      double re = n.value.real(), im = n.value.imag();
      if (im == 0.0) {
        os << re;
      } else if (re == 0.0) {
        os << im << 'i';
      } else {
        os << '(' << re << (im < 0 ? "-" : "+") << std::abs(im) << "i)";
      }
      return;
    }
    case Op::Var:
      os << 'z' << (n.index + 1);
      return;
    case Op::Add:
      paren(*n.a);
      os << '+';
      paren(*n.b);
      return;
    case Op::Sub:
      paren(*n.a);
      os << '-';
      paren(*n.b);
      return;
    case Op::Mul:
      paren(*n.a);
      os << '*';
      paren(*n.b);
      return;
    case Op::Div:
      paren(*n.a);
      os << '/';
      paren(*n.b);
      return;
    case Op::Neg:
      os << '-';
      paren(*n.a);
      return;
    case Op::Pow:
      os << "pow(";
      print_node(*n.a, os);
      os << ',' << n.exponent << ')';
      return;
    case Op::Exp:
      os << "exp(";
      print_node(*n.a, os);
      os << ')';
      return;
    case Op::Log:
      os << "log(";
      print_node(*n.a, os);
      os << ')';
      return;
    case Op::Abs:
      os << "abs(";
      print_node(*n.a, os);
      os << ')';
      return;
    case Op::Re:
      os << "re(";
      print_node(*n.a, os);
      os << ')';
      return;
    case Op::Im:
      os << "im(";
      print_node(*n.a, os);
      os << ')';
      return;
    case Op::Conj:
      os << "conj(";
      print_node(*n.a, os);
      os << ')';
      return;
  }
}

NodePtr substitute_node(const NodePtr& n, const std::vector<ScalarExpr>& repl) {
  if (!n) return nullptr;
  if (n->op == Op::Var) return repl.at(n->index).root();
  if (n->op == Op::Const) return n;
  auto copy = std::make_shared<Node>(*n);
  copy->a = substitute_node(n->a, repl);
  copy->b = substitute_node(n->b, repl);
  return copy;
}

}  // namespace

std::string ScalarExpr::to_string() const {
  if (!root_) return "";
  std::ostringstream os;
  os.precision(17);
  print_node(*root_, os);
  return os.str();
}

bool ScalarExpr::is_holomorphic() const { return holomorphic_scan(root_); }

Complex ScalarExpr::eval(const PointCn& p) const {
  if (!root_) throw Error("eval of empty expression");
  if (p.size() != num_vars_)
    throw Error("point dimension " + std::to_string(p.size()) + " does not match expression in " +
                std::to_string(num_vars_) + " variables");
  if (!p.allFinite()) throw Error("non-finite point coordinates");
  return eval_node(*root_, p);
}

ScalarExpr ScalarExpr::dz(int j) const {
  if (j < 0 || j >= num_vars_) throw Error("derivative index out of range");
  {
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto it = cache_->dz.find(j);
    if (it != cache_->dz.end()) return ScalarExpr(it->second, num_vars_);
  }
  NodePtr d = diff(root_, j, true);
  std::lock_guard<std::mutex> lock(cache_->mu);
  cache_->dz[j] = d;
  return ScalarExpr(d, num_vars_);
}

ScalarExpr ScalarExpr::dzbar(int j) const {
  if (j < 0 || j >= num_vars_) throw Error("derivative index out of range");
  {
    std::lock_guard<std::mutex> lock(cache_->mu);
    auto it = cache_->dzbar.find(j);
    if (it != cache_->dzbar.end()) return ScalarExpr(it->second, num_vars_);
  }
  NodePtr d = diff(root_, j, false);
  std::lock_guard<std::mutex> lock(cache_->mu);
  cache_->dzbar[j] = d;
  return ScalarExpr(d, num_vars_);
}

double ScalarExpr::singular_gap(const PointCn& p) const {
  double gap = std::numeric_limits<double>::infinity();
  try {
    if (root_) singular_gap_scan(*root_, p, gap);
  } catch (const DomainError&) {
    return 0.0;  // a subterm is already undefined at p
  }
  return gap;
}

ScalarExpr ScalarExpr::substitute(const std::vector<ScalarExpr>& repl, int new_num_vars) const {
  if (static_cast<int>(repl.size()) != num_vars_)
    throw Error("substitute: replacement count does not match variable count");
  return ScalarExpr(substitute_node(root_, repl), new_num_vars);
}

ScalarExpr ScalarExpr::shift_vars(int offset, int new_num_vars) const {
  std::vector<ScalarExpr> repl;
  repl.reserve(num_vars_);
  for (int j = 0; j < num_vars_; ++j)
    repl.emplace_back(variable(j + offset), new_num_vars);
  return substitute(repl, new_num_vars);
}

// ---------------------------------------------------------------------------
// Derivative evaluation
// ---------------------------------------------------------------------------

namespace {

double fd_step_for(const PointCn& p) { return 1e-6 * (1.0 + p.norm()); }

void require_off_singular_set(const ScalarExpr& e, const PointCn& p) {
  double gap = e.singular_gap(p);
  if (gap < kSingularGuard)
    throw SingularPointError("point lies within " + std::to_string(kSingularGuard) +
                             " of a singular set (gap " + std::to_string(gap) + ")");
}

}  // namespace

WirtingerGrad wirtinger_grad(const ScalarExpr& e, const PointCn& p) {
  require_off_singular_set(e, p);
  const int n = e.num_vars();
  WirtingerGrad g;
  g.dz.resize(n);
  g.dzbar.resize(n);
  try {
    for (int j = 0; j < n; ++j) {
      g.dz[j] = e.dz(j).eval(p);
      g.dzbar[j] = e.dzbar(j).eval(p);
    }
    g.method = DerivMethod::Exact;
    return g;
  } catch (const DomainError&) {
    return wirtinger_grad_fd(e, p);
  }
}

WirtingerGrad wirtinger_grad_fd(const ScalarExpr& e, const PointCn& p) {
  const int n = e.num_vars();
  const double h = fd_step_for(p);
  WirtingerGrad g;
  g.dz.resize(n);
  g.dzbar.resize(n);
  g.method = DerivMethod::CentralDifference;
  g.fd_step = h;
  for (int j = 0; j < n; ++j) {
    PointCn q = p;
    q[j] = p[j] + h;
    Complex fxp = e.eval(q);
    q[j] = p[j] - h;
    Complex fxm = e.eval(q);
    q[j] = p[j] + Complex(0, h);
    Complex fyp = e.eval(q);
    q[j] = p[j] - Complex(0, h);
    Complex fym = e.eval(q);
    Complex fx = (fxp - fxm) / (2 * h);
    Complex fy = (fyp - fym) / (2 * h);
    g.dz[j] = (fx - Complex(0, 1) * fy) / 2.0;
    g.dzbar[j] = (fx + Complex(0, 1) * fy) / 2.0;
  }
  return g;
}

HessianResult real_hessian(const ScalarExpr& e, const PointCn& p) {
  require_off_singular_set(e, p);
  const int n = e.num_vars();
  HessianResult r;
  r.matrix.resize(2 * n, 2 * n);
  try {
    // Second Wirtinger derivatives: A = f_{z_j z_k}, B = f_{z_j zbar_k},
    // Bt = f_{zbar_j z_k}, C = f_{zbar_j zbar_k}.
    Eigen::MatrixXcd A(n, n), B(n, n), Bt(n, n), C(n, n);
    for (int j = 0; j < n; ++j) {
      ScalarExpr fj = e.dz(j);
      ScalarExpr fjb = e.dzbar(j);
      for (int k = 0; k < n; ++k) {
        A(j, k) = fj.dz(k).eval(p);
        B(j, k) = fj.dzbar(k).eval(p);
        Bt(j, k) = fjb.dz(k).eval(p);
        C(j, k) = fjb.dzbar(k).eval(p);
      }
    }
    // d/dx_k = d/dz_k + d/dzbar_k, d/dy_k = i (d/dz_k - d/dzbar_k).
    const Complex I(0, 1);
    for (int j = 0; j < n; ++j) {
      for (int k = 0; k < n; ++k) {
        Complex xx = A(j, k) + B(j, k) + Bt(j, k) + C(j, k);
        Complex xy = I * (A(j, k) - B(j, k) + Bt(j, k) - C(j, k));
        Complex yx = I * (A(j, k) + B(j, k) - Bt(j, k) - C(j, k));
        Complex yy = -(A(j, k) - B(j, k) - Bt(j, k) + C(j, k));
        r.matrix(2 * j, 2 * k) = xx.real();
        r.matrix(2 * j, 2 * k + 1) = xy.real();
        r.matrix(2 * j + 1, 2 * k) = yx.real();
        r.matrix(2 * j + 1, 2 * k + 1) = yy.real();
      }
    }
    r.matrix = 0.5 * (r.matrix + r.matrix.transpose()).eval();
    r.method = DerivMethod::Exact;
    return r;
  } catch (const DomainError&) {
    return real_hessian_fd(e, p);
  }
}

HessianResult real_hessian_fd(const ScalarExpr& e, const PointCn& p) {
  const int n = e.num_vars();
  // Curvature/roundoff balance for *second* differences sits near eps^(1/4);
  // 1e-6 is the first-difference step and would drown in cancellation here.
  const double h = 1e-4 * (1.0 + p.norm());
  HessianResult r;
  r.matrix.resize(2 * n, 2 * n);
  r.method = DerivMethod::CentralDifference;
  r.fd_step = h;

  auto shifted = [&](int a, double da, int b, double db) {
    PointCn q = p;
    q[a / 2] += (a % 2 == 0) ? Complex(da, 0) : Complex(0, da);
    q[b / 2] += (b % 2 == 0) ? Complex(db, 0) : Complex(0, db);
    return e.eval(q).real();
  };

  double f0 = e.eval(p).real();
  for (int a = 0; a < 2 * n; ++a) {
    for (int b = a; b < 2 * n; ++b) {
      double v;
      if (a == b) {
        v = (shifted(a, h, a, 0) - 2 * f0 + shifted(a, -h, a, 0)) / (h * h);
      } else {
        v = (shifted(a, h, b, h) - shifted(a, h, b, -h) - shifted(a, -h, b, h) +
             shifted(a, -h, b, -h)) /
            (4 * h * h);
      }
      r.matrix(a, b) = v;
      r.matrix(b, a) = v;
    }
  }
  return r;
}

Eigen::VectorXd real_gradient(const ScalarExpr& e, const PointCn& p) {
  WirtingerGrad g = wirtinger_grad(e, p);
  const int n = e.num_vars();
  Eigen::VectorXd grad(2 * n);
  for (int j = 0; j < n; ++j) {
    // For real-valued f: df/dx_j = 2 Re f_{z_j}, df/dy_j = -2 Im f_{z_j}.
    Complex dzj = g.dz[j];
    Complex dzbj = g.dzbar[j];
    grad[2 * j] = (dzj + dzbj).real();
    grad[2 * j + 1] = (Complex(0, 1) * (dzj - dzbj)).real();
  }
  return grad;
}

// ---------------------------------------------------------------------------
// MapExpr
// ---------------------------------------------------------------------------

MapExpr::MapExpr(std::vector<ScalarExpr> components, int dim_in)
    : components_(std::move(components)), dim_in_(dim_in) {
  for (const auto& c : components_)
    if (c.num_vars() != dim_in_) throw Error("map component has wrong variable count");
}

MapExpr MapExpr::parse(const std::vector<std::string>& texts, int dim_in) {
  std::vector<ScalarExpr> comps;
  comps.reserve(texts.size());
  for (const auto& t : texts) comps.push_back(ScalarExpr::parse(t, dim_in));
  return MapExpr(std::move(comps), dim_in);
}

MapExpr MapExpr::identity(int n) {
  std::vector<ScalarExpr> comps;
  comps.reserve(n);
  for (int j = 0; j < n; ++j) comps.emplace_back(variable(j), n, "z" + std::to_string(j + 1));
  return MapExpr(std::move(comps), n);
}

PointCn MapExpr::eval(const PointCn& p) const {
  PointCn out(dim_out());
  for (int j = 0; j < dim_out(); ++j) out[j] = components_[j].eval(p);
  return out;
}

Eigen::MatrixXcd MapExpr::jacobian(const PointCn& p) const {
  Eigen::MatrixXcd J(dim_out(), dim_in_);
  for (int j = 0; j < dim_out(); ++j) {
    WirtingerGrad g = wirtinger_grad(components_[j], p);
    for (int k = 0; k < dim_in_; ++k) J(j, k) = g.dz[k];
  }
  return J;
}

std::vector<std::string> MapExpr::sources() const {
  std::vector<std::string> out;
  out.reserve(components_.size());
  for (const auto& c : components_)
    out.push_back(c.source().empty() ? c.to_string() : c.source());
  return out;
}

}  // namespace expr
}  // namespace spirallab
