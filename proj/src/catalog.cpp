#include "spirallab/catalog.hpp"

#include <cmath>
#include <sstream>

namespace spirallab {
namespace catalog {

namespace {

// Parses "name", "name(a)" or "name(a,b)" with numeric arguments.
struct ParsedName {
  std::string base;
  std::vector<double> args;
};

ParsedName parse_name(const std::string& name) {
  ParsedName out;
  auto open = name.find('(');
  if (open == std::string::npos) {
    out.base = name;
    return out;
  }
  if (name.back() != ')') throw UnknownName("malformed catalog name: " + name);
  out.base = name.substr(0, open);
  std::string args = name.substr(open + 1, name.size() - open - 2);
  std::istringstream is(args);
  std::string piece;
  while (std::getline(is, piece, ',')) {
    if (piece.empty()) continue;
    out.args.push_back(std::atof(piece.c_str()));
  }
  return out;
}

fields::VectorFieldSpec radial_field(int n) {
  std::vector<expr::ScalarExpr> comps;
  for (int j = 0; j < n; ++j)
    comps.emplace_back(expr::neg(expr::variable(j)), n, "-z" + std::to_string(j + 1));
  fields::FlowHandle flow = [](double t, const PointCn& z) -> PointCn {
    return std::exp(-t) * z;
  };
  return fields::VectorFieldSpec(expr::MapExpr(std::move(comps), n), "radial", std::move(flow));
}

fields::VectorFieldSpec hartogs_field() {
  return fields::VectorFieldSpec(expr::MapExpr::parse({"-2*z1", "-3*z2+z1*z2"}, 2),
                                 "hartogs-spiral", &hartogs_flow);
}

domains::DomainSpec hartogs_domain(double radius) {
  std::ostringstream r1;
  r1.precision(17);
  r1 << "abs(z1)-" << radius;
  auto s1 = expr::ScalarExpr::parse(r1.str(), 2);
  auto s2 = expr::ScalarExpr::parse("abs(z2)-exp(-abs(z1))", 2);
  std::ostringstream name;
  name << "hartogs-spiral(" << radius << ")";
  return domains::DomainSpec({s1, s2}, 2, radius + 1.2,
                             domains::SingularPredicate::parse("abs(z1)>=1e-3"), name.str());
}

domains::DomainSpec ovoid_domain() {
  auto r = expr::ScalarExpr::parse("z1*conj(z1)+z2*conj(z2)+z1*conj(z1)*z2*conj(z2)-1", 2);
  return domains::DomainSpec({r}, 2, 1.1, {}, "ovoid");
}

domains::DomainSpec bidisc_domain() {
  auto r1 = expr::ScalarExpr::parse("z1*conj(z1)-1", 2);
  auto r2 = expr::ScalarExpr::parse("z2*conj(z2)-1", 2);
  return domains::DomainSpec({r1, r2}, 2, 1.5, {}, "bidisc");
}

}  // namespace

PointCn hartogs_flow(double t, const PointCn& z) {
  if (z.size() != 2) throw Error("hartogs_flow expects points of C^2");
  PointCn w(2);
  double decay = std::exp(-2.0 * t);
  w[0] = z[0] * decay;
  w[1] = z[1] * std::exp(-3.0 * t) * std::exp((z[0] / 2.0) * (1.0 - decay));
  return w;
}

CatalogEntry builtin(const std::string& name) {
  ParsedName parsed = parse_name(name);

  if (parsed.base == "ball") {
    int n = parsed.args.empty() ? 2 : static_cast<int>(parsed.args[0]);
    double rho = parsed.args.size() > 1 ? parsed.args[1] : 1.0;
    if (n < 1) throw UnknownName("ball dimension must be >= 1");
    CatalogEntry entry{name, domains::ball(n, rho), radial_field(n),
                       "unit ball with the radial field; flow e^{-t} z"};
    return entry;
  }
  if (parsed.base == "radial") {
    int n = parsed.args.empty() ? 2 : static_cast<int>(parsed.args[0]);
    if (n < 1) throw UnknownName("radial dimension must be >= 1");
    return CatalogEntry{name, domains::ball(n, 1.0), radial_field(n),
                        "radial contraction field -z over the unit ball"};
  }
  if (parsed.base == "bidisc") {
    return CatalogEntry{name, bidisc_domain(), std::nullopt, "unit bidisc, two defining sheets"};
  }
  if (parsed.base == "ovoid") {
    return CatalogEntry{name, ovoid_domain(), std::nullopt,
                        "strongly convex circular domain; not biholomorphic to the ball"};
  }
  if (parsed.base == "hartogs-spiral") {
    double radius = parsed.args.empty() ? 5.0 : parsed.args[0];
    if (!(radius > 0)) throw UnknownName("hartogs-spiral radius must be positive");
    return CatalogEntry{name, hartogs_domain(radius), hartogs_field(),
                        "pseudoconvex non-convex Hartogs domain, strictly spirallike for "
                        "(-2 z1, -3 z2 + z1 z2)"};
  }
  throw UnknownName("unknown catalog entry: " + name);
}

std::vector<std::string> list_names() {
  return {"ball(n[,rho])", "bidisc", "ovoid", "hartogs-spiral(r)", "radial(n)"};
}

}  // namespace catalog
}  // namespace spirallab
