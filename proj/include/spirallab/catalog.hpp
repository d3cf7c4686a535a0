#pragma once

#include <optional>
#include <string>
#include <vector>

#include "spirallab/domains.hpp"
#include "spirallab/vectorfield.hpp"

namespace spirallab {
namespace catalog {

// Built-in domain/field pairs used across the toolkit:
//   ball(n)            unit ball with the radial field -z and flow e^{-t} z
//   bidisc             two-sheet unit bidisc in C^2 (no field)
//   ovoid              |z1|^2 + |z2|^2 + |z1|^2 |z2|^2 < 1 (no field)
//   hartogs-spiral(r)  |z1| < r, |z2| < e^{-|z1|} with F = (-2 z1, -3 z2 + z1 z2)
//                      and its closed-form flow
//   radial(n)          the field -z on C^n with its flow, over the unit ball
struct CatalogEntry {
  std::string name;
  domains::DomainSpec domain;
  std::optional<fields::VectorFieldSpec> field;  // carries the closed flow when known
  std::string provenance;
};

// Resolves names like "ball(2)", "ball(2,1.5)", "bidisc", "ovoid",
// "hartogs-spiral(5)", "radial(3)". Throws UnknownName otherwise.
CatalogEntry builtin(const std::string& name);

std::vector<std::string> list_names();

// X(t, z) = (z1 e^{-2t}, z2 e^{-3t} e^{(z1/2)(1 - e^{-2t})}), entire in t.
PointCn hartogs_flow(double t, const PointCn& z);

}  // namespace catalog
}  // namespace spirallab
