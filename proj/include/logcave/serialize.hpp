#pragma once

#include <memory>
#include <string>

#include "logcave/densities.hpp"
#include "logcave/estimator.hpp"
#include "logcave/structure.hpp"

namespace logcave {

// Density -> JSON text. Supported: the closed-form families (gaussian,
// uniform over a polytope, product-exponential, product-laplace), piecewise
// polytope densities, and contaminated mixtures of the above. Numbers are
// written round-trip exact.
std::string density_to_json(const Density& f, int indent = 2);

// Inverse of density_to_json. Throws ConfigError on malformed input.
std::shared_ptr<Density> density_from_json(const std::string& text);

// Convenience casts of density_from_json for callers that need the concrete
// type; ConfigError when the JSON holds a different family.
std::shared_ptr<PiecewisePolytopeDensity> piecewise_from_json(const std::string& text);

std::string selection_to_json(const SelectionResult& r, int indent = 2);
std::string guarantee_to_json(const GuaranteeReport& r, int indent = 2);
std::string sandwich_to_json(const SandwichReport& r, int indent = 2);

}  // namespace logcave
