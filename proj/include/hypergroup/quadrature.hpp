#pragma once

#include <cstddef>
#include <memory>
#include <vector>

#include "hypergroup/polysys.hpp"

namespace hypergroup {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t size() const { return nodes.size(); }
};

/// Gauss rule of the orthogonalization measure pi of `sys` (total mass 1).
/// Closed form for Chebyshev first kind, Golub-Welsch otherwise. Cached.
std::shared_ptr<const QuadratureRule> gauss_rule(const PolynomialSystem& sys, std::size_t nodes);

/// Gauss-Legendre on [-1, 1].
QuadratureRule gauss_legendre(std::size_t nodes);

/// Rule for integrals against dx on [lo, hi] using x = mid + r cos t with
/// Gauss-Legendre in t; absorbs square-root endpoint behaviour.
QuadratureRule cosine_substituted_rule(Interval iv, std::size_t nodes);

}  // namespace hypergroup
