#include "hypergroup/quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <string>
#include <utility>

namespace hypergroup {

namespace {

// Nodes are the eigenvalues of the orthonormal Jacobi matrix; the weights come
// from the Christoffel function 1 / sum_k p_k(x)^2 which avoids eigenvectors.
QuadratureRule golub_welsch(const std::vector<double>& diag, const std::vector<double>& off,
                            double mass) {
  const std::size_t n = diag.size();
  Eigen::VectorXd d = Eigen::Map<const Eigen::VectorXd>(diag.data(), n);
  Eigen::VectorXd e(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = off[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
  solver.computeFromTridiagonal(d, e, Eigen::EigenvaluesOnly);
  QuadratureRule rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    const double x = solver.eigenvalues()[static_cast<Eigen::Index>(j)];
    double pm = 0.0, p = 1.0, sum = 1.0;
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const double pn = ((x - diag[k]) * p - (k ? off[k - 1] : 0.0) * pm) / off[k];
      pm = p;
      p = pn;
      sum += p * p;
    }
    rule.nodes[j] = x;
    rule.weights[j] = mass / sum;
  }
  return rule;
}

}  // namespace

std::shared_ptr<const QuadratureRule> gauss_rule(const PolynomialSystem& sys, std::size_t nodes) {
  static std::mutex mu;
  static std::map<std::pair<std::string, std::size_t>, std::shared_ptr<const QuadratureRule>>
      cache;
  const bool cacheable = sys.family() != Family::Custom;
  const auto key = std::make_pair(sys.label(), nodes);
  if (cacheable) {
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
  }
  auto rule = std::make_shared<QuadratureRule>();
  if (sys.family() == Family::ChebyshevFirst) {
    rule->nodes.resize(nodes);
    rule->weights.assign(nodes, 1.0 / static_cast<double>(nodes));
    for (std::size_t j = 0; j < nodes; ++j) {
      rule->nodes[j] = std::cos((2.0 * j + 1.0) * std::numbers::pi / (2.0 * nodes));
    }
  } else {
    std::vector<double> diag(nodes), off(nodes > 0 ? nodes - 1 : 0);
    for (std::size_t k = 0; k < nodes; ++k) {
      const XRecurrence r = sys.x_recurrence(k);
      diag[k] = r.same;
      if (k + 1 < nodes) off[k] = std::sqrt(r.next * sys.x_recurrence(k + 1).prev);
    }
    *rule = golub_welsch(diag, off, 1.0);
  }
  if (cacheable) {
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(key, rule);
  }
  return rule;
}

QuadratureRule gauss_legendre(std::size_t nodes) {
  std::vector<double> diag(nodes, 0.0), off(nodes > 0 ? nodes - 1 : 0);
  for (std::size_t k = 1; k < nodes; ++k) {
    const double m = static_cast<double>(k);
    off[k - 1] = m / std::sqrt(4.0 * m * m - 1.0);
  }
  return golub_welsch(diag, off, 2.0);
}

QuadratureRule cosine_substituted_rule(Interval iv, std::size_t nodes) {
  const QuadratureRule gl = gauss_legendre(nodes);
  const double mid = 0.5 * (iv.lo + iv.hi);
  const double rad = 0.5 * (iv.hi - iv.lo);
  const double half_pi = 0.5 * std::numbers::pi;
  QuadratureRule rule;
  rule.nodes.resize(nodes);
  rule.weights.resize(nodes);
  for (std::size_t j = 0; j < nodes; ++j) {
    const double t = half_pi * (gl.nodes[j] + 1.0);
    rule.nodes[j] = mid + rad * std::cos(t);
    rule.weights[j] = half_pi * gl.weights[j] * rad * std::sin(t);
  }
  return rule;
}

}  // namespace hypergroup
