#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "hypergroup/polysys.hpp"

namespace hypergroup {

/// Monic orthogonal polynomials phi_k of a measure mu:
/// x phi_k = phi_{k+1} + alpha_k phi_k + beta_k phi_{k-1}.
struct MonicChain {
  std::size_t depth = 0;        // alpha_k, beta_k known for k < depth
  std::vector<double> alpha;
  std::vector<double> beta;
  /// mixed[k][j] = sigma_{k, k+j} = int phi_k P_{k+j} dmu
  std::vector<std::vector<double>> mixed;
  /// ln c_{phi P}(k, k) = -ln(leading coefficient of P_k)
  std::vector<double> log_diag;
  /// sigma_{depth,depth} was computed but vanished to rounding
  bool top_degenerate = false;

  double sigma(std::size_t k, std::size_t l) const;
  /// Number of k with sigma_{k,k} available.
  std::size_t norm_count() const { return mixed.size(); }
  /// ln ||phi_k||^2 = ln c(k,k) + ln sigma_{k,k}
  double norm_sq_log(std::size_t k) const;
};

/// Modified Chebyshev algorithm from the modified moments d(l) = int P_l dmu.
/// Needs 2 depth moments; a (2 depth)-th moment also yields ||phi_depth||.
MonicChain modified_chebyshev(const std::vector<double>& d, const PolynomialSystem& sys,
                              std::size_t depth);

/// Lower-triangular coefficients c(k, l), 0 <= l <= k <= n.
class ConnectionTriangle {
 public:
  ConnectionTriangle() = default;
  explicit ConnectionTriangle(std::size_t n);

  std::size_t size() const { return rows_.size(); }
  double operator()(std::size_t k, std::size_t l) const {
    return l <= k && k < rows_.size() ? rows_[k][l] : 0.0;
  }
  double& at(std::size_t k, std::size_t l) { return rows_[k][l]; }
  const std::vector<double>& row(std::size_t k) const { return rows_[k]; }
  Eigen::MatrixXd matrix() const;
  void write_csv(std::ostream& os) const;

 private:
  std::vector<std::vector<double>> rows_;
};

/// c_{phi P}(k, l): phi_k = sum_l c(k, l) P_l, rows 0..chain.depth.
ConnectionTriangle connection_from_measure(const MonicChain& chain, const PolynomialSystem& sys);

/// c_{QP}(k, l): Q_k = sum_l c(k, l) P_l, rows 0..n.
ConnectionTriangle connect_systems(const PolynomialSystem& P, const PolynomialSystem& Q,
                                   std::size_t n);

/// ln rho_k with rho_k the leading coefficient of the orthonormal q_k.
double orthonormal_leading_log(const MonicChain& chain, std::size_t k);

/// phi_k(x) by the monic recurrence.
double monic_evaluate(const MonicChain& chain, std::size_t k, double x);

}  // namespace hypergroup
