#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "hypergroup/polysys.hpp"

namespace hypergroup {

/// Gram matrix [int P_k P_l dmu]_{k,l<=n}.
struct StructuredMatrix {
  Eigen::MatrixXd entries;
  std::optional<std::vector<double>> moments;  // d(0..2n) when known
  std::size_t order() const { return static_cast<std::size_t>(entries.rows()) - 1; }
};

/// M^{-1} = L^T D L.
///
/// L is stored unit lower triangular: row k holds the P-coefficients of
/// sigma_k(pi) phi_k, the monic orthogonal polynomial rescaled to the leading
/// coefficient of P_k. This keeps entries O(1) where the monic normalization
/// over- or underflows. monic_L / monic_D give the monic normalization.
struct LdlFactors {
  Eigen::MatrixXd L;
  Eigen::VectorXd D;
  std::vector<double> log_lead;  // ln sigma_k(pi); empty for the dense oracle
  std::uint64_t ops = 0;         // multiplications and divisions performed

  Eigen::MatrixXd inverse() const;
  /// Rows c_{phi P}(k, .).
  Eigen::MatrixXd monic_L() const;
  /// 1 / (sigma_{k,k} c_{phi P}(k,k)).
  Eigen::VectorXd monic_D() const;
};

StructuredMatrix build_matrix(const std::vector<double>& d, const PolynomialSystem& sys,
                              std::size_t n);

/// Recovers d(0..2n); optionally verifies the structural identity.
std::vector<double> moments_from_matrix(const StructuredMatrix& M, const PolynomialSystem& sys,
                                        bool verify = true, std::uint64_t* ops = nullptr);

LdlFactors ldl_decompose(const StructuredMatrix& M, const PolynomialSystem& sys);

Eigen::VectorXd solve(const LdlFactors& f, const Eigen::VectorXd& b);
Eigen::VectorXd solve(const StructuredMatrix& M, const PolynomialSystem& sys,
                      const Eigen::VectorXd& b);

/// Dense O(n^3) oracle: unpivoted LDL^T of M, then inversion of the unit factor.
LdlFactors brute_force_factor(const Eigen::MatrixXd& M);

struct BenchRow {
  std::size_t n = 0;
  std::uint64_t ops_fast = 0;
  std::uint64_t ops_dense = 0;
  double t_fast_ns = 0.0;
  double t_dense_ns = 0.0;
};

/// Times and counts both factorizations on the Gram matrix of moments d.
BenchRow bench_factorizations(const std::vector<double>& d, const PolynomialSystem& sys,
                              std::size_t n, bool run_dense = true);

/// Least-squares slope of ln y against ln x.
double loglog_slope(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace hypergroup
