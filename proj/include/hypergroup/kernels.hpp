#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <iosfwd>
#include <memory>
#include <optional>
#include <vector>

#include "hypergroup/hyperconv.hpp"
#include "hypergroup/measures.hpp"
#include "hypergroup/polysys.hpp"

namespace hypergroup {

enum class KernelBackend { Stationary, Harmonizable, Table };

/// Positive definite kernel K(n, m) on the hypergroup of a polynomial system.
class Kernel {
 public:
  /// K(n, m) = sum_k g(n, m, k) d(k); defined while n + m < d.size().
  static Kernel stationary(PolynomialSystem sys, std::vector<double> d);
  /// Stationary kernel of mu with moments up to 2 * extent.
  static Kernel stationary(PolynomialSystem sys, const SpectralMeasure& mu, std::size_t extent);
  /// K(n, m) = integral of P_n(x) P_m(y) against mu2.
  static Kernel harmonizable(PolynomialSystem sys, BiMeasure mu2);
  /// Explicit table; throws InvalidArgument unless square and hermitian within tol.
  static Kernel table(PolynomialSystem sys, Eigen::MatrixXcd values, double tol = 1e-12);

  KernelBackend backend() const { return backend_; }
  const PolynomialSystem& system() const { return sys_; }
  /// Moment sequence of a stationary backend.
  const std::vector<double>& moments() const { return d_; }
  const BiMeasure& bimeasure() const { return mu2_; }
  /// Order of a Table backend.
  std::optional<std::size_t> table_order() const;

  /// Throws IndexOutOfRange past the table or moment bounds.
  std::complex<double> value(std::size_t n, std::size_t m) const;
  /// [K(n, m)] for n, m <= N.
  Eigen::MatrixXcd matrix(std::size_t N) const;

 private:
  struct Cache;
  explicit Kernel(PolynomialSystem sys) : sys_(std::move(sys)) {}

  PolynomialSystem sys_;
  KernelBackend backend_ = KernelBackend::Stationary;
  std::vector<double> d_;
  BiMeasure mu2_;
  Eigen::MatrixXcd table_;
  std::shared_ptr<Cache> cache_;
};

std::complex<double> kernel_value(const Kernel& K, std::size_t n, std::size_t m);

/// Outcome of an identity check with the worst residual and where it occurred.
struct CheckResult {
  bool holds = true;
  double worst_residual = 0.0;
  std::size_t n = 0;
  std::size_t m = 0;
};

/// K(n, m) = K(n*m, 0) for n, m <= N. Pairs beyond a table's extent are skipped.
CheckResult check_stationary(const Kernel& K, std::size_t N, double tol);

/// K(n*T, m) = K(n, m*T) for n, m <= N.
CheckResult check_cyclostationary(const Kernel& K, std::size_t period, std::size_t N, double tol);

/// Every atom (x, y) of mu2 satisfies P_T(x) = P_T(y) within tol.
/// Throws NonAtomicUnsupported for bimeasures with continuous parts.
CheckResult cyclo_support_test(const BiMeasure& mu2, const PolynomialSystem& sys,
                               std::size_t period, double tol);

/// Eigenvalue test of [K(n, m)]_{n,m<=N}.
DefinitenessResult is_positive_definite(const Kernel& K, std::size_t N, double tol);

/// (1 / sum_{k<=n} h(k)) sum_{k<=n} K(k*s, k) h(k).
double asymptotic_M(const Kernel& K, std::size_t s, std::size_t n);

/// (1 / sum_{k<=n} h(k)) sum_{k<=n} (K(k*s, 0) - K(k, s)) h(k).
double asymptotic_H(const Kernel& K, std::size_t s, std::size_t n);

enum class WienerVariant { B, C, D };

/// b: mean of |K(k,0)|, c: mean of |K(k,0)|^2, d: double mean of |K(k,l)|^2,
/// all weighted by h over k, l <= n.
double wiener_statistic(const Kernel& K, std::size_t n, WienerVariant variant);

/// Pairwise summation; the result does not depend on how the input was produced.
double pairwise_sum(const double* v, std::size_t count);

/// K(n,m) = (C-1)^2 for n, m odd, (C+1)^2 for both even, (C-1)(C+1) otherwise,
/// as the harmonizable kernel of (C delta_1 + delta_{-1}) x conj under Chebyshev T.
Kernel cyclo_example_kernel(double C);

/// Rows n,m,re,im for n, m <= N.
void write_kernel_csv(std::ostream& os, const Kernel& K, std::size_t N);
/// Reads n,m,re,im rows into a square table (missing entries filled by hermitian symmetry).
Eigen::MatrixXcd read_kernel_csv(std::istream& is);

}  // namespace hypergroup
