#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <shared_mutex>
#include <utility>
#include <vector>

#include "hypergroup/polysys.hpp"

namespace hypergroup {

/// Coefficients g(m, n, k) for k = |m-n| .. m+n, stored from k = |m-n|.
using LinearizationVector = std::vector<double>;

/// Products P_k P_n for k = 0..n with n fixed: rows[k] covers s = n-k .. n+k.
/// Cost O(n^2). `mults` (optional) accumulates multiplications and divisions.
std::vector<LinearizationVector> linearization_rows(const PolynomialSystem& sys, std::size_t n,
                                                    std::uint64_t* mults = nullptr);

/// Memoized linearization coefficients; safe for concurrent readers and writers.
class LinearizationTable {
 public:
  explicit LinearizationTable(PolynomialSystem sys) : sys_(std::move(sys)) {}

  const PolynomialSystem& system() const { return sys_; }
  /// g(m, n, .) starting at k = |m-n|.
  std::shared_ptr<const LinearizationVector> get(std::size_t m, std::size_t n) const;
  /// g(m, n, k), zero outside |m-n| <= k <= m+n.
  double coefficient(std::size_t m, std::size_t n, std::size_t k) const;
  /// Writes (m,n,k,g) rows for all m <= n <= max_index.
  void dump_csv(std::ostream& os, std::size_t max_index) const;

 private:
  PolynomialSystem sys_;
  mutable std::shared_mutex mutex_;
  mutable std::map<std::pair<std::size_t, std::size_t>, std::shared_ptr<const LinearizationVector>>
      memo_;
};

/// Process-wide table for built-in families; a fresh table for custom systems.
std::shared_ptr<const LinearizationTable> shared_table(const PolynomialSystem& sys);

/// g(m, n, .) from the shared table.
LinearizationVector linearize(const PolynomialSystem& sys, std::size_t m, std::size_t n);

double haar_weight(const PolynomialSystem& sys, std::size_t n);
double haar_weight_log(const PolynomialSystem& sys, std::size_t n);
/// ln h(0) .. ln h(n_max).
std::vector<double> haar_weight_logs(const PolynomialSystem& sys, std::size_t n_max);
std::vector<double> haar_weights(const PolynomialSystem& sys, std::size_t n_max);

/// sum_k g(n, m, k) d(k).
double translate(const PolynomialSystem& sys, const std::vector<double>& d, std::size_t n,
                 std::size_t m);
std::complex<double> translate(const PolynomialSystem& sys,
                               const std::vector<std::complex<double>>& d, std::size_t n,
                               std::size_t m);

struct DefinitenessResult {
  bool positive = false;
  double min_eigenvalue = 0.0;
};

/// Eigenvalue test of the (N+1)x(N+1) matrix of translates of d.
DefinitenessResult is_positive_definite(const PolynomialSystem& sys, const std::vector<double>& d,
                                        std::size_t N, double tol);

/// r_n = h(n) / sum_{k<=n} h(k), n = 0..N.
std::vector<double> condition_H_ratios(const PolynomialSystem& sys, std::size_t N);

}  // namespace hypergroup
