#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "hypergroup/measures.hpp"
#include "hypergroup/polysys.hpp"

namespace hypergroup {

/// Realization X_0 .. X_N with the seed and construction that produced it.
struct Path {
  std::vector<std::complex<double>> values;
  std::uint64_t seed = 0;
  std::string tag;

  std::size_t size() const { return values.size(); }
  const std::complex<double>& operator[](std::size_t n) const { return values[n]; }
};

/// Independent centered Gaussians with Var Z_n = 1/h(n).
Path white_noise(const PolynomialSystem& sys, std::size_t N, std::uint64_t seed);

/// How moving-average coefficients enter X_n = sum_k c_k T_n Z_k.
/// HaarWeighted: c_k = a_k h(k). Subsumed: c_k = a_k.
enum class MaConvention { HaarWeighted, Subsumed };

/// X_n = sum_{k<=q} c_k sum_s g(n, k, s) Z_s with Z = white_noise(sys, N + q, seed).
Path ma_sequence(const PolynomialSystem& sys, const std::vector<double>& a, std::size_t N,
                 std::uint64_t seed, MaConvention convention = MaConvention::HaarWeighted);

/// Same transform applied to a given innovation sequence (needs N + q + 1 values).
Path ma_from_noise(const PolynomialSystem& sys, const std::vector<double>& a, const Path& noise,
                   std::size_t N, MaConvention convention = MaConvention::HaarWeighted);

/// |sum_k c_k P_k|^2 pi, the spectral measure of ma_sequence.
SpectralMeasure ma_spectral_measure(const std::vector<double>& a, const PolynomialSystem& sys,
                                    MaConvention convention = MaConvention::HaarWeighted);

/// X_n = sum_k P_n(x_k) A_k with amplitudes of covariance E A_k conj(A_l) = cov(k, l).
/// Real covariances give real amplitudes; otherwise circular complex ones.
Path harmonic_sequence(const PolynomialSystem& sys, const std::vector<double>& atoms,
                       const Eigen::MatrixXcd& cov, std::size_t N, std::uint64_t seed);

/// sum_{k,l} cov(k, l) delta_{(x_k, x_l)}.
BiMeasure harmonic_bimeasure(const std::vector<double>& atoms, const Eigen::MatrixXcd& cov);

/// The two-atom process T_n(-1/3) Z_0 + T_n(1/2) Z_1 with independent unit amplitudes.
Path demo_harmonic(std::size_t N, std::uint64_t seed);
BiMeasure demo_harmonic_bimeasure();

/// Classical sequence Y_k for k = first .. first + values.size() - 1.
struct ClassicalPath {
  std::vector<std::complex<double>> values;
  long first = 0;

  std::complex<double> at(long k) const;
};

/// Real Y_k = sum_j c_j eps_{k-j}, k = -L .. L, with eps iid N(0, 1).
ClassicalPath classical_ma(const std::vector<double>& coeffs, std::size_t L, std::uint64_t seed);
/// Autocovariance of classical_ma at lag k.
double classical_ma_covariance(const std::vector<double>& coeffs, long lag);

/// Y_0 = 0 and Y_k - Y_{k-1} = eps_k for k = -L+1 .. L, eps iid N(0, 1).
ClassicalPath classical_random_walk(std::size_t L, std::uint64_t seed);

enum class AveragingMode {
  ChebU,               // (1/(n+1)) sum_{k<=n} Y_{n-2k}, Chebyshev second kind
  ChebT,               // (Y_n + Y_{-n}) / 2, Chebyshev first kind
  JacobiHalfMinusHalf, // (Y_{n+1} - Y_{-n}) / (2n+1) for Y with stationary increments
  ArithmeticMean,      // (1/(2n+1)) sum_{|k|<=n} Y_k, also Jacobi(1/2, -1/2)
};

/// System the averaged sequence is stationary for.
PolynomialSystem averaging_system(AveragingMode mode);

/// Weights alpha_{nk} as (k, alpha) pairs. For JacobiHalfMinusHalf the weights act on
/// the increments eps_k = Y_k - Y_{k-1}.
std::vector<std::pair<long, double>> averaging_weights(AveragingMode mode, std::size_t n);

/// X_0 .. X_N from a classical path covering the needed indices.
Path average_classical(const ClassicalPath& Y, std::size_t N, AveragingMode mode);

/// E X_n conj(X_m) when the averaged stationary sequence has autocovariance d_Y.
double averaged_covariance(AveragingMode mode, const std::function<double(long)>& d_Y,
                           std::size_t n, std::size_t m);

/// Inverse-CDF sampling of `count` draws from f pi using a cosine grid.
std::vector<double> sample_density(const PolynomialSystem& sys, const Density& f,
                                   std::size_t count, std::uint64_t seed,
                                   std::size_t grid = 8192);

/// C_k = (1/N) sum_j P_k(X_j), k = 0 .. k_max.
std::vector<double> density_coefficients(const std::vector<double>& samples,
                                         const PolynomialSystem& sys, std::size_t k_max);

/// X_n = sum_j P_n(x_j) sqrt(m_j) xi_j over an atomization of mu on `nodes` nodes.
Path spectral_sequence(const PolynomialSystem& sys, const SpectralMeasure& mu, std::size_t N,
                       std::uint64_t seed, std::size_t nodes = 0);

/// Radial process on the homogeneous tree of degree q, through its Cartier-Dunau system.
Path radial_tree_sequence(double q, const SpectralMeasure& mu, std::size_t N,
                          std::uint64_t seed, std::size_t nodes = 0);

/// Zeroes every value whose index is outside `index_set`.
Path truncate(const Path& path, const std::vector<std::size_t>& index_set);

void write_path_csv(std::ostream& os, const Path& path);
Path read_path_csv(std::istream& is);

}  // namespace hypergroup
