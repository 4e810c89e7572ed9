#pragma once

#include <Eigen/Dense>
#include <cstddef>
#include <iosfwd>
#include <vector>

#include "hypergroup/measures.hpp"
#include "hypergroup/polysys.hpp"
#include "hypergroup/sequences.hpp"

namespace hypergroup {

/// Values I(x_i, y_j) on a tensor grid; values(i, j) belongs to (x[i], y[j]).
struct Grid2 {
  std::vector<double> x;
  std::vector<double> y;
  Eigen::MatrixXcd values;
};

/// `count` equispaced nodes covering the interval, endpoints included.
std::vector<double> make_grid(const Interval& range, std::size_t count);

/// Square grid on the dual interval with zero values.
Grid2 make_grid2(const PolynomialSystem& sys, std::size_t count);

/// I_N(x, y) = S(x) conj(S(y)) with S(x) = sum_{k<=N} X_k P_k(x) h(k) / sum_{k<=N} h(k).
Grid2 periodogram(const Path& path, const PolynomialSystem& sys, std::size_t N, Grid2 grid);

/// E I_N(x, y) for a process with kernel given by the bimoments of mu2.
Grid2 expected_periodogram(const BiMeasure& mu2, const PolynomialSystem& sys, std::size_t N,
                           Grid2 grid);

enum class TForm { Sum, ChristoffelDarboux };

/// t_n(x, y) = sum_{k<=n} P_k(x) P_k(y) h(k) / sum_{k<=n} h(k).
/// The Christoffel-Darboux form needs x != y.
double t_statistic(const PolynomialSystem& sys, std::size_t n, double x, double y,
                   TForm form = TForm::Sum);

enum class SpectralWeights { Fejer, Partial };

/// a_{N,s}: 1 - s/(N+1) for Fejer, 1 for Partial.
double spectral_weight(SpectralWeights weights, std::size_t N, std::size_t s);

/// f_N(x) = sum_{s<=N} a_{N,s} d(s) P_s(x) h(s) at each x. Negative values are kept.
std::vector<double> density_estimate(const std::vector<double>& d_hat, const PolynomialSystem& sys,
                                     SpectralWeights weights, std::size_t N,
                                     const std::vector<double>& x);

/// d(k) = mean over paths of Re X_k conj(X_0), k = 0 .. n_max.
std::vector<double> ensemble_covariance(const std::vector<Path>& paths, std::size_t n_max);

/// Sample mean and standard error of X_n conj(X_m) over paths, n, m <= N.
struct EnsembleKernel {
  Eigen::MatrixXcd mean;
  Eigen::MatrixXd std_error;  // of the real part
};
EnsembleKernel ensemble_kernel(const std::vector<Path>& paths, std::size_t N);

void write_grid_csv(std::ostream& os, const Grid2& grid);
void write_density_csv(std::ostream& os, const std::vector<double>& x,
                       const std::vector<double>& f);

}  // namespace hypergroup
