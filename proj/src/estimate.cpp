#include "hypergroup/estimate.hpp"

#include <cmath>
#include <ostream>

#include "hypergroup/error.hpp"
#include "hypergroup/hyperconv.hpp"

namespace hypergroup {

std::vector<double> make_grid(const Interval& range, std::size_t count) {
  if (count < 2) throw Error(ErrorKind::InvalidArgument, "grid needs at least 2 nodes");
  std::vector<double> x(count);
  const double step = (range.hi - range.lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i) x[i] = range.lo + step * static_cast<double>(i);
  x.back() = range.hi;
  return x;
}

Grid2 make_grid2(const PolynomialSystem& sys, std::size_t count) {
  Grid2 g;
  g.x = make_grid(sys.dual_interval(), count);
  g.y = g.x;
  g.values = Eigen::MatrixXcd::Zero(static_cast<Eigen::Index>(count),
                                    static_cast<Eigen::Index>(count));
  return g;
}

namespace {

// Rows P_k(x_i) h(k) / sum h for k <= N.
Eigen::MatrixXd weighted_basis(const PolynomialSystem& sys, std::size_t N,
                               const std::vector<double>& nodes) {
  const auto h = haar_weights(sys, N);
  double total = 0.0;
  for (double v : h) total += v;
  Eigen::MatrixXd out(static_cast<Eigen::Index>(nodes.size()), static_cast<Eigen::Index>(N + 1));
  std::vector<double> p(N + 1);
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    sys.evaluate_all(N, nodes[i], p.data());
    for (std::size_t k = 0; k <= N; ++k) {
      out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = p[k] * h[k] / total;
    }
  }
  return out;
}

void check_grid(const Grid2& grid) {
  if (grid.x.size() < 2 || grid.y.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "grid needs at least 2 nodes per axis");
  }
}

}  // namespace

Grid2 periodogram(const Path& path, const PolynomialSystem& sys, std::size_t N, Grid2 grid) {
  check_grid(grid);
  if (path.size() < N + 1) throw Error(ErrorKind::IndexOutOfRange, "path shorter than N + 1");
  Eigen::VectorXcd X(static_cast<Eigen::Index>(N + 1));
  for (std::size_t k = 0; k <= N; ++k) X(static_cast<Eigen::Index>(k)) = path[k];
  const Eigen::VectorXcd sx = weighted_basis(sys, N, grid.x).cast<std::complex<double>>() * X;
  const Eigen::VectorXcd sy = weighted_basis(sys, N, grid.y).cast<std::complex<double>>() * X;
  grid.values = sx * sy.adjoint();
  return grid;
}

Grid2 expected_periodogram(const BiMeasure& mu2, const PolynomialSystem& sys, std::size_t N,
                           Grid2 grid) {
  check_grid(grid);
  const Eigen::MatrixXcd K = bimoment_matrix(mu2, sys, N);
  const Eigen::MatrixXcd U = weighted_basis(sys, N, grid.x).cast<std::complex<double>>();
  const Eigen::MatrixXcd V = weighted_basis(sys, N, grid.y).cast<std::complex<double>>();
  grid.values = U * K * V.transpose();
  return grid;
}

double t_statistic(const PolynomialSystem& sys, std::size_t n, double x, double y, TForm form) {
  const auto h = haar_weights(sys, n + 1);
  double total = 0.0;
  for (std::size_t k = 0; k <= n; ++k) total += h[k];
  const auto px = sys.evaluate_all(n + 1, x);
  const auto py = sys.evaluate_all(n + 1, y);
  if (form == TForm::Sum) {
    double acc = 0.0;
    for (std::size_t k = 0; k <= n; ++k) acc += px[k] * py[k] * h[k];
    return acc / total;
  }
  if (x == y) {
    throw Error(ErrorKind::InvalidArgument, "Christoffel-Darboux form needs x != y");
  }
  const double next = sys.x_recurrence(n).next;
  return next * h[n] * (px[n + 1] * py[n] - px[n] * py[n + 1]) / (x - y) / total;
}

double spectral_weight(SpectralWeights weights, std::size_t N, std::size_t s) {
  if (weights == SpectralWeights::Partial) return 1.0;
  return 1.0 - static_cast<double>(s) / static_cast<double>(N + 1);
}

std::vector<double> density_estimate(const std::vector<double>& d_hat, const PolynomialSystem& sys,
                                     SpectralWeights weights, std::size_t N,
                                     const std::vector<double>& x) {
  if (d_hat.size() < N + 1) throw Error(ErrorKind::IndexOutOfRange, "need moments d(0..N)");
  const auto h = haar_weights(sys, N);
  std::vector<double> coeff(N + 1);
  for (std::size_t s = 0; s <= N; ++s) coeff[s] = spectral_weight(weights, N, s) * d_hat[s] * h[s];
  std::vector<double> out(x.size()), p(N + 1);
  for (std::size_t i = 0; i < x.size(); ++i) {
    sys.evaluate_all(N, x[i], p.data());
    double acc = 0.0;
    for (std::size_t s = 0; s <= N; ++s) acc += coeff[s] * p[s];
    out[i] = acc;
  }
  return out;
}

std::vector<double> ensemble_covariance(const std::vector<Path>& paths, std::size_t n_max) {
  if (paths.empty()) throw Error(ErrorKind::InvalidArgument, "no paths");
  std::vector<double> d(n_max + 1, 0.0);
  for (const Path& p : paths) {
    if (p.size() < n_max + 1) throw Error(ErrorKind::IndexOutOfRange, "path shorter than n_max + 1");
    for (std::size_t k = 0; k <= n_max; ++k) d[k] += (p[k] * std::conj(p[0])).real();
  }
  for (double& v : d) v /= static_cast<double>(paths.size());
  return d;
}

EnsembleKernel ensemble_kernel(const std::vector<Path>& paths, std::size_t N) {
  if (paths.size() < 2) throw Error(ErrorKind::InvalidArgument, "need at least two paths");
  const auto sz = static_cast<Eigen::Index>(N + 1);
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(sz, sz);
  Eigen::MatrixXd sq = Eigen::MatrixXd::Zero(sz, sz);
  Eigen::VectorXcd v(sz);
  for (const Path& p : paths) {
    if (p.size() < N + 1) throw Error(ErrorKind::IndexOutOfRange, "path shorter than N + 1");
    for (Eigen::Index k = 0; k < sz; ++k) v(k) = p[static_cast<std::size_t>(k)];
    const Eigen::MatrixXcd outer = v * v.adjoint();
    sum += outer;
    sq += outer.real().cwiseAbs2();
  }
  const double M = static_cast<double>(paths.size());
  EnsembleKernel out;
  out.mean = sum / M;
  const Eigen::MatrixXd var =
      ((sq / M) - out.mean.real().cwiseAbs2()).cwiseMax(0.0) * (M / (M - 1.0));
  out.std_error = (var / M).cwiseSqrt();
  return out;
}

void write_grid_csv(std::ostream& os, const Grid2& grid) {
  const auto old = os.precision(17);
  os << "x,y,re,im\n";
  for (std::size_t i = 0; i < grid.x.size(); ++i) {
    for (std::size_t j = 0; j < grid.y.size(); ++j) {
      const auto v = grid.values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
      os << grid.x[i] << ',' << grid.y[j] << ',' << v.real() << ',' << v.imag() << '\n';
    }
  }
  os.precision(old);
}

void write_density_csv(std::ostream& os, const std::vector<double>& x,
                       const std::vector<double>& f) {
  const auto old = os.precision(17);
  os << "x,f\n";
  for (std::size_t i = 0; i < x.size() && i < f.size(); ++i) os << x[i] << ',' << f[i] << '\n';
  os.precision(old);
}

}  // namespace hypergroup
