#include "hypergroup/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numbers>
#include <ostream>
#include <random>
#include <sstream>

#include "hypergroup/error.hpp"
#include "hypergroup/hyperconv.hpp"

namespace hypergroup {

Path white_noise(const PolynomialSystem& sys, std::size_t N, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  const auto logh = haar_weight_logs(sys, N);
  Path p;
  p.seed = seed;
  p.tag = "white_noise";
  p.values.resize(N + 1);
  for (std::size_t n = 0; n <= N; ++n) p.values[n] = normal(gen) * std::exp(-0.5 * logh[n]);
  return p;
}

namespace {

std::vector<double> ma_weights(const std::vector<double>& a, const PolynomialSystem& sys,
                               MaConvention convention) {
  if (a.empty()) throw Error(ErrorKind::InvalidArgument, "moving average needs a_0");
  std::vector<double> c = a;
  if (convention == MaConvention::HaarWeighted) {
    const auto h = haar_weights(sys, a.size() - 1);
    for (std::size_t k = 0; k < c.size(); ++k) c[k] *= h[k];
  }
  return c;
}

}  // namespace

Path ma_from_noise(const PolynomialSystem& sys, const std::vector<double>& a, const Path& noise,
                   std::size_t N, MaConvention convention) {
  const auto c = ma_weights(a, sys, convention);
  const std::size_t q = c.size() - 1;
  if (noise.size() < N + q + 1) {
    throw Error(ErrorKind::IndexOutOfRange, "innovation sequence shorter than N + q + 1");
  }
  const auto table = shared_table(sys);
  Path p;
  p.seed = noise.seed;
  p.tag = "ma";
  p.values.assign(N + 1, 0.0);
  for (std::size_t n = 0; n <= N; ++n) {
    for (std::size_t k = 0; k <= q; ++k) {
      if (c[k] == 0.0) continue;
      const auto g = table->get(n, k);
      const std::size_t lo = n > k ? n - k : k - n;
      for (std::size_t i = 0; i < g->size(); ++i) p.values[n] += c[k] * (*g)[i] * noise[lo + i];
    }
  }
  return p;
}

Path ma_sequence(const PolynomialSystem& sys, const std::vector<double>& a, std::size_t N,
                 std::uint64_t seed, MaConvention convention) {
  if (a.empty()) throw Error(ErrorKind::InvalidArgument, "moving average needs a_0");
  return ma_from_noise(sys, a, white_noise(sys, N + a.size() - 1, seed), N, convention);
}

SpectralMeasure ma_spectral_measure(const std::vector<double>& a, const PolynomialSystem& sys,
                                    MaConvention convention) {
  SpectralMeasure mu;
  mu.set_density_vs_pi(Density::moving_average(ma_weights(a, sys, convention)));
  return mu;
}

namespace {

bool is_real(const Eigen::MatrixXcd& m) { return m.imag().cwiseAbs().maxCoeff() == 0.0; }

// Square root factor F with F F^* = cov, negative eigenvalues clipped.
Eigen::MatrixXcd covariance_root(const Eigen::MatrixXcd& cov) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(cov);
  const Eigen::VectorXd lambda = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return solver.eigenvectors() * lambda.asDiagonal();
}

}  // namespace

Path harmonic_sequence(const PolynomialSystem& sys, const std::vector<double>& atoms,
                       const Eigen::MatrixXcd& cov, std::size_t N, std::uint64_t seed) {
  const auto s = static_cast<Eigen::Index>(atoms.size());
  if (s == 0 || cov.rows() != s || cov.cols() != s) {
    throw Error(ErrorKind::InvalidArgument, "covariance must be square of the atom count");
  }
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXcd xi(s);
  const bool real = is_real(cov);
  for (Eigen::Index k = 0; k < s; ++k) {
    if (real) {
      xi(k) = normal(gen);
    } else {
      const double re = normal(gen), im = normal(gen);
      xi(k) = std::complex<double>(re, im) / std::numbers::sqrt2;
    }
  }
  Eigen::VectorXcd amp;
  if (real) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(cov.real());
    const Eigen::VectorXd lambda = solver.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    const Eigen::MatrixXd root = solver.eigenvectors() * lambda.asDiagonal();
    amp = (root * xi.real()).cast<std::complex<double>>();
  } else {
    amp = covariance_root(cov) * xi;
  }
  Path p;
  p.seed = seed;
  p.tag = "harmonic";
  p.values.assign(N + 1, 0.0);
  std::vector<double> pk(N + 1);
  for (Eigen::Index k = 0; k < s; ++k) {
    sys.evaluate_all(N, atoms[static_cast<std::size_t>(k)], pk.data());
    for (std::size_t n = 0; n <= N; ++n) p.values[n] += pk[n] * amp(k);
  }
  return p;
}

BiMeasure harmonic_bimeasure(const std::vector<double>& atoms, const Eigen::MatrixXcd& cov) {
  std::vector<BiAtom> out;
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    for (std::size_t l = 0; l < atoms.size(); ++l) {
      const auto w = cov(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(l));
      if (w != 0.0) out.push_back({atoms[k], atoms[l], w});
    }
  }
  return BiMeasure::from_atoms(std::move(out));
}

Path demo_harmonic(std::size_t N, std::uint64_t seed) {
  Path p = harmonic_sequence(PolynomialSystem::chebyshev_first(), {-1.0 / 3.0, 0.5},
                             Eigen::MatrixXcd::Identity(2, 2), N, seed);
  p.tag = "demo_harmonic";
  return p;
}

BiMeasure demo_harmonic_bimeasure() {
  return harmonic_bimeasure({-1.0 / 3.0, 0.5}, Eigen::MatrixXcd::Identity(2, 2));
}

std::complex<double> ClassicalPath::at(long k) const {
  const long i = k - first;
  if (i < 0 || i >= static_cast<long>(values.size())) {
    std::ostringstream os;
    os << "classical index " << k << " outside [" << first << ", "
       << first + static_cast<long>(values.size()) - 1 << "]";
    throw Error(ErrorKind::IndexOutOfRange, os.str());
  }
  return values[static_cast<std::size_t>(i)];
}

ClassicalPath classical_ma(const std::vector<double>& coeffs, std::size_t L, std::uint64_t seed) {
  if (coeffs.empty()) throw Error(ErrorKind::InvalidArgument, "classical MA needs coefficients");
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  const long lo = -static_cast<long>(L);
  const std::size_t q = coeffs.size() - 1;
  // eps_{lo - q} .. eps_{L}
  std::vector<double> eps(2 * L + 1 + q);
  for (double& e : eps) e = normal(gen);
  ClassicalPath y;
  y.first = lo;
  y.values.resize(2 * L + 1);
  for (std::size_t i = 0; i < y.values.size(); ++i) {
    double acc = 0.0;
    for (std::size_t j = 0; j <= q; ++j) acc += coeffs[j] * eps[i + q - j];
    y.values[i] = acc;
  }
  return y;
}

double classical_ma_covariance(const std::vector<double>& coeffs, long lag) {
  const std::size_t shift = static_cast<std::size_t>(std::abs(lag));
  double acc = 0.0;
  for (std::size_t j = 0; j + shift < coeffs.size(); ++j) acc += coeffs[j] * coeffs[j + shift];
  return acc;
}

ClassicalPath classical_random_walk(std::size_t L, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  const long lo = -static_cast<long>(L);
  ClassicalPath y;
  y.first = lo;
  y.values.assign(2 * L + 1, 0.0);
  std::vector<double> eps(2 * L + 1);
  for (double& e : eps) e = normal(gen);
  // values[i] is Y_{lo + i}; eps[i] is the increment into Y_{lo + i}
  const std::size_t zero = L;
  for (std::size_t i = zero + 1; i < y.values.size(); ++i) y.values[i] = y.values[i - 1] + eps[i];
  for (std::size_t i = zero; i-- > 0;) y.values[i] = y.values[i + 1] - eps[i + 1];
  return y;
}

PolynomialSystem averaging_system(AveragingMode mode) {
  switch (mode) {
    case AveragingMode::ChebU: return PolynomialSystem::chebyshev_second();
    case AveragingMode::ChebT: return PolynomialSystem::chebyshev_first();
    case AveragingMode::JacobiHalfMinusHalf:
    case AveragingMode::ArithmeticMean: return PolynomialSystem::jacobi(0.5, -0.5);
  }
  return PolynomialSystem::chebyshev_first();
}

std::vector<std::pair<long, double>> averaging_weights(AveragingMode mode, std::size_t n) {
  const long ln = static_cast<long>(n);
  std::vector<std::pair<long, double>> w;
  switch (mode) {
    case AveragingMode::ChebU:
      for (long k = 0; k <= ln; ++k) w.emplace_back(ln - 2 * k, 1.0 / static_cast<double>(n + 1));
      break;
    case AveragingMode::ChebT:
      if (n == 0) {
        w.emplace_back(0, 1.0);
      } else {
        w.emplace_back(-ln, 0.5);
        w.emplace_back(ln, 0.5);
      }
      break;
    case AveragingMode::JacobiHalfMinusHalf:
      for (long k = -ln + 1; k <= ln + 1; ++k) w.emplace_back(k, 1.0 / static_cast<double>(2 * n + 1));
      break;
    case AveragingMode::ArithmeticMean:
      for (long k = -ln; k <= ln; ++k) w.emplace_back(k, 1.0 / static_cast<double>(2 * n + 1));
      break;
  }
  return w;
}

Path average_classical(const ClassicalPath& Y, std::size_t N, AveragingMode mode) {
  Path p;
  p.tag = "average_classical";
  p.values.resize(N + 1);
  for (std::size_t n = 0; n <= N; ++n) {
    if (mode == AveragingMode::JacobiHalfMinusHalf) {
      const long ln = static_cast<long>(n);
      p.values[n] = (Y.at(ln + 1) - Y.at(-ln)) / static_cast<double>(2 * n + 1);
      continue;
    }
    std::complex<double> acc = 0.0;
    for (const auto& [k, alpha] : averaging_weights(mode, n)) acc += alpha * Y.at(k);
    p.values[n] = acc;
  }
  return p;
}

double averaged_covariance(AveragingMode mode, const std::function<double(long)>& d_Y,
                           std::size_t n, std::size_t m) {
  const auto wn = averaging_weights(mode, n);
  const auto wm = averaging_weights(mode, m);
  double acc = 0.0;
  for (const auto& [j, a] : wn) {
    for (const auto& [l, b] : wm) acc += a * b * d_Y(j - l);
  }
  return acc;
}

std::vector<double> sample_density(const PolynomialSystem& sys, const Density& f,
                                   std::size_t count, std::uint64_t seed, std::size_t grid) {
  if (!sys.has_density()) {
    throw Error(ErrorKind::NoDensity, "sampling needs the orthogonality density of " + sys.label());
  }
  if (grid < 2) throw Error(ErrorKind::InvalidArgument, "sampling grid needs at least 2 cells");
  const double step = std::numbers::pi / static_cast<double>(grid);
  std::vector<double> cdf(grid + 1, 0.0);
  for (std::size_t i = 0; i < grid; ++i) {
    const double t = (static_cast<double>(i) + 0.5) * step;
    const double x = std::cos(t);
    const double fx = f(x, sys);
    if (fx < 0.0) throw Error(ErrorKind::InvalidArgument, "sampling density must be nonnegative");
    cdf[i + 1] = cdf[i] + fx * sys.orthogonality_density(x) * std::sin(t) * step;
  }
  const double total = cdf[grid];
  if (!(total > 0.0)) throw Error(ErrorKind::MeasureDegenerate, "sampling density has no mass");
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> uniform(0.0, total);
  std::vector<double> out(count);
  for (double& x : out) {
    const double u = uniform(gen);
    auto it = std::upper_bound(cdf.begin() + 1, cdf.end(), u);
    const std::size_t cell = std::min<std::size_t>(static_cast<std::size_t>(it - cdf.begin()) - 1,
                                                   grid - 1);
    const double width = cdf[cell + 1] - cdf[cell];
    const double frac = width > 0.0 ? (u - cdf[cell]) / width : 0.5;
    x = std::cos((static_cast<double>(cell) + frac) * step);
  }
  return out;
}

std::vector<double> density_coefficients(const std::vector<double>& samples,
                                         const PolynomialSystem& sys, std::size_t k_max) {
  if (samples.empty()) throw Error(ErrorKind::InvalidArgument, "no samples");
  std::vector<double> c(k_max + 1, 0.0), p(k_max + 1);
  for (double x : samples) {
    sys.evaluate_all(k_max, x, p.data());
    for (std::size_t k = 0; k <= k_max; ++k) c[k] += p[k];
  }
  for (double& v : c) v /= static_cast<double>(samples.size());
  return c;
}

Path spectral_sequence(const PolynomialSystem& sys, const SpectralMeasure& mu, std::size_t N,
                       std::uint64_t seed, std::size_t nodes) {
  if (nodes == 0) nodes = std::max<std::size_t>(mu.quadrature_nodes(), N + 48);
  const auto atoms = atomize(mu, sys, nodes);
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  Path p;
  p.seed = seed;
  p.tag = "spectral";
  p.values.assign(N + 1, 0.0);
  std::vector<double> pk(N + 1);
  for (const Atom& a : atoms) {
    const double amp = std::sqrt(std::max(a.mass, 0.0)) * normal(gen);
    if (amp == 0.0) continue;
    sys.evaluate_all(N, a.x, pk.data());
    for (std::size_t n = 0; n <= N; ++n) p.values[n] += pk[n] * amp;
  }
  return p;
}

Path radial_tree_sequence(double q, const SpectralMeasure& mu, std::size_t N,
                          std::uint64_t seed, std::size_t nodes) {
  Path p = spectral_sequence(PolynomialSystem::cartier_dunau(q), mu, N, seed, nodes);
  p.tag = "radial_tree";
  return p;
}

Path truncate(const Path& path, const std::vector<std::size_t>& index_set) {
  Path out = path;
  out.tag = path.tag + "_truncated";
  std::vector<bool> keep(path.size(), false);
  for (std::size_t i : index_set) {
    if (i < keep.size()) keep[i] = true;
  }
  for (std::size_t n = 0; n < out.size(); ++n) {
    if (!keep[n]) out.values[n] = 0.0;
  }
  return out;
}

void write_path_csv(std::ostream& os, const Path& path) {
  const auto old = os.precision(17);
  os << "n,re,im\n";
  for (std::size_t n = 0; n < path.size(); ++n) {
    os << n << ',' << path[n].real() << ',' << path[n].imag() << '\n';
  }
  os.precision(old);
}

Path read_path_csv(std::istream& is) {
  Path p;
  std::string line;
  bool header = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.find_first_of("0123456789") != 0) continue;
    }
    std::istringstream row(line);
    std::size_t n = 0;
    double re = 0.0, im = 0.0;
    char c1 = 0, c2 = 0;
    if (!(row >> n >> c1 >> re >> c2 >> im) || c1 != ',' || c2 != ',' || n != p.size()) {
      throw Error(ErrorKind::InvalidArgument, "malformed path row: " + line);
    }
    p.values.emplace_back(re, im);
  }
  if (p.values.empty()) throw Error(ErrorKind::InvalidArgument, "empty path");
  return p;
}

}  // namespace hypergroup
