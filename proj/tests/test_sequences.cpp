#include <gtest/gtest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "hypergroup/error.hpp"
#include "hypergroup/hyperconv.hpp"
#include "hypergroup/kernels.hpp"
#include "hypergroup/measures.hpp"
#include "hypergroup/sequences.hpp"

namespace {

using namespace hypergroup;
using cd = std::complex<double>;

// Sample mean and standard error of Re X_n conj(X_m) across paths.
struct Moment {
  double mean = 0.0;
  double se = 0.0;
};

template <class Gen>
std::vector<std::vector<Moment>> ensemble(Gen&& gen, std::size_t paths, std::size_t N) {
  std::vector<std::vector<double>> s1(N + 1, std::vector<double>(N + 1)), s2 = s1;
  for (std::size_t p = 0; p < paths; ++p) {
    const Path x = gen(p);
    for (std::size_t n = 0; n <= N; ++n) {
      for (std::size_t m = 0; m <= N; ++m) {
        const double v = (x[n] * std::conj(x[m])).real();
        s1[n][m] += v;
        s2[n][m] += v * v;
      }
    }
  }
  std::vector<std::vector<Moment>> out(N + 1, std::vector<Moment>(N + 1));
  const double M = static_cast<double>(paths);
  for (std::size_t n = 0; n <= N; ++n) {
    for (std::size_t m = 0; m <= N; ++m) {
      const double mean = s1[n][m] / M;
      const double var = std::max(0.0, s2[n][m] / M - mean * mean);
      out[n][m] = {mean, std::sqrt(var / (M - 1))};
    }
  }
  return out;
}

void expect_within(const std::vector<std::vector<Moment>>& est, auto&& ref, double bands) {
  for (std::size_t n = 0; n < est.size(); ++n) {
    for (std::size_t m = 0; m < est.size(); ++m) {
      const double r = ref(n, m);
      EXPECT_LE(std::abs(est[n][m].mean - r), bands * est[n][m].se + 1e-12)
          << "(" << n << "," << m << ") mean " << est[n][m].mean << " ref " << r;
    }
  }
}

TEST(WhiteNoise, ChebyshevVariances) {
  const auto sys = PolynomialSystem::chebyshev_first();
  const auto est = ensemble([&](std::size_t p) { return white_noise(sys, 6, 1000 + p); }, 10000, 6);
  expect_within(est, [](std::size_t n, std::size_t m) { return n != m ? 0.0 : (n == 0 ? 1.0 : 0.5); }, 3.0);
}

TEST(WhiteNoise, DeterministicMetadata) {
  const auto sys = PolynomialSystem::jacobi(1.5, 0.5);
  const Path a = white_noise(sys, 20, 42), b = white_noise(sys, 20, 42), c = white_noise(sys, 20, 43);
  EXPECT_EQ(a.values, b.values);
  EXPECT_NE(a.values, c.values);
  EXPECT_EQ(a.seed, 42u);
  EXPECT_EQ(a.tag, "white_noise");
  EXPECT_EQ(a.size(), 21u);
}

TEST(MaSequence, OrderZeroIsWhiteNoise) {
  for (const auto& sys : {PolynomialSystem::chebyshev_second(), PolynomialSystem::cartier_dunau(2.0)}) {
    EXPECT_EQ(ma_sequence(sys, {1.0}, 15, 9).values, white_noise(sys, 15, 9).values);
  }
}

TEST(MaSequence, ChebyshevFirstOrderOne) {
  const auto sys = PolynomialSystem::chebyshev_first();
  const double a = 0.4;
  const Path z = white_noise(sys, 21, 3);
  const Path sub = ma_from_noise(sys, {a, 1.0}, z, 20, MaConvention::Subsumed);
  const Path haar = ma_from_noise(sys, {a, 1.0}, z, 20, MaConvention::HaarWeighted);
  EXPECT_NEAR(sub[0].real(), a * z[0].real() + z[1].real(), 1e-15);
  for (std::size_t n = 1; n <= 20; ++n) {
    EXPECT_NEAR(sub[n].real(), a * z[n].real() + 0.5 * z[n + 1].real() + 0.5 * z[n - 1].real(), 1e-15);
    EXPECT_NEAR(haar[n].real(), a * z[n].real() + z[n + 1].real() + z[n - 1].real(), 1e-15);
  }
  EXPECT_THROW(ma_from_noise(sys, {a, 1.0}, z, 21), Error);
  EXPECT_THROW(ma_sequence(sys, {}, 4, 1), Error);
}

// A X = noise map applied to unit innovations gives the exact covariance A diag(1/h) A^T.
TEST(MaSequence, ExactCovarianceMatchesSpectralMeasure) {
  for (const auto& sys : {PolynomialSystem::chebyshev_second(), PolynomialSystem::jacobi(1.5, 0.5),
                          PolynomialSystem::cartier_dunau(2.0), PolynomialSystem::bernstein_szego(0.2, 0.3)}) {
    for (auto conv : {MaConvention::HaarWeighted, MaConvention::Subsumed}) {
      const std::vector<double> a = {0.5, -0.3, 1.0};
      const std::size_t N = 12, len = N + a.size();
      const auto h = haar_weights(sys, len - 1);
      Eigen::MatrixXd A(N + 1, len);
      for (std::size_t j = 0; j < len; ++j) {
        Path e;
        e.values.assign(len, 0.0);
        e.values[j] = 1.0;
        const Path x = ma_from_noise(sys, a, e, N, conv);
        for (std::size_t n = 0; n <= N; ++n) A(n, j) = x[n].real();
      }
      Eigen::VectorXd var(len);
      for (std::size_t j = 0; j < len; ++j) var(j) = 1.0 / h[j];
      const Eigen::MatrixXd cov = A * var.asDiagonal() * A.transpose();
      const Kernel K = Kernel::stationary(sys, ma_spectral_measure(a, sys, conv), N);
      const Eigen::MatrixXd ref = K.matrix(N).real();
      EXPECT_LT((cov - ref).cwiseAbs().maxCoeff(), 1e-10 * ref.cwiseAbs().maxCoeff()) << sys.label();
    }
  }
}

TEST(MaSequence, ChebyshevSecondMonteCarlo) {
  // MA(1) with unit coefficients under U has spectral measure (1 + x)^2 pi.
  const auto sys = PolynomialSystem::chebyshev_second();
  SpectralMeasure target;
  target.set_density_vs_pi(Density::polynomial({1.0, 2.0, 1.0}));
  const Kernel K = Kernel::stationary(sys, target, 8);
  const auto est = ensemble(
      [&](std::size_t p) { return ma_sequence(sys, {1.0, 1.0}, 8, 500 + p, MaConvention::Subsumed); }, 10000, 8);
  expect_within(est, [&](std::size_t n, std::size_t m) { return K.value(n, m).real(); }, 4.0);
}

TEST(Harmonic, SingleAtomIsDeterministicShape) {
  const auto sys = PolynomialSystem::jacobi(0.5, 0.5);
  const double x0 = 0.6;
  const Path x = harmonic_sequence(sys, {x0}, Eigen::MatrixXcd::Identity(1, 1), 15, 8);
  ASSERT_NE(x[0], cd(0.0));
  for (std::size_t n = 0; n <= 15; ++n) EXPECT_NEAR(std::abs(x[n] - sys.evaluate(n, x0) * x[0]), 0.0, 1e-14);
  EXPECT_THROW(harmonic_sequence(sys, {0.1, 0.2}, Eigen::MatrixXcd::Identity(1, 1), 4, 1), Error);
}

TEST(Harmonic, DemoMatchesBimoments) {
  const auto sys = PolynomialSystem::chebyshev_first();
  const Eigen::MatrixXcd ref = bimoment_matrix(demo_harmonic_bimeasure(), sys, 10);
  const auto est = ensemble([](std::size_t p) { return demo_harmonic(10, 77000 + p); }, 10000, 10);
  expect_within(est, [&](std::size_t n, std::size_t m) { return ref(n, m).real(); }, 4.0);
  EXPECT_EQ(demo_harmonic(5, 1).tag, "demo_harmonic");
}

TEST(Harmonic, CorrelatedComplexAmplitudes) {
  const auto sys = PolynomialSystem::cartier_dunau(2.0);
  const std::vector<double> atoms = {-0.4, 0.1, 0.7};
  Eigen::MatrixXcd cov(3, 3);
  cov << 1.0, cd(0.3, 0.2), 0.1, cd(0.3, -0.2), 0.8, cd(0.0, 0.25), 0.1, cd(0.0, -0.25), 0.6;
  const Eigen::MatrixXcd ref = bimoment_matrix(harmonic_bimeasure(atoms, cov), sys, 6);
  const auto est = ensemble([&](std::size_t p) { return harmonic_sequence(sys, atoms, cov, 6, 9000 + p); }, 10000, 6);
  expect_within(est, [&](std::size_t n, std::size_t m) { return ref(n, m).real(); }, 4.0);
}

TEST(Averaging, ConstantInputIsFixed) {
  ClassicalPath one;
  one.first = -20;
  one.values.assign(41, 1.0);
  for (auto mode : {AveragingMode::ChebU, AveragingMode::ChebT, AveragingMode::ArithmeticMean}) {
    const Path x = average_classical(one, 19, mode);
    for (std::size_t n = 0; n <= 19; ++n) EXPECT_NEAR(x[n].real(), 1.0, 1e-14);
  }
}

TEST(Averaging, ChebUOfCharacterIsPolynomial) {
  const double theta = 0.7;
  ClassicalPath y;
  y.first = -30;
  for (long k = -30; k <= 30; ++k) y.values.push_back(std::polar(1.0, k * theta));
  const auto sys = averaging_system(AveragingMode::ChebU);
  const Path x = average_classical(y, 30, AveragingMode::ChebU);
  for (std::size_t n = 0; n <= 30; ++n) {
    EXPECT_NEAR(x[n].real(), sys.evaluate(n, std::cos(theta)), 1e-13);
    EXPECT_NEAR(x[n].imag(), 0.0, 1e-13);
  }
}

TEST(Averaging, WhiteNoiseVariance) {
  const auto white = [](long k) { return k == 0 ? 1.0 : 0.0; };
  for (std::size_t n = 0; n <= 20; ++n) {
    EXPECT_NEAR(averaged_covariance(AveragingMode::ChebU, white, n, n), 1.0 / (n + 1), 1e-15);
    for (std::size_t m = 0; m <= 20; ++m) {
      const double ref = (2.0 * std::min(n, m) + 1) / ((2.0 * n + 1) * (2.0 * m + 1));
      EXPECT_NEAR(averaged_covariance(AveragingMode::JacobiHalfMinusHalf, white, n, m), ref, 1e-15);
    }
  }
}

TEST(Averaging, StationaryForTargetSystem) {
  const std::vector<double> coeffs = {1.0, 0.6, -0.3, 0.2};
  const auto dY = [&](long k) { return classical_ma_covariance(coeffs, k); };
  for (auto mode : {AveragingMode::ChebU, AveragingMode::ChebT, AveragingMode::JacobiHalfMinusHalf,
                    AveragingMode::ArithmeticMean}) {
    const auto sys = averaging_system(mode);
    std::vector<double> d(25);
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = averaged_covariance(mode, dY, k, 0);
    for (std::size_t n = 0; n <= 12; ++n) {
      for (std::size_t m = 0; m <= 12; ++m) {
        EXPECT_NEAR(averaged_covariance(mode, dY, n, m), translate(sys, d, n, m), 1e-13)
            << static_cast<int>(mode) << " (" << n << "," << m << ")";
      }
    }
  }
}

TEST(Averaging, ClassicalMaMonteCarlo) {
  const std::vector<double> coeffs = {1.0, 0.5};
  const auto dY = [&](long k) { return classical_ma_covariance(coeffs, k); };
  for (auto mode : {AveragingMode::ChebU, AveragingMode::ChebT}) {
    const auto est = ensemble(
        [&](std::size_t p) { return average_classical(classical_ma(coeffs, 10, 3000 + p), 8, mode); }, 8000, 8);
    expect_within(est, [&](std::size_t n, std::size_t m) { return averaged_covariance(mode, dY, n, m); }, 4.5);
  }
}

TEST(Averaging, RandomWalkIncrements) {
  const ClassicalPath y = classical_random_walk(12, 5);
  EXPECT_EQ(y.at(0), cd(0.0));
  EXPECT_THROW(y.at(13), Error);
  const auto white = [](long k) { return k == 0 ? 1.0 : 0.0; };
  const auto est = ensemble(
      [](std::size_t p) { return average_classical(classical_random_walk(12, 6000 + p), 10, AveragingMode::JacobiHalfMinusHalf); },
      8000, 10);
  expect_within(est,
                [&](std::size_t n, std::size_t m) {
                  return averaged_covariance(AveragingMode::JacobiHalfMinusHalf, white, n, m);
                },
                4.5);
}

TEST(Averaging, WeightsSumToOne) {
  for (auto mode : {AveragingMode::ChebU, AveragingMode::ChebT, AveragingMode::JacobiHalfMinusHalf,
                    AveragingMode::ArithmeticMean}) {
    for (std::size_t n = 0; n <= 10; ++n) {
      double s = 0.0;
      for (const auto& [k, w] : averaging_weights(mode, n)) s += w;
      EXPECT_NEAR(s, 1.0, 1e-15);
    }
  }
}

TEST(DensityCoefficients, FirstMomentOfTiltedDensity) {
  const auto sys = PolynomialSystem::chebyshev_first();
  const std::size_t count = 40000;
  const auto flat = density_coefficients(sample_density(sys, Density::constant(1.0), count, 1), sys, 4);
  const auto tilt = density_coefficients(sample_density(sys, Density::polynomial({1.0, 1.0}), count, 2), sys, 4);
  const double se = 1.0 / std::sqrt(static_cast<double>(count));
  EXPECT_EQ(flat[0], 1.0);
  for (std::size_t k = 1; k <= 4; ++k) EXPECT_LT(std::abs(flat[k]), 4 * se) << k;
  EXPECT_NEAR(tilt[1], 0.5, 4 * se);
  EXPECT_THROW(density_coefficients({}, sys, 2), Error);
  EXPECT_THROW(sample_density(sys, Density::polynomial({-1.0}), 10, 1), Error);
}

TEST(DensityCoefficients, StationaryCovariance) {
  // Single-draw coefficients C_k = P_k(X) have E C_n C_m = int P_n P_m f dpi.
  const auto sys = PolynomialSystem::jacobi(0.5, 0.5);
  const Density f = Density::polynomial({1.0, 0.5});
  const auto draws = sample_density(sys, f, 20000, 11);
  SpectralMeasure mu;
  mu.set_density_vs_pi(f);
  const Kernel K = Kernel::stationary(sys, mu, 5);
  const auto est = ensemble(
      [&](std::size_t p) {
        Path x;
        for (double c : density_coefficients({draws[p]}, sys, 5)) x.values.emplace_back(c);
        return x;
      },
      draws.size(), 5);
  expect_within(est, [&](std::size_t n, std::size_t m) { return K.value(n, m).real(); }, 4.5);
}

TEST(SpectralSequence, MixedMeasureMonteCarlo) {
  const auto sys = PolynomialSystem::bernstein_szego(0.2, 0.3);
  SpectralMeasure mu;
  mu.set_density_vs_pi(Density::polynomial({1.0, -0.5}));
  mu.add_atom(0.25, 0.3);
  const Kernel K = Kernel::stationary(sys, mu, 8);
  const auto est = ensemble([&](std::size_t p) { return spectral_sequence(sys, mu, 8, 123 + p); }, 10000, 8);
  expect_within(est, [&](std::size_t n, std::size_t m) { return K.value(n, m).real(); }, 4.0);
}

TEST(RadialTree, Examples) {
  const double q = 2.0;
  const auto sys = PolynomialSystem::cartier_dunau(q);
  const Path a = radial_tree_sequence(q, SpectralMeasure::point(0.3), 12, 4);
  for (std::size_t n = 0; n <= 12; ++n) EXPECT_NEAR(std::abs(a[n] - sys.evaluate(n, 0.3) * a[0]), 0.0, 1e-14);
  EXPECT_EQ(a.tag, "radial_tree");

  const auto h = haar_weights(sys, 8);
  const auto est = ensemble(
      [&](std::size_t p) { return radial_tree_sequence(q, SpectralMeasure::orthogonality(), 8, 700 + p); }, 10000, 8);
  expect_within(est, [&](std::size_t n, std::size_t m) { return n == m ? 1.0 / h[n] : 0.0; }, 4.0);
}

TEST(Truncate, ZeroesOutsideIndexSet) {
  const Path x = white_noise(PolynomialSystem::chebyshev_first(), 9, 2);
  const Path t = truncate(x, {1, 4, 7, 40});
  for (std::size_t n = 0; n <= 9; ++n) EXPECT_EQ(t[n], (n == 1 || n == 4 || n == 7) ? x[n] : cd(0.0));
  EXPECT_EQ(t.tag, "white_noise_truncated");
}

TEST(PathCsv, RoundTripIsExact) {
  Eigen::MatrixXcd cov(2, 2);
  cov << 1.0, cd(0.0, 0.5), cd(0.0, -0.5), 1.0;
  Path x = harmonic_sequence(PolynomialSystem::chebyshev_first(), {0.2, -0.5}, cov, 14, 21);
  x.values[3] = cd(1.0 / 3.0, -2.0 / 7.0);
  std::stringstream ss;
  write_path_csv(ss, x);
  EXPECT_EQ(ss.str().substr(0, 8), "n,re,im\n");
  EXPECT_EQ(read_path_csv(ss).values, x.values);
  std::stringstream bad("n,re,im\n0,1,0\n2,1,0\n");
  EXPECT_THROW(read_path_csv(bad), Error);
  std::stringstream empty("n,re,im\n");
  EXPECT_THROW(read_path_csv(empty), Error);
}

}  // namespace
