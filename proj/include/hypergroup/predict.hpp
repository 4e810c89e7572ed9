#pragma once

#include <complex>
#include <cstddef>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "hypergroup/measures.hpp"
#include "hypergroup/opseq.hpp"
#include "hypergroup/polysys.hpp"

namespace hypergroup {

/// Best linear predictor of X_{n+1} from X_0..X_n.
struct Predictor {
  std::size_t order = 0;
  std::vector<double> coefficients;  // b_{n,0..n}
  double log_error = 0.0;            // ln delta_n (-inf when exact)
  double error = 0.0;                // delta_n
  bool exact = false;                // measure supported on n+1 points
  std::shared_ptr<const MonicChain> chain;
};

/// Spectral route through the monic chain; needs d(0..2n+2).
Predictor one_step_from_moments(const std::vector<double>& d, const PolynomialSystem& sys,
                                std::size_t n);
Predictor one_step(const SpectralMeasure& mu, const PolynomialSystem& sys, std::size_t n);

/// max_j |sum_k b_k K(k,j) - K(n+1,j)| / sqrt(K(n+1,n+1) max_j K(j,j)).
double normal_equation_residual(const Predictor& p, const std::vector<double>& d,
                                const PolynomialSystem& sys);

/// Error of predicting X_{n+m} from X_0..X_n; needs d(0..2(n+m)).
double m_step_error_from_moments(const std::vector<double>& d, const PolynomialSystem& sys,
                                 std::size_t n, std::size_t m);
double m_step_error(const SpectralMeasure& mu, const PolynomialSystem& sys, std::size_t n,
                    std::size_t m);

/// delta_n from the Gram determinant ratio; needs d(0..2n+2).
double gram_error(const std::vector<double>& d, const PolynomialSystem& sys, std::size_t n);
/// delta_0 .. delta_{n_max} from one Cholesky factorization.
std::vector<double> gram_error_curve(const std::vector<double>& d, const PolynomialSystem& sys,
                                     std::size_t n_max);
/// D(X_j..X_{n+1}) / D(X_j..X_n) for j = 0..n, followed by D(X_{n+1}).
std::vector<double> gram_bound_chain(const std::vector<double>& d, const PolynomialSystem& sys,
                                     std::size_t n);

enum class TuranForm {
  Definition,   // h(n)(P_n^2 - (a_n/a_{n-1}) P_{n-1} P_{n+1})
  LowerShift,   // eliminates P_{n+1}; even systems
  UpperShift,   // eliminates P_{n-1}; even systems
};

double turan(const PolynomialSystem& sys, std::size_t n, double x,
             TuranForm form = TuranForm::Definition);

enum class HaarGrowth { Bounded, Polynomial, Exponential };
enum class Verdict { Deterministic, NotDeterministic, Inconclusive };

const char* haar_growth_name(HaarGrowth g);
const char* verdict_name(Verdict v);

struct DeterminismReport {
  std::string system;
  std::size_t probe = 0;
  HaarGrowth haar_growth = HaarGrowth::Bounded;
  double haar_exponent = 0.0;   // slope of ln h against ln n
  double haar_log_rate = 0.0;   // slope of ln h against n
  std::optional<bool> ks_pi;
  double ks_pi_value = 0.0;
  std::optional<bool> ks_mu;
  double ks_mu_value = 0.0;
  bool even = false;
  double a_limit = 0.0;
  double summability_partial = 0.0;
  double summability_tail = 0.0;
  double moment_tail = 0.0;     // max |d(n)| / d(0) over the last quarter of the probe
  Verdict verdict = Verdict::Inconclusive;
  std::string certificate;      // which criterion fired
  std::optional<double> rate_exponent;
};

DeterminismReport classify_determinism(const PolynomialSystem& sys, const SpectralMeasure& mu,
                                       std::size_t probe = 512);

struct MaPrediction {
  std::complex<double> value;
  double error = 0.0;
  std::vector<double> x_coefficients;  // weights of X_0..X_N
  std::vector<double> z_coefficients;  // weights of Z_0..Z_{q-1}
};

/// Predicts X_{N+1} of X_n = sum_k a_k sum_s g(n,k,s) Z_s from X_0..X_N and
/// Z_0..Z_{q-1}. Coefficients carry h(k) already; a_q must be 1.
MaPrediction ma_predict_with_info(const PolynomialSystem& sys, const std::vector<double>& a,
                                  const std::vector<std::complex<double>>& x,
                                  const std::vector<std::complex<double>>& z_init);

}  // namespace hypergroup
