#include "hypergroup/predict.hpp"

#include <Eigen/Cholesky>
#include <algorithm>
#include <cmath>
#include <sstream>

#include "hypergroup/error.hpp"
#include "hypergroup/hyperconv.hpp"
#include "hypergroup/structmat.hpp"

namespace hypergroup {

namespace {

void need_moments(const std::vector<double>& d, std::size_t count, const char* what) {
  if (d.size() < count) {
    std::ostringstream os;
    os << what << " needs " << count << " moments, got " << d.size();
    throw Error(ErrorKind::IndexOutOfRange, os.str());
  }
}

}  // namespace

Predictor one_step_from_moments(const std::vector<double>& d, const PolynomialSystem& sys,
                                std::size_t n) {
  need_moments(d, 2 * n + 3, "one-step prediction");
  auto chain = std::make_shared<MonicChain>(
      modified_chebyshev(std::vector<double>(d.begin(), d.begin() + 2 * n + 3), sys, n + 1));
  const ConnectionTriangle c = connection_from_measure(*chain, sys);
  const double log_sigma = sys.leading_coefficient_log(n + 1);
  const double sigma = std::exp(log_sigma);
  Predictor p;
  p.order = n;
  p.coefficients.resize(n + 1);
  for (std::size_t k = 0; k <= n; ++k) p.coefficients[k] = -sigma * c(n + 1, k);
  if (chain->top_degenerate) {
    p.exact = true;
    p.log_error = -INFINITY;
    p.error = 0.0;
  } else {
    p.log_error = log_sigma + 0.5 * chain->norm_sq_log(n + 1);
    p.error = std::exp(p.log_error);
  }
  p.chain = std::move(chain);
  return p;
}

Predictor one_step(const SpectralMeasure& mu, const PolynomialSystem& sys, std::size_t n) {
  return one_step_from_moments(moments(mu, sys, 2 * n + 2), sys, n);
}

double normal_equation_residual(const Predictor& p, const std::vector<double>& d,
                                const PolynomialSystem& sys) {
  const std::size_t n = p.order;
  double worst = 0.0, diag = 0.0;
  for (std::size_t j = 0; j <= n; ++j) {
    double lhs = 0.0;
    for (std::size_t k = 0; k <= n; ++k) lhs += p.coefficients[k] * translate(sys, d, k, j);
    const double rhs = translate(sys, d, n + 1, j);
    worst = std::max(worst, std::abs(lhs - rhs));
    diag = std::max(diag, translate(sys, d, j, j));
  }
  // |K(n+1, j)| never exceeds this, and it stays positive when the right side vanishes
  const double scale = std::sqrt(translate(sys, d, n + 1, n + 1) * diag);
  return scale > 0.0 ? worst / scale : worst;
}

double m_step_error_from_moments(const std::vector<double>& d, const PolynomialSystem& sys,
                                 std::size_t n, std::size_t m) {
  if (m == 0) throw Error(ErrorKind::InvalidArgument, "m must be at least 1");
  const std::size_t top = n + m;
  need_moments(d, 2 * top + 1, "m-step prediction");
  const MonicChain chain =
      modified_chebyshev(std::vector<double>(d.begin(), d.begin() + 2 * top + 1), sys, top);
  double acc = 0.0;
  for (std::size_t k = n + 1; k <= top; ++k) {
    if (k == top && chain.top_degenerate) continue;
    const double c = chain.sigma(k, top) * std::exp(-0.5 * chain.norm_sq_log(k));
    acc += c * c;
  }
  return std::sqrt(acc);
}

double m_step_error(const SpectralMeasure& mu, const PolynomialSystem& sys, std::size_t n,
                    std::size_t m) {
  return m_step_error_from_moments(moments(mu, sys, 2 * (n + m)), sys, n, m);
}

std::vector<double> gram_error_curve(const std::vector<double>& d, const PolynomialSystem& sys,
                                     std::size_t n_max) {
  need_moments(d, 2 * n_max + 3, "gram error");
  const StructuredMatrix M = build_matrix(d, sys, n_max + 1);
  Eigen::LLT<Eigen::MatrixXd> llt(M.entries);
  if (llt.info() != Eigen::Success) {
    throw DegenerateError(0, "Gram matrix is not positive definite");
  }
  const Eigen::MatrixXd L = llt.matrixL();
  // D_{k+1} / D_k = L_{k,k}^2
  std::vector<double> out(n_max + 1);
  for (std::size_t n = 0; n <= n_max; ++n) {
    out[n] = std::abs(L(static_cast<Eigen::Index>(n + 1), static_cast<Eigen::Index>(n + 1)));
  }
  return out;
}

double gram_error(const std::vector<double>& d, const PolynomialSystem& sys, std::size_t n) {
  return gram_error_curve(d, sys, n).back();
}

std::vector<double> gram_bound_chain(const std::vector<double>& d, const PolynomialSystem& sys,
                                     std::size_t n) {
  need_moments(d, 2 * n + 3, "gram bounds");
  const StructuredMatrix M = build_matrix(d, sys, n + 1);
  std::vector<double> out;
  for (std::size_t j = 0; j <= n; ++j) {
    const auto len = static_cast<Eigen::Index>(n + 2 - j);
    const auto start = static_cast<Eigen::Index>(j);
    Eigen::LLT<Eigen::MatrixXd> llt(M.entries.block(start, start, len, len));
    if (llt.info() != Eigen::Success) {
      throw DegenerateError(j, "Gram block is not positive definite");
    }
    const double l = llt.matrixLLT()(len - 1, len - 1);
    out.push_back(l * l);
  }
  out.push_back(M.entries(static_cast<Eigen::Index>(n + 1), static_cast<Eigen::Index>(n + 1)));
  return out;
}

double turan(const PolynomialSystem& sys, std::size_t n, double x, TuranForm form) {
  if (n == 0) throw Error(ErrorKind::InvalidArgument, "turan determinant needs n >= 1");
  const auto p = sys.evaluate_all(n + 1, x);
  const Recurrence rn = sys.recurrence(n);
  const Recurrence rm = sys.recurrence(n - 1);
  const double hn = haar_weight(sys, n);
  switch (form) {
    case TuranForm::Definition:
      return hn * (p[n] * p[n] - (rn.a / rm.a) * p[n - 1] * p[n + 1]);
    case TuranForm::LowerShift:
      if (!sys.is_even()) throw Error(ErrorKind::InvalidArgument, "form requires an even system");
      return hn * p[n] * p[n] + haar_weight(sys, n - 1) * p[n - 1] * p[n - 1] -
             (x / rm.a) * hn * p[n - 1] * p[n];
    case TuranForm::UpperShift: {
      if (!sys.is_even()) throw Error(ErrorKind::InvalidArgument, "form requires an even system");
      const double c_next = sys.recurrence(n + 1).c;
      return hn * p[n] * p[n] +
             haar_weight(sys, n + 1) * (rn.a * c_next / (rm.a * rn.c)) * p[n + 1] * p[n + 1] -
             hn * (rn.a * x / (rm.a * rn.c)) * p[n] * p[n + 1];
    }
  }
  return 0.0;
}

const char* haar_growth_name(HaarGrowth g) {
  switch (g) {
    case HaarGrowth::Bounded: return "bounded";
    case HaarGrowth::Polynomial: return "polynomial";
    case HaarGrowth::Exponential: return "exponential";
  }
  return "unknown";
}

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Deterministic: return "deterministic";
    case Verdict::NotDeterministic: return "not-deterministic";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "unknown";
}

DeterminismReport classify_determinism(const PolynomialSystem& sys, const SpectralMeasure& mu,
                                       std::size_t probe) {
  probe = std::max<std::size_t>(probe, 64);
  DeterminismReport r;
  r.system = sys.label();
  r.probe = probe;
  r.even = sys.is_even();

  const auto logh = haar_weight_logs(sys, probe);
  std::vector<double> ns, hs, lin_n, lin_h;
  for (std::size_t n = probe / 8; n <= probe; n += std::max<std::size_t>(1, probe / 64)) {
    ns.push_back(static_cast<double>(n));
    hs.push_back(std::exp(logh[n] - logh[probe / 8]));
  }
  r.haar_exponent = loglog_slope(ns, hs);
  r.haar_log_rate = (logh[probe] - logh[probe / 2]) / static_cast<double>(probe - probe / 2);
  if (r.haar_log_rate > 0.01) {
    r.haar_growth = HaarGrowth::Exponential;
  } else if (r.haar_exponent > 0.05) {
    r.haar_growth = HaarGrowth::Polynomial;
  } else {
    r.haar_growth = HaarGrowth::Bounded;
  }

  const Interval ds = sys.dual_interval();
  const bool ks_applicable = ds.lo >= -1.0 - 1e-12 && ds.hi <= 1.0 + 1e-12;
  if (ks_applicable && sys.has_density()) {
    const KsResult k = kolmogorov_szego_integral(SpectralMeasure::orthogonality(), sys);
    r.ks_pi = !k.diverged;
    r.ks_pi_value = k.value;
  }
  if (ks_applicable && (mu.is_atomic() || !mu.density_vs_pi() || sys.has_density())) {
    const KsResult k = kolmogorov_szego_integral(mu, sys);
    r.ks_mu = !k.diverged;
    r.ks_mu_value = k.value;
  }

  r.a_limit = sys.recurrence(probe).a;
  for (std::size_t n = 1; n < probe; ++n) {
    const Recurrence rp = sys.recurrence(n - 1), rn = sys.recurrence(n),
                     rx = sys.recurrence(n + 1);
    const double term = std::abs(rn.a * rx.c - rp.a * rn.c);
    r.summability_partial += term;
    if (n >= probe / 2) r.summability_tail += term;
  }

  const auto d = moments(mu, sys, probe);
  for (std::size_t n = probe - probe / 4; n <= probe; ++n) {
    r.moment_tail = std::max(r.moment_tail, std::abs(d[n]) / d[0]);
  }

  const bool unbounded = r.haar_growth != HaarGrowth::Bounded;
  if (r.ks_pi.value_or(false) && unbounded) {
    r.verdict = Verdict::Deterministic;
    r.certificate = "haar-unbounded-with-ks-pi";
    if (r.haar_growth == HaarGrowth::Polynomial) r.rate_exponent = -0.5 * r.haar_exponent;
  } else if (r.ks_pi.value_or(false) && !unbounded && r.ks_mu.has_value()) {
    if (*r.ks_mu) {
      r.verdict = Verdict::NotDeterministic;
      r.certificate = "bounded-haar-ks-mu";
    } else {
      r.verdict = Verdict::Deterministic;
      r.certificate = "bounded-haar-non-ks-mu";
    }
  } else if (r.even && r.a_limit > 0.5 + 1e-9 && r.a_limit < 1.0) {
    r.verdict = Verdict::Deterministic;
    r.certificate = "even-limit-above-half";
  } else if (r.even && std::abs(r.a_limit - 0.5) <= 1e-9 && unbounded &&
             r.summability_tail <= 1e-3 * std::max(r.summability_partial, 1e-300)) {
    r.verdict = Verdict::Deterministic;
    r.certificate = "turan-summable";
  } else if (unbounded && r.moment_tail < 1e-3) {
    r.verdict = Verdict::Deterministic;
    r.certificate = "moments-vanish";
  } else {
    r.verdict = Verdict::Inconclusive;
    r.certificate = "none";
  }
  return r;
}

MaPrediction ma_predict_with_info(const PolynomialSystem& sys, const std::vector<double>& a,
                                  const std::vector<std::complex<double>>& x,
                                  const std::vector<std::complex<double>>& z_init) {
  if (a.size() < 2) {
    throw Error(ErrorKind::InvalidArgument, "moving average order q must be at least 1");
  }
  const std::size_t q = a.size() - 1;
  if (std::abs(a[q] - 1.0) > 1e-15) throw Error(ErrorKind::InvalidArgument, "a_q must equal 1");
  if (z_init.size() != q) {
    throw Error(ErrorKind::InvalidArgument, "need exactly q initial innovations");
  }
  if (x.empty()) throw Error(ErrorKind::InvalidArgument, "need at least X_0");
  const std::size_t N = x.size() - 1;
  const std::size_t dim = N + 1 + q;
  const auto table = shared_table(sys);

  // w(n, s) = sum_k a_k g(n, k, s), s = 0 .. n + q
  auto weights = [&](std::size_t n) {
    std::vector<double> w(n + q + 1, 0.0);
    for (std::size_t k = 0; k <= q; ++k) {
      if (a[k] == 0.0) continue;
      auto g = table->get(n, k);
      const std::size_t lo = n > k ? n - k : k - n;
      for (std::size_t i = 0; i < g->size(); ++i) w[lo + i] += a[k] * (*g)[i];
    }
    return w;
  };

  // Z_s as linear combinations of (X_0..X_N, Z_0..Z_{q-1})
  std::vector<std::vector<double>> z(q + N + 1, std::vector<double>(dim, 0.0));
  for (std::size_t s = 0; s < q; ++s) z[s][N + 1 + s] = 1.0;
  for (std::size_t n = 0; n <= N; ++n) {
    const auto w = weights(n);
    std::vector<double> row(dim, 0.0);
    row[n] = 1.0;
    for (std::size_t s = 0; s < q + n; ++s) {
      if (w[s] == 0.0) continue;
      for (std::size_t j = 0; j < dim; ++j) row[j] -= w[s] * z[s][j];
    }
    const double lead = w[n + q];
    for (double& v : row) v /= lead;
    z[q + n] = std::move(row);
  }
  const auto w = weights(N + 1);
  std::vector<double> coeff(dim, 0.0);
  for (std::size_t s = 0; s <= q + N; ++s) {
    if (w[s] == 0.0) continue;
    for (std::size_t j = 0; j < dim; ++j) coeff[j] += w[s] * z[s][j];
  }
  MaPrediction out;
  out.x_coefficients.assign(coeff.begin(), coeff.begin() + static_cast<std::ptrdiff_t>(N + 1));
  out.z_coefficients.assign(coeff.begin() + static_cast<std::ptrdiff_t>(N + 1), coeff.end());
  out.value = 0.0;
  for (std::size_t j = 0; j <= N; ++j) out.value += out.x_coefficients[j] * x[j];
  for (std::size_t s = 0; s < q; ++s) out.value += out.z_coefficients[s] * z_init[s];
  out.error = table->coefficient(N + 1, q, N + 1 + q) / std::sqrt(haar_weight(sys, q + N + 1));
  return out;
}

}  // namespace hypergroup
