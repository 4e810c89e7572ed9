#include "hypergroup/structmat.hpp"

#include <chrono>
#include <cmath>
#include <sstream>

#include "hypergroup/error.hpp"
#include "hypergroup/hyperconv.hpp"

namespace hypergroup {

namespace {

using Idx = Eigen::Index;

Idx ix(std::size_t i) { return static_cast<Idx>(i); }

}  // namespace

Eigen::MatrixXd LdlFactors::inverse() const {
  return L.transpose() * D.asDiagonal() * L;
}

Eigen::MatrixXd LdlFactors::monic_L() const {
  Eigen::MatrixXd out = L;
  for (Idx k = 0; k < L.rows(); ++k) {
    const double lead = log_lead.empty() ? 0.0 : log_lead[static_cast<std::size_t>(k)];
    out.row(k) *= std::exp(-lead);
  }
  return out;
}

Eigen::VectorXd LdlFactors::monic_D() const {
  Eigen::VectorXd out = D;
  for (Idx k = 0; k < D.size(); ++k) {
    const double lead = log_lead.empty() ? 0.0 : log_lead[static_cast<std::size_t>(k)];
    out[k] *= std::exp(2.0 * lead);
  }
  return out;
}

StructuredMatrix build_matrix(const std::vector<double>& d, const PolynomialSystem& sys,
                              std::size_t n) {
  if (d.size() < 2 * n + 1) {
    std::ostringstream os;
    os << "order " << n << " needs " << 2 * n + 1 << " moments, got " << d.size();
    throw Error(ErrorKind::IndexOutOfRange, os.str());
  }
  StructuredMatrix M;
  M.entries.resize(ix(n + 1), ix(n + 1));
  M.moments = std::vector<double>(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(2 * n + 1));
  if (sys.family() == Family::ChebyshevFirst) {
    for (std::size_t k = 0; k <= n; ++k) {
      for (std::size_t l = 0; l <= n; ++l) {
        const std::size_t diff = k > l ? k - l : l - k;
        M.entries(ix(k), ix(l)) = k == 0 || l == 0 ? d[k + l] : 0.5 * (d[diff] + d[k + l]);
      }
    }
    return M;
  }
  for (std::size_t l = 0; l <= n; ++l) {
    const auto rows = linearization_rows(sys, l);
    for (std::size_t k = 0; k <= l; ++k) {
      double acc = 0.0;
      for (std::size_t i = 0; i < rows[k].size(); ++i) acc += rows[k][i] * d[l - k + i];
      M.entries(ix(k), ix(l)) = acc;
      M.entries(ix(l), ix(k)) = acc;
    }
  }
  return M;
}

std::vector<double> moments_from_matrix(const StructuredMatrix& M, const PolynomialSystem& sys,
                                        bool verify, std::uint64_t* ops) {
  const std::size_t n = M.order();
  std::vector<double> d(2 * n + 1);
  std::uint64_t count = 0;
  for (std::size_t k = 0; k <= n; ++k) d[k] = M.entries(ix(k), 0);  // P_0 = 1
  if (sys.family() == Family::ChebyshevFirst) {
    for (std::size_t k = 1; k <= n; ++k) {
      d[n + k] = 2.0 * M.entries(ix(n), ix(k)) - d[n - k];
      ++count;
    }
  } else if (n > 0) {
    const auto rows = linearization_rows(sys, n, &count);
    for (std::size_t k = 1; k <= n; ++k) {
      const auto& g = rows[k];  // s = n-k .. n+k
      double acc = M.entries(ix(n), ix(k));
      for (std::size_t i = 0; i + 1 < g.size(); ++i) acc -= g[i] * d[n - k + i];
      d[n + k] = acc / g.back();
      count += g.size();
    }
  }
  if (ops) *ops += count;
  if (verify) {
    const StructuredMatrix R = build_matrix(d, sys, n);
    const double scale = std::max(M.entries.cwiseAbs().maxCoeff(), 1e-300);
    const double asym = (M.entries - M.entries.transpose()).cwiseAbs().maxCoeff();
    const double resid = (R.entries - M.entries).cwiseAbs().maxCoeff();
    if (asym > 1e-12 * scale || resid > 1e-9 * scale) {
      std::ostringstream os;
      os << "structural residual " << resid / scale << " (relative), asymmetry "
         << asym / scale;
      throw Error(ErrorKind::InconsistentMatrix, os.str());
    }
  }
  return d;
}

LdlFactors ldl_decompose(const StructuredMatrix& M, const PolynomialSystem& sys) {
  const std::size_t n = M.order();
  LdlFactors f;
  std::uint64_t ops = 0;

  // step 1: moments
  const std::vector<double> d = moments_from_matrix(M, sys, false, &ops);

  std::vector<XRecurrence> xr(2 * n + 2);
  for (std::size_t l = 0; l < xr.size(); ++l) xr[l] = sys.x_recurrence(l);
  auto A = [&](std::ptrdiff_t l) { return l < 0 ? 0.0 : xr[static_cast<std::size_t>(l)].next; };

  // step 2: tau[k][j] = sigma_k(pi) int phi_k P_{k+j} dmu, l = k .. 2n-k
  std::vector<std::vector<double>> tau(n + 1);
  std::vector<double> alpha(n + 1, 0.0), ratio(n + 1, 0.0);
  tau[0] = d;
  const double tau00 = d[0];
  if (!(tau00 > 0.0)) throw DegenerateError(0, "d(0) must be positive");
  for (std::size_t k = 0; k <= n; ++k) {
    if (k >= 1) {
      const auto& p1 = tau[k - 1];
      const double al = alpha[k - 1];
      const double beta_term = k >= 2 ? A(static_cast<std::ptrdiff_t>(k) - 2) * ratio[k - 1] : 0.0;
      const double inv = 1.0 / A(static_cast<std::ptrdiff_t>(k) - 1);
      const std::size_t count = 2 * n - 2 * k + 1;
      std::vector<double> row(count);
      double diag_scale = 0.0;
      for (std::size_t j = 0; j < count; ++j) {
        const std::size_t l = k + j;
        const double t1 = xr[l].next * p1[j + 2];
        const double t2 = (xr[l].same - al) * p1[j + 1];
        const double t3 = xr[l].prev * p1[j];
        const double t4 = k >= 2 ? beta_term * tau[k - 2][j + 2] : 0.0;
        row[j] = (t1 + t2 + t3 - t4) * inv;
        if (j == 0) diag_scale = (std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4)) * inv;
      }
      ops += 5 * count + 2;
      tau[k] = std::move(row);
      const double tkk = tau[k][0];
      if (!(tkk > 1e-11 * diag_scale) || !std::isnormal(tkk)) {
        std::ostringstream os;
        os << "pivot " << k << " vanished (" << tkk << "); factorization complete to depth " << k;
        throw DegenerateError(k, os.str());
      }
      ratio[k] = tkk / tau[k - 1][0];
    }
    if (k < n) {
      double a = xr[k].same + xr[k].next * tau[k][1] / tau[k][0];
      if (k >= 1) a -= A(static_cast<std::ptrdiff_t>(k) - 1) * tau[k - 1][1] / tau[k - 1][0];
      alpha[k] = a;
      ops += 4;
    }
  }

  // step 3: rows of L
  f.L = Eigen::MatrixXd::Zero(ix(n + 1), ix(n + 1));
  f.L(0, 0) = 1.0;
  std::vector<double> cur(n + 2, 0.0), prev(n + 2, 0.0), next(n + 2, 0.0);
  cur[0] = 1.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double inv = 1.0 / xr[k].next;
    const double beta_term = k >= 1 ? A(static_cast<std::ptrdiff_t>(k) - 1) * ratio[k] : 0.0;
    for (std::size_t l = 0; l <= k + 1; ++l) {
      double v = (xr[l].same - alpha[k]) * cur[l] + xr[l + 1].prev * cur[l + 1];
      if (l >= 1) v += xr[l - 1].next * cur[l - 1];
      if (k >= 1) v -= beta_term * prev[l];
      next[l] = v * inv;
    }
    ops += 5 * (k + 2) + 2;
    for (std::size_t l = 0; l <= k + 1; ++l) f.L(ix(k + 1), ix(l)) = next[l];
    prev.swap(cur);
    cur.swap(next);
    std::fill(next.begin(), next.end(), 0.0);
  }

  f.D.resize(ix(n + 1));
  for (std::size_t k = 0; k <= n; ++k) f.D[ix(k)] = 1.0 / tau[k][0];
  ops += n + 1;
  f.log_lead = sys.leading_coefficient_logs(n);
  f.ops = ops;
  return f;
}

Eigen::VectorXd solve(const LdlFactors& f, const Eigen::VectorXd& b) {
  const Eigen::VectorXd y = f.L.triangularView<Eigen::Lower>() * b;
  const Eigen::VectorXd z = f.D.cwiseProduct(y);
  return f.L.transpose().triangularView<Eigen::Upper>() * z;
}

Eigen::VectorXd solve(const StructuredMatrix& M, const PolynomialSystem& sys,
                      const Eigen::VectorXd& b) {
  if (b.size() != M.entries.rows()) {
    throw Error(ErrorKind::InvalidArgument, "right-hand side has the wrong length");
  }
  return solve(ldl_decompose(M, sys), b);
}

LdlFactors brute_force_factor(const Eigen::MatrixXd& M) {
  const Idx n = M.rows();
  if (M.cols() != n) throw Error(ErrorKind::InvalidArgument, "matrix must be square");
  std::uint64_t ops = 0;
  // M = W diag(piv) W^T, W unit lower triangular; row-major keeps the inner loops contiguous
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> W =
      Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd piv(n);
  Eigen::VectorXd v(n);
  for (Idx j = 0; j < n; ++j) {
    double dj = M(j, j);
    for (Idx k = 0; k < j; ++k) {
      v[k] = W(j, k) * piv[k];
      dj -= W(j, k) * v[k];
    }
    ops += 2 * static_cast<std::uint64_t>(j);
    if (!(dj > 0.0)) {
      std::ostringstream os;
      os << "dense pivot " << j << " is " << dj;
      throw DegenerateError(static_cast<std::size_t>(j), os.str());
    }
    piv[j] = dj;
    for (Idx i = j + 1; i < n; ++i) {
      double s = M(i, j);
      for (Idx k = 0; k < j; ++k) s -= W(i, k) * v[k];
      W(i, j) = s / dj;
    }
    ops += static_cast<std::uint64_t>(n - j - 1) * static_cast<std::uint64_t>(j + 1);
  }
  // L = W^{-1}, column by column: W x = e_j
  Eigen::MatrixXd L = Eigen::MatrixXd::Identity(n, n);
  for (Idx j = 0; j < n; ++j) {
    for (Idx i = j + 1; i < n; ++i) {
      double s = 0.0;
      for (Idx k = j; k < i; ++k) s -= W(i, k) * L(k, j);
      L(i, j) = s;
      ops += static_cast<std::uint64_t>(i - j);
    }
  }
  LdlFactors f;
  f.L = std::move(L);
  f.D = piv.cwiseInverse();
  f.ops = ops + static_cast<std::uint64_t>(n);
  return f;
}

BenchRow bench_factorizations(const std::vector<double>& d, const PolynomialSystem& sys,
                              std::size_t n, bool run_dense) {
  using clock = std::chrono::steady_clock;
  const StructuredMatrix M = build_matrix(d, sys, n);
  BenchRow row;
  row.n = n;
  auto t0 = clock::now();
  const LdlFactors fast = ldl_decompose(M, sys);
  auto t1 = clock::now();
  row.ops_fast = fast.ops;
  row.t_fast_ns = std::chrono::duration<double, std::nano>(t1 - t0).count();
  if (run_dense) {
    t0 = clock::now();
    const LdlFactors dense = brute_force_factor(M.entries);
    t1 = clock::now();
    row.ops_dense = dense.ops;
    row.t_dense_ns = std::chrono::duration<double, std::nano>(t1 - t0).count();
  }
  return row;
}

double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = std::min(x.size(), y.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double dn = static_cast<double>(n);
  return (dn * sxy - sx * sy) / (dn * sxx - sx * sx);
}

}  // namespace hypergroup
