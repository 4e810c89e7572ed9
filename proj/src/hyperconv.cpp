#include "hypergroup/hyperconv.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>

#include "hypergroup/error.hpp"

namespace hypergroup {

namespace {

constexpr double kDust = 1e-12;

void clamp_and_normalize(LinearizationVector& g, const PolynomialSystem& sys, std::size_t m,
                         std::size_t n) {
  double sum = 0.0;
  for (double& v : g) {
    if (v < 0.0) {
      if (v < -kDust && sys.family() == Family::Custom) {
        std::ostringstream os;
        os << "g(" << m << "," << n << ",.) has a coefficient " << v;
        throw Error(ErrorKind::HypergroupViolation, os.str());
      }
      if (v >= -kDust) v = 0.0;
    }
    sum += v;
  }
  if (sum > 0.0) {
    for (double& v : g) v /= sum;
  }
}

}  // namespace

std::vector<LinearizationVector> linearization_rows(const PolynomialSystem& sys, std::size_t n,
                                                    std::uint64_t* mults) {
  std::uint64_t ops = 0;
  std::vector<Recurrence> rec(2 * n + 2);
  for (std::size_t s = 0; s < rec.size(); ++s) rec[s] = sys.recurrence(s);
  // coefficients of P_1 P_s; P_1 P_0 = P_1
  auto up = [&](std::size_t s) { return s == 0 ? 1.0 : rec[s].a; };
  auto mid = [&](std::size_t s) { return s == 0 ? 0.0 : rec[s].b; };
  auto down = [&](std::size_t s) { return s == 0 ? 0.0 : rec[s].c; };

  std::vector<LinearizationVector> rows(n + 1);
  rows[0] = {1.0};
  if (n >= 1) {
    // row k covers s = n-k .. n+k; entry i <-> s = n-k+i
    rows[1] = {down(n), mid(n), up(n)};
  }
  LinearizationVector p1;
  for (std::size_t k = 1; k < n; ++k) {
    const LinearizationVector& cur = rows[k];
    const LinearizationVector& prev = rows[k - 1];
    const std::size_t lo = n - k;
    // P_1 * (sum_s cur_s P_s), indices shifted to start at lo - 1
    p1.assign(2 * k + 3, 0.0);
    for (std::size_t i = 0; i < cur.size(); ++i) {
      const std::size_t s = lo + i;
      const double v = cur[i];
      if (v == 0.0) continue;
      p1[i + 2] += up(s) * v;
      p1[i + 1] += mid(s) * v;
      p1[i] += down(s) * v;
      ops += 3;
    }
    const double ak = rec[k].a, bk = rec[k].b, ck = rec[k].c;
    LinearizationVector next(2 * k + 3);
    for (std::size_t i = 0; i < next.size(); ++i) {
      double v = p1[i];
      if (i >= 1 && i - 1 < cur.size()) v -= bk * cur[i - 1];
      if (i >= 2 && i - 2 < prev.size()) v -= ck * prev[i - 2];
      next[i] = v / ak;
      ops += 3;
    }
    rows[k + 1] = std::move(next);
  }
  for (std::size_t k = 0; k <= n; ++k) clamp_and_normalize(rows[k], sys, k, n);
  if (mults) *mults += ops;
  return rows;
}

std::shared_ptr<const LinearizationVector> LinearizationTable::get(std::size_t m,
                                                                   std::size_t n) const {
  const auto key = std::make_pair(std::min(m, n), std::max(m, n));
  {
    std::shared_lock lock(mutex_);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
  }
  auto rows = linearization_rows(sys_, key.second);
  std::unique_lock lock(mutex_);
  for (std::size_t k = 0; k < rows.size(); ++k) {
    auto k2 = std::make_pair(k, key.second);
    if (!memo_.count(k2)) {
      memo_.emplace(k2, std::make_shared<const LinearizationVector>(std::move(rows[k])));
    }
  }
  return memo_.at(key);
}

double LinearizationTable::coefficient(std::size_t m, std::size_t n, std::size_t k) const {
  const std::size_t lo = m > n ? m - n : n - m;
  if (k < lo || k > m + n) return 0.0;
  return (*get(m, n))[k - lo];
}

void LinearizationTable::dump_csv(std::ostream& os, std::size_t max_index) const {
  const auto old = os.precision(17);
  os << "m,n,k,g\n";
  for (std::size_t n = 0; n <= max_index; ++n) {
    for (std::size_t m = 0; m <= n; ++m) {
      auto g = get(m, n);
      for (std::size_t i = 0; i < g->size(); ++i) {
        os << m << ',' << n << ',' << (n - m + i) << ',' << (*g)[i] << '\n';
      }
    }
  }
  os.precision(old);
}

std::shared_ptr<const LinearizationTable> shared_table(const PolynomialSystem& sys) {
  if (sys.family() == Family::Custom) return std::make_shared<LinearizationTable>(sys);
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const LinearizationTable>> registry;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = registry[sys.label()];
  if (!slot) slot = std::make_shared<LinearizationTable>(sys);
  return slot;
}

LinearizationVector linearize(const PolynomialSystem& sys, std::size_t m, std::size_t n) {
  return *shared_table(sys)->get(m, n);
}

double haar_weight_log(const PolynomialSystem& sys, std::size_t n) {
  if (n == 0) return 0.0;
  double acc = -std::log(sys.recurrence(1).c);
  for (std::size_t k = 1; k < n; ++k) {
    acc += std::log(sys.recurrence(k).a) - std::log(sys.recurrence(k + 1).c);
  }
  return acc;
}

double haar_weight(const PolynomialSystem& sys, std::size_t n) {
  return std::exp(haar_weight_log(sys, n));
}

std::vector<double> haar_weight_logs(const PolynomialSystem& sys, std::size_t n_max) {
  std::vector<double> out(n_max + 1, 0.0);
  if (n_max >= 1) out[1] = -std::log(sys.recurrence(1).c);
  for (std::size_t k = 1; k < n_max; ++k) {
    out[k + 1] = out[k] + std::log(sys.recurrence(k).a) - std::log(sys.recurrence(k + 1).c);
  }
  return out;
}

std::vector<double> haar_weights(const PolynomialSystem& sys, std::size_t n_max) {
  auto out = haar_weight_logs(sys, n_max);
  for (double& v : out) v = std::exp(v);
  return out;
}

namespace {

template <class T>
T translate_impl(const PolynomialSystem& sys, const std::vector<T>& d, std::size_t n,
                 std::size_t m) {
  if (d.size() < n + m + 1) {
    std::ostringstream os;
    os << "translate(" << n << "," << m << ") needs " << n + m + 1 << " moments, got "
       << d.size();
    throw Error(ErrorKind::IndexOutOfRange, os.str());
  }
  auto g = shared_table(sys)->get(n, m);
  const std::size_t lo = n > m ? n - m : m - n;
  T acc{};
  for (std::size_t i = 0; i < g->size(); ++i) acc += (*g)[i] * d[lo + i];
  return acc;
}

}  // namespace

double translate(const PolynomialSystem& sys, const std::vector<double>& d, std::size_t n,
                 std::size_t m) {
  return translate_impl(sys, d, n, m);
}

std::complex<double> translate(const PolynomialSystem& sys,
                               const std::vector<std::complex<double>>& d, std::size_t n,
                               std::size_t m) {
  return translate_impl(sys, d, n, m);
}

DefinitenessResult is_positive_definite(const PolynomialSystem& sys, const std::vector<double>& d,
                                        std::size_t N, double tol) {
  const auto sz = static_cast<Eigen::Index>(N + 1);
  Eigen::MatrixXd M(sz, sz);
  for (std::size_t i = 0; i <= N; ++i) {
    for (std::size_t j = i; j <= N; ++j) {
      const double v = translate(sys, d, i, j);
      M(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = v;
      M(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) = v;
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(M, Eigen::EigenvaluesOnly);
  DefinitenessResult r;
  r.min_eigenvalue = solver.eigenvalues().minCoeff();
  r.positive = r.min_eigenvalue >= -tol;
  return r;
}

std::vector<double> condition_H_ratios(const PolynomialSystem& sys, std::size_t N) {
  const auto logs = haar_weight_logs(sys, N);
  std::vector<double> out(N + 1);
  // log-sum-exp running accumulation
  double log_sum = -INFINITY;
  for (std::size_t n = 0; n <= N; ++n) {
    const double hi = std::max(log_sum, logs[n]);
    log_sum = hi + std::log(std::exp(log_sum - hi) + std::exp(logs[n] - hi));
    out[n] = std::exp(logs[n] - log_sum);
  }
  return out;
}

}  // namespace hypergroup
