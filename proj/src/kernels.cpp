#include "hypergroup/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <string>

#include "hypergroup/error.hpp"

namespace hypergroup {

struct Kernel::Cache {
  std::mutex mutex;
  std::shared_ptr<const Eigen::MatrixXcd> values;
};

Kernel Kernel::stationary(PolynomialSystem sys, std::vector<double> d) {
  if (d.empty()) throw Error(ErrorKind::InvalidArgument, "stationary kernel needs d(0)");
  Kernel k(std::move(sys));
  k.backend_ = KernelBackend::Stationary;
  k.d_ = std::move(d);
  return k;
}

Kernel Kernel::stationary(PolynomialSystem sys, const SpectralMeasure& mu, std::size_t extent) {
  auto d = hypergroup::moments(mu, sys, 2 * extent);
  return stationary(std::move(sys), std::move(d));
}

Kernel Kernel::harmonizable(PolynomialSystem sys, BiMeasure mu2) {
  Kernel k(std::move(sys));
  k.backend_ = KernelBackend::Harmonizable;
  k.mu2_ = std::move(mu2);
  k.cache_ = std::make_shared<Cache>();
  return k;
}

Kernel Kernel::table(PolynomialSystem sys, Eigen::MatrixXcd values, double tol) {
  if (values.rows() != values.cols() || values.rows() == 0) {
    throw Error(ErrorKind::InvalidArgument, "kernel table must be square and nonempty");
  }
  const double scale = std::max(1.0, values.cwiseAbs().maxCoeff());
  const double asym = (values - values.adjoint()).cwiseAbs().maxCoeff();
  if (asym > tol * scale) {
    std::ostringstream os;
    os << "kernel table is not hermitian (deviation " << asym << ")";
    throw Error(ErrorKind::InvalidArgument, os.str());
  }
  Kernel k(std::move(sys));
  k.backend_ = KernelBackend::Table;
  k.table_ = std::move(values);
  return k;
}

std::complex<double> Kernel::value(std::size_t n, std::size_t m) const {
  switch (backend_) {
    case KernelBackend::Stationary:
      return translate(sys_, d_, n, m);
    case KernelBackend::Table: {
      const auto size = static_cast<std::size_t>(table_.rows());
      if (n >= size || m >= size) {
        std::ostringstream os;
        os << "kernel index (" << n << "," << m << ") outside table of order " << size - 1;
        throw Error(ErrorKind::IndexOutOfRange, os.str());
      }
      return table_(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    }
    case KernelBackend::Harmonizable: {
      const std::size_t need = std::max(n, m) + 1;
      std::shared_ptr<const Eigen::MatrixXcd> values;
      {
        std::lock_guard lock(cache_->mutex);
        values = cache_->values;
        if (!values || static_cast<std::size_t>(values->rows()) < need) {
          const std::size_t extent = std::max<std::size_t>(2 * need, 16);
          values = std::make_shared<const Eigen::MatrixXcd>(
              bimoment_matrix(mu2_, sys_, extent - 1));
          cache_->values = values;
        }
      }
      return (*values)(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m));
    }
  }
  return 0.0;
}

std::optional<std::size_t> Kernel::table_order() const {
  if (backend_ != KernelBackend::Table) return std::nullopt;
  return static_cast<std::size_t>(table_.rows()) - 1;
}

Eigen::MatrixXcd Kernel::matrix(std::size_t N) const {
  const auto sz = static_cast<Eigen::Index>(N + 1);
  Eigen::MatrixXcd out(sz, sz);
  for (Eigen::Index i = 0; i < sz; ++i) {
    for (Eigen::Index j = 0; j < sz; ++j) {
      out(i, j) = value(static_cast<std::size_t>(i), static_cast<std::size_t>(j));
    }
  }
  return out;
}

std::complex<double> kernel_value(const Kernel& K, std::size_t n, std::size_t m) {
  return K.value(n, m);
}

namespace {

// sum_k g(n, t, k) K(k, m)
std::complex<double> convolve_left(const Kernel& K, const LinearizationTable& lin, std::size_t n,
                                   std::size_t t, std::size_t m) {
  const auto g = lin.get(n, t);
  const std::size_t lo = n > t ? n - t : t - n;
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < g->size(); ++i) {
    if ((*g)[i] != 0.0) acc += (*g)[i] * K.value(lo + i, m);
  }
  return acc;
}

// sum_k g(m, t, k) K(n, k)
std::complex<double> convolve_right(const Kernel& K, const LinearizationTable& lin, std::size_t n,
                                    std::size_t m, std::size_t t) {
  const auto g = lin.get(m, t);
  const std::size_t lo = m > t ? m - t : t - m;
  std::complex<double> acc = 0.0;
  for (std::size_t i = 0; i < g->size(); ++i) {
    if ((*g)[i] != 0.0) acc += (*g)[i] * K.value(n, lo + i);
  }
  return acc;
}

void record(CheckResult& r, double residual, std::size_t n, std::size_t m) {
  if (residual > r.worst_residual) {
    r.worst_residual = residual;
    r.n = n;
    r.m = m;
  }
}

}  // namespace

CheckResult check_stationary(const Kernel& K, std::size_t N, double tol) {
  const auto lin = shared_table(K.system());
  const std::size_t extent = K.table_order().value_or(static_cast<std::size_t>(-1));
  CheckResult r;
  for (std::size_t n = 0; n <= N; ++n) {
    for (std::size_t m = 0; m <= N; ++m) {
      if (n + m > extent) continue;
      const std::complex<double> lhs = K.value(n, m);
      const std::complex<double> rhs = convolve_left(K, *lin, n, m, 0);
      record(r, std::abs(lhs - rhs), n, m);
    }
  }
  r.holds = r.worst_residual <= tol;
  return r;
}

CheckResult check_cyclostationary(const Kernel& K, std::size_t period, std::size_t N, double tol) {
  if (period == 0) throw Error(ErrorKind::InvalidArgument, "period must be at least 1");
  const auto lin = shared_table(K.system());
  const std::size_t extent = K.table_order().value_or(static_cast<std::size_t>(-1));
  CheckResult r;
  for (std::size_t n = 0; n <= N; ++n) {
    for (std::size_t m = 0; m <= N; ++m) {
      if (std::max(n, m) + period > extent) continue;
      const std::complex<double> lhs = convolve_left(K, *lin, n, period, m);
      const std::complex<double> rhs = convolve_right(K, *lin, n, m, period);
      record(r, std::abs(lhs - rhs), n, m);
    }
  }
  r.holds = r.worst_residual <= tol;
  return r;
}

CheckResult cyclo_support_test(const BiMeasure& mu2, const PolynomialSystem& sys,
                               std::size_t period, double tol) {
  if (!mu2.is_atomic()) {
    throw Error(ErrorKind::NonAtomicUnsupported,
                "support test is only available for atomic bimeasures");
  }
  CheckResult r;
  for (std::size_t i = 0; i < mu2.atoms().size(); ++i) {
    const BiAtom& a = mu2.atoms()[i];
    if (a.w == 0.0) continue;
    const double residual = std::abs(sys.evaluate(period, a.x) - sys.evaluate(period, a.y));
    record(r, residual, i, i);
  }
  r.holds = r.worst_residual <= tol;
  return r;
}

DefinitenessResult is_positive_definite(const Kernel& K, std::size_t N, double tol) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(K.matrix(N), Eigen::EigenvaluesOnly);
  DefinitenessResult r;
  r.min_eigenvalue = solver.eigenvalues().minCoeff();
  r.positive = r.min_eigenvalue >= -tol;
  return r;
}

double pairwise_sum(const double* v, std::size_t count) {
  if (count <= 8) {
    double acc = 0.0;
    for (std::size_t i = 0; i < count; ++i) acc += v[i];
    return acc;
  }
  const std::size_t half = count / 2;
  return pairwise_sum(v, half) + pairwise_sum(v + half, count - half);
}

double asymptotic_M(const Kernel& K, std::size_t s, std::size_t n) {
  const auto lin = shared_table(K.system());
  const auto h = haar_weights(K.system(), n);
  std::vector<double> terms(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    terms[k] = convolve_left(K, *lin, k, s, k).real() * h[k];
  }
  return pairwise_sum(terms.data(), terms.size()) / pairwise_sum(h.data(), h.size());
}

double asymptotic_H(const Kernel& K, std::size_t s, std::size_t n) {
  const auto lin = shared_table(K.system());
  const auto h = haar_weights(K.system(), n);
  std::vector<double> terms(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const std::complex<double> shifted = convolve_left(K, *lin, k, s, 0);
    terms[k] = (shifted - K.value(k, s)).real() * h[k];
  }
  return pairwise_sum(terms.data(), terms.size()) / pairwise_sum(h.data(), h.size());
}

double wiener_statistic(const Kernel& K, std::size_t n, WienerVariant variant) {
  const auto h = haar_weights(K.system(), n);
  const double total = pairwise_sum(h.data(), h.size());
  if (variant == WienerVariant::D) {
    std::vector<double> terms;
    terms.reserve((n + 1) * (n + 1));
    for (std::size_t k = 0; k <= n; ++k) {
      for (std::size_t l = 0; l <= n; ++l) terms.push_back(std::norm(K.value(k, l)) * h[k] * h[l]);
    }
    return pairwise_sum(terms.data(), terms.size()) / (total * total);
  }
  std::vector<double> terms(n + 1);
  for (std::size_t k = 0; k <= n; ++k) {
    const double a = std::abs(K.value(k, 0));
    terms[k] = (variant == WienerVariant::B ? a : a * a) * h[k];
  }
  return pairwise_sum(terms.data(), terms.size()) / total;
}

Kernel cyclo_example_kernel(double C) {
  if (C == 0.0) throw Error(ErrorKind::ParameterOutOfRange, "C must be nonzero");
  return Kernel::harmonizable(PolynomialSystem::chebyshev_first(),
                              BiMeasure::product({{1.0, C}, {-1.0, 1.0}}));
}

void write_kernel_csv(std::ostream& os, const Kernel& K, std::size_t N) {
  const auto old = os.precision(17);
  os << "n,m,re,im\n";
  for (std::size_t n = 0; n <= N; ++n) {
    for (std::size_t m = 0; m <= N; ++m) {
      const auto v = K.value(n, m);
      os << n << ',' << m << ',' << v.real() << ',' << v.imag() << '\n';
    }
  }
  os.precision(old);
}

Eigen::MatrixXcd read_kernel_csv(std::istream& is) {
  std::map<std::pair<std::size_t, std::size_t>, std::complex<double>> entries;
  std::string line;
  std::size_t size = 0;
  bool header = true;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.find_first_of("0123456789") != 0) continue;
    }
    std::istringstream row(line);
    std::size_t n = 0, m = 0;
    double re = 0.0, im = 0.0;
    char c1 = 0, c2 = 0, c3 = 0;
    if (!(row >> n >> c1 >> m >> c2 >> re >> c3 >> im) || c1 != ',' || c2 != ',' || c3 != ',') {
      throw Error(ErrorKind::InvalidArgument, "malformed kernel row: " + line);
    }
    entries[{n, m}] = {re, im};
    size = std::max(size, std::max(n, m) + 1);
  }
  if (size == 0) throw Error(ErrorKind::InvalidArgument, "empty kernel table");
  const auto sz = static_cast<Eigen::Index>(size);
  Eigen::MatrixXcd out(sz, sz);
  for (std::size_t n = 0; n < size; ++n) {
    for (std::size_t m = 0; m < size; ++m) {
      auto it = entries.find({n, m});
      std::complex<double> v;
      if (it != entries.end()) {
        v = it->second;
      } else {
        auto jt = entries.find({m, n});
        if (jt == entries.end()) {
          std::ostringstream os;
          os << "kernel entry (" << n << "," << m << ") missing";
          throw Error(ErrorKind::InvalidArgument, os.str());
        }
        v = std::conj(jt->second);
      }
      out(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) = v;
    }
  }
  return out;
}

}  // namespace hypergroup
