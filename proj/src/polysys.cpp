#include "hypergroup/polysys.hpp"

#include <cmath>
#include <numbers>
#include <iomanip>
#include <sstream>

#include "hypergroup/error.hpp"

namespace hypergroup {

const char* error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::ParameterOutOfRange: return "parameter-out-of-range";
    case ErrorKind::HypergroupViolation: return "hypergroup-violation";
    case ErrorKind::IndexOutOfRange: return "index-out-of-range";
    case ErrorKind::QuadratureUnderresolved: return "quadrature-underresolved";
    case ErrorKind::NoDensity: return "no-density";
    case ErrorKind::MeasureDegenerate: return "measure-degenerate";
    case ErrorKind::NonAtomicUnsupported: return "non-atomic-unsupported";
    case ErrorKind::InconsistentMatrix: return "inconsistent-matrix";
    case ErrorKind::InvalidArgument: return "invalid-argument";
  }
  return "unknown";
}

const char* family_name(Family f) {
  switch (f) {
    case Family::ChebyshevFirst: return "chebyshev1";
    case Family::ChebyshevSecond: return "chebyshev2";
    case Family::Jacobi: return "jacobi";
    case Family::CartierDunau: return "cartier_dunau";
    case Family::BernsteinSzego: return "bernstein_szego";
    case Family::AssociatedUltraspherical: return "associated_ultraspherical";
    case Family::Custom: return "custom";
  }
  return "unknown";
}

namespace {

constexpr double kPi = std::numbers::pi;

Recurrence jacobi_coefficients(double al, double be, std::size_t n) {
  const double s = al + be;
  if (n == 0) return {2.0 * (al + 1.0) / (s + 2.0), (be - al) / (s + 2.0), 0.0};
  const double m = static_cast<double>(n);
  const double a = (m + s + 1.0) * (m + al + 1.0) * (s + 2.0) /
                   ((2.0 * m + s + 1.0) * (2.0 * m + s + 2.0) * (al + 1.0));
  const double c = m * (m + be) * (s + 2.0) /
                   ((2.0 * m + s) * (2.0 * m + s + 1.0) * (al + 1.0));
  return {a, 1.0 - a - c, c};
}

Recurrence bernstein_szego_coefficients(double nu, double ka, std::size_t n) {
  const double s = nu + ka + 1.0;
  if (n == 0) return {s / (nu + 1.0), -ka / (nu + 1.0), 0.0};
  if (n == 1) {
    const double a = (nu + 1.0) * (nu + 1.0) / (2.0 * s);
    const double b = ka * (3.0 - nu) / (2.0 * s);
    return {a, b, 1.0 - a - b};
  }
  return {(nu + 1.0) / (2.0 * s), ka / s, (nu + 1.0) / (2.0 * s)};
}

double bs_weight(double nu, double ka, double t) {
  const double re = nu * std::cos(2.0 * t) + ka * std::cos(t) + 1.0;
  const double im = nu * std::sin(2.0 * t) + ka * std::sin(t);
  return re * re + im * im;
}

// Trapezoid rule on [0, pi] for an integrand smooth and even-periodic in t.
template <class F>
double periodic_trapezoid(F f, int nodes = 4096) {
  const double h = kPi / nodes;
  double sum = 0.5 * (f(0.0) + f(kPi));
  for (int i = 1; i < nodes; ++i) sum += f(i * h);
  return sum * h;
}

void check_custom(const Recurrence& r, std::size_t n) {
  const double tol = 1e-12;
  bool ok = r.a > 0.0;
  if (n == 0) {
    ok = ok && std::abs(r.a + r.b - 1.0) <= tol;
  } else {
    ok = ok && r.c > 0.0 && r.b >= -tol && std::abs(r.a + r.b + r.c - 1.0) <= tol;
  }
  if (!ok) {
    std::ostringstream os;
    os << "custom recurrence at n=" << n << " gives (" << r.a << ", " << r.b << ", " << r.c
       << ")";
    throw Error(ErrorKind::ParameterOutOfRange, os.str());
  }
}

}  // namespace

PolynomialSystem PolynomialSystem::chebyshev_first() {
  PolynomialSystem s;
  s.family_ = Family::ChebyshevFirst;
  s.even_ = true;
  return s;
}

PolynomialSystem PolynomialSystem::chebyshev_second() {
  PolynomialSystem s = jacobi(0.5, 0.5);
  s.family_ = Family::ChebyshevSecond;
  return s;
}

PolynomialSystem PolynomialSystem::jacobi(double alpha, double beta) {
  if (!(alpha >= beta && beta > -1.0 && alpha + beta + 1.0 >= 0.0)) {
    std::ostringstream os;
    os << "jacobi(" << alpha << ", " << beta << ") needs alpha >= beta > -1, alpha+beta+1 >= 0";
    throw Error(ErrorKind::ParameterOutOfRange, os.str());
  }
  PolynomialSystem s;
  s.family_ = Family::Jacobi;
  s.params_ = {alpha, beta};
  s.even_ = alpha == beta;
  const double log_mass = (alpha + beta + 1.0) * std::log(2.0) + std::lgamma(alpha + 1.0) +
                          std::lgamma(beta + 1.0) - std::lgamma(alpha + beta + 2.0);
  s.density_norm_ = std::exp(-log_mass);
  return s;
}

PolynomialSystem PolynomialSystem::cartier_dunau(double q) {
  if (!(q >= 1.0) || !std::isfinite(q)) {
    throw Error(ErrorKind::ParameterOutOfRange, "cartier_dunau needs q >= 1");
  }
  PolynomialSystem s;
  s.family_ = Family::CartierDunau;
  s.params_ = {q};
  s.even_ = true;
  const double gamma = 2.0 * std::sqrt(q) / (q + 1.0);
  s.support_ = {-gamma, gamma};
  // density proportional to sqrt(gamma^2 - x^2) / (1 - x^2); x = gamma cos t
  if (q == 1.0) {
    s.density_norm_ = 1.0 / kPi;
  } else {
    const double mass = periodic_trapezoid([&](double t) {
      const double st = std::sin(t), ct = std::cos(t);
      return gamma * gamma * st * st / (1.0 - gamma * gamma * ct * ct);
    });
    s.density_norm_ = 1.0 / mass;
  }
  return s;
}

PolynomialSystem PolynomialSystem::bernstein_szego(double nu, double kappa) {
  if (!(nu >= 0.0 && kappa >= 0.0 && kappa - 1.0 < nu && nu < 1.0)) {
    std::ostringstream os;
    os << "bernstein_szego(" << nu << ", " << kappa << ") needs nu,kappa >= 0, kappa-1 < nu < 1";
    throw Error(ErrorKind::ParameterOutOfRange, os.str());
  }
  PolynomialSystem s;
  s.family_ = Family::BernsteinSzego;
  s.params_ = {nu, kappa};
  s.even_ = kappa == 0.0;
  const double mass = periodic_trapezoid([&](double t) { return 1.0 / bs_weight(nu, kappa, t); });
  s.density_norm_ = 1.0 / mass;
  return s;
}

PolynomialSystem PolynomialSystem::associated_ultraspherical(double alpha, double nu,
                                                             std::size_t depth) {
  if (!(alpha > -0.5 && nu >= 0.0)) {
    throw Error(ErrorKind::ParameterOutOfRange,
                "associated_ultraspherical needs alpha > -1/2, nu >= 0");
  }
  PolynomialSystem s;
  s.family_ = Family::AssociatedUltraspherical;
  s.params_ = {alpha, nu};
  s.even_ = true;
  const double lam = alpha + 0.5;
  // r_n = C_n(1) from (n+nu+1) C_{n+1} = 2(n+nu+lam) x C_n - (n+nu+2lam-1) C_{n-1};
  // only ratios are needed, so track rho_n = r_{n+1} / r_n.
  std::vector<double> rho(depth + 1);
  double prev_ratio = 0.0;  // r_{n-1}/r_n
  for (std::size_t n = 0; n <= depth; ++n) {
    const double m = static_cast<double>(n);
    rho[n] = (2.0 * (m + nu + lam) - (m + nu + 2.0 * lam - 1.0) * prev_ratio) / (m + nu + 1.0);
    prev_ratio = 1.0 / rho[n];
  }
  auto table = std::make_shared<std::vector<Recurrence>>(depth + 1);
  (*table)[0] = {1.0, 0.0, 0.0};
  for (std::size_t n = 1; n <= depth; ++n) {
    const double m = static_cast<double>(n);
    const double a = (m + nu + 1.0) * rho[n] / (2.0 * (m + nu + lam));
    const double c = (m + nu + 2.0 * lam - 1.0) / (rho[n - 1] * 2.0 * (m + nu + lam));
    (*table)[n] = {a, 1.0 - a - c, c};
  }
  s.table_ = std::move(table);
  return s;
}

PolynomialSystem PolynomialSystem::custom(CoefficientFn fn, Interval dual, std::string label) {
  if (!fn) throw Error(ErrorKind::InvalidArgument, "custom system needs a coefficient function");
  if (!(dual.lo < dual.hi) || !dual.contains(1.0)) {
    throw Error(ErrorKind::ParameterOutOfRange, "custom dual interval must contain 1");
  }
  PolynomialSystem s;
  s.family_ = Family::Custom;
  s.custom_ = std::move(fn);
  s.custom_label_ = std::move(label);
  s.dual_ = dual;
  s.support_ = dual;
  s.even_ = false;
  return s;
}

std::string PolynomialSystem::label() const {
  if (family_ == Family::Custom) return custom_label_;
  std::ostringstream os;
  os << std::setprecision(17) << family_name(family_);
  if (!params_.empty() && family_ != Family::ChebyshevSecond) {
    os << "(";
    for (std::size_t i = 0; i < params_.size(); ++i) os << (i ? "," : "") << params_[i];
    os << ")";
  }
  return os.str();
}

Recurrence PolynomialSystem::recurrence(std::size_t n) const {
  switch (family_) {
    case Family::ChebyshevFirst:
      return n == 0 ? Recurrence{1.0, 0.0, 0.0} : Recurrence{0.5, 0.0, 0.5};
    case Family::ChebyshevSecond:
    case Family::Jacobi:
      return jacobi_coefficients(params_[0], params_[1], n);
    case Family::CartierDunau: {
      if (n == 0) return {1.0, 0.0, 0.0};
      const double q = params_[0];
      return {q / (q + 1.0), 0.0, 1.0 / (q + 1.0)};
    }
    case Family::BernsteinSzego:
      return bernstein_szego_coefficients(params_[0], params_[1], n);
    case Family::AssociatedUltraspherical:
      if (n >= table_->size()) {
        throw Error(ErrorKind::IndexOutOfRange, "associated ultraspherical table exhausted");
      }
      return (*table_)[n];
    case Family::Custom: {
      Recurrence r = custom_(n);
      if (n == 0) r.c = 0.0;
      check_custom(r, n);
      return r;
    }
  }
  return {};
}

XRecurrence PolynomialSystem::x_recurrence(std::size_t n) const {
  const Recurrence r0 = recurrence(0);
  if (n == 0) return {r0.a, r0.b, 0.0};
  const Recurrence r = recurrence(n);
  return {r0.a * r.a, r0.a * r.b + r0.b, r0.a * r.c};
}

double PolynomialSystem::evaluate(std::size_t n, double x) const {
  if (n == 0) return 1.0;
  if (even_ && x < 0.0) return (n % 2 ? -1.0 : 1.0) * evaluate(n, -x);
  const XRecurrence r0 = x_recurrence(0);
  if (x < 0.0) {
    double prev = 1.0;
    double cur = (x - r0.same) / r0.next;
    for (std::size_t k = 1; k < n; ++k) {
      const XRecurrence r = x_recurrence(k);
      const double next = ((x - r.same) * cur - r.prev * prev) / r.next;
      prev = cur;
      cur = next;
    }
    return cur;
  }
  const double xm1 = x - 1.0;
  double step = xm1 / r0.next;
  double cur = 1.0 + step;
  for (std::size_t k = 1; k < n; ++k) {
    const XRecurrence r = x_recurrence(k);
    step = (xm1 * cur + r.prev * step) / r.next;
    cur += step;
  }
  return cur;
}

void PolynomialSystem::evaluate_all(std::size_t n_max, double x, double* out) const {
  out[0] = 1.0;
  if (n_max == 0) return;
  if (even_ && x < 0.0) {
    evaluate_all(n_max, -x, out);
    for (std::size_t k = 1; k <= n_max; k += 2) out[k] = -out[k];
    return;
  }
  const XRecurrence r0 = x_recurrence(0);
  if (x < 0.0) {
    out[1] = (x - r0.same) / r0.next;
    for (std::size_t k = 1; k < n_max; ++k) {
      const XRecurrence r = x_recurrence(k);
      out[k + 1] = ((x - r.same) * out[k] - r.prev * out[k - 1]) / r.next;
    }
    return;
  }
  // Differenced form, using next + same + prev = 1: keeps P_n(1) = 1 exact where
  // the plain recurrence has a double characteristic root.
  const double xm1 = x - 1.0;
  double step = xm1 / r0.next;
  out[1] = 1.0 + step;
  for (std::size_t k = 1; k < n_max; ++k) {
    const XRecurrence r = x_recurrence(k);
    step = (xm1 * out[k] + r.prev * step) / r.next;
    out[k + 1] = out[k] + step;
  }
}

std::vector<double> PolynomialSystem::evaluate_all(std::size_t n_max, double x) const {
  std::vector<double> out(n_max + 1);
  evaluate_all(n_max, x, out.data());
  return out;
}

double PolynomialSystem::leading_coefficient_log(std::size_t n) const {
  double acc = 0.0;
  for (std::size_t k = 0; k < n; ++k) acc -= std::log(x_recurrence(k).next);
  return acc;
}

std::vector<double> PolynomialSystem::leading_coefficient_logs(std::size_t n_max) const {
  std::vector<double> out(n_max + 1, 0.0);
  for (std::size_t k = 0; k < n_max; ++k) out[k + 1] = out[k] - std::log(x_recurrence(k).next);
  return out;
}

bool PolynomialSystem::has_density() const {
  return family_ != Family::Custom && family_ != Family::AssociatedUltraspherical;
}

double PolynomialSystem::orthogonality_density(double x) const {
  if (!has_density()) {
    throw Error(ErrorKind::NoDensity, "no closed-form orthogonality density for " + label());
  }
  if (!(x > support_.lo && x < support_.hi)) return 0.0;
  switch (family_) {
    case Family::ChebyshevFirst:
      return 1.0 / (kPi * std::sqrt(1.0 - x * x));
    case Family::ChebyshevSecond:
    case Family::Jacobi:
      return density_norm_ * std::pow(1.0 - x, params_[0]) * std::pow(1.0 + x, params_[1]);
    case Family::CartierDunau: {
      const double gamma = support_.hi;
      return density_norm_ * std::sqrt(gamma * gamma - x * x) / (1.0 - x * x);
    }
    case Family::BernsteinSzego: {
      const double t = std::acos(x);
      return density_norm_ / (bs_weight(params_[0], params_[1], t) * std::sqrt(1.0 - x * x));
    }
    default:
      return 0.0;
  }
}

double associated_ultraspherical_haar(double alpha, double nu, std::size_t n) {
  // Pochhammer symbols in log space; the bracket is factored as p1 (1 - p2 / p1).
  auto lpoch = [](double a, double k) { return std::lgamma(a + k) - std::lgamma(a); };
  const double m = static_cast<double>(n);
  const double l1 = lpoch(2.0 * alpha + nu, m + 1.0);
  const double ratio = nu == 0.0 ? 0.0 : std::exp(lpoch(nu, m + 1.0) - l1);
  const double log_bracket = l1 + std::log(std::abs(1.0 - ratio));
  const double log_den = std::log(4.0 * alpha * alpha * (2.0 * alpha + 2.0 * nu + 1.0)) +
                         lpoch(nu + 1.0, m) + lpoch(2.0 * alpha + nu + 1.0, m);
  return (2.0 * m + 2.0 * alpha + 2.0 * nu + 1.0) * std::exp(2.0 * log_bracket - log_den);
}

}  // namespace hypergroup
