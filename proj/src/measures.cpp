#include "hypergroup/measures.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "hypergroup/error.hpp"
#include "hypergroup/hyperconv.hpp"
#include "hypergroup/quadrature.hpp"

namespace hypergroup {

Density Density::constant(double c) {
  Density d;
  d.kind_ = DensityKind::Constant;
  d.coeffs_ = {c};
  return d;
}

Density Density::polynomial(std::vector<double> monomial_coeffs) {
  Density d;
  d.kind_ = DensityKind::Polynomial;
  d.coeffs_ = std::move(monomial_coeffs);
  if (d.coeffs_.empty()) d.coeffs_ = {0.0};
  return d;
}

Density Density::moving_average(std::vector<double> basis_coeffs) {
  Density d;
  d.kind_ = DensityKind::MovingAverage;
  d.coeffs_ = std::move(basis_coeffs);
  if (d.coeffs_.empty()) d.coeffs_ = {0.0};
  return d;
}

Density Density::basis_polynomial(std::size_t index, double scale) {
  Density d;
  d.kind_ = DensityKind::BasisPolynomial;
  d.coeffs_ = {scale};
  d.index_ = index;
  return d;
}

Density Density::jacobi_weight(double c, double alpha, double beta) {
  Density d;
  d.kind_ = DensityKind::JacobiWeight;
  d.coeffs_ = {c, alpha, beta};
  return d;
}

Density Density::function(std::function<double(double)> f, std::string tag) {
  Density d;
  d.kind_ = DensityKind::Function;
  d.fn_ = std::move(f);
  d.tag_ = std::move(tag);
  return d;
}

double Density::operator()(double x, const PolynomialSystem& sys) const {
  switch (kind_) {
    case DensityKind::Constant:
      return coeffs_[0];
    case DensityKind::Polynomial: {
      double acc = 0.0;
      for (std::size_t j = coeffs_.size(); j-- > 0;) acc = acc * x + coeffs_[j];
      return acc;
    }
    case DensityKind::MovingAverage: {
      const auto p = sys.evaluate_all(coeffs_.size() - 1, x);
      double acc = 0.0;
      for (std::size_t k = 0; k < coeffs_.size(); ++k) acc += coeffs_[k] * p[k];
      return acc * acc;
    }
    case DensityKind::BasisPolynomial:
      return coeffs_[0] * sys.evaluate(index_, x);
    case DensityKind::JacobiWeight:
      return coeffs_[0] * std::pow(1.0 - x, coeffs_[1]) * std::pow(1.0 + x, coeffs_[2]);
    case DensityKind::Function:
      return fn_(x);
  }
  return 0.0;
}

std::optional<std::size_t> Density::degree() const {
  switch (kind_) {
    case DensityKind::Constant: return 0;
    case DensityKind::Polynomial: return coeffs_.size() - 1;
    case DensityKind::MovingAverage: return 2 * (coeffs_.size() - 1);
    case DensityKind::BasisPolynomial: return index_;
    case DensityKind::JacobiWeight: {
      const double a = coeffs_[1], b = coeffs_[2];
      if (a >= 0 && b >= 0 && a == std::floor(a) && b == std::floor(b)) {
        return static_cast<std::size_t>(a + b);
      }
      return std::nullopt;
    }
    case DensityKind::Function: return std::nullopt;
  }
  return std::nullopt;
}

SpectralMeasure SpectralMeasure::orthogonality(double scale) {
  SpectralMeasure mu;
  mu.set_density_vs_pi(Density::constant(scale));
  return mu;
}

SpectralMeasure SpectralMeasure::point(double x, double mass) {
  SpectralMeasure mu;
  mu.add_atom(x, mass);
  return mu;
}

SpectralMeasure& SpectralMeasure::add_atom(double x, double mass) {
  atoms_.push_back({x, mass});
  return *this;
}

SpectralMeasure& SpectralMeasure::set_density_vs_pi(Density f) {
  vs_pi_ = std::move(f);
  return *this;
}

SpectralMeasure& SpectralMeasure::set_density_vs_dx(Density g) {
  vs_dx_ = std::move(g);
  return *this;
}

SpectralMeasure& SpectralMeasure::set_quadrature_nodes(std::size_t nodes) {
  quad_nodes_ = nodes;
  return *this;
}

namespace {

constexpr std::size_t kMargin = 16;

std::size_t nodes_for(const SpectralMeasure& mu, const std::optional<Density>& part,
                      std::size_t n_max) {
  const std::size_t deg = part && part->degree() ? *part->degree() : kMargin;
  if (mu.quadrature_nodes() != 0) {
    const std::size_t q = mu.quadrature_nodes();
    if (2 * q < n_max + deg + 1) {
      std::ostringstream os;
      os << "rule with " << q << " nodes cannot resolve degree " << n_max << " + " << deg;
      throw Error(ErrorKind::QuadratureUnderresolved, os.str());
    }
    return q;
  }
  return std::max(2 * n_max + 32, (n_max + deg) / 2 + 32);
}

}  // namespace

void validate(const SpectralMeasure& mu, const PolynomialSystem& sys) {
  const Interval ds = sys.dual_interval();
  for (const Atom& a : mu.atoms()) {
    if (!(a.mass >= 0.0) || !std::isfinite(a.mass)) {
      throw Error(ErrorKind::InvalidArgument, "atom masses must be finite and nonnegative");
    }
    if (!ds.contains(a.x, 1e-12)) {
      std::ostringstream os;
      os << "atom at " << a.x << " lies outside the dual interval [" << ds.lo << ", " << ds.hi
         << "]";
      throw Error(ErrorKind::InvalidArgument, os.str());
    }
  }
  if (mu.is_atomic() && mu.atoms().empty()) {
    throw Error(ErrorKind::InvalidArgument, "measure is empty");
  }
}

std::vector<Atom> atomize(const SpectralMeasure& mu, const PolynomialSystem& sys,
                          std::size_t nodes) {
  validate(mu, sys);
  std::vector<Atom> out = mu.atoms();
  if (mu.density_vs_pi()) {
    const auto rule = gauss_rule(sys, nodes);
    for (std::size_t j = 0; j < rule->size(); ++j) {
      const double x = rule->nodes[j];
      out.push_back({x, rule->weights[j] * (*mu.density_vs_pi())(x, sys)});
    }
  }
  if (mu.density_vs_dx()) {
    const QuadratureRule rule = cosine_substituted_rule(sys.dual_interval(), nodes);
    for (std::size_t j = 0; j < rule.size(); ++j) {
      const double x = rule.nodes[j];
      out.push_back({x, rule.weights[j] * (*mu.density_vs_dx())(x, sys)});
    }
  }
  return out;
}

std::vector<double> moments(const SpectralMeasure& mu, const PolynomialSystem& sys,
                            std::size_t n_max) {
  validate(mu, sys);
  std::vector<double> d(n_max + 1, 0.0);
  std::vector<double> p(n_max + 1);
  auto accumulate = [&](double x, double w) {
    if (w == 0.0) return;
    sys.evaluate_all(n_max, x, p.data());
    for (std::size_t k = 0; k <= n_max; ++k) d[k] += w * p[k];
  };
  for (const Atom& a : mu.atoms()) accumulate(a.x, a.mass);
  if (mu.density_vs_pi()) {
    const auto rule = gauss_rule(sys, nodes_for(mu, mu.density_vs_pi(), n_max));
    for (std::size_t j = 0; j < rule->size(); ++j) {
      const double x = rule->nodes[j];
      accumulate(x, rule->weights[j] * (*mu.density_vs_pi())(x, sys));
    }
  }
  if (mu.density_vs_dx()) {
    const QuadratureRule rule =
        cosine_substituted_rule(sys.dual_interval(), nodes_for(mu, mu.density_vs_dx(), n_max));
    for (std::size_t j = 0; j < rule.size(); ++j) {
      const double x = rule.nodes[j];
      accumulate(x, rule.weights[j] * (*mu.density_vs_dx())(x, sys));
    }
  }
  if (!(d[0] > 0.0)) throw Error(ErrorKind::InvalidArgument, "measure has no positive mass");
  return d;
}

double moment(const SpectralMeasure& mu, const PolynomialSystem& sys, std::size_t n) {
  return moments(mu, sys, n)[n];
}

double total_mass(const SpectralMeasure& mu, const PolynomialSystem& sys) {
  return moments(mu, sys, 0)[0];
}

double continuous_density(const SpectralMeasure& mu, const PolynomialSystem& sys, double x) {
  double v = 0.0;
  if (mu.density_vs_pi()) v += (*mu.density_vs_pi())(x, sys) * sys.orthogonality_density(x);
  if (mu.density_vs_dx()) v += (*mu.density_vs_dx())(x, sys);
  return v;
}

KsResult kolmogorov_szego_integral(const SpectralMeasure& mu, const PolynomialSystem& sys,
                                   std::size_t grid) {
  const Interval ds = sys.dual_interval();
  if (ds.lo < -1.0 - 1e-12 || ds.hi > 1.0 + 1e-12) {
    throw Error(ErrorKind::InvalidArgument, "dual interval must lie inside [-1, 1]");
  }
  KsResult r;
  if (mu.is_atomic()) {
    r.value = -INFINITY;
    r.diverged = true;
    r.no_density = true;
    return r;
  }
  // t = pi (u - sin(2 pi u) / (2 pi)) flattens the logarithmic endpoint singularities;
  // midpoint rule in u.
  constexpr double kTwoPi = 2.0 * std::numbers::pi;
  const double h = 1.0 / static_cast<double>(grid);
  double vanishing = 0.0;
  double acc = 0.0;
  for (std::size_t j = 0; j < grid; ++j) {
    const double u = (static_cast<double>(j) + 0.5) * h;
    const double t = std::numbers::pi * (u - std::sin(kTwoPi * u) / kTwoPi);
    const double dt = std::numbers::pi * (1.0 - std::cos(kTwoPi * u)) * h;
    const double f = continuous_density(mu, sys, std::cos(t));
    if (!(f >= 1e-300)) {
      vanishing += dt;
      continue;
    }
    acc += std::log(f) * dt;
  }
  if (vanishing > 0.01 * std::numbers::pi) {
    r.value = -INFINITY;
    r.diverged = true;
    return r;
  }
  r.value = acc;
  r.diverged = acc < -1e3;
  return r;
}

BiMeasure BiMeasure::from_atoms(std::vector<BiAtom> atoms, double tol) {
  // merge coincident atoms and index the distinct support coordinates
  std::map<std::pair<double, double>, std::complex<double>> merged;
  std::vector<double> points;
  for (const BiAtom& a : atoms) {
    merged[{a.x, a.y}] += a.w;
    points.push_back(a.x);
    points.push_back(a.y);
  }
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  const auto n = static_cast<Eigen::Index>(points.size());
  auto idx = [&](double v) {
    return static_cast<Eigen::Index>(std::lower_bound(points.begin(), points.end(), v) -
                                     points.begin());
  };
  Eigen::MatrixXcd W = Eigen::MatrixXcd::Zero(n, n);
  for (const auto& [xy, w] : merged) W(idx(xy.first), idx(xy.second)) = w;
  const double scale = std::max(1.0, W.cwiseAbs().maxCoeff());
  if ((W - W.adjoint()).cwiseAbs().maxCoeff() > tol * scale) {
    throw Error(ErrorKind::InvalidArgument, "bimeasure weights are not hermitian");
  }
  if (n > 0) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> solver(W, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -tol * scale) {
      throw Error(ErrorKind::InvalidArgument, "bimeasure weights are not positive semidefinite");
    }
  }
  BiMeasure out;
  for (const auto& [xy, w] : merged) {
    if (w != std::complex<double>(0.0)) out.atoms_.push_back({xy.first, xy.second, w});
  }
  return out;
}

BiMeasure BiMeasure::product(const std::vector<std::pair<double, std::complex<double>>>& nu) {
  std::vector<BiAtom> atoms;
  for (const auto& [x, wx] : nu) {
    for (const auto& [y, wy] : nu) atoms.push_back({x, y, wx * std::conj(wy)});
  }
  return from_atoms(std::move(atoms));
}

BiMeasure BiMeasure::diagonal(SpectralMeasure mu) {
  BiMeasure out;
  for (const Atom& a : mu.atoms()) out.atoms_.push_back({a.x, a.x, a.mass});
  if (!mu.is_atomic()) {
    SpectralMeasure cont;
    if (mu.density_vs_pi()) cont.set_density_vs_pi(*mu.density_vs_pi());
    if (mu.density_vs_dx()) cont.set_density_vs_dx(*mu.density_vs_dx());
    cont.set_quadrature_nodes(mu.quadrature_nodes());
    out.diagonal_ = std::move(cont);
  }
  return out;
}

BiMeasure BiMeasure::truncated(const PolynomialSystem& sys,
                               const std::vector<std::size_t>& index_set,
                               const Eigen::MatrixXd& kernel_block) {
  const auto sz = static_cast<Eigen::Index>(index_set.size());
  if (kernel_block.rows() != sz || kernel_block.cols() != sz) {
    throw Error(ErrorKind::InvalidArgument, "kernel block must be |A| x |A|");
  }
  BiMeasure out;
  for (Eigen::Index i = 0; i < sz; ++i) {
    for (Eigen::Index j = 0; j < sz; ++j) {
      const std::size_t s = index_set[static_cast<std::size_t>(i)];
      const std::size_t t = index_set[static_cast<std::size_t>(j)];
      const double w = kernel_block(i, j) * haar_weight(sys, s) * haar_weight(sys, t);
      out.separable_.push_back({w, Density::basis_polynomial(s), Density::basis_polynomial(t)});
    }
  }
  return out;
}

BiMeasure& BiMeasure::add_separable(SeparableTerm term) {
  separable_.push_back(std::move(term));
  return *this;
}

namespace {

// int P_k f dpi for k <= n_max
std::vector<double> pi_integrals(const Density& f, const PolynomialSystem& sys,
                                 std::size_t n_max) {
  const std::size_t deg = f.degree() ? *f.degree() : kMargin;
  const auto rule = gauss_rule(sys, std::max(2 * n_max + 32, (n_max + deg) / 2 + 32));
  std::vector<double> out(n_max + 1, 0.0), p(n_max + 1);
  for (std::size_t j = 0; j < rule->size(); ++j) {
    const double x = rule->nodes[j];
    const double w = rule->weights[j] * f(x, sys);
    sys.evaluate_all(n_max, x, p.data());
    for (std::size_t k = 0; k <= n_max; ++k) out[k] += w * p[k];
  }
  return out;
}

}  // namespace

Eigen::MatrixXcd bimoment_matrix(const BiMeasure& mu2, const PolynomialSystem& sys,
                                 std::size_t N) {
  const auto sz = static_cast<Eigen::Index>(N + 1);
  Eigen::MatrixXcd K = Eigen::MatrixXcd::Zero(sz, sz);
  std::vector<double> px(N + 1), py(N + 1);
  for (const BiAtom& a : mu2.atoms()) {
    sys.evaluate_all(N, a.x, px.data());
    sys.evaluate_all(N, a.y, py.data());
    for (std::size_t n = 0; n <= N; ++n) {
      for (std::size_t m = 0; m <= N; ++m) {
        K(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) += a.w * px[n] * py[m];
      }
    }
  }
  if (mu2.diagonal_part()) {
    const auto d = moments(*mu2.diagonal_part(), sys, 2 * N);
    for (std::size_t n = 0; n <= N; ++n) {
      for (std::size_t m = 0; m <= N; ++m) {
        K(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) += translate(sys, d, n, m);
      }
    }
  }
  for (const SeparableTerm& t : mu2.separable()) {
    const auto u = pi_integrals(t.fx, sys, N);
    const auto v = pi_integrals(t.fy, sys, N);
    for (std::size_t n = 0; n <= N; ++n) {
      for (std::size_t m = 0; m <= N; ++m) {
        K(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) += t.weight * u[n] * v[m];
      }
    }
  }
  return K;
}

std::complex<double> bimoment(const BiMeasure& mu2, const PolynomialSystem& sys, std::size_t n,
                              std::size_t m) {
  std::complex<double> acc = 0.0;
  for (const BiAtom& a : mu2.atoms()) acc += a.w * sys.evaluate(n, a.x) * sys.evaluate(m, a.y);
  if (mu2.diagonal_part()) {
    const auto d = moments(*mu2.diagonal_part(), sys, n + m);
    acc += translate(sys, d, n, m);
  }
  const std::size_t top = std::max(n, m);
  for (const SeparableTerm& t : mu2.separable()) {
    acc += t.weight * pi_integrals(t.fx, sys, top)[n] * pi_integrals(t.fy, sys, top)[m];
  }
  return acc;
}

}  // namespace hypergroup
