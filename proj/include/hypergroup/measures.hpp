#pragma once

#include <Eigen/Dense>
#include <complex>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "hypergroup/polysys.hpp"

namespace hypergroup {

enum class DensityKind {
  Constant,        // c
  Polynomial,      // sum_j coeffs[j] x^j
  MovingAverage,   // |sum_k coeffs[k] P_k(x)|^2
  BasisPolynomial, // coeffs[0] * P_index(x)
  JacobiWeight,    // c (1-x)^alpha (1+x)^beta
  Function,        // opaque callable, not serializable
};

/// Real function on the dual interval, optionally tied to the polynomial system.
class Density {
 public:
  static Density constant(double c);
  static Density polynomial(std::vector<double> monomial_coeffs);
  static Density moving_average(std::vector<double> basis_coeffs);
  static Density basis_polynomial(std::size_t index, double scale = 1.0);
  static Density jacobi_weight(double c, double alpha, double beta);
  static Density function(std::function<double(double)> f, std::string tag = "function");

  double operator()(double x, const PolynomialSystem& sys) const;
  DensityKind kind() const { return kind_; }
  const std::vector<double>& coeffs() const { return coeffs_; }
  std::size_t index() const { return index_; }
  const std::string& tag() const { return tag_; }
  /// Polynomial degree when known.
  std::optional<std::size_t> degree() const;

 private:
  DensityKind kind_ = DensityKind::Constant;
  std::vector<double> coeffs_;
  std::size_t index_ = 0;
  std::function<double(double)> fn_;
  std::string tag_;
};

struct Atom {
  double x = 0.0;
  double mass = 0.0;
};

/// Positive measure on the dual interval: atoms + f dpi + g dx.
class SpectralMeasure {
 public:
  SpectralMeasure() = default;

  /// The orthogonalization measure pi of whichever system it is paired with.
  static SpectralMeasure orthogonality(double scale = 1.0);
  static SpectralMeasure point(double x, double mass = 1.0);

  SpectralMeasure& add_atom(double x, double mass);
  SpectralMeasure& set_density_vs_pi(Density f);
  SpectralMeasure& set_density_vs_dx(Density g);
  /// Node count for the continuous parts; 0 selects 2 n_max + 32.
  SpectralMeasure& set_quadrature_nodes(std::size_t nodes);

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::optional<Density>& density_vs_pi() const { return vs_pi_; }
  const std::optional<Density>& density_vs_dx() const { return vs_dx_; }
  std::size_t quadrature_nodes() const { return quad_nodes_; }
  bool is_atomic() const { return !vs_pi_ && !vs_dx_; }

 private:
  std::vector<Atom> atoms_;
  std::optional<Density> vs_pi_;
  std::optional<Density> vs_dx_;
  std::size_t quad_nodes_ = 0;
};

/// Checks atoms lie in the dual interval, masses are nonnegative and the total is positive.
void validate(const SpectralMeasure& mu, const PolynomialSystem& sys);

/// d(0) .. d(n_max).
std::vector<double> moments(const SpectralMeasure& mu, const PolynomialSystem& sys,
                            std::size_t n_max);
double moment(const SpectralMeasure& mu, const PolynomialSystem& sys, std::size_t n);
double total_mass(const SpectralMeasure& mu, const PolynomialSystem& sys);

/// Discrete surrogate: atoms plus quadrature nodes carrying weight x density.
/// Integrates P_n P_m exactly for polynomial densities against pi when
/// nodes is large enough.
std::vector<Atom> atomize(const SpectralMeasure& mu, const PolynomialSystem& sys,
                          std::size_t nodes);

/// Density of the absolutely continuous part w.r.t. dx.
double continuous_density(const SpectralMeasure& mu, const PolynomialSystem& sys, double x);

struct KsResult {
  double value = 0.0;
  bool diverged = false;
  bool no_density = false;
};

/// integral of ln mu'(x) / sqrt(1-x^2) over [-1,1], as int_0^pi ln mu'(cos t) dt.
KsResult kolmogorov_szego_integral(const SpectralMeasure& mu, const PolynomialSystem& sys,
                                   std::size_t grid = 20000);

struct BiAtom {
  double x = 0.0;
  double y = 0.0;
  std::complex<double> w;
};

/// weight * fx(x) fy(y) against pi x pi.
struct SeparableTerm {
  std::complex<double> weight;
  Density fx;
  Density fy;
};

/// Complex measure on D x D for harmonizable kernels.
class BiMeasure {
 public:
  BiMeasure() = default;

  /// Validates hermitian symmetry and positive semidefiniteness of the atom weights.
  static BiMeasure from_atoms(std::vector<BiAtom> atoms, double tol = 1e-10);
  /// nu x conj(nu) for a complex atomic measure nu.
  static BiMeasure product(const std::vector<std::pair<double, std::complex<double>>>& nu);
  /// Lift of mu onto the diagonal.
  static BiMeasure diagonal(SpectralMeasure mu);
  /// Density sum_{s,t in A} d(s,t) h(s) h(t) P_s(x) P_t(y) against pi x pi.
  static BiMeasure truncated(const PolynomialSystem& sys, const std::vector<std::size_t>& index_set,
                             const Eigen::MatrixXd& kernel_block);

  BiMeasure& add_separable(SeparableTerm term);

  const std::vector<BiAtom>& atoms() const { return atoms_; }
  const std::optional<SpectralMeasure>& diagonal_part() const { return diagonal_; }
  const std::vector<SeparableTerm>& separable() const { return separable_; }
  bool is_atomic() const { return !diagonal_ && separable_.empty(); }
  bool is_hermitian() const { return true; }

 private:
  std::vector<BiAtom> atoms_;
  std::optional<SpectralMeasure> diagonal_;
  std::vector<SeparableTerm> separable_;
};

std::complex<double> bimoment(const BiMeasure& mu2, const PolynomialSystem& sys, std::size_t n,
                              std::size_t m);
/// [bimoment(n, m)] for n, m <= N.
Eigen::MatrixXcd bimoment_matrix(const BiMeasure& mu2, const PolynomialSystem& sys, std::size_t N);

}  // namespace hypergroup
