#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace hypergroup {

enum class Family {
  ChebyshevFirst,
  ChebyshevSecond,
  Jacobi,
  CartierDunau,
  BernsteinSzego,
  AssociatedUltraspherical,
  Custom,
};

const char* family_name(Family f);

/// Coefficients of P_1 P_n = a P_{n+1} + b P_n + c P_{n-1}; for n = 0 they
/// are (a0, b0, 0) with P_1 = (x - b0) / a0.
struct Recurrence {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

/// Coefficients of x P_n = next P_{n+1} + same P_n + prev P_{n-1}.
struct XRecurrence {
  double next = 0.0;
  double same = 0.0;
  double prev = 0.0;
};

struct Interval {
  double lo = -1.0;
  double hi = 1.0;
  bool contains(double x, double slack = 0.0) const { return x >= lo - slack && x <= hi + slack; }
};

/// Orthogonal polynomial system normalized by P_n(1) = 1.
class PolynomialSystem {
 public:
  using CoefficientFn = std::function<Recurrence(std::size_t)>;

  static PolynomialSystem chebyshev_first();
  static PolynomialSystem chebyshev_second();
  static PolynomialSystem jacobi(double alpha, double beta);
  static PolynomialSystem cartier_dunau(double q);
  static PolynomialSystem bernstein_szego(double nu, double kappa);
  /// Diagnostics-only family; coefficients tabulated up to a fixed depth.
  static PolynomialSystem associated_ultraspherical(double alpha, double nu,
                                                    std::size_t depth = 4096);
  static PolynomialSystem custom(CoefficientFn fn, Interval dual, std::string label = "custom");

  Family family() const { return family_; }
  const std::vector<double>& params() const { return params_; }
  std::string label() const;

  Recurrence recurrence(std::size_t n) const;
  XRecurrence x_recurrence(std::size_t n) const;

  double evaluate(std::size_t n, double x) const;
  /// P_0(x) .. P_n_max(x).
  std::vector<double> evaluate_all(std::size_t n_max, double x) const;
  void evaluate_all(std::size_t n_max, double x, double* out) const;

  /// ln of the leading coefficient of P_n.
  double leading_coefficient_log(std::size_t n) const;
  std::vector<double> leading_coefficient_logs(std::size_t n_max) const;

  /// Region where the sequence (P_n(x)) is bounded.
  Interval dual_interval() const { return dual_; }
  /// Support of the orthogonalization measure.
  Interval support() const { return support_; }

  /// b_n = 0 for all n.
  bool is_even() const { return even_; }
  /// Built-in families with a known orthogonality density.
  bool has_density() const;
  /// Density of the orthogonalization measure w.r.t. dx (0 outside support).
  double orthogonality_density(double x) const;
  /// Families for which simulation and prediction are supported.
  bool simulation_grade() const { return family_ != Family::AssociatedUltraspherical; }

 private:
  PolynomialSystem() = default;

  Family family_ = Family::Custom;
  std::vector<double> params_;
  std::string custom_label_;
  Interval dual_{};
  Interval support_{};
  bool even_ = false;
  double density_norm_ = 1.0;
  CoefficientFn custom_;
  std::shared_ptr<const std::vector<Recurrence>> table_;
};

/// Haar weight of the associated ultraspherical family by its closed form.
double associated_ultraspherical_haar(double alpha, double nu, std::size_t n);

}  // namespace hypergroup
