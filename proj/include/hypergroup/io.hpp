#pragma once

#include <Eigen/Dense>
#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "hypergroup/measures.hpp"
#include "hypergroup/polysys.hpp"
#include "hypergroup/predict.hpp"

namespace hypergroup::io {

using nlohmann::json;

/// Shorthand (chebyshev1, chebyshev2, jacobi:a,b, cartier-dunau:q,
/// bernstein-szego:nu,kappa, associated-ultraspherical:a,nu), inline JSON, or a JSON file path.
PolynomialSystem parse_system(const std::string& descriptor);
PolynomialSystem system_from_json(const json& j);
json system_to_json(const PolynomialSystem& sys);

/// Shorthand terms joined by '+': pi, pi:scale, point:x, point:x:mass;
/// or inline JSON, or a JSON file path.
SpectralMeasure parse_measure(const std::string& descriptor);
SpectralMeasure measure_from_json(const json& j);
/// Throws InvalidArgument for Function densities.
json measure_to_json(const SpectralMeasure& mu);

Density density_from_json(const json& j);
json density_to_json(const Density& d);

json report_to_json(const DeterminismReport& r);

/// Columns with a header row, 17 significant digits.
void write_columns(std::ostream& os, const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& columns);

/// Dense matrix with header c0,c1,...
void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m);
Eigen::MatrixXd read_matrix_csv(std::istream& is);

/// Single numeric column after an optional header; the last field of each row is used.
std::vector<double> read_vector_csv(std::istream& is);

}  // namespace hypergroup::io
