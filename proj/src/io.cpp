#include "hypergroup/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <cctype>
#include <istream>
#include <optional>
#include <ostream>
#include <sstream>

#include "hypergroup/error.hpp"

namespace hypergroup::io {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, sep)) out.push_back(item);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double to_double(const std::string& s, const std::string& context) {
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::InvalidArgument, "cannot read number '" + s + "' in " + context);
  }
}

std::vector<double> numbers(const std::string& list, const std::string& context) {
  std::vector<double> out;
  for (const auto& item : split(list, ',')) out.push_back(to_double(item, context));
  return out;
}

// Inline JSON, a JSON file, or nothing.
std::optional<json> as_json(const std::string& descriptor) {
  const auto first = descriptor.find_first_not_of(" \t\n");
  if (first != std::string::npos && descriptor[first] == '{') {
    try {
      return json::parse(descriptor);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::InvalidArgument, std::string("malformed JSON descriptor: ") + e.what());
    }
  }
  if (descriptor.size() > 5 && descriptor.substr(descriptor.size() - 5) == ".json") {
    std::ifstream in(descriptor);
    if (!in) throw Error(ErrorKind::InvalidArgument, "cannot open " + descriptor);
    try {
      return json::parse(in);
    } catch (const json::exception& e) {
      throw Error(ErrorKind::InvalidArgument, descriptor + ": " + e.what());
    }
  }
  return std::nullopt;
}

std::string normalized(std::string name) {
  std::replace(name.begin(), name.end(), '-', '_');
  std::transform(name.begin(), name.end(), name.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return name;
}

double field(const json& j, const char* key) {
  if (!j.contains(key) || !j.at(key).is_number()) {
    throw Error(ErrorKind::InvalidArgument, std::string("descriptor needs numeric '") + key + "'");
  }
  return j.at(key).get<double>();
}

}  // namespace

PolynomialSystem system_from_json(const json& j) {
  if (!j.contains("family")) throw Error(ErrorKind::InvalidArgument, "system needs 'family'");
  const std::string family = normalized(j.at("family").get<std::string>());
  if (family == "chebyshev1" || family == "chebyshev_first") {
    return PolynomialSystem::chebyshev_first();
  }
  if (family == "chebyshev2" || family == "chebyshev_second") {
    return PolynomialSystem::chebyshev_second();
  }
  if (family == "jacobi") return PolynomialSystem::jacobi(field(j, "alpha"), field(j, "beta"));
  if (family == "cartier_dunau") return PolynomialSystem::cartier_dunau(field(j, "q"));
  if (family == "bernstein_szego") {
    return PolynomialSystem::bernstein_szego(field(j, "nu"), field(j, "kappa"));
  }
  if (family == "associated_ultraspherical") {
    return PolynomialSystem::associated_ultraspherical(field(j, "alpha"), field(j, "nu"));
  }
  if (family == "custom") {
    // tabulated a, b, c; the last entry repeats beyond the table
    const auto a = j.at("a").get<std::vector<double>>();
    const auto b = j.at("b").get<std::vector<double>>();
    const auto c = j.at("c").get<std::vector<double>>();
    if (a.empty() || a.size() != b.size() || a.size() != c.size()) {
      throw Error(ErrorKind::InvalidArgument, "custom a, b, c must be nonempty and equally long");
    }
    Interval dual{-1.0, 1.0};
    if (j.contains("dual")) {
      const auto d = j.at("dual").get<std::vector<double>>();
      if (d.size() != 2) throw Error(ErrorKind::InvalidArgument, "dual must be [lo, hi]");
      dual = {d[0], d[1]};
    }
    const std::string label = j.value("label", std::string("custom"));
    return PolynomialSystem::custom(
        [a, b, c](std::size_t n) {
          const std::size_t i = std::min(n, a.size() - 1);
          return Recurrence{a[i], b[i], n == 0 ? 0.0 : c[i]};
        },
        dual, label);
  }
  throw Error(ErrorKind::InvalidArgument, "unknown family '" + family + "'");
}

PolynomialSystem parse_system(const std::string& descriptor) {
  if (auto j = as_json(descriptor)) return system_from_json(*j);
  const auto colon = descriptor.find(':');
  const std::string name = normalized(descriptor.substr(0, colon));
  const std::string args = colon == std::string::npos ? "" : descriptor.substr(colon + 1);
  const auto p = args.empty() ? std::vector<double>{} : numbers(args, "system " + descriptor);
  auto need = [&](std::size_t count) {
    if (p.size() != count) {
      std::ostringstream os;
      os << "system '" << name << "' takes " << count << " parameter(s)";
      throw Error(ErrorKind::InvalidArgument, os.str());
    }
  };
  if (name == "chebyshev1" || name == "chebyshev_first") {
    need(0);
    return PolynomialSystem::chebyshev_first();
  }
  if (name == "chebyshev2" || name == "chebyshev_second") {
    need(0);
    return PolynomialSystem::chebyshev_second();
  }
  if (name == "jacobi") {
    need(2);
    return PolynomialSystem::jacobi(p[0], p[1]);
  }
  if (name == "cartier_dunau") {
    need(1);
    return PolynomialSystem::cartier_dunau(p[0]);
  }
  if (name == "bernstein_szego") {
    need(2);
    return PolynomialSystem::bernstein_szego(p[0], p[1]);
  }
  if (name == "associated_ultraspherical") {
    need(2);
    return PolynomialSystem::associated_ultraspherical(p[0], p[1]);
  }
  throw Error(ErrorKind::InvalidArgument,
              "unknown system '" + descriptor +
                  "' (chebyshev1, chebyshev2, jacobi:a,b, cartier-dunau:q, "
                  "bernstein-szego:nu,kappa, associated-ultraspherical:a,nu)");
}

json system_to_json(const PolynomialSystem& sys) {
  const auto& p = sys.params();
  switch (sys.family()) {
    case Family::ChebyshevFirst: return {{"family", "chebyshev1"}};
    case Family::ChebyshevSecond: return {{"family", "chebyshev2"}};
    case Family::Jacobi: return {{"family", "jacobi"}, {"alpha", p[0]}, {"beta", p[1]}};
    case Family::CartierDunau: return {{"family", "cartier_dunau"}, {"q", p[0]}};
    case Family::BernsteinSzego:
      return {{"family", "bernstein_szego"}, {"nu", p[0]}, {"kappa", p[1]}};
    case Family::AssociatedUltraspherical:
      return {{"family", "associated_ultraspherical"}, {"alpha", p[0]}, {"nu", p[1]}};
    case Family::Custom: return {{"family", "custom"}, {"label", sys.label()}};
  }
  return {};
}

Density density_from_json(const json& j) {
  const std::string kind = normalized(j.value("kind", std::string("constant")));
  if (kind == "constant") return Density::constant(j.value("value", 1.0));
  if (kind == "polynomial") return Density::polynomial(j.at("coeffs").get<std::vector<double>>());
  if (kind == "moving_average") {
    return Density::moving_average(j.at("coeffs").get<std::vector<double>>());
  }
  if (kind == "basis_polynomial") {
    return Density::basis_polynomial(j.at("index").get<std::size_t>(), j.value("scale", 1.0));
  }
  if (kind == "jacobi_weight") {
    return Density::jacobi_weight(j.value("c", 1.0), field(j, "alpha"), field(j, "beta"));
  }
  throw Error(ErrorKind::InvalidArgument, "unknown density kind '" + kind + "'");
}

json density_to_json(const Density& d) {
  switch (d.kind()) {
    case DensityKind::Constant: return {{"kind", "constant"}, {"value", d.coeffs()[0]}};
    case DensityKind::Polynomial: return {{"kind", "polynomial"}, {"coeffs", d.coeffs()}};
    case DensityKind::MovingAverage: return {{"kind", "moving_average"}, {"coeffs", d.coeffs()}};
    case DensityKind::BasisPolynomial:
      return {{"kind", "basis_polynomial"}, {"index", d.index()}, {"scale", d.coeffs()[0]}};
    case DensityKind::JacobiWeight:
      return {{"kind", "jacobi_weight"},
              {"c", d.coeffs()[0]},
              {"alpha", d.coeffs()[1]},
              {"beta", d.coeffs()[2]}};
    case DensityKind::Function: break;
  }
  throw Error(ErrorKind::InvalidArgument, "density '" + d.tag() + "' is not serializable");
}

SpectralMeasure measure_from_json(const json& j) {
  SpectralMeasure mu;
  if (j.contains("atoms")) {
    for (const auto& a : j.at("atoms")) mu.add_atom(field(a, "x"), a.value("mass", 1.0));
  }
  if (j.contains("pi")) mu.set_density_vs_pi(Density::constant(j.at("pi").get<double>()));
  if (j.contains("density_vs_pi")) mu.set_density_vs_pi(density_from_json(j.at("density_vs_pi")));
  if (j.contains("density_vs_dx")) mu.set_density_vs_dx(density_from_json(j.at("density_vs_dx")));
  if (j.contains("quadrature_nodes")) {
    mu.set_quadrature_nodes(j.at("quadrature_nodes").get<std::size_t>());
  }
  if (mu.atoms().empty() && mu.is_atomic()) {
    throw Error(ErrorKind::InvalidArgument, "measure descriptor is empty");
  }
  return mu;
}

SpectralMeasure parse_measure(const std::string& descriptor) {
  if (auto j = as_json(descriptor)) return measure_from_json(*j);
  SpectralMeasure mu;
  for (const auto& term : split(descriptor, '+')) {
    const auto parts = split(term, ':');
    const std::string name = parts.empty() ? "" : normalized(parts[0]);
    if (name == "pi" && parts.size() <= 2) {
      mu.set_density_vs_pi(
          Density::constant(parts.size() == 2 ? to_double(parts[1], "measure " + term) : 1.0));
    } else if (name == "point" && (parts.size() == 2 || parts.size() == 3)) {
      mu.add_atom(to_double(parts[1], "measure " + term),
                  parts.size() == 3 ? to_double(parts[2], "measure " + term) : 1.0);
    } else {
      throw Error(ErrorKind::InvalidArgument,
                  "unknown measure term '" + term + "' (pi, pi:scale, point:x, point:x:mass)");
    }
  }
  return mu;
}

json measure_to_json(const SpectralMeasure& mu) {
  json j = json::object();
  if (!mu.atoms().empty()) {
    json atoms = json::array();
    for (const Atom& a : mu.atoms()) atoms.push_back({{"x", a.x}, {"mass", a.mass}});
    j["atoms"] = atoms;
  }
  if (mu.density_vs_pi()) j["density_vs_pi"] = density_to_json(*mu.density_vs_pi());
  if (mu.density_vs_dx()) j["density_vs_dx"] = density_to_json(*mu.density_vs_dx());
  if (mu.quadrature_nodes() != 0) j["quadrature_nodes"] = mu.quadrature_nodes();
  return j;
}

json report_to_json(const DeterminismReport& r) {
  auto finite_or_null = [](double v) -> json {
    if (std::isfinite(v)) return v;
    return nullptr;
  };
  json j;
  j["system"] = r.system;
  j["probe"] = r.probe;
  j["haar_growth"] = haar_growth_name(r.haar_growth);
  j["haar_exponent"] = r.haar_exponent;
  j["haar_log_rate"] = r.haar_log_rate;
  j["ks_pi"] = r.ks_pi ? json(*r.ks_pi) : json(nullptr);
  j["ks_pi_value"] = finite_or_null(r.ks_pi_value);
  j["ks_mu"] = r.ks_mu ? json(*r.ks_mu) : json(nullptr);
  j["ks_mu_value"] = finite_or_null(r.ks_mu_value);
  j["even"] = r.even;
  j["a_limit"] = r.a_limit;
  j["summability_partial"] = r.summability_partial;
  j["summability_tail"] = r.summability_tail;
  j["moment_tail"] = r.moment_tail;
  j["verdict"] = verdict_name(r.verdict);
  j["certificate"] = r.certificate;
  j["rate_exponent"] = r.rate_exponent ? json(*r.rate_exponent) : json(nullptr);
  return j;
}

void write_columns(std::ostream& os, const std::vector<std::string>& header,
                   const std::vector<std::vector<double>>& columns) {
  const auto old = os.precision(17);
  for (std::size_t i = 0; i < header.size(); ++i) os << (i ? "," : "") << header[i];
  os << '\n';
  std::size_t rows = 0;
  for (const auto& c : columns) rows = std::max(rows, c.size());
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) os << ',';
      if (r < columns[i].size()) os << columns[i][r];
    }
    os << '\n';
  }
  os.precision(old);
}

void write_matrix_csv(std::ostream& os, const Eigen::MatrixXd& m) {
  const auto old = os.precision(17);
  for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? "," : "") << 'c' << j;
  os << '\n';
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) os << (j ? "," : "") << m(i, j);
    os << '\n';
  }
  os.precision(old);
}

namespace {

bool numeric_row(const std::string& line) {
  const auto first = line.find_first_not_of(" \t");
  return first != std::string::npos &&
         (std::isdigit(static_cast<unsigned char>(line[first])) || line[first] == '-' ||
          line[first] == '+' || line[first] == '.');
}

}  // namespace

Eigen::MatrixXd read_matrix_csv(std::istream& is) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (rows.empty() && !numeric_row(line)) continue;
    rows.push_back(numbers(line, "matrix row"));
    if (rows.back().size() != rows.front().size()) {
      throw Error(ErrorKind::InvalidArgument, "ragged matrix CSV");
    }
  }
  if (rows.empty()) throw Error(ErrorKind::InvalidArgument, "empty matrix CSV");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return m;
}

std::vector<double> read_vector_csv(std::istream& is) {
  std::vector<double> out;
  std::string line;
  bool first = true;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (first && !numeric_row(line)) {
      first = false;
      continue;
    }
    first = false;
    const auto fields = split(line, ',');
    out.push_back(to_double(fields.back(), "vector row"));
  }
  if (out.empty()) throw Error(ErrorKind::InvalidArgument, "empty vector CSV");
  return out;
}

}  // namespace hypergroup::io
