#include "hypergroup/cli.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>

#include "CLI11.hpp"

#include "hypergroup/error.hpp"
#include "hypergroup/estimate.hpp"
#include "hypergroup/hyperconv.hpp"
#include "hypergroup/io.hpp"
#include "hypergroup/kernels.hpp"
#include "hypergroup/opseq.hpp"
#include "hypergroup/predict.hpp"
#include "hypergroup/sequences.hpp"
#include "hypergroup/structmat.hpp"

namespace hypergroup::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Writes to a file, or to the caller's stream for "-".
class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : stream_(&fallback) {
    if (!path.empty() && path != "-") {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw Error(ErrorKind::InvalidArgument, "cannot write " + path);
      stream_ = file_.get();
    }
  }
  std::ostream& operator*() { return *stream_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* stream_;
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::InvalidArgument, "cannot read " + path);
  return in;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw UsageError("cannot read number '" + item + "' in list '" + s + "'");
    }
  }
  return out;
}

std::uint64_t effective_seed(std::uint64_t flag) {
  const char* env = std::getenv("HYPERGROUP_SEED");
  if (env == nullptr || *env == '\0') return flag;
  try {
    std::size_t used = 0;
    const std::string s(env);
    const auto v = std::stoull(s, &used, 10);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw UsageError(std::string("HYPERGROUP_SEED is not an unsigned 64-bit integer: ") + env);
  }
}

struct Common {
  std::string system = "chebyshev1";
  std::string measure = "pi";
  std::string out = "-";
  std::uint64_t seed = 1;
};

struct SimulateOpts {
  std::string generator = "white";
  std::size_t N = 64;
  std::string coeffs = "1";
  std::string convention = "haar";
  std::string atoms = "-0.3333333333333333,0.5";
  double q = 2.0;
};

struct PeriodogramOpts {
  std::string path;
  bool demo = false;
  bool expected = false;
  std::size_t N = 25;
  std::size_t grid = 101;
};

struct DensityOpts {
  std::string moments;
  std::size_t N = 32;
  std::string weights = "fejer";
  std::size_t grid = 201;
};

struct PredictOpts {
  std::size_t n_max = 64;
  std::size_t steps = 1;
  std::string route = "spectral";
  std::string coefficients;
};

struct MatrixOpts {
  std::string matrix;
  std::size_t n = 16;
  bool check = false;
  std::string rhs;
};

struct BenchOpts {
  std::string sizes = "128,256,512";
  bool dense = true;
};

struct KernelOpts {
  std::string kernel;
  double cyclo = 0.0;
  std::size_t N = 8;
  std::size_t period = 2;
  double tol = 1e-12;
};

void simulate(const Common& c, const SimulateOpts& o, std::ostream& out) {
  const auto seed = effective_seed(c.seed);
  const PolynomialSystem sys = io::parse_system(c.system);
  Path path;
  if (o.generator == "white") {
    path = white_noise(sys, o.N, seed);
  } else if (o.generator == "ma") {
    MaConvention conv;
    if (o.convention == "haar") {
      conv = MaConvention::HaarWeighted;
    } else if (o.convention == "subsumed") {
      conv = MaConvention::Subsumed;
    } else {
      throw UsageError("--convention must be haar or subsumed");
    }
    path = ma_sequence(sys, parse_list(o.coeffs), o.N, seed, conv);
  } else if (o.generator == "harmonic") {
    const auto atoms = parse_list(o.atoms);
    const auto s = static_cast<Eigen::Index>(atoms.size());
    path = harmonic_sequence(sys, atoms, Eigen::MatrixXcd::Identity(s, s), o.N, seed);
  } else if (o.generator == "spectral") {
    path = spectral_sequence(sys, io::parse_measure(c.measure), o.N, seed);
  } else if (o.generator == "tree") {
    path = radial_tree_sequence(o.q, io::parse_measure(c.measure), o.N, seed);
  } else {
    throw UsageError("--generator must be white, ma, harmonic, spectral or tree");
  }
  Sink sink(c.out, out);
  write_path_csv(*sink, path);
}

void periodogram_cmd(const Common& c, const PeriodogramOpts& o, std::ostream& out) {
  if (o.demo == !o.path.empty()) throw UsageError("give exactly one of --path or --demo-harmonic");
  if (o.expected && !o.demo) throw UsageError("--expected needs --demo-harmonic");
  const PolynomialSystem sys =
      o.demo ? PolynomialSystem::chebyshev_first() : io::parse_system(c.system);
  Grid2 grid = make_grid2(sys, o.grid);
  Grid2 result;
  if (o.expected) {
    result = expected_periodogram(demo_harmonic_bimeasure(), sys, o.N, std::move(grid));
  } else {
    Path path;
    if (o.demo) {
      path = demo_harmonic(o.N, effective_seed(c.seed));
    } else {
      auto in = open_input(o.path);
      path = read_path_csv(in);
    }
    result = periodogram(path, sys, o.N, std::move(grid));
  }
  Sink sink(c.out, out);
  write_grid_csv(*sink, result);
}

void density_cmd(const Common& c, const DensityOpts& o, std::ostream& out) {
  const PolynomialSystem sys = io::parse_system(c.system);
  std::vector<double> d;
  if (!o.moments.empty()) {
    auto in = open_input(o.moments);
    d = io::read_vector_csv(in);
  } else {
    d = moments(io::parse_measure(c.measure), sys, o.N);
  }
  SpectralWeights w;
  if (o.weights == "fejer") {
    w = SpectralWeights::Fejer;
  } else if (o.weights == "partial") {
    w = SpectralWeights::Partial;
  } else {
    throw UsageError("--weights must be fejer or partial");
  }
  const auto x = make_grid(sys.dual_interval(), o.grid);
  const auto f = density_estimate(d, sys, w, o.N, x);
  Sink sink(c.out, out);
  write_density_csv(*sink, x, f);
}

void predict_cmd(const Common& c, const PredictOpts& o, std::ostream& out) {
  const PolynomialSystem sys = io::parse_system(c.system);
  const SpectralMeasure mu = io::parse_measure(c.measure);
  std::vector<double> ns, delta;
  if (o.route == "gram") {
    if (o.steps != 1) throw UsageError("--route gram supports --steps 1 only");
    const auto d = moments(mu, sys, 2 * o.n_max + 2);
    delta = gram_error_curve(d, sys, o.n_max);
  } else if (o.route == "spectral") {
    const auto d = moments(mu, sys, 2 * (o.n_max + o.steps));
    if (o.steps == 1) {
      // one chain serves every order up to n_max
      std::optional<MonicChain> chain;
      try {
        chain = modified_chebyshev(d, sys, o.n_max + 1);
      } catch (const DegenerateError&) {
      }
      for (std::size_t n = 0; n <= o.n_max; ++n) {
        if (chain) {
          const bool top = n + 1 == chain->depth && chain->top_degenerate;
          delta.push_back(top ? 0.0
                              : std::exp(sys.leading_coefficient_log(n + 1) +
                                         0.5 * chain->norm_sq_log(n + 1)));
          continue;
        }
        try {
          const Predictor p = one_step_from_moments(d, sys, n);
          delta.push_back(p.error);
          if (p.exact) {
            delta.resize(o.n_max + 1, 0.0);
            break;
          }
        } catch (const DegenerateError&) {
          delta.resize(o.n_max + 1, 0.0);
          break;
        }
      }
    } else {
      for (std::size_t n = 0; n <= o.n_max; ++n) {
        delta.push_back(m_step_error_from_moments(d, sys, n, o.steps));
      }
    }
  } else {
    throw UsageError("--route must be spectral or gram");
  }
  if (!o.coefficients.empty()) {
    const Predictor p = one_step_from_moments(moments(mu, sys, 2 * o.n_max + 2), sys, o.n_max);
    std::vector<double> ks(p.coefficients.size());
    for (std::size_t k = 0; k < ks.size(); ++k) ks[k] = static_cast<double>(k);
    Sink sink(o.coefficients, out);
    io::write_columns(*sink, {"k", "b"}, {ks, p.coefficients});
  }
  for (std::size_t n = 0; n < delta.size(); ++n) ns.push_back(static_cast<double>(n));
  Sink sink(c.out, out);
  io::write_columns(*sink, {"n", "delta"}, {ns, delta});
}

void classify_cmd(const Common& c, std::size_t probe, std::ostream& out) {
  const PolynomialSystem sys = io::parse_system(c.system);
  const auto report = classify_determinism(sys, io::parse_measure(c.measure), probe);
  Sink sink(c.out, out);
  *sink << io::report_to_json(report).dump(2) << '\n';
}

StructuredMatrix load_matrix(const Common& c, const MatrixOpts& o, const PolynomialSystem& sys) {
  if (!o.matrix.empty()) {
    auto in = open_input(o.matrix);
    StructuredMatrix M;
    M.entries = io::read_matrix_csv(in);
    if (M.entries.rows() != M.entries.cols()) {
      throw Error(ErrorKind::InconsistentMatrix, "matrix is not square");
    }
    return M;
  }
  return build_matrix(moments(io::parse_measure(c.measure), sys, 2 * o.n), sys, o.n);
}

void factor_cmd(const Common& c, const MatrixOpts& o, std::ostream& out, std::ostream& report) {
  const PolynomialSystem sys = io::parse_system(c.system);
  const StructuredMatrix M = load_matrix(c, o, sys);
  const LdlFactors f = ldl_decompose(M, sys);
  if (o.check) {
    const auto n = M.entries.rows();
    const double residual =
        (f.inverse() * M.entries - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().rowwise().sum().maxCoeff();
    const auto old = report.precision(17);
    report << "reconstruction_residual," << residual << '\n';
    report.precision(old);
  }
  if (c.out.empty()) return;
  Sink sink(c.out, out);
  const auto old = (*sink).precision(17);
  *sink << "factor,k,l,value\n";
  for (Eigen::Index k = 0; k < f.L.rows(); ++k) {
    for (Eigen::Index l = 0; l <= k; ++l) *sink << "L," << k << ',' << l << ',' << f.L(k, l) << '\n';
  }
  for (Eigen::Index k = 0; k < f.D.size(); ++k) *sink << "D," << k << ',' << k << ',' << f.D(k) << '\n';
  (*sink).precision(old);
}

void solve_cmd(const Common& c, const MatrixOpts& o, std::ostream& out) {
  const PolynomialSystem sys = io::parse_system(c.system);
  const StructuredMatrix M = load_matrix(c, o, sys);
  if (o.rhs.empty()) throw UsageError("solve needs --rhs");
  auto in = open_input(o.rhs);
  const auto b = io::read_vector_csv(in);
  if (static_cast<Eigen::Index>(b.size()) != M.entries.rows()) {
    throw Error(ErrorKind::InvalidArgument, "right-hand side length differs from matrix order");
  }
  const Eigen::VectorXd x = solve(M, sys, Eigen::Map<const Eigen::VectorXd>(b.data(), M.entries.rows()));
  std::vector<double> ks, xs;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    ks.push_back(static_cast<double>(k));
    xs.push_back(x(k));
  }
  Sink sink(c.out, out);
  io::write_columns(*sink, {"k", "x"}, {ks, xs});
}

void bench_cmd(const Common& c, const BenchOpts& o, std::ostream& out, std::ostream& report) {
  const PolynomialSystem sys = io::parse_system(c.system);
  const SpectralMeasure mu = io::parse_measure(c.measure);
  std::vector<double> ns, fast, dense, tf, td;
  std::size_t top = 0;
  for (double s : parse_list(o.sizes)) {
    if (s < 1 || s != std::floor(s)) throw UsageError("--sizes must be positive integers");
    top = std::max(top, static_cast<std::size_t>(s));
  }
  const auto d = moments(mu, sys, 2 * top);
  for (double s : parse_list(o.sizes)) {
    const BenchRow row = bench_factorizations(d, sys, static_cast<std::size_t>(s), o.dense);
    ns.push_back(static_cast<double>(row.n));
    fast.push_back(static_cast<double>(row.ops_fast));
    dense.push_back(static_cast<double>(row.ops_dense));
    tf.push_back(row.t_fast_ns);
    td.push_back(row.t_dense_ns);
  }
  Sink sink(c.out, out);
  io::write_columns(*sink, {"n", "ops_fast", "ops_dense", "t_fast_ns", "t_dense_ns"},
                    {ns, fast, dense, tf, td});
  if (ns.size() >= 2) {
    report << "ops_exponent_fast," << loglog_slope(ns, fast) << '\n';
    if (o.dense) report << "ops_exponent_dense," << loglog_slope(ns, dense) << '\n';
  }
}

io::json check_json(const CheckResult& r) {
  return {{"holds", r.holds}, {"worst_residual", r.worst_residual}, {"witness", {r.n, r.m}}};
}

void kernel_check_cmd(const Common& c, const KernelOpts& o, std::ostream& out) {
  std::optional<Kernel> K;
  if (!o.kernel.empty()) {
    auto in = open_input(o.kernel);
    K = Kernel::table(io::parse_system(c.system), read_kernel_csv(in));
  } else if (o.cyclo != 0.0) {
    K = cyclo_example_kernel(o.cyclo);
  } else {
    K = Kernel::stationary(io::parse_system(c.system), io::parse_measure(c.measure),
                           o.N + o.period + 1);
  }
  io::json j;
  j["system"] = K->system().label();
  const auto pd = is_positive_definite(*K, o.N, 1e-9);
  j["positive_definite"] = {{"holds", pd.positive}, {"min_eigenvalue", pd.min_eigenvalue}};
  j["stationary"] = check_json(check_stationary(*K, o.N, o.tol));
  j["cyclostationary"] = check_json(check_cyclostationary(*K, o.period, o.N, o.tol));
  j["period"] = o.period;
  Sink sink(c.out, out);
  *sink << j.dump(2) << '\n';
}

void linearize_cmd(const Common& c, std::size_t max_index, std::ostream& out) {
  const PolynomialSystem sys = io::parse_system(c.system);
  Sink sink(c.out, out);
  shared_table(sys)->dump_csv(*sink, max_index);
}

void add_common(CLI::App* sub, Common& c, bool measure, bool seed) {
  sub->add_option("--system", c.system,
                  "chebyshev1 | chebyshev2 | jacobi:a,b | cartier-dunau:q | "
                  "bernstein-szego:nu,kappa | JSON")
      ->capture_default_str();
  if (measure) {
    sub->add_option("--measure", c.measure, "pi | pi:scale | point:x[:mass] joined by + | JSON")
        ->capture_default_str();
  }
  if (seed) {
    sub->add_option("--seed", c.seed, "RNG seed (HYPERGROUP_SEED overrides)")->capture_default_str();
  }
  sub->add_option("--out", c.out, "output file, - for standard output")->capture_default_str();
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Second-order analysis of random sequences on polynomial hypergroups", "hgstat"};
  app.require_subcommand(1);
  Common common;

  SimulateOpts sim;
  auto* simulate_cmd = app.add_subcommand("simulate", "simulate a path");
  add_common(simulate_cmd, common, true, true);
  simulate_cmd->add_option("--generator", sim.generator, "white | ma | harmonic | spectral | tree")
      ->capture_default_str();
  simulate_cmd->add_option("--N", sim.N, "last index")->check(CLI::PositiveNumber)->capture_default_str();
  simulate_cmd->add_option("--coeffs", sim.coeffs, "MA coefficients a0,...,aq")->capture_default_str();
  simulate_cmd->add_option("--convention", sim.convention, "haar | subsumed")->capture_default_str();
  simulate_cmd->add_option("--atoms", sim.atoms, "harmonic atoms x1,...,xs")->capture_default_str();
  simulate_cmd->add_option("--q", sim.q, "tree degree")->capture_default_str();

  PeriodogramOpts per;
  auto* per_cmd = app.add_subcommand("periodogram", "two-dimensional periodogram");
  add_common(per_cmd, common, false, true);
  per_cmd->add_option("--path", per.path, "path CSV (n,re,im)")->check(CLI::ExistingFile);
  per_cmd->add_flag("--demo-harmonic", per.demo, "two-atom demo process at -1/3 and 1/2");
  per_cmd->add_flag("--expected", per.expected, "expected periodogram of the demo process");
  per_cmd->add_option("--N", per.N, "last index used")->check(CLI::PositiveNumber)->capture_default_str();
  per_cmd->add_option("--grid", per.grid, "nodes per axis")->check(CLI::Range(2, 100000))->capture_default_str();

  DensityOpts den;
  auto* den_cmd = app.add_subcommand("density", "spectral density estimate");
  add_common(den_cmd, common, true, false);
  den_cmd->add_option("--moments", den.moments, "moment CSV (k,d)")->check(CLI::ExistingFile);
  den_cmd->add_option("--N", den.N, "truncation")->check(CLI::PositiveNumber)->capture_default_str();
  den_cmd->add_option("--weights", den.weights, "fejer | partial")->capture_default_str();
  den_cmd->add_option("--grid", den.grid, "grid nodes")->check(CLI::Range(2, 1000000))->capture_default_str();

  PredictOpts pre;
  auto* pre_cmd = app.add_subcommand("predict", "prediction error curve");
  add_common(pre_cmd, common, true, false);
  pre_cmd->add_option("--n-max", pre.n_max, "largest order")->check(CLI::PositiveNumber)->capture_default_str();
  pre_cmd->add_option("--steps", pre.steps, "prediction horizon m")->check(CLI::PositiveNumber)->capture_default_str();
  pre_cmd->add_option("--route", pre.route, "spectral | gram")->capture_default_str();
  pre_cmd->add_option("--coefficients", pre.coefficients, "write b_{n-max,k} to this file");

  std::size_t probe = 512;
  auto* cls_cmd = app.add_subcommand("classify", "asymptotic determinism diagnostics");
  add_common(cls_cmd, common, true, false);
  cls_cmd->add_option("--probe", probe, "index range probed")->check(CLI::Range(64, 1 << 20))->capture_default_str();

  MatrixOpts mat;
  auto* fac_cmd = app.add_subcommand("factor", "fast factorization of a structured matrix");
  add_common(fac_cmd, common, true, false);
  fac_cmd->add_option("--matrix", mat.matrix, "dense matrix CSV")->check(CLI::ExistingFile);
  fac_cmd->add_option("--n", mat.n, "order when built from --measure")->check(CLI::PositiveNumber)->capture_default_str();
  fac_cmd->add_flag("--check", mat.check, "print the reconstruction residual");

  auto* sol_cmd = app.add_subcommand("solve", "solve M x = b");
  add_common(sol_cmd, common, true, false);
  sol_cmd->add_option("--matrix", mat.matrix, "dense matrix CSV")->check(CLI::ExistingFile);
  sol_cmd->add_option("--n", mat.n, "order when built from --measure")->check(CLI::PositiveNumber)->capture_default_str();
  sol_cmd->add_option("--rhs", mat.rhs, "right-hand side CSV")->check(CLI::ExistingFile)->required();

  BenchOpts ben;
  auto* ben_cmd = app.add_subcommand("bench", "operation counts and timings");
  add_common(ben_cmd, common, true, false);
  ben_cmd->add_option("--sizes", ben.sizes, "comma-separated orders")->capture_default_str();
  ben_cmd->add_flag("--dense,!--no-dense", ben.dense, "also run the dense oracle");

  KernelOpts ker;
  auto* ker_cmd = app.add_subcommand("kernel-check", "stationarity and cyclostationarity checks");
  add_common(ker_cmd, common, true, false);
  ker_cmd->add_option("--kernel", ker.kernel, "kernel CSV (n,m,re,im)")->check(CLI::ExistingFile);
  ker_cmd->add_option("--cyclo", ker.cyclo, "use the two-valued example kernel with this C");
  ker_cmd->add_option("--N", ker.N, "largest index checked")->capture_default_str();
  ker_cmd->add_option("--period", ker.period, "period T")->check(CLI::PositiveNumber)->capture_default_str();
  ker_cmd->add_option("--tol", ker.tol, "tolerance")->capture_default_str();

  std::size_t lin_max = 8;
  auto* lin_cmd = app.add_subcommand("linearize", "dump linearization coefficients");
  add_common(lin_cmd, common, false, false);
  lin_cmd->add_option("--max", lin_max, "largest index")->capture_default_str();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    const auto selected = app.get_subcommands();
    out << (selected.empty() ? app.help() : selected.back()->help());
    return 0;
  } catch (const CLI::ParseError& e) {
    const auto selected = app.get_subcommands();
    err << "usage error: " << e.what() << '\n'
        << (selected.empty() ? app.help() : selected.back()->help());
    return 2;
  }

  try {
    if (simulate_cmd->parsed()) simulate(common, sim, out);
    if (per_cmd->parsed()) periodogram_cmd(common, per, out);
    if (den_cmd->parsed()) density_cmd(common, den, out);
    if (pre_cmd->parsed()) predict_cmd(common, pre, out);
    if (cls_cmd->parsed()) classify_cmd(common, probe, out);
    if (fac_cmd->parsed()) factor_cmd(common, mat, out, out);
    if (sol_cmd->parsed()) solve_cmd(common, mat, out);
    if (ben_cmd->parsed()) bench_cmd(common, ben, out, err);
    if (ker_cmd->parsed()) kernel_check_cmd(common, ker, out);
    if (lin_cmd->parsed()) linearize_cmd(common, lin_max, out);
  } catch (const UsageError& e) {
    const auto selected = app.get_subcommands();
    err << "usage error: " << e.what() << '\n'
        << (selected.empty() ? app.help() : selected.back()->help());
    return 2;
  } catch (const Error& e) {
    err << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

int run(int argc, const char* const* argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cout, std::cerr);
}

}  // namespace hypergroup::cli
