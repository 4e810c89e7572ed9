#include "hypergroup/cli.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

namespace {

using hypergroup::cli::run;

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p);
  EXPECT_TRUE(in.good()) << p;
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> cells(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

bool as_number(const std::string& s, double& v) {
  char* end = nullptr;
  v = std::strtod(s.c_str(), &end);
  return !s.empty() && end == s.c_str() + s.size();
}

// Numeric cells compare to 1e-10 relative; everything else byte for byte.
void expect_csv_matches_golden(const std::string& got, const std::string& golden_name) {
  const auto want = cells(read_file(std::filesystem::path(HG_GOLDEN_DIR) / golden_name));
  const auto have = cells(got);
  ASSERT_EQ(have.size(), want.size()) << golden_name;
  for (std::size_t r = 0; r < want.size(); ++r) {
    ASSERT_EQ(have[r].size(), want[r].size()) << golden_name << " row " << r;
    for (std::size_t c = 0; c < want[r].size(); ++c) {
      double a = 0, b = 0;
      if (as_number(have[r][c], a) && as_number(want[r][c], b)) {
        EXPECT_NEAR(a, b, 1e-10 * std::max(1.0, std::abs(b))) << golden_name << " row " << r;
      } else {
        EXPECT_EQ(have[r][c], want[r][c]) << golden_name << " row " << r;
      }
    }
  }
}

class SeedGuard {
 public:
  SeedGuard() {
    if (const char* v = std::getenv("HYPERGROUP_SEED")) saved_ = v, had_ = true;
  }
  ~SeedGuard() {
    if (had_) setenv("HYPERGROUP_SEED", saved_.c_str(), 1);
    else unsetenv("HYPERGROUP_SEED");
  }

 private:
  std::string saved_;
  bool had_ = false;
};

TEST(CliExit, MissingSubcommandIsUsageError) {
  const auto r = invoke({});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("usage error"), std::string::npos);
  EXPECT_NE(r.err.find("Subcommands"), std::string::npos);
}

TEST(CliExit, UnknownFlagIsUsageError) {
  EXPECT_EQ(invoke({"predict", "--no-such-flag"}).code, 2);
  EXPECT_EQ(invoke({"bogus"}).code, 2);
  EXPECT_EQ(invoke({"predict", "--n-max", "0"}).code, 2);
}

TEST(CliExit, DomainErrorReturnsOne) {
  const auto r = invoke({"predict", "--system", "bogus"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("unknown system"), std::string::npos);
  EXPECT_TRUE(r.out.empty());
}

TEST(CliExit, HelpReturnsZero) {
  const auto r = invoke({"density", "--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("--weights"), std::string::npos);
}

TEST(CliExit, MalformedSeedEnvironmentIsUsageError) {
  SeedGuard guard;
  setenv("HYPERGROUP_SEED", "12x", 1);
  const auto r = invoke({"simulate", "--N", "3"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("HYPERGROUP_SEED"), std::string::npos);
}

TEST(CliGolden, LinearizeChebyshev) {
  const auto r = invoke({"linearize", "--system", "chebyshev1", "--max", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  expect_csv_matches_golden(r.out, "linearize_chebyshev1.csv");
  // T_m T_n = (T_{|m-n|} + T_{m+n}) / 2
  for (const auto& row : cells(r.out)) {
    if (row[0] == "m") continue;
    const int m = std::stoi(row[0]), n = std::stoi(row[1]), k = std::stoi(row[2]);
    const double g = std::stod(row[3]);
    double want = 0.0;
    if (m == 0 || n == 0) want = (k == m + n) ? 1.0 : 0.0;
    else want = 0.5 * ((k == std::abs(m - n)) + (k == m + n));
    EXPECT_NEAR(g, want, 1e-14) << m << "," << n << "," << k;
  }
}

TEST(CliGolden, PredictChebyshevIsConstant) {
  const auto r = invoke({"predict", "--system", "chebyshev1", "--measure", "pi", "--n-max", "64"});
  ASSERT_EQ(r.code, 0) << r.err;
  expect_csv_matches_golden(r.out, "predict_chebyshev1_pi.csv");
  const auto rows = cells(r.out);
  ASSERT_EQ(rows.size(), 66u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"n", "delta"}));
  for (std::size_t i = 1; i < rows.size(); ++i) {
    EXPECT_EQ(std::stoul(rows[i][0]), i - 1);
    EXPECT_NEAR(std::stod(rows[i][1]), 1.0 / std::sqrt(2.0), 1e-12);
  }
}

TEST(CliGolden, PredictRoutesAgree) {
  const auto a = invoke({"predict", "--system", "jacobi:0.5,-0.5", "--measure", "pi", "--n-max", "12"});
  const auto b = invoke({"predict", "--system", "jacobi:0.5,-0.5", "--measure", "pi", "--n-max", "12",
                         "--route", "gram"});
  ASSERT_EQ(a.code, 0) << a.err;
  ASSERT_EQ(b.code, 0) << b.err;
  const auto ra = cells(a.out), rb = cells(b.out);
  ASSERT_EQ(ra.size(), rb.size());
  for (std::size_t i = 1; i < ra.size(); ++i) {
    EXPECT_NEAR(std::stod(ra[i][1]), std::stod(rb[i][1]), 1e-8 * std::stod(ra[i][1]));
  }
}

TEST(CliPredict, CoefficientFileOnBothRoutes) {
  const auto dir = std::filesystem::temp_directory_path() / "hg_cli_coeffs";
  std::filesystem::create_directories(dir);
  std::vector<std::string> files;
  for (const std::string route : {"spectral", "gram"}) {
    const auto file = (dir / (route + ".csv")).string();
    const auto r = invoke({"predict", "--system", "jacobi:0.5,-0.5", "--measure", "pi+point:1:0.2", "--n-max", "6",
                           "--route", route, "--coefficients", file});
    ASSERT_EQ(r.code, 0) << r.err;
    files.push_back(read_file(file));
  }
  const auto rows = cells(files[0]);
  ASSERT_EQ(rows.size(), 8u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"k", "b"}));
  EXPECT_EQ(files[0], files[1]);
  std::filesystem::remove_all(dir);
}

TEST(CliGolden, SimulateWhiteNoise) {
  SeedGuard guard;
  unsetenv("HYPERGROUP_SEED");
  const auto r = invoke({"simulate", "--generator", "white", "--N", "16", "--seed", "7"});
  ASSERT_EQ(r.code, 0) << r.err;
  expect_csv_matches_golden(r.out, "simulate_white_seed7.csv");
}

TEST(CliGolden, SimulateMovingAverage) {
  SeedGuard guard;
  unsetenv("HYPERGROUP_SEED");
  const auto r = invoke({"simulate", "--generator", "ma", "--coeffs", "1,0.5", "--N", "16", "--seed", "3"});
  ASSERT_EQ(r.code, 0) << r.err;
  expect_csv_matches_golden(r.out, "simulate_ma_seed3.csv");
}

TEST(CliSeed, EnvironmentOverridesFlag) {
  SeedGuard guard;
  unsetenv("HYPERGROUP_SEED");
  const auto plain7 = invoke({"simulate", "--N", "16", "--seed", "7"});
  const auto plain99 = invoke({"simulate", "--N", "16", "--seed", "99"});
  ASSERT_NE(plain7.out, plain99.out);
  setenv("HYPERGROUP_SEED", "7", 1);
  const auto env = invoke({"simulate", "--N", "16", "--seed", "99"});
  ASSERT_EQ(env.code, 0) << env.err;
  EXPECT_EQ(env.out, plain7.out);
}

TEST(CliGolden, ExpectedPeriodogramOfDemo) {
  const auto r = invoke({"periodogram", "--demo-harmonic", "--expected", "--N", "8", "--grid", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  expect_csv_matches_golden(r.out, "periodogram_demo_expected.csv");
  const auto rows = cells(r.out);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"x", "y", "re", "im"}));
  EXPECT_EQ(rows.size(), 26u);
  // symmetric in (x, y)
  for (std::size_t i = 1; i < rows.size(); ++i) {
    for (std::size_t j = 1; j < rows.size(); ++j) {
      if (rows[i][0] == rows[j][1] && rows[i][1] == rows[j][0]) {
        EXPECT_NEAR(std::stod(rows[i][2]), std::stod(rows[j][2]), 1e-14);
      }
    }
  }
}

TEST(CliPeriodogram, SampledDemoHasGridShape) {
  const auto r = invoke({"periodogram", "--demo-harmonic", "--N", "8", "--grid", "3", "--seed", "5"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = cells(r.out);
  ASSERT_EQ(rows.size(), 10u);
  // diagonal entries of a periodogram are |.|^2 and hence non-negative
  for (std::size_t i = 1; i < rows.size(); ++i) {
    if (rows[i][0] == rows[i][1]) EXPECT_GE(std::stod(rows[i][2]), 0.0);
  }
}

TEST(CliPeriodogram, PathFileMatchesDemoOutput) {
  const auto dir = std::filesystem::temp_directory_path() / "hg_cli_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / "path.csv";
  const auto sim = invoke({"simulate", "--N", "8", "--seed", "11", "--out", path.string()});
  ASSERT_EQ(sim.code, 0) << sim.err;
  EXPECT_TRUE(sim.out.empty());
  const auto r = invoke({"periodogram", "--path", path.string(), "--N", "8", "--grid", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(cells(r.out).size(), 17u);
  std::filesystem::remove_all(dir);
}

TEST(CliGolden, KernelCheckCyclostationaryExample) {
  const auto r = invoke({"kernel-check", "--cyclo", "0.5", "--N", "6", "--period", "2"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto got = nlohmann::json::parse(r.out);
  const auto want = nlohmann::json::parse(read_file(std::filesystem::path(HG_GOLDEN_DIR) / "kernel_check_cyclo.json"));
  EXPECT_EQ(got["cyclostationary"]["holds"], want["cyclostationary"]["holds"]);
  EXPECT_EQ(got["stationary"]["holds"], want["stationary"]["holds"]);
  EXPECT_EQ(got["stationary"]["witness"], want["stationary"]["witness"]);
  EXPECT_NEAR(got["stationary"]["worst_residual"].get<double>(),
              want["stationary"]["worst_residual"].get<double>(), 1e-12);
  EXPECT_TRUE(got["cyclostationary"]["holds"].get<bool>());
  EXPECT_FALSE(got["stationary"]["holds"].get<bool>());
  EXPECT_TRUE(got["positive_definite"]["holds"].get<bool>());
  EXPECT_EQ(got["period"].get<int>(), 2);

  const auto t1 = nlohmann::json::parse(invoke({"kernel-check", "--cyclo", "0.5", "--N", "6", "--period", "1"}).out);
  EXPECT_FALSE(t1["cyclostationary"]["holds"].get<bool>());
}

TEST(CliFactor, CheckReportsSmallResidual) {
  const auto r = invoke({"factor", "--system", "jacobi:1,0", "--measure", "pi+point:1:0.3", "--n", "12", "--check"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = cells(r.out);
  ASSERT_FALSE(rows.empty());
  ASSERT_EQ(rows[0][0], "reconstruction_residual");
  EXPECT_LT(std::stod(rows[0][1]), 1e-10);
  std::size_t l_entries = 0, d_entries = 0;
  for (const auto& row : rows) {
    if (row[0] == "L") ++l_entries;
    if (row[0] == "D") {
      ++d_entries;
      EXPECT_GT(std::stod(row[3]), 0.0);
    }
  }
  EXPECT_EQ(l_entries, 13u * 14u / 2u);
  EXPECT_EQ(d_entries, 13u);
}

TEST(CliFactor, DegenerateMeasureIsDomainError) {
  const auto r = invoke({"factor", "--measure", "point:0.5+point:-0.5", "--n", "6"});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(r.err.empty());
}

TEST(CliClassify, ChebyshevIsNotDeterministic) {
  const auto r = invoke({"classify", "--system", "chebyshev1", "--measure", "pi", "--probe", "64"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j["verdict"], "not-deterministic");
  EXPECT_NEAR(j["ks_mu_value"].get<double>(), M_PI * std::log(2.0 / M_PI), 1e-6);
}

TEST(CliDensity, ConstantMomentsGiveFlatDensity) {
  const auto dir = std::filesystem::temp_directory_path() / "hg_cli_density";
  std::filesystem::create_directories(dir);
  const auto moments = dir / "moments.csv";
  {
    std::ofstream f(moments);
    f << "k,d\n";
    for (int k = 0; k <= 8; ++k) f << k << ',' << (k == 0 ? 1.0 : 0.0) << '\n';
  }
  const auto r = invoke({"density", "--system", "chebyshev1", "--moments", moments.string(), "--N", "8", "--grid", "9"});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = cells(r.out);
  ASSERT_EQ(rows.size(), 10u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"x", "f"}));
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_NEAR(std::stod(rows[i][1]), 1.0, 1e-12);
  std::filesystem::remove_all(dir);
}

TEST(CliSolve, MissingRhsIsUsageError) {
  EXPECT_EQ(invoke({"solve", "--n", "4"}).code, 2);
}

TEST(CliSolve, SolvesAgainstBuiltMatrix) {
  const auto dir = std::filesystem::temp_directory_path() / "hg_cli_solve";
  std::filesystem::create_directories(dir);
  const auto rhs = dir / "rhs.csv";
  {
    std::ofstream f(rhs);
    f << "k,value\n";
    for (int k = 0; k <= 4; ++k) f << k << ',' << (k == 0 ? 1.0 : 0.0) << '\n';
  }
  const auto r = invoke({"solve", "--system", "chebyshev1", "--measure", "pi", "--n", "4", "--rhs", rhs.string()});
  ASSERT_EQ(r.code, 0) << r.err;
  // the Chebyshev structured matrix for pi is diag(1, 1/2, ...) so x = e0
  const auto rows = cells(r.out);
  ASSERT_GE(rows.size(), 6u);
  EXPECT_NEAR(std::stod(rows[1].back()), 1.0, 1e-12);
  for (std::size_t i = 2; i < rows.size(); ++i) EXPECT_NEAR(std::stod(rows[i].back()), 0.0, 1e-12);
  std::filesystem::remove_all(dir);
}

TEST(CliBench, NoDenseRuns) {
  const auto r = invoke({"bench", "--sizes", "8,16", "--no-dense"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_FALSE(r.out.empty());
}

}  // namespace
