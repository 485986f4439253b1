#include <gtest/gtest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "annealed_ising/cli.hpp"

using namespace aising;

namespace {

struct Outcome {
  int status;
  std::string out;
  std::string err;
};

Outcome run_cli(const std::vector<std::string>& args) {
  std::ostringstream out;
  std::ostringstream err;
  const int status = cli::run(args, out, err);
  return {status, out.str(), err.str()};
}

std::vector<std::string> lines_of(const std::string& text) {
  std::vector<std::string> lines;
  std::stringstream ss(text);
  for (std::string line; std::getline(ss, line);) lines.push_back(line);
  return lines;
}

std::vector<std::string> cells_of(const std::string& line) {
  std::vector<std::string> cells;
  std::stringstream ss(line);
  for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

std::string temp_path(const std::string& name) {
  return ::testing::TempDir() + "annealed_ising_" + name;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Grid, RangesAndLists) {
  const auto g = cli::parse_grid("0:1:0.1");
  ASSERT_EQ(g.size(), 11u);
  EXPECT_EQ(g.back(), 1.0);
  EXPECT_EQ(cli::parse_grid("0:1.2:0.05").size(), 25u);
  EXPECT_EQ(cli::parse_grid("0.5"), std::vector<double>{0.5});
  EXPECT_EQ(cli::parse_grid("1,2.5,-3"), (std::vector<double>{1.0, 2.5, -3.0}));
  EXPECT_EQ(cli::parse_grid("0:0.25:0.1").size(), 3u);
  EXPECT_THROW(cli::parse_grid("1:0:0.1"), DomainError);
  EXPECT_THROW(cli::parse_grid("0:1:0"), DomainError);
  EXPECT_THROW(cli::parse_grid("0:1"), DomainError);
  EXPECT_THROW(cli::parse_grid("abc"), DomainError);
  EXPECT_THROW(cli::parse_grid("1,,2"), DomainError);
  EXPECT_THROW(cli::parse_int_grid("1.5"), DomainError);
  EXPECT_EQ(cli::parse_int_grid("128:512:128"), (std::vector<long>{128, 256, 384, 512}));
}

TEST(Cli, PressureAtInfiniteTemperature) {
  const Outcome r = run_cli({"pressure", "--beta", "0", "--B", "0.3", "--d", "3"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_NEAR(j["result"]["psi"].get<double>(), std::log(2.0 * std::cosh(0.3)), 1e-15);
  EXPECT_NEAR(j["result"]["M"].get<double>(), std::tanh(0.3), 1e-15);
  EXPECT_EQ(j["config"]["command"], "pressure");
}

TEST(Cli, PressureCsvFormat) {
  const Outcome r = run_cli({"pressure", "--beta", "0.4", "--format", "csv"});
  ASSERT_EQ(r.status, 0);
  const auto lines = lines_of(r.out);
  ASSERT_EQ(lines.size(), 2u);
  EXPECT_EQ(lines[0], "beta,B,d,psi,t_star,M,chi,in_U,beta_c,h_star,u_star,psi_tilde");
  // 17 significant digits round-trip
  const double psi = std::stod(cells_of(lines[1])[3]);
  EXPECT_EQ(psi, pressure({0.4, 0.0, 3}).psi);
}

TEST(Cli, UnknownFlagPrintsUsage) {
  const Outcome r = run_cli({"pressure", "--beta", "0.5", "--bogus", "1"});
  EXPECT_EQ(r.status, 1);
  EXPECT_NE(r.err.find("Usage"), std::string::npos);
  EXPECT_EQ(run_cli({}).status, 1);
  EXPECT_EQ(run_cli({"frobnicate"}).status, 1);
  EXPECT_EQ(run_cli({"pressure"}).status, 1);
}

TEST(Cli, HelpExitsCleanly) {
  const Outcome r = run_cli({"--help"});
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("phase-diagram"), std::string::npos);
}

TEST(Cli, DomainErrorsExitOne) {
  const Outcome neg = run_cli({"pressure", "--beta", "-1"});
  EXPECT_EQ(neg.status, 1);
  EXPECT_NE(neg.err.find("beta"), std::string::npos);
  const Outcome parity = run_cli({"finite-n", "--beta", "0.4", "--d", "3", "--n", "7"});
  EXPECT_EQ(parity.status, 1);
  EXPECT_NE(parity.err.find("perfect matching"), std::string::npos);
  const Outcome graph = run_cli({"sample", "--n", "5", "--d", "3", "--seed", "1"});
  EXPECT_EQ(graph.status, 1);
  EXPECT_NE(graph.err.find("perfect matching"), std::string::npos);
  EXPECT_EQ(run_cli({"config-model", "--dist", "geometric:1", "--beta", "0.3"}).status, 1);
}

TEST(Cli, PhaseDiagramSweep) {
  const Outcome r = run_cli({"phase-diagram", "--d", "3", "--beta", "0:1.2:0.05", "--B", "0.1"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto lines = lines_of(r.out);
  ASSERT_EQ(lines.size(), 26u);
  EXPECT_EQ(lines[0], "beta,B,d,psi,t_star,M,chi,in_U");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = cells_of(lines[i]);
    ASSERT_EQ(cells.size(), 8u);
    EXPECT_GT(std::stod(cells[6]), 0.0) << lines[i];
  }
  EXPECT_EQ(std::stod(cells_of(lines.back())[0]), 1.2);
}

TEST(Cli, FiniteNReport) {
  const Outcome r = run_cli({"finite-n", "--beta", "1", "--B", "0", "--d", "3", "--n", "1000,2000"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto lines = lines_of(r.out);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0],
            "n,psi_n,M_n,chi_n,psi,M,chi,kolmogorov,tail_0.05,log_tail_0.05,tail_0.1,log_tail_0.1,"
            "bimodal_plus,bimodal_minus");
  const auto cells = cells_of(lines[2]);
  ASSERT_EQ(cells.size(), 14u);
  EXPECT_NEAR(std::stod(cells[12]), 0.5, 0.1);
  // no bimodal columns in the high-temperature phase
  const Outcome hot = run_cli({"finite-n", "--beta", "0.2", "--n", "100"});
  const auto hot_cells = cells_of(lines_of(hot.out)[1]);
  ASSERT_EQ(hot_cells.size(), 14u);
  EXPECT_TRUE(hot_cells[12].empty());
}

TEST(Cli, FiniteNLawSumsToOne) {
  const Outcome r = run_cli({"finite-n", "--beta", "0.4", "--B", "0.3", "--n", "50", "--law"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto lines = lines_of(r.out);
  ASSERT_EQ(lines.size(), 52u);
  EXPECT_EQ(lines[0], "j,x,log_p,p");
  double total = 0.0;
  for (std::size_t i = 1; i < lines.size(); ++i) total += std::stod(cells_of(lines[i])[3]);
  EXPECT_NEAR(total, 1.0, 1e-14);
}

TEST(Cli, ConfigModelFormats) {
  const Outcome scalar = run_cli({"config-model", "--dist", "deterministic:3", "--beta", "0.5",
                                  "--B", "0.2"});
  ASSERT_EQ(scalar.status, 0) << scalar.err;
  const auto j = nlohmann::json::parse(scalar.out);
  EXPECT_NEAR(j["rows"][0]["psi"].get<double>(), pressure({0.5, 0.2, 3}).psi, 1e-6);
  const Outcome grid = run_cli({"config-model", "--dist", "pmf:1:0.5,3:0.5", "--beta", "0.2,0.4"});
  ASSERT_EQ(grid.status, 0) << grid.err;
  const auto lines = lines_of(grid.out);
  ASSERT_EQ(lines.size(), 3u);
  EXPECT_EQ(lines[0], "dist,beta,B,psi,t_star,M,chi");
  const Outcome curve = run_cli({"config-model", "--dist", "pmf:1:0.5,3:0.5", "--beta", "0.4",
                                 "--g-curve", "5"});
  ASSERT_EQ(curve.status, 0) << curve.err;
  EXPECT_EQ(lines_of(curve.out).size(), 6u);
  EXPECT_EQ(lines_of(curve.out)[0], "t,G");
}

TEST(Cli, VerifySuitePasses) {
  const Outcome r = run_cli({"verify", "--suite", "quenched-equality"});
  ASSERT_EQ(r.status, 0) << r.err;
  const auto lines = lines_of(r.out);
  ASSERT_EQ(lines.size(), 601u);
  EXPECT_EQ(lines[0], "suite,label,value,reference,abs_diff,tolerance,pass");
  for (std::size_t i = 1; i < lines.size(); ++i) {
    const auto cells = cells_of(lines[i]);
    if (cells[1].rfind("psi", 0) == 0) {
      EXPECT_LE(std::stod(cells[4]), 1e-7);
    }
    EXPECT_EQ(cells.back(), "1");
  }
  EXPECT_EQ(run_cli({"verify", "--suite", "nonsense"}).status, 1);
}

TEST(Cli, EverySuiteIsGreen) {
  for (const auto& suite : verify_suite_names()) {
    const Outcome r = run_cli({"verify", "--suite", suite, "--seed", "5", "--format", "json"});
    ASSERT_EQ(r.status, 0) << suite << "\n" << r.err;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_EQ(j["passed"], j["total"]);
  }
}

TEST(Cli, SeedNoticeAndDeterminism) {
  const Outcome a = run_cli({"sample", "--n", "10", "--d", "3"});
  ASSERT_EQ(a.status, 0);
  EXPECT_NE(a.err.find("seed 0"), std::string::npos);
  const Outcome b = run_cli({"sample", "--n", "10", "--d", "3", "--seed", "0"});
  EXPECT_TRUE(b.err.empty());
  EXPECT_EQ(a.out, b.out);
  const Outcome c = run_cli({"sample", "--n", "10", "--d", "3", "--seed", "9"});
  EXPECT_NE(a.out, c.out);
  const auto lines = lines_of(a.out);
  EXPECT_EQ(lines[0], "u,v");
  EXPECT_EQ(lines.size(), 16u);
  EXPECT_TRUE(run_cli({"pressure", "--beta", "0.1"}).err.empty());
}

TEST(Cli, SampleEstimates) {
  const Outcome g = run_cli({"sample", "--kind", "mc-g", "--beta", "1", "--k", "7", "--m", "30",
                             "--samples", "20000", "--seed", "4"});
  ASSERT_EQ(g.status, 0) << g.err;
  const auto j = nlohmann::json::parse(g.out);
  EXPECT_NEAR(j["result"]["estimate"].get<double>(), j["result"]["exact"].get<double>(),
              4.0 * j["result"]["std_error"].get<double>());
  const Outcome cut = run_cli({"sample", "--kind", "cut-test", "--n", "6", "--d", "2", "--set",
                               "1,3,5", "--samples", "20000", "--seed", "4"});
  ASSERT_EQ(cut.status, 0) << cut.err;
  EXPECT_GT(nlohmann::json::parse(cut.out)["result"]["p_value"].get<double>(), 0.001);
}

TEST(Cli, ConfigRoundTripIsByteIdentical) {
  const std::vector<std::vector<std::string>> runs = {
      {"pressure", "--beta", "0.7", "--B", "-0.2", "--d", "4"},
      {"finite-n", "--beta", "0.4", "--B", "0.3", "--n", "64,128", "--format", "json"},
      {"sample", "--kind", "mc-ez", "--n", "4", "--beta", "0.3", "--samples", "50", "--seed", "8"},
      {"config-model", "--dist", "poisson:2", "--beta", "0.3", "--B", "0.1"},
  };
  int i = 0;
  for (const auto& args : runs) {
    const std::string first = temp_path("first" + std::to_string(i) + ".json");
    std::vector<std::string> with_out = args;
    with_out.insert(with_out.end(), {"--out", first});
    ASSERT_EQ(run_cli(with_out).status, 0);
    const Outcome again = run_cli({"--config", first, "--format", "json"});
    ASSERT_EQ(again.status, 0) << again.err;
    EXPECT_EQ(again.out, slurp(first)) << args[0];
    std::remove(first.c_str());
    ++i;
  }
}

TEST(Cli, ConfigFlagsAreOverridable) {
  const std::string path = temp_path("flags.json");
  {
    std::ofstream f(path);
    f << R"({"command": "pressure", "beta": 0.5, "d": 3})";
  }
  const auto base = nlohmann::json::parse(run_cli({"--config", path}).out);
  EXPECT_EQ(base["config"]["B"].get<double>(), 0.0);
  const auto over = nlohmann::json::parse(run_cli({"pressure", "--config", path, "--B", "0.25"}).out);
  EXPECT_EQ(over["config"]["B"].get<double>(), 0.25);
  EXPECT_EQ(over["config"]["beta"].get<double>(), 0.5);
  EXPECT_EQ(run_cli({"verify", "--config", path}).status, 1);
  EXPECT_EQ(run_cli({"--config", temp_path("missing.json")}).status, 1);
  std::remove(path.c_str());
}
