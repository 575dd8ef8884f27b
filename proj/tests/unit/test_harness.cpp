#include "doctest.h"

#include "parbo/config.hpp"
#include "parbo/experiment.hpp"
#include "parbo/lhs.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace parbo;
namespace fs = std::filesystem;

namespace
{
  std::string slurp(const fs::path& p)
  {
    std::ifstream in(p);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
  }

  std::vector<std::string> lines(const std::string& text)
  {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);)
      out.push_back(line);
    return out;
  }

  fs::path scratch(const std::string& name)
  {
    const fs::path p = fs::temp_directory_path() / ("parbo_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
  }

  const char* small_config = R"({
    "objective": {"type": "synthetic", "dim": 2, "levels": 6,
                  "kernel": {"family": "gaussian", "lengthscales": [0.3, 0.3]}},
    "noise_variance": 0.001, "observation_noise": 0.001,
    "workers": 3, "batches": 2, "init_points": 2,
    "methods": ["RKB-UCB", "KB-EI", "RS"],
    "trials": 3, "base_seed": 11
  })";
}

TEST_CASE("latin hypercube stratifies every axis")
{
  Rng rng(1);
  const Eigen::MatrixXd x = lhs(10, 3, rng);
  for (Eigen::Index k = 0; k < 3; ++k)
  {
    std::set<int> strata;
    for (Eigen::Index i = 0; i < 10; ++i)
    {
      CHECK(x(i, k) >= 0.0);
      CHECK(x(i, k) < 1.0);
      strata.insert(static_cast<int>(x(i, k) * 10));
    }
    CHECK(strata.size() == 10);
  }
  CHECK_THROWS(lhs(0, 3, rng));
}

TEST_CASE("nearest grid point")
{
  Eigen::MatrixXd grid(3, 1);
  grid << 0.0, 0.5, 1.0;
  Eigen::MatrixXd pts(3, 1);
  pts << 0.2, 0.25, 0.9;
  CHECK(nearest_grid(pts, grid) == std::vector<Eigen::Index>{0, 0, 2});
}

TEST_CASE("config parsing")
{
  const ExperimentConfig c = parse_config(small_config);
  CHECK(c.objective.source == ObjectiveSource::Synthetic);
  CHECK(c.objective.levels == 6);
  CHECK(c.workers == 3);
  CHECK(c.methods.size() == 3);
  CHECK(c.base_seed == 11);
  CHECK(c.objective.kernel->lengthscales[0] == doctest::Approx(0.3));

  CHECK_THROWS_AS(parse_config("{"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"workers": 0, "methods": ["RS"]})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"methods": ["RS"], "bogus": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"methods": ["RS", "RS"]})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"methods": ["NOPE"]})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"methods": []})"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/parbo.json"), ConfigError);

  const KernelSpec k = parse_kernel_json(R"({"family": "matern", "nu": 2.5, "lengthscales": [0.2], "variance": 2})");
  const KernelSpec back = parse_kernel_json(kernel_to_json(k));
  CHECK(back.lengthscales[0] == k.lengthscales[0]);
  CHECK(back.output_variance == k.output_variance);
}

TEST_CASE("minimal run: one trial, one worker, one batch")
{
  ExperimentConfig c = parse_config(small_config);
  c.methods = {"RS"};
  c.trials = 1;
  c.workers = 1;
  c.batches = 1;
  c.init_points = 0;
  const ExperimentResult r = run_trials(c);
  REQUIRE(r.traces.size() == 1);
  CHECK(r.traces[0].trace.records.size() == 1);
  const auto rows = lines(trace_csv(r));
  REQUIRE(rows.size() == 2);
  CHECK(rows[0] == "method,trial,t,batch,x_1,x_2,y,best_so_far,simple_regret");
  CHECK(rows[1].rfind("RS,0,1,1,", 0) == 0);
}

TEST_CASE("trace and summary files")
{
  ExperimentConfig c = parse_config(small_config);
  c.output = scratch("run");
  std::ostringstream log;
  REQUIRE(run_experiment(c, log) == 0);
  const auto trace = lines(slurp(c.output / "trace.csv"));
  CHECK(trace.size() == 1 + 3 * 3 * 6);
  const auto summary = lines(slurp(c.output / "summary.csv"));
  REQUIRE(summary.size() == 1 + 3 * 2);
  CHECK(summary[0] == "batch,method,mean,stderr,n_trials");
  for (std::size_t i = 1; i < summary.size(); ++i)
  {
    std::istringstream row(summary[i]);
    std::vector<std::string> cells;
    for (std::string cell; std::getline(row, cell, ',');)
      cells.push_back(cell);
    REQUIRE(cells.size() == 5);
    CHECK(std::stod(cells[2]) >= 0.0);
    CHECK(std::stod(cells[3]) >= 0.0);
    CHECK(cells[4] == "3");
  }

  ExperimentConfig again = c;
  again.output = scratch("rerun");
  REQUIRE(run_experiment(again, log) == 0);
  CHECK(slurp(c.output / "trace.csv") == slurp(again.output / "trace.csv"));
  CHECK(slurp(c.output / "summary.csv") == slurp(again.output / "summary.csv"));
}

TEST_CASE("traces do not depend on method order or thread count")
{
  ExperimentConfig a = parse_config(small_config);
  ExperimentConfig b = a;
  b.methods = {"RS", "KB-EI", "RKB-UCB"};
  ExperimentConfig solo = a;
  solo.methods = {"KB-EI"};
  const std::string ta = trace_csv(run_trials(a));
  setenv("PARBO_THREADS", "1", 1);
  const std::string tb = trace_csv(run_trials(b));
  const auto ts = lines(trace_csv(run_trials(solo)));
  unsetenv("PARBO_THREADS");
  CHECK(ta == tb);
  const auto la = lines(ta);
  for (std::size_t i = 1; i < ts.size(); ++i)
    CHECK(std::find(la.begin(), la.end(), ts[i]) != la.end());
}

TEST_CASE("methods share the objective and initial design of a trial")
{
  const ExperimentConfig c = parse_config(small_config);
  const Objective o1 = trial_objective(c, 1);
  const Objective o2 = trial_objective(c, 1);
  CHECK(o1.values() == o2.values());
  CHECK(trial_objective(c, 2).values() != o1.values());
  const Eigen::MatrixXd init = trial_init(c, o1, 1);
  CHECK(init.rows() == 2);
  for (Eigen::Index i = 0; i < init.rows(); ++i)
    CHECK(o1.find(init.row(i).transpose()).has_value());
}

TEST_CASE("tabular objectives")
{
  const fs::path dir = scratch("tab");
  {
    std::ofstream out(dir / "ok.csv");
    out << "a,b,y\n0,0,1\n0,1,2\n\n1,0,3\n1,1,0.5\n";
  }
  {
    std::ofstream out(dir / "ragged.csv");
    out << "a,b,y\n0,0,1\n0,1\n";
  }
  const Objective o = load_tabular(dir / "ok.csv");
  CHECK(o.grid().rows() == 4);
  CHECK(*o.known_optimum() == 3.0);
  CHECK_THROWS_AS(load_tabular(dir / "ragged.csv"), ObjectiveError);

  ExperimentConfig c = parse_config(small_config);
  c.objective.source = ObjectiveSource::Tabular;
  c.objective.path = dir / "ok.csv";
  c.objective.kernel.reset();
  c.kernel = KernelSpec::gaussian_iso(2, 0.5);
  c.trials = 2;
  c.workers = 2;
  c.init_points = 1;
  const ExperimentResult r = run_trials(c);
  CHECK(r.failures.empty());
  CHECK(r.traces.size() == 6);
}

#ifdef PARBO_CLI
TEST_CASE("command line")
{
  const fs::path dir = scratch("cli");
  {
    std::ofstream out(dir / "cfg.json");
    out << small_config;
  }
  const std::string cli = PARBO_CLI;
  const std::string cmd = cli + " run " + (dir / "cfg.json").string() + " --out " + (dir / "out").string() +
                          " --trials 1 > " + (dir / "log.txt").string() + " 2>&1";
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(fs::exists(dir / "out" / "trace.csv"));
  CHECK(lines(slurp(dir / "out" / "summary.csv")).size() == 1 + 3 * 2);
  CHECK(std::system((cli + " run " + (dir / "missing.json").string() + " > /dev/null 2>&1").c_str()) != 0);
  CHECK(std::system((cli + " frobnicate > /dev/null 2>&1").c_str()) != 0);
}
#endif
