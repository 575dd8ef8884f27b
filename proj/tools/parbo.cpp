#include "parbo/config.hpp"
#include "parbo/diagnostics.hpp"
#include "parbo/experiment.hpp"
#include "parbo/search_space.hpp"
#include "parbo/selftest.hpp"

#include "CLI11.hpp"

#include <cstdio>
#include <iostream>
#include <optional>

namespace
{
  std::string fmt(double v)
  {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
  }
}

int main(int argc, char** argv)
{
  CLI::App app{"Parallel Bayesian optimization harness"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Run the experiment described by a JSON config");
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<std::int64_t> trials;
  run->add_option("config", config_path, "Config file")->required();
  run->add_option("--seed", seed, "Override base_seed");
  run->add_option("--out", out_dir, "Override the output directory");
  run->add_option("--trials", trials, "Override the trial count");

  auto* selftest = app.add_subcommand("selftest", "Run the diagnostics invariant suite");

  auto* mig = app.add_subcommand("mig", "Greedy MIG and the B_T bound on a regular grid");
  std::string family = "gaussian";
  double lengthscale = 1.0;
  double variance = 1.0;
  double nu = 2.5;
  double noise = 1.0;
  std::int64_t horizon = 1;
  std::int64_t dim = 1;
  std::int64_t levels = 1;
  std::string method = "pims";
  mig->add_option("--kernel", family, "linear, gaussian or matern");
  mig->add_option("--lengthscale", lengthscale, "Isotropic lengthscale");
  mig->add_option("--variance", variance, "Kernel output variance");
  mig->add_option("--nu", nu, "Matern smoothness (0.5, 1.5 or 2.5)");
  mig->add_option("--noise", noise, "Noise variance");
  mig->add_option("--T", horizon, "Number of observations T")->required();
  mig->add_option("--dim", dim, "Grid dimension");
  mig->add_option("--levels", levels, "Grid points per axis");
  mig->add_option("--method", method, "ucb, irgp_ucb, pims, eims or ts");

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::CallForHelp& e)
  {
    return app.exit(e);
  }
  catch (const CLI::ParseError& e)
  {
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try
  {
    if (*run)
    {
      parbo::ExperimentConfig config = parbo::load_config(config_path);
      if (seed)
        config.base_seed = *seed;
      if (out_dir)
        config.output = *out_dir;
      if (trials)
        config.trials = *trials;
      config.validate();
      return parbo::run_experiment(config, std::cerr);
    }
    if (*selftest)
      return parbo::run_selftest(std::cout) == 0 ? 0 : 1;
    if (*mig)
    {
      const Eigen::MatrixXd grid = parbo::regular_grid(dim, levels, false);
      parbo::KernelSpec spec;
      switch (parbo::kernel_family_from_string(family))
      {
      case parbo::KernelFamily::Linear: spec = parbo::KernelSpec::linear(variance); break;
      case parbo::KernelFamily::GaussianArd: spec = parbo::KernelSpec::gaussian_iso(dim, lengthscale, variance); break;
      case parbo::KernelFamily::Matern:
        spec = parbo::KernelSpec::matern(Eigen::VectorXd::Constant(dim, lengthscale), nu, variance);
        break;
      }
      const double gamma = parbo::greedy_mig(spec, grid, horizon, noise);
      const parbo::ConditionConstants constants(parbo::condition_method_from_string(method), grid.rows(), noise);
      std::cout << "greedy_mig " << fmt(gamma) << '\n';
      std::cout << "bcr_bound " << fmt(parbo::bcr_bound(gamma, constants, horizon, noise)) << '\n';
      return 0;
    }
  }
  catch (const std::exception& e)
  {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
