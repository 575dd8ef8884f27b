#ifndef PARBO_CONFIG_HPP
#define PARBO_CONFIG_HPP

#include "parbo/acquisition.hpp"
#include "parbo/kernel.hpp"
#include "parbo/scheduler.hpp"
#include "parbo/search_space.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace parbo
{
  class ConfigError : public std::runtime_error
  {
  public:
    using std::runtime_error::runtime_error;
  };

  enum class ObjectiveSource
  {
    Synthetic,
    Benchmark,
    Tabular,
  };

  struct ObjectiveConfig
  {
    ObjectiveSource source = ObjectiveSource::Synthetic;
    /// Synthetic: regular grid of `levels` points per axis in `dim` dimensions.
    Eigen::Index dim = 2;
    Eigen::Index levels = 10;
    bool include_zero = false;
    /// Synthetic: kernel of the GP the objective is drawn from.
    std::optional<KernelSpec> kernel;
    bool force_exact = false;
    std::string benchmark;
    std::filesystem::path path;
  };

  enum class RunMode
  {
    Synchronous,
    Asynchronous,
  };

  struct ExperimentConfig
  {
    ObjectiveConfig objective;
    /// Model kernel; for synthetic objectives defaults to the objective's kernel.
    std::optional<KernelSpec> kernel;
    std::int64_t refit_every = 0;
    int hyper_starts = 16;
    double noise_variance = 1e-8;
    double observation_noise = 0.0;
    bool standardize = false;
    std::int64_t workers = 8;
    std::int64_t batches = 1;
    std::int64_t init_points = 8;
    std::vector<std::string> methods;
    BetaKind beta_kind = BetaKind::TheoreticalFinite;
    double beta_fixed = 1.0;
    std::int64_t beta_domain_size = 0;
    std::int64_t trials = 100;
    std::uint64_t base_seed = 0;
    std::filesystem::path output = "parbo_out";
    RunMode mode = RunMode::Synchronous;
    DurationModel durations = DurationModel::Exponential;
    ContinuousSearch search;
    Eigen::Index rff_features = 1024;
    bool check_variance_ratio = false;

    void validate() const;
  };

  KernelSpec parse_kernel_json(const std::string& json_text);
  std::string kernel_to_json(const KernelSpec& spec);

  ExperimentConfig parse_config(const std::string& json_text);
  ExperimentConfig load_config(const std::filesystem::path& path);
}

#endif
