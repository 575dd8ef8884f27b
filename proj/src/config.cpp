#include "parbo/config.hpp"

#include "parbo/objectives.hpp"

#include "json.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace parbo
{
  namespace
  {
    using nlohmann::json;

    void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> allowed)
    {
      if (!j.is_object())
        throw ConfigError(where + " must be a JSON object");
      const std::set<std::string> ok(allowed.begin(), allowed.end());
      for (const auto& item : j.items())
        if (!ok.count(item.key()))
          throw ConfigError(where + ": unknown key '" + item.key() + "'");
    }

    template <class T>
    T get(const json& j, const char* key, const std::string& where, T fallback)
    {
      if (!j.contains(key))
        return fallback;
      try
      {
        return j.at(key).get<T>();
      }
      catch (const json::exception&)
      {
        throw ConfigError(where + "." + key + " has the wrong type");
      }
    }

    KernelSpec kernel_from(const json& j, const std::string& where)
    {
      only_keys(j, where, {"family", "lengthscales", "variance", "nu"});
      if (!j.contains("family"))
        throw ConfigError(where + ".family is required");
      KernelSpec spec;
      try
      {
        spec.family = kernel_family_from_string(get<std::string>(j, "family", where, ""));
      }
      catch (const std::exception& e)
      {
        throw ConfigError(where + ".family: " + e.what());
      }
      const auto ls = get<std::vector<double>>(j, "lengthscales", where, {});
      spec.lengthscales = Eigen::Map<const Eigen::VectorXd>(ls.data(), static_cast<Eigen::Index>(ls.size()));
      spec.output_variance = get<double>(j, "variance", where, 1.0);
      spec.nu = get<double>(j, "nu", where, 2.5);
      try
      {
        spec.validate();
      }
      catch (const std::exception& e)
      {
        throw ConfigError(where + ": " + e.what());
      }
      return spec;
    }

    json kernel_json(const KernelSpec& spec)
    {
      json j;
      j["family"] = to_string(spec.family);
      j["lengthscales"] = std::vector<double>(spec.lengthscales.data(),
                                              spec.lengthscales.data() + spec.lengthscales.size());
      j["variance"] = spec.output_variance;
      if (spec.family == KernelFamily::Matern)
        j["nu"] = spec.nu;
      return j;
    }

    ObjectiveConfig objective_from(const json& j)
    {
      const std::string where = "objective";
      only_keys(j, where, {"type", "dim", "levels", "include_zero", "kernel", "exact", "name", "path"});
      ObjectiveConfig o;
      const auto type = get<std::string>(j, "type", where, "");
      if (type == "synthetic")
      {
        o.source = ObjectiveSource::Synthetic;
        o.dim = get<Eigen::Index>(j, "dim", where, 2);
        o.levels = get<Eigen::Index>(j, "levels", where, 10);
        o.include_zero = get<bool>(j, "include_zero", where, false);
        o.force_exact = get<bool>(j, "exact", where, false);
        if (j.contains("kernel"))
          o.kernel = kernel_from(j.at("kernel"), where + ".kernel");
      }
      else if (type == "benchmark")
      {
        o.source = ObjectiveSource::Benchmark;
        o.benchmark = get<std::string>(j, "name", where, "");
        try
        {
          o.dim = benchmark_dim(benchmark_from_string(o.benchmark));
        }
        catch (const std::exception& e)
        {
          throw ConfigError(std::string("objective.name: ") + e.what());
        }
      }
      else if (type == "tabular")
      {
        o.source = ObjectiveSource::Tabular;
        o.path = get<std::string>(j, "path", where, "");
        if (o.path.empty())
          throw ConfigError("objective.path is required for tabular objectives");
      }
      else
        throw ConfigError("objective.type must be synthetic, benchmark or tabular");
      return o;
    }
  }

  void ExperimentConfig::validate() const
  {
    if (workers < 1)
      throw ConfigError("workers must be >= 1");
    if (trials < 1)
      throw ConfigError("trials must be >= 1");
    if (batches < 1)
      throw ConfigError("batches must be >= 1");
    if (init_points < 0)
      throw ConfigError("init_points must be >= 0");
    if (methods.empty())
      throw ConfigError("methods must list at least one method");
    if (!(noise_variance >= 0.0) || !(observation_noise >= 0.0))
      throw ConfigError("noise variances must be nonnegative");
    if (refit_every < 0)
      throw ConfigError("refit_every must be >= 0");
    if (objective.source == ObjectiveSource::Synthetic)
    {
      if (objective.dim < 1 || objective.levels < 1)
        throw ConfigError("synthetic objective needs dim >= 1 and levels >= 1");
      if (!objective.kernel && !kernel)
        throw ConfigError("synthetic objective needs a kernel");
    }
    if (!kernel && objective.source != ObjectiveSource::Synthetic && refit_every == 0)
      throw ConfigError("a model kernel is required unless hyperparameters are fitted");
    std::set<std::string> seen;
    for (const auto& m : methods)
    {
      const std::string name = Strategy::parse(m, BetaSchedule::fixed(1.0)).name();
      if (!seen.insert(name).second)
        throw ConfigError("method '" + m + "' is listed twice");
    }
  }

  KernelSpec parse_kernel_json(const std::string& json_text)
  {
    try
    {
      return kernel_from(json::parse(json_text), "kernel");
    }
    catch (const json::exception& e)
    {
      throw ConfigError(std::string("kernel: invalid JSON: ") + e.what());
    }
  }

  std::string kernel_to_json(const KernelSpec& spec)
  {
    return kernel_json(spec).dump();
  }

  ExperimentConfig parse_config(const std::string& json_text)
  {
    json j;
    try
    {
      j = json::parse(json_text);
    }
    catch (const json::exception& e)
    {
      throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    const std::string where = "config";
    only_keys(j, where,
              {"objective", "kernel", "fit_hyperparameters", "noise_variance", "observation_noise", "standardize",
               "workers", "batches", "init_points", "methods", "beta", "trials", "base_seed", "output", "mode",
               "durations", "continuous", "rff_features", "check_variance_ratio"});
    ExperimentConfig c;
    if (!j.contains("objective"))
      throw ConfigError("config.objective is required");
    c.objective = objective_from(j.at("objective"));
    if (j.contains("kernel"))
      c.kernel = kernel_from(j.at("kernel"), "kernel");
    if (j.contains("fit_hyperparameters"))
    {
      const json& f = j.at("fit_hyperparameters");
      only_keys(f, "fit_hyperparameters", {"refit_every", "starts"});
      c.refit_every = get<std::int64_t>(f, "refit_every", "fit_hyperparameters", 8);
      c.hyper_starts = get<int>(f, "starts", "fit_hyperparameters", 16);
      if (c.refit_every < 1 || c.hyper_starts < 1)
        throw ConfigError("fit_hyperparameters needs refit_every >= 1 and starts >= 1");
    }
    c.noise_variance = get<double>(j, "noise_variance", where, c.noise_variance);
    c.observation_noise = get<double>(j, "observation_noise", where, c.observation_noise);
    c.standardize = get<bool>(j, "standardize", where, c.standardize);
    c.workers = get<std::int64_t>(j, "workers", where, c.workers);
    c.batches = get<std::int64_t>(j, "batches", where, c.batches);
    c.init_points = get<std::int64_t>(j, "init_points", where, c.init_points);
    c.methods = get<std::vector<std::string>>(j, "methods", where, {});
    if (j.contains("beta"))
    {
      const json& b = j.at("beta");
      only_keys(b, "beta", {"kind", "value", "domain_size"});
      try
      {
        c.beta_kind = beta_kind_from_string(get<std::string>(b, "kind", "beta", "theoretical"));
      }
      catch (const std::exception& e)
      {
        throw ConfigError(std::string("beta.kind: ") + e.what());
      }
      c.beta_fixed = get<double>(b, "value", "beta", 1.0);
      c.beta_domain_size = get<std::int64_t>(b, "domain_size", "beta", 0);
    }
    c.trials = get<std::int64_t>(j, "trials", where, c.trials);
    c.base_seed = get<std::uint64_t>(j, "base_seed", where, c.base_seed);
    c.output = get<std::string>(j, "output", where, c.output.string());
    const auto mode = get<std::string>(j, "mode", where, "synchronous");
    if (mode == "synchronous")
      c.mode = RunMode::Synchronous;
    else if (mode == "asynchronous")
      c.mode = RunMode::Asynchronous;
    else
      throw ConfigError("mode must be synchronous or asynchronous");
    const auto durations = get<std::string>(j, "durations", where, "exponential");
    if (durations == "exponential")
      c.durations = DurationModel::Exponential;
    else if (durations == "constant")
      c.durations = DurationModel::Constant;
    else
      throw ConfigError("durations must be exponential or constant");
    if (j.contains("continuous"))
    {
      const json& s = j.at("continuous");
      only_keys(s, "continuous", {"pool_size", "refine_starts", "refine_steps", "initial_step"});
      c.search.pool_size = get<Eigen::Index>(s, "pool_size", "continuous", c.search.pool_size);
      c.search.refine_starts = get<int>(s, "refine_starts", "continuous", c.search.refine_starts);
      c.search.refine_steps = get<int>(s, "refine_steps", "continuous", c.search.refine_steps);
      c.search.initial_step = get<double>(s, "initial_step", "continuous", c.search.initial_step);
    }
    c.rff_features = get<Eigen::Index>(j, "rff_features", where, c.rff_features);
    c.check_variance_ratio = get<bool>(j, "check_variance_ratio", where, c.check_variance_ratio);
    try
    {
      c.validate();
    }
    catch (const SchedulerError& e)
    {
      throw ConfigError(e.what());
    }
    return c;
  }

  ExperimentConfig load_config(const std::filesystem::path& path)
  {
    std::ifstream in(path);
    if (!in)
      throw ConfigError("cannot open config file '" + path.string() + "'");
    std::ostringstream text;
    text << in.rdbuf();
    try
    {
      return parse_config(text.str());
    }
    catch (const ConfigError& e)
    {
      throw ConfigError(path.string() + ": " + e.what());
    }
  }
}
