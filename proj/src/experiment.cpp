#include "parbo/experiment.hpp"

#include "parbo/lhs.hpp"
#include "parbo/scheduler.hpp"
#include "parbo/search_space.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <thread>

namespace parbo
{
  namespace
  {
    std::string fmt(double v)
    {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", v);
      return buf;
    }

    KernelSpec model_kernel(const ExperimentConfig& config, Eigen::Index dim)
    {
      if (config.kernel)
        return *config.kernel;
      if (config.objective.source == ObjectiveSource::Synthetic && config.objective.kernel)
        return *config.objective.kernel;
      return KernelSpec::gaussian_iso(dim, 0.5, 1.0);
    }

    BetaSchedule beta_for(const ExperimentConfig& config, const SearchSpace& space)
    {
      switch (config.beta_kind)
      {
      case BetaKind::Fixed: return BetaSchedule::fixed(config.beta_fixed);
      case BetaKind::Heuristic: return BetaSchedule::heuristic(space.dim());
      case BetaKind::TheoreticalFinite:
      case BetaKind::IrgpRandom: {
        std::int64_t size = config.beta_domain_size;
        if (size == 0)
          size = static_cast<std::int64_t>(space.size());
        if (size < 1)
          throw ConfigError("beta.domain_size is required for " + to_string(config.beta_kind) +
                            " beta on a continuous domain");
        return config.beta_kind == BetaKind::TheoreticalFinite ? BetaSchedule::theoretical_finite(size)
                                                               : BetaSchedule::irgp_random(size);
      }
      }
      throw ConfigError("unknown beta kind");
    }

    SearchSpace space_for(const ExperimentConfig& config, const Objective& objective)
    {
      if (objective.is_finite())
        return SearchSpace::finite(objective.grid());
      return SearchSpace::box(objective.dim(), config.search);
    }
  }

  Objective trial_objective(const ExperimentConfig& config, std::int64_t trial)
  {
    const ObjectiveConfig& o = config.objective;
    switch (o.source)
    {
    case ObjectiveSource::Synthetic: {
      const KernelSpec spec = o.kernel ? *o.kernel : *config.kernel;
      Rng rng(derive_seed(config.base_seed, "objective", static_cast<std::uint64_t>(trial)));
      SyntheticOptions options;
      options.force_exact = o.force_exact;
      return synthetic_gp(spec, regular_grid(o.dim, o.levels, o.include_zero), rng, options);
    }
    case ObjectiveSource::Benchmark:
      return Objective::analytic(benchmark_from_string(o.benchmark));
    case ObjectiveSource::Tabular:
      return load_tabular(o.path);
    }
    throw ConfigError("unknown objective source");
  }

  Eigen::MatrixXd trial_init(const ExperimentConfig& config, const Objective& objective, std::int64_t trial)
  {
    if (config.init_points == 0)
      return Eigen::MatrixXd(0, objective.dim());
    Rng rng(derive_seed(config.base_seed, "init", static_cast<std::uint64_t>(trial)));
    Eigen::MatrixXd points = lhs(config.init_points, objective.dim(), rng);
    if (!objective.is_finite())
      return points;
    const auto ids = nearest_grid(points, objective.grid());
    for (std::size_t i = 0; i < ids.size(); ++i)
      points.row(static_cast<Eigen::Index>(i)) = objective.grid().row(ids[i]);
    return points;
  }

  unsigned experiment_threads()
  {
    if (const char* env = std::getenv("PARBO_THREADS"))
    {
      const long v = std::strtol(env, nullptr, 10);
      if (v >= 1)
        return static_cast<unsigned>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
  }

  ExperimentResult run_trials(const ExperimentConfig& config)
  {
    config.validate();
    std::vector<Objective> objectives;
    std::vector<Eigen::MatrixXd> inits;
    if (config.objective.source == ObjectiveSource::Synthetic)
      for (std::int64_t trial = 0; trial < config.trials; ++trial)
        objectives.push_back(trial_objective(config, trial));
    else
      objectives.push_back(trial_objective(config, 0));
    auto objective_of = [&](std::int64_t trial) -> const Objective& {
      return objectives.size() == 1 ? objectives.front() : objectives[static_cast<std::size_t>(trial)];
    };
    for (std::int64_t trial = 0; trial < config.trials; ++trial)
      inits.push_back(trial_init(config, objective_of(trial), trial));

    const Objective& first = objectives.front();
    const SearchSpace space = space_for(config, first);
    const BetaSchedule beta = beta_for(config, space);
    std::vector<Strategy> strategies;
    for (const auto& m : config.methods)
      strategies.push_back(Strategy::parse(m, beta));
    std::sort(strategies.begin(), strategies.end(),
              [](const Strategy& a, const Strategy& b) { return a.name() < b.name(); });

    RunSettings base;
    base.workers = config.workers;
    base.batches = config.batches;
    base.kernel = model_kernel(config, first.dim());
    base.model_noise = config.noise_variance;
    base.observation_noise = config.observation_noise;
    base.refit_every = config.refit_every;
    base.hyper.starts = config.hyper_starts;
    base.standardize = config.standardize;
    base.check_variance_ratio = config.check_variance_ratio;
    base.selection.rff_features = config.rff_features;
    base.durations = config.durations;

    ExperimentResult result;
    result.dim = first.dim();
    result.measure = first.known_optimum() ? Measure::SimpleRegret : Measure::BestValue;

    const std::size_t tasks = strategies.size() * static_cast<std::size_t>(config.trials);
    std::vector<std::optional<TrialTrace>> slots(tasks);
    std::vector<std::string> errors(tasks);
    std::atomic<std::size_t> next{0};
    auto work = [&] {
      for (std::size_t k = next++; k < tasks; k = next++)
      {
        const Strategy& strategy = strategies[k / static_cast<std::size_t>(config.trials)];
        const auto trial = static_cast<std::int64_t>(k % static_cast<std::size_t>(config.trials));
        const auto ut = static_cast<std::uint64_t>(trial);
        const std::string name = strategy.name();
        try
        {
          const Objective& objective = objective_of(trial);
          const SearchSpace trial_space = space_for(config, objective);
          RunSettings settings = base;
          settings.hyper.seed = derive_seed(config.base_seed, "hyper:" + name, ut);
          TrialStreams streams{Rng(derive_seed(config.base_seed, "algorithm:" + name, ut)),
                               Rng(derive_seed(config.base_seed, "noise", ut)),
                               Rng(derive_seed(config.base_seed, "durations", ut))};
          const auto& init = inits[static_cast<std::size_t>(trial)];
          Trace trace = config.mode == RunMode::Synchronous
                            ? run_synchronous(strategy, objective, trial_space, init, settings, streams)
                            : run_asynchronous(strategy, objective, trial_space, init, settings, streams);
          slots[k] = TrialTrace{name, trial, std::move(trace)};
        }
        catch (const std::exception& e)
        {
          errors[k] = name + " trial " + std::to_string(trial) + ": " + e.what();
        }
      }
    };
    const unsigned threads = std::min<unsigned>(experiment_threads(), static_cast<unsigned>(std::max<std::size_t>(tasks, 1)));
    if (threads <= 1)
      work();
    else
    {
      std::vector<std::thread> pool;
      for (unsigned i = 0; i < threads; ++i)
        pool.emplace_back(work);
      for (auto& th : pool)
        th.join();
    }
    for (std::size_t k = 0; k < tasks; ++k)
    {
      if (slots[k])
        result.traces.push_back(std::move(*slots[k]));
      if (!errors[k].empty())
        result.failures.push_back(errors[k]);
    }
    return result;
  }

  std::string trace_csv(const ExperimentResult& result)
  {
    std::ostringstream out;
    out << "method,trial,t,batch";
    for (Eigen::Index k = 0; k < result.dim; ++k)
      out << ",x_" << (k + 1);
    out << ",y,best_so_far,simple_regret\n";
    for (const TrialTrace& tt : result.traces)
      for (const RegretRecord& r : tt.trace.records)
      {
        out << tt.method << ',' << tt.trial << ',' << r.t << ',' << r.batch;
        for (Eigen::Index k = 0; k < r.x.size(); ++k)
          out << ',' << fmt(r.x[k]);
        out << ',' << fmt(r.y) << ',' << fmt(r.best_so_far) << ',';
        if (r.simple_regret)
          out << fmt(*r.simple_regret);
        out << '\n';
      }
    return out.str();
  }

  std::string summary_csv(const ExperimentResult& result)
  {
    std::map<std::string, std::vector<Trace>> by_method;
    for (const TrialTrace& tt : result.traces)
      by_method[tt.method].push_back(tt.trace);
    std::ostringstream out;
    out << "batch,method,mean,stderr,n_trials\n";
    for (const auto& [method, traces] : by_method)
      for (const SummaryPoint& p : aggregate_traces(traces, result.measure))
        out << p.batch << ',' << method << ',' << fmt(p.mean) << ',' << fmt(p.std_error) << ',' << p.n_trials
            << '\n';
    return out.str();
  }

  int run_experiment(const ExperimentConfig& config, std::ostream& log)
  {
    const ExperimentResult result = run_trials(config);
    std::filesystem::create_directories(config.output);
    const auto write = [](const std::filesystem::path& path, const std::string& text) {
      std::ofstream out(path, std::ios::binary);
      if (!out)
        throw std::runtime_error("cannot write '" + path.string() + "'");
      out << text;
    };
    write(config.output / "trace.csv", trace_csv(result));
    write(config.output / "summary.csv", summary_csv(result));
    for (const auto& f : result.failures)
      log << "trial failed: " << f << '\n';
    log << "wrote " << (config.output / "trace.csv").string() << " and "
        << (config.output / "summary.csv").string() << " (" << result.traces.size() << " trials";
    if (!result.failures.empty())
      log << ", " << result.failures.size() << " failed";
    log << ")\n";
    return result.failures.empty() ? 0 : 1;
  }
}
