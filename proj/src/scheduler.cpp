#include "parbo/scheduler.hpp"

#include "parbo/diagnostics.hpp"
#include "parbo/sampling.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <numeric>
#include <vector>

namespace parbo
{
  namespace
  {
    std::string upper(std::string s)
    {
      for (char& c : s)
        c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
      return s;
    }

    BaseAf base_from_string(const std::string& s)
    {
      if (s == "UCB")
        return BaseAf::Ucb;
      if (s == "EI")
        return BaseAf::Ei;
      if (s == "PIMS")
        return BaseAf::Pims;
      throw SchedulerError("unknown base acquisition '" + s + "' (expected UCB, EI or PIMS)");
    }

    Eigen::VectorXd sds(const GpModel& model, const Eigen::MatrixXd& x)
    {
      return model.variances(x).cwiseSqrt();
    }

    PosteriorSample draw_path(const GpModel& model, const SearchSpace& space, const Eigen::MatrixXd& pool,
                              Rng& rng, const SelectionOptions& options)
    {
      if (!space.is_finite() && model.spec().family == KernelFamily::GaussianArd)
      {
        const FeatureMap map = build_feature_map(model.spec(), options.rff_features, rng);
        return sample_path_rff(model, map, rng);
      }
      return sample_path_discrete(model, pool, rng);
    }

    GpModel variance_fantasy(const GpModel& model, const Eigen::MatrixXd& pending)
    {
      if (pending.rows() == 0)
        return model;
      return model.condition(pending, Eigen::VectorXd::Zero(pending.rows()));
    }
  }

  std::string to_string(BaseAf af)
  {
    switch (af)
    {
    case BaseAf::Ucb: return "UCB";
    case BaseAf::Ei: return "EI";
    case BaseAf::Pims: return "PIMS";
    }
    return "unknown";
  }

  Strategy Strategy::parse(const std::string& raw, const BetaSchedule& beta)
  {
    const std::string name = upper(raw);
    Strategy s;
    s.beta = beta;
    if (name == "BUCB")
      s.kind = StrategyKind::Bucb;
    else if (name == "PTS")
      s.kind = StrategyKind::Pts;
    else if (name == "US")
      s.kind = StrategyKind::Us;
    else if (name == "RS")
      s.kind = StrategyKind::Rs;
    else if (name.rfind("RKB-", 0) == 0)
    {
      s.kind = StrategyKind::Rkb;
      s.base = base_from_string(name.substr(4));
    }
    else if (name.rfind("KB-", 0) == 0)
    {
      s.kind = StrategyKind::Kb;
      s.base = base_from_string(name.substr(3));
    }
    else
    {
      try
      {
        s.kind = StrategyKind::Plain;
        s.base = base_from_string(name);
      }
      catch (const SchedulerError&)
      {
        throw SchedulerError("unknown method '" + raw +
                             "' (expected RKB-<AF>, KB-<AF>, <AF>, BUCB, PTS, US or RS with AF in UCB, EI, PIMS)");
      }
    }
    return s;
  }

  std::string Strategy::name() const
  {
    switch (kind)
    {
    case StrategyKind::Plain: return to_string(base);
    case StrategyKind::Rkb: return "RKB-" + to_string(base);
    case StrategyKind::Kb: return "KB-" + to_string(base);
    case StrategyKind::Bucb: return "BUCB";
    case StrategyKind::Pts: return "PTS";
    case StrategyKind::Us: return "US";
    case StrategyKind::Rs: return "RS";
    }
    return "unknown";
  }

  Selection select_base(const GpModel& model, BaseAf base, const BetaSchedule& beta, std::int64_t t,
                        const SearchSpace& space, const Eigen::MatrixXd& pool, Rng& rng,
                        const SelectionOptions& options)
  {
    switch (base)
    {
    case BaseAf::Ucb: {
      const double b = beta.value(t, rng);
      if (!(b >= 0.0))
        throw AcquisitionError("UCB needs beta >= 0");
      const double root = std::sqrt(b);
      return space.maximize([&](const Eigen::MatrixXd& x) -> Eigen::VectorXd { return model.means(x) + root * sds(model, x); },
                            pool);
    }
    case BaseAf::Ei: {
      const double tau = model.means(pool).maxCoeff();
      return space.maximize(
          [&](const Eigen::MatrixXd& x) -> Eigen::VectorXd {
            const Eigen::VectorXd mu = model.means(x);
            const Eigen::VectorXd sd = sds(model, x);
            Eigen::VectorXd v(x.rows());
            for (Eigen::Index i = 0; i < x.rows(); ++i)
              v[i] = ei_value(mu[i], sd[i], tau);
            return v;
          },
          pool);
    }
    case BaseAf::Pims: {
      const PosteriorSample path = draw_path(model, space, pool, rng, options);
      const double gstar = sample_max(path, pool).max_value;
      return space.maximize(
          [&](const Eigen::MatrixXd& x) -> Eigen::VectorXd {
            const Eigen::VectorXd mu = model.means(x);
            const Eigen::VectorXd sd = sds(model, x);
            Eigen::VectorXd v(x.rows());
            for (Eigen::Index i = 0; i < x.rows(); ++i)
              v[i] = pims_value(mu[i], sd[i], gstar);
            return v;
          },
          pool);
    }
    }
    throw SchedulerError("unknown base acquisition");
  }

  GpModel rkb_fantasy(const GpModel& model, const Eigen::MatrixXd& pending, Rng& rng)
  {
    if (pending.rows() == 0)
      return model;
    Eigen::VectorXd y = sample_joint(model, pending, rng);
    const double noise = model.noise_variance();
    if (noise > 0.0)
    {
      const double sd = std::sqrt(noise);
      for (Eigen::Index i = 0; i < y.size(); ++i)
        y[i] += sd * standard_normal(rng);
    }
    return model.condition(pending, y);
  }

  GpModel kb_fantasy(const GpModel& model, const Eigen::MatrixXd& pending)
  {
    if (pending.rows() == 0)
      return model;
    return model.condition(pending, model.means(pending));
  }

  Selection select_rkb(const SchedulerState& state, BaseAf base, const BetaSchedule& beta,
                       const SearchSpace& space, const Eigen::MatrixXd& pool, Rng& rng,
                       const SelectionOptions& options)
  {
    if (state.pending.rows() == 0)
      return select_base(state.model, base, beta, state.t, space, pool, rng, options);
    const GpModel fantasy = rkb_fantasy(state.model, state.pending, rng);
    return select_base(fantasy, base, beta, state.t, space, pool, rng, options);
  }

  Selection select_kb(const SchedulerState& state, BaseAf base, const BetaSchedule& beta,
                      const SearchSpace& space, const Eigen::MatrixXd& pool, Rng& rng,
                      const SelectionOptions& options)
  {
    const GpModel fantasy = kb_fantasy(state.model, state.pending);
    return select_base(fantasy, base, beta, state.t, space, pool, rng, options);
  }

  Selection select_bucb(const SchedulerState& state, const BetaSchedule& beta, const SearchSpace& space,
                        const Eigen::MatrixXd& pool, Rng& rng)
  {
    const Eigen::Index p = state.pending.rows();
    const double noise = state.model.noise_variance();
    if (p > 0 && !(noise > 0.0))
      throw SchedulerError("BUCB multiplier is undefined with zero noise variance and pending points");
    const double mult = p > 0 ? static_cast<double>(p) / noise : 1.0;
    const double b = beta.value(state.t, rng);
    if (!(b >= 0.0))
      throw AcquisitionError("BUCB needs beta >= 0");
    const double root = std::sqrt(b * mult);
    const GpModel fantasy = variance_fantasy(state.model, state.pending);
    const GpModel& observed = state.model;
    return space.maximize(
        [&](const Eigen::MatrixXd& x) -> Eigen::VectorXd { return observed.means(x) + root * sds(fantasy, x); },
        pool);
  }

  Selection select_pts(const SchedulerState& state, const SearchSpace& space, const Eigen::MatrixXd& pool,
                       Rng& rng, const SelectionOptions& options)
  {
    const PosteriorSample path = draw_path(state.model, space, pool, rng, options);
    if (path.is_discrete())
    {
      const SampleMax best = sample_max(path, pool);
      return {pool.row(best.argmax).transpose(), space.is_finite() ? best.argmax : -1, best.max_value};
    }
    return space.maximize([&](const Eigen::MatrixXd& x) -> Eigen::VectorXd { return path.evaluate(x); }, pool);
  }

  Selection select_us(const SchedulerState& state, const SearchSpace& space, const Eigen::MatrixXd& pool)
  {
    const GpModel fantasy = variance_fantasy(state.model, state.pending);
    return space.maximize([&](const Eigen::MatrixXd& x) -> Eigen::VectorXd { return fantasy.variances(x); }, pool);
  }

  Selection select_rs(const SearchSpace& space, Rng& rng)
  {
    return space.uniform(rng);
  }

  Selection select(const Strategy& strategy, const SchedulerState& state, const SearchSpace& space, Rng& rng,
                   const SelectionOptions& options)
  {
    if (state.pending.rows() > state.capacity_q)
      throw SchedulerError("pending count " + std::to_string(state.pending.rows()) + " exceeds capacity " +
                           std::to_string(state.capacity_q));
    if (strategy.kind == StrategyKind::Rs)
      return select_rs(space, rng);
    const Eigen::MatrixXd pool = space.candidates(rng);
    switch (strategy.kind)
    {
    case StrategyKind::Plain:
      return select_base(state.model, strategy.base, strategy.beta, state.t, space, pool, rng, options);
    case StrategyKind::Rkb: return select_rkb(state, strategy.base, strategy.beta, space, pool, rng, options);
    case StrategyKind::Kb: return select_kb(state, strategy.base, strategy.beta, space, pool, rng, options);
    case StrategyKind::Bucb: return select_bucb(state, strategy.beta, space, pool, rng);
    case StrategyKind::Pts: return select_pts(state, space, pool, rng, options);
    case StrategyKind::Us: return select_us(state, space, pool);
    case StrategyKind::Rs: break;
    }
    return select_rs(space, rng);
  }

  namespace
  {
    class TrialRunner
    {
    public:
      TrialRunner(const Strategy& strategy, const Objective& objective, const SearchSpace& space,
                  const Eigen::MatrixXd& init_inputs, const RunSettings& settings, TrialStreams& streams)
          : strategy_(strategy), objective_(objective), space_(space), settings_(settings), streams_(streams),
            observed_(space.dim()), kernel_(settings.kernel),
            model_(GpModel::fit(settings.kernel, settings.model_noise, Dataset(space.dim())))
      {
        if (settings.workers < 1)
          throw SchedulerError("workers must be >= 1");
        if (settings.batches < 1)
          throw SchedulerError("batches must be >= 1");
        if (init_inputs.rows() > 0 && init_inputs.cols() != space.dim())
          throw SchedulerError("initial design has the wrong dimension");
        trace_.init_inputs = init_inputs;
        trace_.init_outputs.resize(init_inputs.rows());
        const auto n0 = static_cast<std::int64_t>(init_inputs.rows());
        for (Eigen::Index i = 0; i < init_inputs.rows(); ++i)
        {
          const Eigen::VectorXd x = init_inputs.row(i).transpose();
          const double y = observe(objective_, x, settings_.observation_noise, streams_.noise);
          trace_.init_outputs[i] = y;
          observed_.push_back(x, y, static_cast<std::int64_t>(i) - n0 + 1);
          best_ = std::max(best_, objective_.value(x));
        }
        rebuild_model(true);
      }

      std::int64_t total() const noexcept { return settings_.workers * settings_.batches; }

      /// Selects the point for iteration t given the inputs still pending.
      Eigen::VectorXd dispatch(std::int64_t t, const Eigen::MatrixXd& pending)
      {
        const SchedulerState state{model_, pending, t, settings_.workers - 1};
        if (settings_.check_variance_ratio && pending.rows() > 0 && strategy_.uses_model())
          check_ratio(state);
        trace_.pending_at_selection.push_back(pending.rows());
        Selection sel;
        try
        {
          sel = select(strategy_, state, space_, streams_.algorithm, settings_.selection);
        }
        catch (const std::exception& e)
        {
          throw SchedulerError(strategy_.name() + ": selection at t=" + std::to_string(t) + " failed: " + e.what());
        }
        RegretRecord rec;
        rec.t = t;
        rec.batch = (t - 1) / settings_.workers + 1;
        rec.x = sel.x;
        best_ = std::max(best_, objective_.value(sel.x));
        rec.best_so_far = best_;
        if (const auto fstar = objective_.known_optimum())
          rec.simple_regret = std::max(0.0, *fstar - best_);
        trace_.records.push_back(std::move(rec));
        return sel.x;
      }

      void complete(std::int64_t t, const Eigen::VectorXd& x)
      {
        const double y = observe(objective_, x, settings_.observation_noise, streams_.noise);
        trace_.records[static_cast<std::size_t>(t - 1)].y = y;
        observed_.insert_sorted(x, y, t);
        ++completed_;
      }

      void rebuild_model(bool initial = false)
      {
        if (!strategy_.uses_model())
          return;
        Dataset data = observed_;
        if (settings_.standardize && data.size() > 0)
        {
          const double mean = data.outputs.mean();
          double sd = 1.0;
          if (data.size() > 1)
          {
            const double ss = (data.outputs.array() - mean).square().sum();
            sd = std::sqrt(ss / static_cast<double>(data.size() - 1));
            if (!(sd > 0.0))
              sd = 1.0;
          }
          data.outputs = (data.outputs.array() - mean) / sd;
        }
        if (settings_.refit_every > 0 && data.size() >= 2)
        {
          const std::int64_t epoch = completed_ / settings_.refit_every;
          if (initial || epoch != refit_epoch_)
          {
            refit_epoch_ = epoch;
            HyperSearchConfig search = settings_.hyper;
            search.noise_variance = settings_.model_noise;
            search.seed = mix64(settings_.hyper.seed ^ mix64(static_cast<std::uint64_t>(refits_++)));
            search.initial = kernel_;
            kernel_ = fit_hyperparameters(data, search);
          }
        }
        model_ = GpModel::fit(kernel_, settings_.model_noise, std::move(data));
      }

      Trace finish() { return std::move(trace_); }

    private:
      void check_ratio(const SchedulerState& state) const
      {
        const GpModel full = variance_fantasy(state.model, state.pending);
        const double bound = cq_constant(state.pending.rows(), state.model.noise_variance()) + 1e-6;
        Eigen::MatrixXd probe;
        if (space_.is_finite())
          probe = space_.grid();
        else
        {
          Rng local(mix64(static_cast<std::uint64_t>(state.t)));
          probe = space_.candidates(local);
        }
        const Eigen::Index n = std::min<Eigen::Index>(probe.rows(), 256);
        for (Eigen::Index i = 0; i < n; ++i)
        {
          const Eigen::VectorXd x = probe.row(i).transpose();
          if (!(full.variance(x) > 0.0))
            continue;
          const double r = variance_ratio(state.model, full, x);
          if (r > bound)
            throw SchedulerError("variance ratio " + std::to_string(r) + " exceeds bound " + std::to_string(bound) +
                                 " at t=" + std::to_string(state.t));
        }
      }

      const Strategy& strategy_;
      const Objective& objective_;
      const SearchSpace& space_;
      const RunSettings& settings_;
      TrialStreams& streams_;
      Dataset observed_;
      KernelSpec kernel_;
      GpModel model_;
      Trace trace_;
      double best_ = -std::numeric_limits<double>::infinity();
      std::int64_t completed_ = 0;
      std::int64_t refit_epoch_ = 0;
      std::int64_t refits_ = 0;
    };

    Eigen::MatrixXd stack(const std::vector<Eigen::VectorXd>& rows, Eigen::Index dim)
    {
      Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), dim);
      for (std::size_t i = 0; i < rows.size(); ++i)
        m.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
      return m;
    }
  }

  Trace run_synchronous(const Strategy& strategy, const Objective& objective, const SearchSpace& space,
                        const Eigen::MatrixXd& init_inputs, const RunSettings& settings, TrialStreams& streams)
  {
    TrialRunner runner(strategy, objective, space, init_inputs, settings, streams);
    std::int64_t t = 0;
    for (std::int64_t b = 0; b < settings.batches; ++b)
    {
      std::vector<Eigen::VectorXd> pending;
      std::vector<std::int64_t> labels;
      for (std::int64_t w = 0; w < settings.workers; ++w)
      {
        ++t;
        pending.push_back(runner.dispatch(t, stack(pending, space.dim())));
        labels.push_back(t);
      }
      for (std::size_t i = 0; i < pending.size(); ++i)
        runner.complete(labels[i], pending[i]);
      runner.rebuild_model();
    }
    return runner.finish();
  }

  Trace run_asynchronous(const Strategy& strategy, const Objective& objective, const SearchSpace& space,
                         const Eigen::MatrixXd& init_inputs, const RunSettings& settings, TrialStreams& streams)
  {
    struct Job
    {
      double finish;
      std::int64_t worker;
      std::int64_t t;
      Eigen::VectorXd x;
    };

    TrialRunner runner(strategy, objective, space, init_inputs, settings, streams);
    std::exponential_distribution<double> exponential(1.0);
    std::vector<Job> running;
    std::vector<std::int64_t> free_workers(static_cast<std::size_t>(settings.workers));
    std::iota(free_workers.begin(), free_workers.end(), std::int64_t{0});
    double clock = 0.0;
    std::int64_t dispatched = 0;

    while (true)
    {
      std::sort(free_workers.begin(), free_workers.end());
      for (std::int64_t w : free_workers)
      {
        if (dispatched >= runner.total())
          break;
        ++dispatched;
        std::sort(running.begin(), running.end(), [](const Job& a, const Job& b) { return a.t < b.t; });
        std::vector<Eigen::VectorXd> pending;
        for (const Job& j : running)
          pending.push_back(j.x);
        Eigen::VectorXd x = runner.dispatch(dispatched, stack(pending, space.dim()));
        const double duration =
            settings.durations == DurationModel::Constant ? 1.0 : exponential(streams.durations);
        running.push_back({clock + duration, w, dispatched, std::move(x)});
      }
      free_workers.clear();
      if (running.empty())
        break;

      double next = std::numeric_limits<double>::infinity();
      for (const Job& j : running)
        next = std::min(next, j.finish);
      std::vector<Job> done;
      std::vector<Job> still;
      for (Job& j : running)
        (j.finish == next ? done : still).push_back(std::move(j));
      running = std::move(still);
      std::sort(done.begin(), done.end(), [](const Job& a, const Job& b) { return a.t < b.t; });
      clock = next;
      for (const Job& j : done)
      {
        runner.complete(j.t, j.x);
        free_workers.push_back(j.worker);
      }
      runner.rebuild_model();
    }
    return runner.finish();
  }
}
