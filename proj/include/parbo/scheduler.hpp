#ifndef PARBO_SCHEDULER_HPP
#define PARBO_SCHEDULER_HPP

#include "parbo/acquisition.hpp"
#include "parbo/gp.hpp"
#include "parbo/objectives.hpp"
#include "parbo/random.hpp"
#include "parbo/search_space.hpp"
#include "parbo/trace.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

namespace parbo
{
  class SchedulerError : public std::runtime_error
  {
  public:
    using std::runtime_error::runtime_error;
  };

  enum class BaseAf
  {
    Ucb,
    Ei,
    Pims,
  };

  enum class StrategyKind
  {
    Plain, // base AF on observed data, pending points ignored
    Rkb,
    Kb,
    Bucb,
    Pts,
    Us,
    Rs,
  };

  struct Strategy
  {
    StrategyKind kind = StrategyKind::Rkb;
    BaseAf base = BaseAf::Ucb;
    BetaSchedule beta;

    /// Names such as "RKB-UCB", "KB-PIMS", "BUCB", "PTS", "US", "RS", "EI".
    static Strategy parse(const std::string& name, const BetaSchedule& beta);
    std::string name() const;
    bool uses_model() const noexcept { return kind != StrategyKind::Rs; }
  };

  std::string to_string(BaseAf af);

  /// Everything a selection may look at.  `model` is fitted on `observed`
  /// only; `pending` holds the inputs still being evaluated.
  struct SchedulerState
  {
    GpModel model;
    Eigen::MatrixXd pending;
    std::int64_t t = 1;
    std::int64_t capacity_q = 0;
  };

  struct SelectionOptions
  {
    /// Features per RFF path when sampling on a continuous domain.
    Eigen::Index rff_features = 1024;
  };

  using Selection = SearchSpace::Result;

  /// Base acquisition maximized under `model` over `pool`.
  Selection select_base(const GpModel& model, BaseAf base, const BetaSchedule& beta, std::int64_t t,
                        const SearchSpace& space, const Eigen::MatrixXd& pool, Rng& rng,
                        const SelectionOptions& options = {});

  Selection select_rkb(const SchedulerState& state, BaseAf base, const BetaSchedule& beta,
                       const SearchSpace& space, const Eigen::MatrixXd& pool, Rng& rng,
                       const SelectionOptions& options = {});
  Selection select_kb(const SchedulerState& state, BaseAf base, const BetaSchedule& beta,
                      const SearchSpace& space, const Eigen::MatrixXd& pool, Rng& rng,
                      const SelectionOptions& options = {});
  Selection select_bucb(const SchedulerState& state, const BetaSchedule& beta, const SearchSpace& space,
                        const Eigen::MatrixXd& pool, Rng& rng);
  Selection select_pts(const SchedulerState& state, const SearchSpace& space, const Eigen::MatrixXd& pool,
                       Rng& rng, const SelectionOptions& options = {});
  Selection select_us(const SchedulerState& state, const SearchSpace& space, const Eigen::MatrixXd& pool);
  Selection select_rs(const SearchSpace& space, Rng& rng);

  /// Fantasy model used by RKB: pending values drawn jointly from the
  /// observed posterior plus fresh observation noise.
  GpModel rkb_fantasy(const GpModel& model, const Eigen::MatrixXd& pending, Rng& rng);
  /// Fantasy model used by KB: pending values set to the posterior mean.
  GpModel kb_fantasy(const GpModel& model, const Eigen::MatrixXd& pending);

  /// Draws the candidate pool (the grid itself on finite spaces) and
  /// dispatches to the strategy.
  Selection select(const Strategy& strategy, const SchedulerState& state, const SearchSpace& space, Rng& rng,
                   const SelectionOptions& options = {});

  enum class DurationModel
  {
    Constant,
    Exponential, // unit mean
  };

  struct RunSettings
  {
    std::int64_t workers = 8;
    std::int64_t batches = 1;
    KernelSpec kernel;
    double model_noise = 1e-8;
    double observation_noise = 0.0;
    /// Refit hyperparameters whenever the count of completed evaluations
    /// reaches a multiple of this (0 keeps `kernel` fixed).
    std::int64_t refit_every = 0;
    HyperSearchConfig hyper;
    /// Fit the model to standardized outputs (zero mean, unit sample std).
    bool standardize = false;
    /// Assert the variance-ratio bound at pool candidates on every selection.
    bool check_variance_ratio = false;
    SelectionOptions selection;
    DurationModel durations = DurationModel::Exponential;
  };

  /// Independent random streams of one trial.
  struct TrialStreams
  {
    Rng algorithm;
    Rng noise;
    Rng durations;
  };

  /// Batches of `workers` selections; all pending evaluations complete at
  /// the end of each batch.
  Trace run_synchronous(const Strategy& strategy, const Objective& objective, const SearchSpace& space,
                        const Eigen::MatrixXd& init_inputs, const RunSettings& settings, TrialStreams& streams);

  /// Discrete-event simulation: a freed worker immediately receives a new
  /// point.  Completions at the same clock time are all processed before
  /// freed workers are served in worker-id order.
  Trace run_asynchronous(const Strategy& strategy, const Objective& objective, const SearchSpace& space,
                         const Eigen::MatrixXd& init_inputs, const RunSettings& settings, TrialStreams& streams);
}

#endif
