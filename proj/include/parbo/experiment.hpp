#ifndef PARBO_EXPERIMENT_HPP
#define PARBO_EXPERIMENT_HPP

#include "parbo/config.hpp"
#include "parbo/diagnostics.hpp"
#include "parbo/objectives.hpp"
#include "parbo/trace.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace parbo
{
  struct TrialTrace
  {
    std::string method;
    std::int64_t trial = 0;
    Trace trace;
  };

  struct ExperimentResult
  {
    Eigen::Index dim = 0;
    /// Sorted by method name, then trial.
    std::vector<TrialTrace> traces;
    std::vector<std::string> failures;
    /// Simple regret when the optimum is known, else the best value.
    Measure measure = Measure::SimpleRegret;
  };

  /// Objective of one trial.  Synthetic objectives are redrawn per trial
  /// and shared by every method.
  Objective trial_objective(const ExperimentConfig& config, std::int64_t trial);

  /// Initial design of one trial, snapped to the grid on finite domains.
  Eigen::MatrixXd trial_init(const ExperimentConfig& config, const Objective& objective, std::int64_t trial);

  /// Worker threads: PARBO_THREADS if set, else the hardware concurrency.
  unsigned experiment_threads();

  ExperimentResult run_trials(const ExperimentConfig& config);

  /// method, trial, t, batch, x_1..x_d, y, best_so_far, simple_regret
  std::string trace_csv(const ExperimentResult& result);
  /// batch, method, mean, stderr, n_trials
  std::string summary_csv(const ExperimentResult& result);

  /// Runs every (method, trial), writes trace.csv and summary.csv under
  /// config.output and returns a process exit status.
  int run_experiment(const ExperimentConfig& config, std::ostream& log);
}

#endif
