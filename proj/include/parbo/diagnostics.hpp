#ifndef PARBO_DIAGNOSTICS_HPP
#define PARBO_DIAGNOSTICS_HPP

#include "parbo/gp.hpp"
#include "parbo/kernel.hpp"
#include "parbo/trace.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <string>
#include <vector>

namespace parbo
{
  /// 1/2 log det(I + K / noise_variance), through a Cholesky factor.
  double information_gain(const Eigen::MatrixXd& kernel, double noise_variance);

  /// 1/2 sum_t log(1 + sigma^2(x_t; D_{t-1}) / noise_variance) over the rows
  /// of `inputs`, taken in order.
  double sequential_information_gain(const KernelSpec& spec, const Eigen::MatrixXd& inputs,
                                     double noise_variance);

  struct GreedyMig
  {
    double gain = 0.0;
    std::vector<Eigen::Index> selected;
  };

  /// Greedy maximum-variance sequence of T distinct candidates and its information
  /// gain, a lower bound on gamma_T.
  GreedyMig greedy_mig_path(const KernelSpec& spec, const Eigen::MatrixXd& candidates, Eigen::Index T,
                            double noise_variance);
  double greedy_mig(const KernelSpec& spec, const Eigen::MatrixXd& candidates, Eigen::Index T,
                    double noise_variance);

  enum class ConditionMethod
  {
    Ucb,
    IrgpUcb,
    Pims,
    Eims,
    Ts,
  };

  std::string to_string(ConditionMethod method);
  ConditionMethod condition_method_from_string(const std::string& name);

  /// Finite-domain zeta_t and xi_t for the algorithms known to satisfy the
  /// confidence condition.
  struct ConditionConstants
  {
    ConditionMethod method = ConditionMethod::Ucb;
    std::int64_t domain_size = 0;
    double noise_variance = 0.0;

    ConditionConstants(ConditionMethod method, std::int64_t domain_size, double noise_variance);

    double zeta(std::int64_t t) const;
    double xi(std::int64_t t) const;
  };

  /// C_1 = 2 / log(1 + 1 / noise_variance).
  double c1_constant(double noise_variance);
  /// C_Q = (Q + noise_variance) / noise_variance.
  double cq_constant(std::int64_t q, double noise_variance);

  /// sqrt(C_1 gamma_T sum zeta_t) + sum xi_t over t = 1..T.
  double bcr_bound(double gamma_T, const ConditionConstants& constants, std::int64_t T, double noise_variance);

  /// sigma^2(x; obs) / sigma^2(x; full).
  double variance_ratio(const GpModel& obs_model, const GpModel& full_model,
                        const Eigen::Ref<const Eigen::VectorXd>& x);

  struct TailCheck
  {
    double exact = 0.0;
    double bound = 0.0;
  };

  /// 1 - Phi(c) and the bound exp(-c^2 / 2) / 2.
  TailCheck normal_tail_check(double c);

  enum class Measure
  {
    SimpleRegret,
    BestValue,
  };

  struct SummaryPoint
  {
    std::int64_t batch = 0;
    double mean = 0.0;
    double std_error = 0.0;
    std::int64_t n_trials = 0;
  };

  /// Mean and standard error (sample std / sqrt(n)) of the measure at the
  /// end of every batch.
  std::vector<SummaryPoint> aggregate_traces(const std::vector<Trace>& traces, Measure measure);
}

#endif
