#include "parbo/diagnostics.hpp"

#include "parbo/acquisition.hpp"
#include "parbo/normal.hpp"

#include <Eigen/Cholesky>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace parbo
{
  namespace
  {
    void require_noise(double noise_variance)
    {
      if (!(noise_variance > 0.0) || !std::isfinite(noise_variance))
        throw std::invalid_argument("noise variance must be positive and finite");
    }

    double log_over_two(std::int64_t domain_size)
    {
      if (domain_size < 1)
        throw std::invalid_argument("domain size must be positive");
      return std::log(static_cast<double>(domain_size) / 2.0);
    }
  }

  double information_gain(const Eigen::MatrixXd& kernel, double noise_variance)
  {
    require_noise(noise_variance);
    if (kernel.rows() != kernel.cols())
      throw std::invalid_argument("information_gain needs a square kernel matrix");
    if (kernel.rows() == 0)
      return 0.0;
    Eigen::MatrixXd a = kernel / noise_variance;
    a.diagonal().array() += 1.0;
    Eigen::LLT<Eigen::MatrixXd> llt(a);
    if (llt.info() != Eigen::Success)
      throw GpError("information_gain: I + K / noise is not positive definite");
    return llt.matrixLLT().diagonal().array().log().sum();
  }

  double sequential_information_gain(const KernelSpec& spec, const Eigen::MatrixXd& inputs,
                                     double noise_variance)
  {
    require_noise(noise_variance);
    GpModel model = GpModel::fit(spec, noise_variance, Dataset(inputs.cols()));
    double total = 0.0;
    for (Eigen::Index i = 0; i < inputs.rows(); ++i)
    {
      const Eigen::VectorXd x = inputs.row(i).transpose();
      total += 0.5 * std::log1p(model.variance(x) / noise_variance);
      model = model.condition(inputs.row(i), Eigen::VectorXd::Zero(1));
    }
    return total;
  }

  GreedyMig greedy_mig_path(const KernelSpec& spec, const Eigen::MatrixXd& candidates, Eigen::Index T,
                            double noise_variance)
  {
    require_noise(noise_variance);
    const Eigen::Index m = candidates.rows();
    if (T < 0 || T > m)
      throw std::invalid_argument("greedy_mig needs 0 <= T <= number of candidates");
    GreedyMig result;
    if (T == 0)
      return result;
    const Eigen::MatrixXd k = kernel_matrix(spec, candidates);
    Eigen::VectorXd var = k.diagonal();
    // Rank-one downdates: column s of `factors` is cov(., x_s) / sqrt(var_s + noise).
    Eigen::MatrixXd factors(m, T);
    std::vector<bool> taken(static_cast<std::size_t>(m), false);
    for (Eigen::Index s = 0; s < T; ++s)
    {
      Eigen::Index j = -1;
      for (Eigen::Index i = 0; i < m; ++i)
        if (!taken[static_cast<std::size_t>(i)] && (j < 0 || var[i] > var[j]))
          j = i;
      taken[static_cast<std::size_t>(j)] = true;
      const double vj = std::max(var[j], 0.0);
      result.gain += 0.5 * std::log1p(vj / noise_variance);
      result.selected.push_back(j);
      Eigen::VectorXd cov = k.col(j);
      if (s > 0)
        cov.noalias() -= factors.leftCols(s) * factors.row(j).leftCols(s).transpose();
      factors.col(s) = cov / std::sqrt(vj + noise_variance);
      var -= factors.col(s).cwiseAbs2();
      var = var.cwiseMax(0.0);
    }
    return result;
  }

  double greedy_mig(const KernelSpec& spec, const Eigen::MatrixXd& candidates, Eigen::Index T,
                    double noise_variance)
  {
    return greedy_mig_path(spec, candidates, T, noise_variance).gain;
  }

  std::string to_string(ConditionMethod method)
  {
    switch (method)
    {
    case ConditionMethod::Ucb: return "ucb";
    case ConditionMethod::IrgpUcb: return "irgp_ucb";
    case ConditionMethod::Pims: return "pims";
    case ConditionMethod::Eims: return "eims";
    case ConditionMethod::Ts: return "ts";
    }
    return "unknown";
  }

  ConditionMethod condition_method_from_string(const std::string& name)
  {
    for (ConditionMethod m : {ConditionMethod::Ucb, ConditionMethod::IrgpUcb, ConditionMethod::Pims,
                              ConditionMethod::Eims, ConditionMethod::Ts})
      if (name == to_string(m))
        return m;
    throw std::invalid_argument("unknown method '" + name + "' (expected ucb, irgp_ucb, pims, eims or ts)");
  }

  ConditionConstants::ConditionConstants(ConditionMethod method_, std::int64_t domain_size_,
                                         double noise_variance_)
      : method(method_), domain_size(domain_size_), noise_variance(noise_variance_)
  {
    if (domain_size < 1)
      throw std::invalid_argument("domain size must be positive");
    if (method == ConditionMethod::Eims)
      require_noise(noise_variance);
  }

  double ConditionConstants::zeta(std::int64_t t) const
  {
    if (t < 1)
      throw std::invalid_argument("t must be >= 1");
    const double c2 = 2.0 + 2.0 * log_over_two(domain_size);
    switch (method)
    {
    case ConditionMethod::Ucb: {
      Rng unused;
      return BetaSchedule::theoretical_finite(domain_size).value(t, unused);
    }
    case ConditionMethod::IrgpUcb:
    case ConditionMethod::Pims:
    case ConditionMethod::Ts:
      return c2;
    case ConditionMethod::Eims:
      return std::log((noise_variance + static_cast<double>(t) - 1.0) / noise_variance) + c2 +
             std::sqrt(2.0 * std::numbers::pi * c2);
    }
    throw std::invalid_argument("unknown method");
  }

  double ConditionConstants::xi(std::int64_t t) const
  {
    if (t < 1)
      throw std::invalid_argument("t must be >= 1");
    if (method != ConditionMethod::Ucb)
      return 0.0;
    const double beta = zeta(t);
    return static_cast<double>(domain_size) / std::sqrt(2.0 * std::numbers::pi) * std::exp(-beta / 2.0);
  }

  double c1_constant(double noise_variance)
  {
    require_noise(noise_variance);
    return 2.0 / std::log1p(1.0 / noise_variance);
  }

  double cq_constant(std::int64_t q, double noise_variance)
  {
    require_noise(noise_variance);
    if (q < 0)
      throw std::invalid_argument("Q must be nonnegative");
    return (static_cast<double>(q) + noise_variance) / noise_variance;
  }

  double bcr_bound(double gamma_T, const ConditionConstants& constants, std::int64_t T, double noise_variance)
  {
    if (T < 1)
      throw std::invalid_argument("bcr_bound needs T >= 1");
    if (!(gamma_T >= 0.0))
      throw std::invalid_argument("gamma_T must be nonnegative");
    double zeta_sum = 0.0;
    double xi_sum = 0.0;
    for (std::int64_t t = 1; t <= T; ++t)
    {
      zeta_sum += constants.zeta(t);
      xi_sum += constants.xi(t);
    }
    return std::sqrt(c1_constant(noise_variance) * gamma_T * zeta_sum) + xi_sum;
  }

  double variance_ratio(const GpModel& obs_model, const GpModel& full_model,
                        const Eigen::Ref<const Eigen::VectorXd>& x)
  {
    if (full_model.data().size() < obs_model.data().size())
      throw std::invalid_argument("variance_ratio: full model has fewer rows than the observed model");
    const double denom = full_model.variance(x);
    if (!(denom > 0.0))
      throw std::domain_error("variance_ratio: posterior variance under the full model is zero");
    return obs_model.variance(x) / denom;
  }

  TailCheck normal_tail_check(double c)
  {
    if (!(c > 0.0))
      throw std::invalid_argument("normal_tail_check needs c > 0");
    return {normal_sf(c), 0.5 * std::exp(-0.5 * c * c)};
  }

  std::vector<SummaryPoint> aggregate_traces(const std::vector<Trace>& traces, Measure measure)
  {
    if (traces.empty())
      throw std::invalid_argument("aggregate_traces needs at least one trace");
    const std::size_t length = traces.front().records.size();
    for (const Trace& tr : traces)
      if (tr.records.size() != length)
        throw std::invalid_argument("aggregate_traces needs traces of equal length");

    // Index of the last record of each batch, taken from the first trace.
    std::vector<std::pair<std::int64_t, std::size_t>> ends;
    for (std::size_t i = 0; i < length; ++i)
    {
      const std::int64_t b = traces.front().records[i].batch;
      if (i + 1 == length || traces.front().records[i + 1].batch != b)
        ends.emplace_back(b, i);
    }

    std::vector<SummaryPoint> out;
    const auto n = static_cast<double>(traces.size());
    for (const auto& [batch, idx] : ends)
    {
      double sum = 0.0;
      std::vector<double> vals;
      vals.reserve(traces.size());
      for (const Trace& tr : traces)
      {
        const RegretRecord& r = tr.records[idx];
        if (r.batch != batch)
          throw std::invalid_argument("aggregate_traces: traces disagree on batch boundaries");
        double v = r.best_so_far;
        if (measure == Measure::SimpleRegret)
        {
          if (!r.simple_regret)
            throw std::invalid_argument("aggregate_traces: simple regret needs a known optimum");
          v = *r.simple_regret;
        }
        vals.push_back(v);
        sum += v;
      }
      const double mean = sum / n;
      double se = 0.0;
      if (traces.size() > 1)
      {
        double ss = 0.0;
        for (double v : vals)
          ss += (v - mean) * (v - mean);
        se = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
      }
      out.push_back({batch, mean, se, static_cast<std::int64_t>(traces.size())});
    }
    return out;
  }
}
