#ifndef PARBO_ACQUISITION_HPP
#define PARBO_ACQUISITION_HPP

#include "parbo/gp.hpp"
#include "parbo/random.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>

namespace parbo
{
  enum class BetaKind
  {
    TheoreticalFinite, // 2 log(|X| t^2 / sqrt(2 pi))
    Heuristic,         // 0.2 d log(2 t)
    IrgpRandom,        // 2 log(|X| / 2) + Exp(mean 2)
    Fixed,
  };

  struct BetaSchedule
  {
    BetaKind kind = BetaKind::Fixed;
    std::int64_t domain_size = 0;
    std::int64_t dim = 0;
    double fixed_value = 1.0;

    static BetaSchedule theoretical_finite(std::int64_t domain_size);
    static BetaSchedule heuristic(std::int64_t dim);
    static BetaSchedule irgp_random(std::int64_t domain_size);
    static BetaSchedule fixed(double value);

    /// Only IrgpRandom consumes randomness.
    double value(std::int64_t t, Rng& rng) const;
  };

  std::string to_string(BetaKind kind);
  BetaKind beta_kind_from_string(const std::string& name);

  double beta_value(const BetaSchedule& schedule, std::int64_t t, Rng& rng);

  // Closed forms in terms of the posterior mean and standard deviation.
  double ucb_value(double mean, double sd, double beta);
  /// sigma (s Phi(s) + phi(s)), s = (mean - tau) / sigma; max(mean - tau, 0) when sigma = 0.
  double ei_value(double mean, double sd, double tau);
  /// 1 - Phi((gstar - mean) / sigma); step function when sigma = 0.
  double pims_value(double mean, double sd, double gstar);

  double ucb(const GpModel& model, const Eigen::Ref<const Eigen::VectorXd>& x, double beta);
  double ei_threshold(const GpModel& model, const Eigen::Ref<const Eigen::VectorXd>& x, double tau);
  double pims(const GpModel& model, const Eigen::Ref<const Eigen::VectorXd>& x, double gstar);

  class AcquisitionError : public std::runtime_error
  {
  public:
    using std::runtime_error::runtime_error;
  };

  /// Acquisition evaluated on a block of candidate rows.
  using BatchAcquisition = std::function<Eigen::VectorXd(const Eigen::MatrixXd&)>;

  /// Lowest-index maximizer.  Throws AcquisitionError on NaN.
  Eigen::Index argmax_over(const Eigen::Ref<const Eigen::VectorXd>& values);
  Eigen::Index argmax_over(const BatchAcquisition& af, const Eigen::MatrixXd& candidates);
}

#endif
