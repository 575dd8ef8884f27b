#include "parbo/acquisition.hpp"

#include "parbo/normal.hpp"

#include <cmath>
#include <numbers>

namespace parbo
{
  BetaSchedule BetaSchedule::theoretical_finite(std::int64_t domain_size)
  {
    return BetaSchedule{BetaKind::TheoreticalFinite, domain_size, 0, 0.0};
  }

  BetaSchedule BetaSchedule::heuristic(std::int64_t dim)
  {
    return BetaSchedule{BetaKind::Heuristic, 0, dim, 0.0};
  }

  BetaSchedule BetaSchedule::irgp_random(std::int64_t domain_size)
  {
    return BetaSchedule{BetaKind::IrgpRandom, domain_size, 0, 0.0};
  }

  BetaSchedule BetaSchedule::fixed(double value)
  {
    return BetaSchedule{BetaKind::Fixed, 0, 0, value};
  }

  double BetaSchedule::value(std::int64_t t, Rng& rng) const
  {
    if (t < 1)
      throw std::invalid_argument("beta schedule is defined for t >= 1");
    const double td = static_cast<double>(t);
    switch (kind)
    {
    case BetaKind::TheoreticalFinite:
      if (domain_size < 1)
        throw std::invalid_argument("theoretical beta needs a domain size");
      return 2.0 * std::log(static_cast<double>(domain_size) * td * td /
                            std::sqrt(2.0 * std::numbers::pi));
    case BetaKind::Heuristic:
      if (dim < 1)
        throw std::invalid_argument("heuristic beta needs the input dimension");
      return 0.2 * static_cast<double>(dim) * std::log(2.0 * td);
    case BetaKind::IrgpRandom: {
      if (domain_size < 1)
        throw std::invalid_argument("IRGP beta needs a domain size");
      const double shift = 2.0 * std::log(static_cast<double>(domain_size) / 2.0);
      return shift + std::exponential_distribution<double>(0.5)(rng);
    }
    case BetaKind::Fixed:
      return fixed_value;
    }
    throw std::invalid_argument("unknown beta schedule");
  }

  std::string to_string(BetaKind kind)
  {
    switch (kind)
    {
    case BetaKind::TheoreticalFinite: return "theoretical";
    case BetaKind::Heuristic: return "heuristic";
    case BetaKind::IrgpRandom: return "irgp";
    case BetaKind::Fixed: return "fixed";
    }
    return "unknown";
  }

  BetaKind beta_kind_from_string(const std::string& name)
  {
    if (name == "theoretical" || name == "theoretical_finite")
      return BetaKind::TheoreticalFinite;
    if (name == "heuristic")
      return BetaKind::Heuristic;
    if (name == "irgp" || name == "irgp_random")
      return BetaKind::IrgpRandom;
    if (name == "fixed")
      return BetaKind::Fixed;
    throw std::invalid_argument("unknown beta schedule '" + name + "'");
  }

  double beta_value(const BetaSchedule& schedule, std::int64_t t, Rng& rng)
  {
    return schedule.value(t, rng);
  }

  double ucb_value(double mean, double sd, double beta)
  {
    return mean + std::sqrt(beta) * sd;
  }

  double ei_value(double mean, double sd, double tau)
  {
    if (!(sd > 0.0))
      return std::max(mean - tau, 0.0);
    const double s = (mean - tau) / sd;
    return sd * (s * normal_cdf(s) + normal_pdf(s));
  }

  double pims_value(double mean, double sd, double gstar)
  {
    if (!(sd > 0.0))
      return mean >= gstar ? 1.0 : 0.0;
    return normal_sf((gstar - mean) / sd);
  }

  double ucb(const GpModel& model, const Eigen::Ref<const Eigen::VectorXd>& x, double beta)
  {
    if (beta < 0.0)
      throw std::invalid_argument("UCB needs beta >= 0");
    return ucb_value(model.mean(x), std::sqrt(model.variance(x)), beta);
  }

  double ei_threshold(const GpModel& model, const Eigen::Ref<const Eigen::VectorXd>& x, double tau)
  {
    return ei_value(model.mean(x), std::sqrt(model.variance(x)), tau);
  }

  double pims(const GpModel& model, const Eigen::Ref<const Eigen::VectorXd>& x, double gstar)
  {
    return pims_value(model.mean(x), std::sqrt(model.variance(x)), gstar);
  }

  Eigen::Index argmax_over(const Eigen::Ref<const Eigen::VectorXd>& values)
  {
    if (values.size() < 1)
      throw AcquisitionError("argmax over an empty candidate set");
    Eigen::Index best = 0;
    for (Eigen::Index i = 0; i < values.size(); ++i)
    {
      if (std::isnan(values[i]))
        throw AcquisitionError("acquisition value is NaN at candidate " + std::to_string(i));
      if (values[i] > values[best])
        best = i;
    }
    return best;
  }

  Eigen::Index argmax_over(const BatchAcquisition& af, const Eigen::MatrixXd& candidates)
  {
    if (candidates.rows() < 1)
      throw AcquisitionError("argmax over an empty candidate set");
    return argmax_over(af(candidates));
  }
}
