#ifndef PARBO_SAMPLING_HPP
#define PARBO_SAMPLING_HPP

#include "parbo/gp.hpp"
#include "parbo/random.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <variant>

namespace parbo
{
  /// Random Fourier features phi(x) = scale * cos(W x + b) for a Gaussian-ARD
  /// kernel, so that phi(x)^T phi(x') approximates k(x, x').
  struct FeatureMap
  {
    Eigen::MatrixXd frequencies; // m x d
    Eigen::VectorXd phases;      // m
    double scale = 0.0;

    Eigen::Index size() const noexcept { return phases.size(); }
    Eigen::VectorXd feature_vector(const Eigen::Ref<const Eigen::VectorXd>& x) const;
    /// One row of features per input row (n x m).
    Eigen::MatrixXd features(const Eigen::MatrixXd& inputs) const;
  };

  FeatureMap build_feature_map(const KernelSpec& spec, Eigen::Index num_features, Rng& rng);

  /// Joint draw of the sample path at a fixed candidate set.
  struct DiscreteValues
  {
    Eigen::VectorXd values;
  };

  /// Pathwise sample g(x) = phi(x)^T w + k(x, X)^T v: a prior RFF path plus
  /// an exact correction through the GP solve.
  struct RffPath
  {
    FeatureMap feature_map;
    Eigen::VectorXd prior_weights;
    Eigen::VectorXd correction_weights;
    Eigen::MatrixXd training_inputs;
    KernelSpec spec;
  };

  class PosteriorSample
  {
  public:
    using Representation = std::variant<DiscreteValues, RffPath>;

    PosteriorSample(Representation rep, std::uint64_t fingerprint)
        : rep_(std::move(rep)), fingerprint_(fingerprint)
    {
    }

    const Representation& representation() const noexcept { return rep_; }
    std::uint64_t source_model_fingerprint() const noexcept { return fingerprint_; }
    bool is_discrete() const noexcept { return std::holds_alternative<DiscreteValues>(rep_); }

    /// Path values at `candidates`.  A discrete sample only knows the
    /// candidate set it was drawn on and returns its stored values, which
    /// must match the candidate count.
    Eigen::VectorXd evaluate(const Eigen::MatrixXd& candidates) const;
    double evaluate_at(const Eigen::Ref<const Eigen::VectorXd>& x) const;

  private:
    Representation rep_;
    std::uint64_t fingerprint_;
  };

  /// Exact joint Gaussian draw over the candidate rows.
  PosteriorSample sample_path_discrete(const GpModel& model, const Eigen::MatrixXd& candidates, Rng& rng);

  /// Raw joint draw (mean + L z) over the candidate rows.
  Eigen::VectorXd sample_joint(const GpModel& model, const Eigen::MatrixXd& candidates, Rng& rng);

  PosteriorSample sample_path_rff(const GpModel& model, const FeatureMap& feature_map, Rng& rng);

  struct SampleMax
  {
    Eigen::Index argmax = 0;
    double max_value = 0.0;
  };

  /// Maximum of the path over the candidates; ties go to the lowest index.
  SampleMax sample_max(const PosteriorSample& sample, const Eigen::MatrixXd& candidates);
}

#endif
