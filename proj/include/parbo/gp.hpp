#ifndef PARBO_GP_HPP
#define PARBO_GP_HPP

#include "parbo/kernel.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

namespace parbo
{
  class GpError : public std::runtime_error
  {
  public:
    using std::runtime_error::runtime_error;
  };

  /// Observations available to the model.  `index_labels` are global
  /// iteration indices and must be strictly increasing.
  struct Dataset
  {
    Eigen::MatrixXd inputs;
    Eigen::VectorXd outputs;
    std::vector<std::int64_t> index_labels;

    Dataset() = default;
    explicit Dataset(Eigen::Index dim) : inputs(0, dim), outputs(0) {}
    Dataset(Eigen::MatrixXd inputs, Eigen::VectorXd outputs, std::vector<std::int64_t> labels);

    Eigen::Index size() const noexcept { return outputs.size(); }
    Eigen::Index dim() const noexcept { return inputs.cols(); }
    bool empty() const noexcept { return outputs.size() == 0; }

    void validate() const;

    /// Appends one row.  `label` must exceed every label already present.
    void push_back(const Eigen::Ref<const Eigen::VectorXd>& x, double y, std::int64_t label);

    /// Inserts one row keeping labels sorted; `label` must be new.
    void insert_sorted(const Eigen::Ref<const Eigen::VectorXd>& x, double y, std::int64_t label);

    std::int64_t next_label() const noexcept
    {
      return index_labels.empty() ? 1 : index_labels.back() + 1;
    }
  };

  /// Diagonal jitter ladder tried, in order, when a Cholesky factorization fails.
  inline constexpr double jitter_ladder[] = {0.0, 1e-10, 1e-8, 1e-6};

  /// Lower Cholesky factor of `matrix + jitter*I` using the first rung of the
  /// ladder that succeeds.  Throws GpError naming `what` if none does.
  Eigen::MatrixXd robust_cholesky(const Eigen::MatrixXd& matrix, double& jitter_used, const char* what);

  /// Exact GP posterior conditioned on a dataset.  Immutable once built.
  class GpModel
  {
  public:
    static GpModel fit(const KernelSpec& spec, double noise_variance, Dataset data);

    double mean(const Eigen::Ref<const Eigen::VectorXd>& x) const;
    /// Clamped to [0, k(x, x)].
    double variance(const Eigen::Ref<const Eigen::VectorXd>& x) const;

    Eigen::VectorXd means(const Eigen::MatrixXd& inputs) const;
    Eigen::VectorXd variances(const Eigen::MatrixXd& inputs) const;
    /// Posterior covariance among the rows of `inputs`.
    Eigen::MatrixXd covariance(const Eigen::MatrixXd& inputs) const;

    /// Model conditioned on additional (possibly imputed) observations.
    /// Extends the Cholesky factor by a block instead of refactoring.
    GpModel condition(const Eigen::MatrixXd& new_inputs, const Eigen::VectorXd& new_outputs) const;

    double log_marginal_likelihood() const;

    const KernelSpec& spec() const noexcept { return spec_; }
    double noise_variance() const noexcept { return noise_variance_; }
    double jitter() const noexcept { return jitter_; }
    const Dataset& data() const noexcept { return data_; }
    const Eigen::MatrixXd& cholesky() const noexcept { return chol_; }
    const Eigen::VectorXd& alpha() const noexcept { return alpha_; }

    /// Hash of kernel, noise and data; identifies the posterior a sample came from.
    std::uint64_t fingerprint() const;

  private:
    GpModel() = default;
    void solve_alpha();

    KernelSpec spec_;
    double noise_variance_ = 0.0;
    double jitter_ = 0.0;
    Dataset data_;
    Eigen::MatrixXd chol_;
    Eigen::VectorXd alpha_;
  };

  double posterior_mean(const GpModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);
  double posterior_var(const GpModel& model, const Eigen::Ref<const Eigen::VectorXd>& x);
  GpModel condition_fantasy(const GpModel& model,
                            const Eigen::MatrixXd& new_inputs,
                            const Eigen::VectorXd& new_outputs);
  double log_marginal_likelihood(const GpModel& model);

  /// Settings for marginal-likelihood hyperparameter search over the
  /// Gaussian-ARD kernel (log-lengthscales and log-output-variance).
  struct HyperSearchConfig
  {
    int starts = 16;
    int sweeps = 3;
    int golden_iterations = 20;
    std::uint64_t seed = 0;
    double noise_variance = 1e-8;
    double min_lengthscale = 1e-2;
    double max_lengthscale = 1e1;
    double min_output_variance = 1e-2;
    double max_output_variance = 1e2;
    /// Range from which random starts are drawn (log-uniform).
    double start_min_lengthscale = 0.05;
    double start_max_lengthscale = 2.0;
    double start_min_output_variance = 0.1;
    double start_max_output_variance = 10.0;
    /// Used as the first start when present.
    std::optional<KernelSpec> initial;
  };

  /// Multi-start coordinate-wise golden-section maximization of the log
  /// marginal likelihood.  Rows are put in canonical order first, so the
  /// result does not depend on the order of the data.
  KernelSpec fit_hyperparameters(const Dataset& data, const HyperSearchConfig& search);
}

#endif
