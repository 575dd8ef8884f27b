#include "parbo/sampling.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace parbo
{
  Eigen::VectorXd FeatureMap::feature_vector(const Eigen::Ref<const Eigen::VectorXd>& x) const
  {
    return scale * ((frequencies * x + phases).array().cos()).matrix();
  }

  Eigen::MatrixXd FeatureMap::features(const Eigen::MatrixXd& inputs) const
  {
    Eigen::MatrixXd arg = inputs * frequencies.transpose();
    arg.rowwise() += phases.transpose();
    return scale * arg.array().cos().matrix();
  }

  FeatureMap build_feature_map(const KernelSpec& spec, Eigen::Index num_features, Rng& rng)
  {
    spec.validate();
    if (spec.family != KernelFamily::GaussianArd)
      throw KernelError("random Fourier features are implemented for the Gaussian kernel only");
    if (num_features < 1)
      throw KernelError("feature map needs at least one feature");
    const Eigen::Index d = spec.dim();
    FeatureMap map;
    map.frequencies.resize(num_features, d);
    map.phases.resize(num_features);
    for (Eigen::Index i = 0; i < num_features; ++i)
    {
      for (Eigen::Index k = 0; k < d; ++k)
        map.frequencies(i, k) = standard_normal(rng) / spec.lengthscales[k];
      map.phases[i] = 2.0 * std::numbers::pi * uniform01(rng);
    }
    map.scale = std::sqrt(2.0 * spec.output_variance / static_cast<double>(num_features));
    return map;
  }

  Eigen::VectorXd sample_joint(const GpModel& model, const Eigen::MatrixXd& candidates, Rng& rng)
  {
    if (candidates.rows() < 1)
      throw GpError("posterior sampling needs at least one candidate");
    const Eigen::Index m = candidates.rows();
    const Eigen::VectorXd mean = model.means(candidates);
    const Eigen::MatrixXd cov = model.covariance(candidates);
    Eigen::VectorXd z(m);
    for (Eigen::Index i = 0; i < m; ++i)
      z[i] = standard_normal(rng);

    Eigen::LLT<Eigen::MatrixXd> llt(cov);
    if (llt.info() == Eigen::Success)
      return mean + llt.matrixL() * z;

    // Posterior covariances are often singular (candidates at noiseless
    // training points, duplicated rows).  A pivoted LDL^T factors positive
    // semidefinite matrices exactly; tiny negative pivots are rounding noise.
    Eigen::LDLT<Eigen::MatrixXd> ldlt(cov);
    Eigen::VectorXd d = ldlt.vectorD();
    const double tol = 1e-8 * std::max(1.0, cov.diagonal().cwiseAbs().maxCoeff());
    if (ldlt.info() != Eigen::Success || d.minCoeff() < -tol)
    {
      double jitter = 0.0;
      const Eigen::MatrixXd chol = robust_cholesky(cov, jitter, "posterior covariance");
      return mean + chol.triangularView<Eigen::Lower>() * z;
    }
    Eigen::VectorXd w = d.cwiseMax(0.0).cwiseSqrt().cwiseProduct(z);
    w = ldlt.matrixL() * w;
    w = ldlt.transpositionsP().transpose() * w;
    return mean + w;
  }

  PosteriorSample sample_path_discrete(const GpModel& model, const Eigen::MatrixXd& candidates, Rng& rng)
  {
    return PosteriorSample(DiscreteValues{sample_joint(model, candidates, rng)}, model.fingerprint());
  }

  PosteriorSample sample_path_rff(const GpModel& model, const FeatureMap& feature_map, Rng& rng)
  {
    if (model.spec().family != KernelFamily::GaussianArd)
      throw KernelError("pathwise RFF sampling needs a Gaussian kernel");
    RffPath path;
    path.feature_map = feature_map;
    path.spec = model.spec();
    path.prior_weights.resize(feature_map.size());
    for (Eigen::Index i = 0; i < path.prior_weights.size(); ++i)
      path.prior_weights[i] = standard_normal(rng);

    const Dataset& data = model.data();
    path.training_inputs = data.inputs;
    if (data.empty())
    {
      path.correction_weights.resize(0);
      return PosteriorSample(std::move(path), model.fingerprint());
    }

    // v = (K + s2 I)^-1 (y - g_prior(X) - eps)
    Eigen::VectorXd residual = data.outputs - feature_map.features(data.inputs) * path.prior_weights;
    const double noise_sd = std::sqrt(model.noise_variance() + model.jitter());
    if (noise_sd > 0.0)
      for (Eigen::Index i = 0; i < residual.size(); ++i)
        residual[i] -= noise_sd * standard_normal(rng);
    const auto lower = model.cholesky().triangularView<Eigen::Lower>();
    lower.solveInPlace(residual);
    lower.transpose().solveInPlace(residual);
    path.correction_weights = std::move(residual);
    return PosteriorSample(std::move(path), model.fingerprint());
  }

  Eigen::VectorXd PosteriorSample::evaluate(const Eigen::MatrixXd& candidates) const
  {
    if (const auto* discrete = std::get_if<DiscreteValues>(&rep_))
    {
      if (discrete->values.size() != candidates.rows())
        throw std::invalid_argument("discrete posterior sample holds " +
                                    std::to_string(discrete->values.size()) + " values but " +
                                    std::to_string(candidates.rows()) + " candidates were given");
      return discrete->values;
    }
    const auto& path = std::get<RffPath>(rep_);
    Eigen::VectorXd out = path.feature_map.features(candidates) * path.prior_weights;
    if (path.correction_weights.size() > 0)
      out += cross_kernel(path.spec, candidates, path.training_inputs) * path.correction_weights;
    return out;
  }

  double PosteriorSample::evaluate_at(const Eigen::Ref<const Eigen::VectorXd>& x) const
  {
    const Eigen::MatrixXd row = x.transpose();
    return evaluate(row)[0];
  }

  SampleMax sample_max(const PosteriorSample& sample, const Eigen::MatrixXd& candidates)
  {
    if (candidates.rows() < 1)
      throw std::invalid_argument("sample_max needs at least one candidate");
    const Eigen::VectorXd values = sample.evaluate(candidates);
    SampleMax best{0, values[0]};
    for (Eigen::Index i = 1; i < values.size(); ++i)
      if (values[i] > best.max_value)
        best = {i, values[i]};
    return best;
  }
}
