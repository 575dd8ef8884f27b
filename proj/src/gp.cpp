#include "parbo/gp.hpp"

#include "parbo/random.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <numbers>
#include <string>

namespace parbo
{
  Dataset::Dataset(Eigen::MatrixXd in, Eigen::VectorXd out, std::vector<std::int64_t> labels)
      : inputs(std::move(in)), outputs(std::move(out)), index_labels(std::move(labels))
  {
    validate();
  }

  void Dataset::validate() const
  {
    if (inputs.rows() != outputs.size() ||
        outputs.size() != static_cast<Eigen::Index>(index_labels.size()))
      throw GpError("dataset row counts disagree: inputs " + std::to_string(inputs.rows()) +
                    ", outputs " + std::to_string(outputs.size()) + ", labels " +
                    std::to_string(index_labels.size()));
    for (std::size_t i = 1; i < index_labels.size(); ++i)
      if (index_labels[i] <= index_labels[i - 1])
        throw GpError("dataset index labels must be strictly increasing");
  }

  void Dataset::push_back(const Eigen::Ref<const Eigen::VectorXd>& x, double y, std::int64_t label)
  {
    if (!index_labels.empty() && label <= index_labels.back())
      throw GpError("dataset index labels must be strictly increasing");
    if (inputs.rows() > 0 && x.size() != inputs.cols())
      throw GpError("dataset input dimension mismatch");
    const Eigen::Index n = size();
    inputs.conservativeResize(n + 1, x.size());
    inputs.row(n) = x.transpose();
    outputs.conservativeResize(n + 1);
    outputs[n] = y;
    index_labels.push_back(label);
  }

  void Dataset::insert_sorted(const Eigen::Ref<const Eigen::VectorXd>& x, double y, std::int64_t label)
  {
    auto it = std::lower_bound(index_labels.begin(), index_labels.end(), label);
    if (it != index_labels.end() && *it == label)
      throw GpError("dataset already holds index label " + std::to_string(label));
    const Eigen::Index pos = it - index_labels.begin();
    const Eigen::Index n = size();
    Eigen::MatrixXd in(n + 1, x.size());
    Eigen::VectorXd out(n + 1);
    in.topRows(pos) = inputs.topRows(pos);
    in.row(pos) = x.transpose();
    in.bottomRows(n - pos) = inputs.bottomRows(n - pos);
    out.head(pos) = outputs.head(pos);
    out[pos] = y;
    out.tail(n - pos) = outputs.tail(n - pos);
    inputs = std::move(in);
    outputs = std::move(out);
    index_labels.insert(it, label);
  }

  Eigen::MatrixXd robust_cholesky(const Eigen::MatrixXd& matrix, double& jitter_used, const char* what)
  {
    const Eigen::Index n = matrix.rows();
    for (double jitter : jitter_ladder)
    {
      Eigen::MatrixXd work = matrix;
      work.diagonal().array() += jitter;
      Eigen::LLT<Eigen::MatrixXd> llt(work);
      if (llt.info() == Eigen::Success)
      {
        jitter_used = jitter;
        return llt.matrixL();
      }
    }
    throw GpError(std::string("Cholesky factorization of the ") + what + " (" + std::to_string(n) +
                  "x" + std::to_string(n) + ") failed even with jitter " +
                  std::to_string(jitter_ladder[std::size(jitter_ladder) - 1]) +
                  "; the matrix is numerically indefinite or badly conditioned");
  }

  GpModel GpModel::fit(const KernelSpec& spec, double noise_variance, Dataset data)
  {
    spec.validate();
    if (!(noise_variance >= 0.0))
      throw GpError("noise variance must be nonnegative");
    data.validate();

    GpModel model;
    model.spec_ = spec;
    model.noise_variance_ = noise_variance;
    model.data_ = std::move(data);
    if (model.data_.empty())
    {
      model.chol_.resize(0, 0);
      model.alpha_.resize(0);
      return model;
    }
    Eigen::MatrixXd gram = kernel_matrix(spec, model.data_.inputs);
    gram.diagonal().array() += noise_variance;
    model.chol_ = robust_cholesky(gram, model.jitter_, "GP training covariance");
    model.solve_alpha();
    return model;
  }

  void GpModel::solve_alpha()
  {
    alpha_ = chol_.triangularView<Eigen::Lower>().solve(data_.outputs);
    chol_.transpose().triangularView<Eigen::Upper>().solveInPlace(alpha_);
  }

  double GpModel::mean(const Eigen::Ref<const Eigen::VectorXd>& x) const
  {
    if (data_.empty())
    {
      eval_kernel(spec_, x, x);
      return 0.0;
    }
    Eigen::VectorXd kx = cross_kernel(spec_, data_.inputs, x.transpose());
    return kx.dot(alpha_);
  }

  double GpModel::variance(const Eigen::Ref<const Eigen::VectorXd>& x) const
  {
    const double prior = eval_kernel(spec_, x, x);
    if (data_.empty())
      return prior;
    Eigen::VectorXd v = cross_kernel(spec_, data_.inputs, x.transpose());
    chol_.triangularView<Eigen::Lower>().solveInPlace(v);
    return std::clamp(prior - v.squaredNorm(), 0.0, prior);
  }

  Eigen::VectorXd GpModel::means(const Eigen::MatrixXd& inputs) const
  {
    if (data_.empty())
    {
      if (inputs.rows() > 0)
        eval_kernel(spec_, inputs.row(0).transpose(), inputs.row(0).transpose());
      return Eigen::VectorXd::Zero(inputs.rows());
    }
    return cross_kernel(spec_, inputs, data_.inputs) * alpha_;
  }

  Eigen::VectorXd GpModel::variances(const Eigen::MatrixXd& inputs) const
  {
    Eigen::VectorXd prior = kernel_diagonal(spec_, inputs);
    if (data_.empty())
      return prior;
    Eigen::MatrixXd v = cross_kernel(spec_, data_.inputs, inputs);
    chol_.triangularView<Eigen::Lower>().solveInPlace(v);
    Eigen::VectorXd out = prior - v.colwise().squaredNorm().transpose();
    for (Eigen::Index i = 0; i < out.size(); ++i)
      out[i] = std::clamp(out[i], 0.0, prior[i]);
    return out;
  }

  Eigen::MatrixXd GpModel::covariance(const Eigen::MatrixXd& inputs) const
  {
    Eigen::MatrixXd cov = kernel_matrix(spec_, inputs);
    if (data_.empty())
      return cov;
    Eigen::MatrixXd v = cross_kernel(spec_, data_.inputs, inputs);
    chol_.triangularView<Eigen::Lower>().solveInPlace(v);
    cov.noalias() -= v.transpose() * v;
    return cov;
  }

  GpModel GpModel::condition(const Eigen::MatrixXd& new_inputs, const Eigen::VectorXd& new_outputs) const
  {
    const Eigen::Index m = new_inputs.rows();
    if (m == 0)
      throw GpError("condition_fantasy needs at least one new observation");
    if (new_outputs.size() != m)
      throw GpError("condition_fantasy: inputs and outputs disagree in length");

    Dataset joined = data_;
    std::int64_t label = joined.next_label();
    for (Eigen::Index i = 0; i < m; ++i)
      joined.push_back(new_inputs.row(i).transpose(), new_outputs[i], label++);
    if (data_.empty())
      return fit(spec_, noise_variance_, std::move(joined));

    const Eigen::Index n = data_.size();
    Eigen::MatrixXd cross = cross_kernel(spec_, data_.inputs, new_inputs);
    chol_.triangularView<Eigen::Lower>().solveInPlace(cross);
    Eigen::MatrixXd schur = kernel_matrix(spec_, new_inputs);
    schur.diagonal().array() += noise_variance_ + jitter_;
    schur.noalias() -= cross.transpose() * cross;
    Eigen::LLT<Eigen::MatrixXd> llt(schur);
    if (llt.info() != Eigen::Success)
      return fit(spec_, noise_variance_, std::move(joined));

    GpModel model;
    model.spec_ = spec_;
    model.noise_variance_ = noise_variance_;
    model.jitter_ = jitter_;
    model.data_ = std::move(joined);
    model.chol_ = Eigen::MatrixXd::Zero(n + m, n + m);
    model.chol_.topLeftCorner(n, n) = chol_;
    model.chol_.bottomLeftCorner(m, n) = cross.transpose();
    model.chol_.bottomRightCorner(m, m) = llt.matrixL();
    model.solve_alpha();
    return model;
  }

  double GpModel::log_marginal_likelihood() const
  {
    const Eigen::Index n = data_.size();
    if (n == 0)
      throw GpError("log marginal likelihood needs at least one observation");
    return -0.5 * data_.outputs.dot(alpha_) - chol_.diagonal().array().log().sum() -
           0.5 * static_cast<double>(n) * std::log(2.0 * std::numbers::pi);
  }

  std::uint64_t GpModel::fingerprint() const
  {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    auto feed = [&h](const void* p, std::size_t bytes) {
      const auto* c = static_cast<const unsigned char*>(p);
      for (std::size_t i = 0; i < bytes; ++i)
      {
        h ^= c[i];
        h *= 0x100000001b3ULL;
      }
    };
    const int family = static_cast<int>(spec_.family);
    feed(&family, sizeof family);
    feed(spec_.lengthscales.data(), sizeof(double) * spec_.lengthscales.size());
    feed(&spec_.output_variance, sizeof(double));
    feed(&spec_.nu, sizeof(double));
    feed(&noise_variance_, sizeof(double));
    feed(data_.inputs.data(), sizeof(double) * data_.inputs.size());
    feed(data_.outputs.data(), sizeof(double) * data_.outputs.size());
    return mix64(h);
  }

  double posterior_mean(const GpModel& model, const Eigen::Ref<const Eigen::VectorXd>& x)
  {
    return model.mean(x);
  }

  double posterior_var(const GpModel& model, const Eigen::Ref<const Eigen::VectorXd>& x)
  {
    return model.variance(x);
  }

  GpModel condition_fantasy(const GpModel& model,
                            const Eigen::MatrixXd& new_inputs,
                            const Eigen::VectorXd& new_outputs)
  {
    return model.condition(new_inputs, new_outputs);
  }

  double log_marginal_likelihood(const GpModel& model)
  {
    return model.log_marginal_likelihood();
  }
}
