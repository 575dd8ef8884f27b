#include "parbo/kernel.hpp"

#include <cmath>
#include <numbers>

namespace parbo
{
  namespace
  {
    void check_dims(const KernelSpec& spec, Eigen::Index a, Eigen::Index b)
    {
      if (a != b)
        throw KernelError("kernel input dimension mismatch: " + std::to_string(a) + " vs " +
                          std::to_string(b));
      if (spec.family != KernelFamily::Linear && spec.lengthscales.size() != a)
        throw KernelError("kernel expects " + std::to_string(spec.lengthscales.size()) +
                          "-dimensional inputs, got " + std::to_string(a));
    }

    // Scaled distance r = ||(x - x2) / l||.
    double scaled_sq_distance(const KernelSpec& spec,
                              const Eigen::Ref<const Eigen::VectorXd>& x,
                              const Eigen::Ref<const Eigen::VectorXd>& x2)
    {
      return ((x - x2).array() / spec.lengthscales.array()).square().sum();
    }

    double matern_profile(double nu, double r)
    {
      if (nu == 0.5)
        return std::exp(-r);
      if (nu == 1.5)
      {
        const double a = std::sqrt(3.0) * r;
        return (1.0 + a) * std::exp(-a);
      }
      const double a = std::sqrt(5.0) * r;
      return (1.0 + a + a * a / 3.0) * std::exp(-a);
    }
  }

  KernelSpec KernelSpec::gaussian(Eigen::VectorXd lengthscales, double output_variance)
  {
    KernelSpec spec;
    spec.family = KernelFamily::GaussianArd;
    spec.lengthscales = std::move(lengthscales);
    spec.output_variance = output_variance;
    spec.validate();
    return spec;
  }

  KernelSpec KernelSpec::gaussian_iso(Eigen::Index dim, double lengthscale, double output_variance)
  {
    return gaussian(Eigen::VectorXd::Constant(dim, lengthscale), output_variance);
  }

  KernelSpec KernelSpec::matern(Eigen::VectorXd lengthscales, double nu, double output_variance)
  {
    KernelSpec spec;
    spec.family = KernelFamily::Matern;
    spec.lengthscales = std::move(lengthscales);
    spec.output_variance = output_variance;
    spec.nu = nu;
    spec.validate();
    return spec;
  }

  KernelSpec KernelSpec::linear(double output_variance)
  {
    KernelSpec spec;
    spec.family = KernelFamily::Linear;
    spec.output_variance = output_variance;
    spec.validate();
    return spec;
  }

  void KernelSpec::validate() const
  {
    if (!(output_variance > 0.0) || !std::isfinite(output_variance))
      throw KernelError("kernel output variance must be positive");
    if (family == KernelFamily::Linear)
      return;
    if (lengthscales.size() == 0)
      throw KernelError("kernel needs at least one lengthscale");
    for (Eigen::Index i = 0; i < lengthscales.size(); ++i)
      if (!(lengthscales[i] > 0.0) || !std::isfinite(lengthscales[i]))
        throw KernelError("kernel lengthscales must be positive");
    if (family == KernelFamily::Matern)
    {
      if (!(nu > 0.0))
        throw KernelError("Matern smoothness nu must be positive");
      if (nu != 0.5 && nu != 1.5 && nu != 2.5)
        throw KernelError("Matern kernel supports nu in {0.5, 1.5, 2.5}, got " + std::to_string(nu));
    }
  }

  std::string to_string(KernelFamily family)
  {
    switch (family)
    {
    case KernelFamily::Linear: return "linear";
    case KernelFamily::GaussianArd: return "gaussian";
    case KernelFamily::Matern: return "matern";
    }
    return "unknown";
  }

  KernelFamily kernel_family_from_string(const std::string& name)
  {
    if (name == "linear")
      return KernelFamily::Linear;
    if (name == "gaussian" || name == "gaussian_ard" || name == "rbf")
      return KernelFamily::GaussianArd;
    if (name == "matern")
      return KernelFamily::Matern;
    throw KernelError("unknown kernel family '" + name + "'");
  }

  double eval_kernel(const KernelSpec& spec,
                     const Eigen::Ref<const Eigen::VectorXd>& x,
                     const Eigen::Ref<const Eigen::VectorXd>& x2)
  {
    check_dims(spec, x.size(), x2.size());
    switch (spec.family)
    {
    case KernelFamily::Linear:
      return spec.output_variance * x.dot(x2);
    case KernelFamily::GaussianArd:
      return spec.output_variance * std::exp(-0.5 * scaled_sq_distance(spec, x, x2));
    case KernelFamily::Matern:
      return spec.output_variance *
             matern_profile(spec.nu, std::sqrt(scaled_sq_distance(spec, x, x2)));
    }
    throw KernelError("unknown kernel family");
  }

  namespace
  {
    // Stationary kernels as a function of the squared scaled distance.
    double stationary_value(const KernelSpec& spec, double sq_dist)
    {
      if (spec.family == KernelFamily::GaussianArd)
        return spec.output_variance * std::exp(-0.5 * sq_dist);
      return spec.output_variance * matern_profile(spec.nu, std::sqrt(sq_dist));
    }

    // Inputs divided by lengthscales, one point per column.
    Eigen::MatrixXd scaled_columns(const KernelSpec& spec, const Eigen::MatrixXd& rows)
    {
      return (rows.array().rowwise() / spec.lengthscales.transpose().array()).matrix().transpose();
    }
  }

  Eigen::MatrixXd cross_kernel(const KernelSpec& spec,
                               const Eigen::MatrixXd& a,
                               const Eigen::MatrixXd& b)
  {
    Eigen::MatrixXd out(a.rows(), b.rows());
    if (a.rows() == 0 || b.rows() == 0)
      return out;
    check_dims(spec, a.cols(), b.cols());
    if (spec.family == KernelFamily::Linear)
    {
      out.noalias() = spec.output_variance * a * b.transpose();
      return out;
    }
    const Eigen::MatrixXd sa = scaled_columns(spec, a);
    const Eigen::MatrixXd sb = scaled_columns(spec, b);
    for (Eigen::Index j = 0; j < b.rows(); ++j)
      for (Eigen::Index i = 0; i < a.rows(); ++i)
        out(i, j) = stationary_value(spec, (sa.col(i) - sb.col(j)).squaredNorm());
    return out;
  }

  Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, const Eigen::MatrixXd& inputs)
  {
    const Eigen::Index n = inputs.rows();
    Eigen::MatrixXd gram(n, n);
    if (n == 0)
      return gram;
    if (spec.family == KernelFamily::Linear)
    {
      for (Eigen::Index j = 0; j < n; ++j)
        for (Eigen::Index i = j; i < n; ++i)
          gram(i, j) = gram(j, i) = spec.output_variance * inputs.row(i).dot(inputs.row(j));
      return gram;
    }
    check_dims(spec, inputs.cols(), inputs.cols());
    const Eigen::MatrixXd s = scaled_columns(spec, inputs);
    for (Eigen::Index j = 0; j < n; ++j)
    {
      gram(j, j) = spec.output_variance;
      for (Eigen::Index i = j + 1; i < n; ++i)
      {
        const double v = stationary_value(spec, (s.col(i) - s.col(j)).squaredNorm());
        gram(i, j) = v;
        gram(j, i) = v;
      }
    }
    return gram;
  }

  Eigen::VectorXd kernel_diagonal(const KernelSpec& spec, const Eigen::MatrixXd& inputs)
  {
    Eigen::VectorXd diag(inputs.rows());
    for (Eigen::Index i = 0; i < inputs.rows(); ++i)
    {
      if (spec.family == KernelFamily::Linear)
        diag[i] = spec.output_variance * inputs.row(i).squaredNorm();
      else
      {
        check_dims(spec, inputs.cols(), inputs.cols());
        diag[i] = spec.output_variance;
      }
    }
    return diag;
  }

  double lipschitz_sigma(const KernelSpec& spec)
  {
    spec.validate();
    switch (spec.family)
    {
    case KernelFamily::Linear:
      return 1.0;
    case KernelFamily::GaussianArd:
    case KernelFamily::Matern: {
      const double l = spec.lengthscales[0];
      if ((spec.lengthscales.array() != l).any())
        throw KernelError("L_sigma is defined for isotropic lengthscales only");
      const double base = std::numbers::sqrt2 / l;
      if (spec.family == KernelFamily::GaussianArd)
        return base;
      if (!(spec.nu > 1.0))
        throw KernelError("L_sigma is unsupported for Matern kernels with nu <= 1");
      return base * std::sqrt(spec.nu / (spec.nu - 1.0));
    }
    }
    throw KernelError("unknown kernel family");
  }
}
