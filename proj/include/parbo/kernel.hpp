#ifndef PARBO_KERNEL_HPP
#define PARBO_KERNEL_HPP

#include <Eigen/Core>

#include <stdexcept>
#include <string>

namespace parbo
{
  enum class KernelFamily
  {
    Linear,
    GaussianArd,
    Matern,
  };

  class KernelError : public std::invalid_argument
  {
  public:
    using std::invalid_argument::invalid_argument;
  };

  /// Covariance function of the GP prior.
  ///
  /// `lengthscales` holds one entry per input dimension and is ignored by the
  /// linear kernel.  Matérn is available for nu in {0.5, 1.5, 2.5}.
  struct KernelSpec
  {
    KernelFamily family = KernelFamily::GaussianArd;
    Eigen::VectorXd lengthscales;
    double output_variance = 1.0;
    double nu = 2.5;

    static KernelSpec gaussian(Eigen::VectorXd lengthscales, double output_variance = 1.0);
    static KernelSpec gaussian_iso(Eigen::Index dim, double lengthscale, double output_variance = 1.0);
    static KernelSpec matern(Eigen::VectorXd lengthscales, double nu, double output_variance = 1.0);
    static KernelSpec linear(double output_variance = 1.0);

    /// Throws KernelError when a field violates its constraints.
    void validate() const;

    Eigen::Index dim() const noexcept { return lengthscales.size(); }
  };

  std::string to_string(KernelFamily family);
  KernelFamily kernel_family_from_string(const std::string& name);

  double eval_kernel(const KernelSpec& spec,
                     const Eigen::Ref<const Eigen::VectorXd>& x,
                     const Eigen::Ref<const Eigen::VectorXd>& x2);

  /// Gram matrix over the rows of `inputs`.
  Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, const Eigen::MatrixXd& inputs);

  /// k(a_i, b_j) for rows a_i of `a` and b_j of `b`.
  Eigen::MatrixXd cross_kernel(const KernelSpec& spec,
                               const Eigen::MatrixXd& a,
                               const Eigen::MatrixXd& b);

  /// k(x, x) for each row.
  Eigen::VectorXd kernel_diagonal(const KernelSpec& spec, const Eigen::MatrixXd& inputs);

  /// Lipschitz constant of the posterior standard deviation in the L1 norm.
  /// Gaussian requires an isotropic lengthscale; Matérn requires nu > 1.
  double lipschitz_sigma(const KernelSpec& spec);
}

#endif
