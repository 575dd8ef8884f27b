#ifndef PARBO_TEST_HELPERS_HPP
#define PARBO_TEST_HELPERS_HPP

#include "parbo/gp.hpp"
#include "parbo/kernel.hpp"

#include <Eigen/Core>

#include <cstdint>
#include <numeric>
#include <random>
#include <vector>

namespace helpers
{
  inline Eigen::MatrixXd uniform_points(Eigen::Index n, Eigen::Index d, std::mt19937_64& rng)
  {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::MatrixXd x(n, d);
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index k = 0; k < d; ++k)
        x(i, k) = u(rng);
    return x;
  }

  inline Eigen::VectorXd normals(Eigen::Index n, std::mt19937_64& rng)
  {
    std::normal_distribution<double> z(0.0, 1.0);
    Eigen::VectorXd v(n);
    for (Eigen::Index i = 0; i < n; ++i)
      v[i] = z(rng);
    return v;
  }

  inline std::vector<std::int64_t> labels(Eigen::Index n, std::int64_t first = 1)
  {
    std::vector<std::int64_t> l(static_cast<std::size_t>(n));
    std::iota(l.begin(), l.end(), first);
    return l;
  }

  inline parbo::Dataset dataset(const Eigen::MatrixXd& x, const Eigen::VectorXd& y)
  {
    return parbo::Dataset(x, y, labels(x.rows()));
  }

  inline double rel_err(double a, double b)
  {
    return std::abs(a - b) / std::max(1.0, std::abs(b));
  }

  /// Random Gaussian-ARD configuration: spec, noise, data.
  struct GpCase
  {
    parbo::KernelSpec spec;
    double noise;
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
  };

  inline GpCase random_case(std::mt19937_64& rng, Eigen::Index n, Eigen::Index d)
  {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    Eigen::VectorXd ls(d);
    for (Eigen::Index k = 0; k < d; ++k)
      ls[k] = 0.15 + 0.85 * u(rng);
    GpCase c{parbo::KernelSpec::gaussian(ls, 0.5 + 1.5 * u(rng)), std::pow(10.0, -3.0 + 2.5 * u(rng)),
             uniform_points(n, d, rng), Eigen::VectorXd()};
    c.y = normals(n, rng);
    return c;
  }
}

#endif
